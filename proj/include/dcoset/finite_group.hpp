#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcoset/errors.hpp"

namespace dcoset {

/// Index into a finite group's element table.
struct FiniteElement {
  std::size_t index = 0;
  friend auto operator<=>(const FiniteElement&, const FiniteElement&) = default;
};

/// Images of 0..n-1. Composition applies the right factor first.
using Permutation = std::vector<int>;

inline Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

/// 1-based cycle notation, fixed points omitted; identity is "e".
inline std::string cycle_notation(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == static_cast<int>(i)) continue;
    out += '(';
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      out += std::to_string(j + 1);
    }
    out += ')';
  }
  return out.empty() ? "e" : out;
}

/// Parses products of cycles such as "(12)(34)" or "(123)"; points are single
/// digits 1..degree.
inline Permutation parse_cycles(std::string_view text, int degree) {
  Permutation p(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) p[static_cast<std::size_t>(i)] = i;
  if (text == "e") return p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '(') throw ConfigurationError("bad cycle notation: " + std::string(text));
    const auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw ConfigurationError("bad cycle notation: " + std::string(text));
    std::vector<int> cycle;
    for (std::size_t i = pos + 1; i < close; ++i) {
      const int v = text[i] - '1';
      if (v < 0 || v >= degree) throw ConfigurationError("cycle point out of range: " + std::string(text));
      cycle.push_back(v);
    }
    Permutation c(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) c[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      c[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
    }
    p = compose(p, c);
    pos = close + 1;
  }
  return p;
}

/// A finite group given by a faithful permutation representation. Elements
/// are table indices; Haar measure is counting measure and the group is
/// unimodular.
class FiniteGroup {
 public:
  using element_type = FiniteElement;
  static constexpr bool is_finite = true;

  FiniteGroup(std::string name, std::vector<Permutation> perms, std::vector<std::string> labels)
      : name_(std::move(name)), perms_(std::move(perms)), labels_(std::move(labels)) {
    const std::size_t n = perms_.size();
    if (n == 0 || labels_.size() != n) throw ConfigurationError("finite group needs one label per element");
    for (std::size_t i = 0; i < n; ++i) lookup_.emplace(perms_[i], i);
    if (lookup_.size() != n) throw ConfigurationError("duplicate permutation in group " + name_);
    Permutation id(perms_[0].size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
    identity_ = find_or_throw(id);
    table_.assign(n * n, 0);
    inverse_.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const auto c = find_or_throw(compose(perms_[a], perms_[b]));
        table_[a * n + b] = c;
        if (c == identity_) inverse_[a] = b;
      }
    }
  }

  const std::string& name() const { return name_; }
  std::size_t order() const { return perms_.size(); }
  int degree() const { return static_cast<int>(perms_[0].size()); }

  FiniteElement identity() const { return {identity_}; }

  FiniteElement mul(FiniteElement a, FiniteElement b) const {
    require(a);
    require(b);
    return {table_[a.index * order() + b.index]};
  }

  FiniteElement inv(FiniteElement a) const {
    require(a);
    return {inverse_[a.index]};
  }

  double modular(FiniteElement a) const {
    require(a);
    return 1.0;
  }

  bool valid(FiniteElement a) const { return a.index < order(); }

  std::vector<FiniteElement> elements() const {
    std::vector<FiniteElement> out(order());
    for (std::size_t i = 0; i < order(); ++i) out[i].index = i;
    return out;
  }

  const std::string& label(FiniteElement a) const {
    require(a);
    return labels_[a.index];
  }

  const Permutation& permutation(FiniteElement a) const {
    require(a);
    return perms_[a.index];
  }

  std::optional<FiniteElement> find(const Permutation& p) const {
    auto it = lookup_.find(p);
    if (it == lookup_.end()) return std::nullopt;
    return FiniteElement{it->second};
  }

  /// Accepts either an element label or cycle notation.
  FiniteElement parse(std::string_view text) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == text) return {i};
    }
    if (auto e = find(parse_cycles(text, degree()))) return *e;
    throw ConfigurationError("'" + std::string(text) + "' is not an element of " + name_);
  }

 private:
  void require(FiniteElement a) const {
    if (!valid(a)) throw DomainViolation("element index " + std::to_string(a.index) + " outside " + name_);
  }

  std::size_t find_or_throw(const Permutation& p) const {
    auto it = lookup_.find(p);
    if (it == lookup_.end()) throw ConfigurationError("permutation list of " + name_ + " is not closed");
    return it->second;
  }

  std::string name_;
  std::vector<Permutation> perms_;
  std::vector<std::string> labels_;
  std::map<Permutation, std::size_t> lookup_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
};

/// S_n with elements in lexicographic order of their image lists.
inline FiniteGroup make_symmetric_group(int n) {
  Permutation p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::vector<Permutation> perms;
  std::vector<std::string> labels;
  do {
    perms.push_back(p);
    labels.push_back(cycle_notation(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return FiniteGroup("S" + std::to_string(n), std::move(perms), std::move(labels));
}

/// Symmetries of the regular n-gon acting on its vertices, ordered r^i s^j
/// with r the rotation 0->1->...->n-1->0 and s the reflection fixing vertex 0.
inline FiniteGroup make_dihedral_group(int n) {
  const auto un = static_cast<std::size_t>(n);
  Permutation r(un), s(un), id(un);
  for (int i = 0; i < n; ++i) {
    id[static_cast<std::size_t>(i)] = i;
    r[static_cast<std::size_t>(i)] = (i + 1) % n;
    s[static_cast<std::size_t>(i)] = (n - i) % n;
  }
  std::vector<Permutation> perms;
  std::vector<std::string> labels;
  Permutation rot = id;
  for (int i = 0; i < n; ++i) {
    const std::string rlabel = i == 0 ? "" : (i == 1 ? "r" : "r" + std::to_string(i));
    perms.push_back(rot);
    labels.push_back(i == 0 ? "e" : rlabel);
    perms.push_back(compose(rot, s));
    labels.push_back(rlabel + "s");
    rot = compose(r, rot);
  }
  return FiniteGroup("D" + std::to_string(n), std::move(perms), std::move(labels));
}

}  // namespace dcoset
