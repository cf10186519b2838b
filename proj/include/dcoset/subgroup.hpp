#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcoset/charted_group.hpp"
#include "dcoset/errors.hpp"
#include "dcoset/finite_group.hpp"
#include "dcoset/quadrature.hpp"

namespace dcoset {

struct SubgroupFlags {
  bool in_group = false;  // compact unit neighbourhood invariant under inner automorphisms
  bool normal = false;
  bool compact = false;
};

template <class G>
class Subgroup;

/// Subgroup of a finite group, stored as its member list. Haar measure is
/// counting measure; finite groups are IN-groups.
template <>
class Subgroup<FiniteGroup> {
 public:
  using element_type = FiniteElement;

  Subgroup(const FiniteGroup& g, std::string name, std::vector<FiniteElement> members)
      : name_(std::move(name)), members_(std::move(members)), mask_(g.order(), 0) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (auto m : members_) {
      if (!g.valid(m)) throw ConfigurationError("subgroup " + name_ + " has an element outside " + g.name());
      mask_[m.index] = 1;
    }
    if (!contains(g.identity())) throw ConfigurationError("subgroup " + name_ + " misses the identity");
    for (auto a : members_) {
      if (!contains(g.inv(a))) throw ConfigurationError(name_ + " is not closed under inversion");
      for (auto b : members_) {
        if (!contains(g.mul(a, b))) throw ConfigurationError(name_ + " is not closed under multiplication");
      }
    }
    normal_ = true;
    for (auto x : g.elements()) {
      for (auto k : members_) {
        if (!contains(g.mul(g.mul(x, k), g.inv(x)))) normal_ = false;
      }
    }
  }

  /// Closure of `generators` under multiplication.
  static Subgroup generated(const FiniteGroup& g, std::string name, const std::vector<FiniteElement>& generators) {
    std::vector<FiniteElement> members{g.identity()};
    std::vector<char> seen(g.order(), 0);
    seen[g.identity().index] = 1;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (auto s : generators) {
        const auto y = g.mul(members[i], s);
        if (!seen[y.index]) {
          seen[y.index] = 1;
          members.push_back(y);
        }
      }
    }
    return Subgroup(g, std::move(name), std::move(members));
  }

  static Subgroup trivial(const FiniteGroup& g) { return Subgroup(g, "e", {g.identity()}); }
  static Subgroup whole(const FiniteGroup& g) { return Subgroup(g, "G", g.elements()); }

  const std::string& name() const { return name_; }
  const std::vector<FiniteElement>& members() const { return members_; }
  std::size_t order() const { return members_.size(); }
  bool contains(FiniteElement x) const { return x.index < mask_.size() && mask_[x.index] != 0; }
  double modular(FiniteElement) const { return 1.0; }
  SubgroupFlags flags() const { return {true, normal_, true}; }

  template <class Rng>
  FiniteElement sample(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> d(0, members_.size() - 1);
    return members_[d(rng)];
  }

  const std::vector<FiniteElement>& grid(int) const { return members_; }

 private:
  std::string name_;
  std::vector<FiniteElement> members_;
  std::vector<char> mask_;
  bool normal_ = false;
};

/// Closed subgroup of a charted group, parametrised by a box of parameters
/// (dimension 0 for the trivial subgroup). `param_box` is the integration and
/// search region; `sample_box` bounds random draws used by the checks.
template <class Law>
class Subgroup<ChartedGroup<Law>> {
 public:
  using element_type = Point<Law::dim>;
  using Embed = std::function<element_type(std::span<const double>)>;
  using Density = std::function<double(std::span<const double>)>;

  Subgroup(std::string name, Box param_box, Box sample_box, Embed embed, Density density,
           std::function<double(const element_type&)> modular, std::function<bool(const element_type&)> contains,
           SubgroupFlags flags)
      : name_(std::move(name)),
        param_box_(std::move(param_box)),
        sample_box_(std::move(sample_box)),
        embed_(std::move(embed)),
        density_(std::move(density)),
        modular_(std::move(modular)),
        contains_(std::move(contains)),
        flags_(flags) {}

  static Subgroup trivial(const ChartedGroup<Law>& g, double tolerance = 1e-9) {
    const auto e = g.identity();
    return Subgroup(
        "e", {}, {}, [e](std::span<const double>) { return e; }, [](std::span<const double>) { return 1.0; },
        [](const element_type&) { return 1.0; },
        [g, e, tolerance](const element_type& x) { return g.distance(x, e) <= tolerance; }, {true, true, true});
  }

  const std::string& name() const { return name_; }
  std::size_t param_dim() const { return param_box_.size(); }
  const Box& param_box() const { return param_box_; }
  const Box& sample_box() const { return sample_box_; }
  element_type embed(std::span<const double> t) const { return embed_(t); }
  double density(std::span<const double> t) const { return density_(t); }
  double modular(const element_type& x) const { return modular_(x); }
  bool contains(const element_type& x) const { return contains_(x); }
  SubgroupFlags flags() const { return flags_; }

  template <class Rng>
  element_type sample(Rng& rng) const {
    std::array<double, kMaxBoxDim> t{};
    for (std::size_t j = 0; j < sample_box_.size(); ++j) {
      std::uniform_real_distribution<double> d(sample_box_[j].lo, sample_box_[j].hi);
      t[j] = d(rng);
    }
    return embed_(std::span<const double>(t.data(), sample_box_.size()));
  }

  /// `m` nodes per parameter axis over the search box (endpoints included on
  /// non-periodic axes).
  std::vector<element_type> grid(int m) const {
    std::vector<element_type> out;
    const std::size_t d = param_box_.size();
    if (d == 0) return {embed_({})};
    std::vector<int> idx(d, 0);
    std::array<double, kMaxBoxDim> t{};
    while (true) {
      for (std::size_t j = 0; j < d; ++j) {
        const auto& iv = param_box_[j];
        const int denom = iv.periodic ? m : m - 1;
        t[j] = iv.lo + iv.width() * idx[j] / denom;
      }
      out.push_back(embed_(std::span<const double>(t.data(), d)));
      std::size_t j = 0;
      for (; j < d; ++j) {
        if (++idx[j] < m) break;
        idx[j] = 0;
      }
      if (j == d) return out;
    }
  }

 private:
  std::string name_;
  Box param_box_;
  Box sample_box_;
  Embed embed_;
  Density density_;
  std::function<double(const element_type&)> modular_;
  std::function<bool(const element_type&)> contains_;
  SubgroupFlags flags_;
};

inline void require_exact_scheme(const IntegrationScheme& s) {
  if (!is_exact(s)) throw ConfigurationError("finite groups are integrated by exact-sum, not " + describe(s));
}

inline void require_continuous_scheme(const IntegrationScheme& s) {
  if (is_exact(s)) throw ConfigurationError("exact-sum is only valid on finite groups");
}

/// int_K fn(k) dk.
template <class Fn>
Integral integrate_subgroup(const Subgroup<FiniteGroup>& K, Fn&& fn, const IntegrationScheme& s) {
  require_exact_scheme(s);
  double sum = 0.0;
  for (auto k : K.members()) sum += fn(k);
  return {sum, 0.0};
}

template <class Law, class Fn>
Integral integrate_subgroup(const Subgroup<ChartedGroup<Law>>& K, Fn&& fn, const IntegrationScheme& s) {
  require_continuous_scheme(s);
  if (K.param_dim() == 0) return {fn(K.embed({})), 0.0};
  return integrate_box(K.param_box(), s, [&](std::span<const double> t) {
    const double v = fn(K.embed(t));
    return v == 0.0 ? 0.0 : v * K.density(t);
  });
}

/// int_K int_H fn(k, h) dh dk as one product integral.
template <class Fn>
Integral integrate_pair(const Subgroup<FiniteGroup>& K, const Subgroup<FiniteGroup>& H, Fn&& fn,
                        const IntegrationScheme& s) {
  require_exact_scheme(s);
  double sum = 0.0;
  for (auto k : K.members()) {
    for (auto h : H.members()) sum += fn(k, h);
  }
  return {sum, 0.0};
}

template <class Law, class Fn>
Integral integrate_pair(const Subgroup<ChartedGroup<Law>>& K, const Subgroup<ChartedGroup<Law>>& H, Fn&& fn,
                        const IntegrationScheme& s) {
  require_continuous_scheme(s);
  const std::size_t dk = K.param_dim();
  Box box = K.param_box();
  box.insert(box.end(), H.param_box().begin(), H.param_box().end());
  if (box.empty()) return {fn(K.embed({}), H.embed({})), 0.0};
  return integrate_box(box, s, [&](std::span<const double> t) {
    const auto tk = t.subspan(0, dk), th = t.subspan(dk);
    const double v = fn(K.embed(tk), H.embed(th));
    return v == 0.0 ? 0.0 : v * K.density(tk) * H.density(th);
  });
}

}  // namespace dcoset
