#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcoset/errors.hpp"
#include "dcoset/finite_group.hpp"
#include "dcoset/group_core.hpp"
#include "dcoset/subgroup.hpp"
#include "dcoset/test_function.hpp"

namespace dcoset {

inline double element_distance(const FiniteGroup&, FiniteElement a, FiniteElement b) { return a == b ? 0.0 : 1.0; }

template <class Law>
double element_distance(const ChartedGroup<Law>& g, const Point<Law::dim>& a, const Point<Law::dim>& b) {
  return g.distance(a, b);
}

/// The double coset space K\G/H with a chosen canonical representative per
/// class, the normalizer N of K and its action n.KxH = KnxH.
///
/// The space keeps a pointer to `g`; the group must outlive it and every
/// function built from it.
template <class G>
class DoubleCosetSpace {
 public:
  using element_type = typename G::element_type;
  using Canonical = std::function<element_type(const element_type&)>;

  DoubleCosetSpace(const G& g, Subgroup<G> K, Subgroup<G> H, Subgroup<G> N, bool n_is_open, Canonical canonical)
      : g_(&g),
        K_(std::move(K)),
        H_(std::move(H)),
        N_(std::move(N)),
        n_is_open_(n_is_open),
        canonical_(std::move(canonical)) {}

  const G& group() const { return *g_; }
  const Subgroup<G>& K() const { return K_; }
  const Subgroup<G>& H() const { return H_; }
  const Subgroup<G>& N() const { return N_; }
  bool n_is_open() const { return n_is_open_; }

  /// q(x): the canonical representative of KxH.
  element_type project(const element_type& x) const { return canonical_(x); }

  bool same_class(const element_type& a, const element_type& b, double tol = 1e-9) const {
    return element_distance(*g_, project(a), project(b)) <= tol;
  }

  void require_in_normalizer(const element_type& n) const {
    if (!N_.contains(n)) throw PreconditionError("element is not in the normalizer of " + K_.name());
  }

  /// n . p = q(n p) for n in N.
  element_type n_action(const element_type& n, const element_type& p) const {
    require_in_normalizer(n);
    return project(g_->mul(n, p));
  }

  /// Delta_K(k) Delta_H(h) / Delta_G(h), the covariance weight of a rho-function.
  double rho_weight(const element_type& k, const element_type& h) const {
    return K_.modular(k) * H_.modular(h) / g_->modular(h);
  }

 private:
  const G* g_;
  Subgroup<G> K_;
  Subgroup<G> H_;
  Subgroup<G> N_;
  bool n_is_open_;
  Canonical canonical_;
};

// ------------------------------------------------------------------ finite

/// N = {g : gK = Kg}, by comparing the two cosets as sets.
inline Subgroup<FiniteGroup> compute_normalizer(const FiniteGroup& g, const Subgroup<FiniteGroup>& K) {
  std::vector<FiniteElement> members;
  for (auto x : g.elements()) {
    std::vector<FiniteElement> left, right;
    for (auto k : K.members()) {
      left.push_back(g.mul(x, k));
      right.push_back(g.mul(k, x));
    }
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    if (left == right) members.push_back(x);
  }
  return Subgroup<FiniteGroup>(g, "N(" + K.name() + ")", std::move(members));
}

template <class Law>
Subgroup<ChartedGroup<Law>> compute_normalizer(const ChartedGroup<Law>& g, const Subgroup<ChartedGroup<Law>>&) {
  throw UnsupportedOperation(std::string(g.name()) + ": normalizers of charted groups are declared by the catalog");
}

/// Canonical representative = the element of KxH with the least index.
inline DoubleCosetSpace<FiniteGroup> make_finite_space(const FiniteGroup& g, Subgroup<FiniteGroup> K,
                                                       Subgroup<FiniteGroup> H) {
  auto table = std::make_shared<std::vector<FiniteElement>>(g.order());
  for (auto x : g.elements()) {
    FiniteElement best = x;
    for (auto k : K.members()) {
      for (auto h : H.members()) best = std::min(best, g.mul(g.mul(k, x), h));
    }
    (*table)[x.index] = best;
  }
  auto N = compute_normalizer(g, K);
  return DoubleCosetSpace<FiniteGroup>(g, std::move(K), std::move(H), std::move(N), true,
                                       [&g, table](FiniteElement x) {
                                         if (!g.valid(x)) throw DomainViolation("element outside " + g.name());
                                         return (*table)[x.index];
                                       });
}

struct FiniteClass {
  FiniteElement representative;
  std::vector<FiniteElement> members;
};

/// All double cosets, ordered by representative.
inline std::vector<FiniteClass> enumerate_classes(const DoubleCosetSpace<FiniteGroup>& space) {
  std::map<FiniteElement, std::vector<FiniteElement>> by_rep;
  for (auto x : space.group().elements()) by_rep[space.project(x)].push_back(x);
  std::vector<FiniteClass> out;
  for (auto& [rep, members] : by_rep) out.push_back({rep, std::move(members)});
  return out;
}

/// A member of the class of p lying in N, if any.
inline std::optional<FiniteElement> representative_in_normalizer(const DoubleCosetSpace<FiniteGroup>& space,
                                                                  FiniteElement p) {
  const auto& g = space.group();
  for (auto k : space.K().members()) {
    for (auto h : space.H().members()) {
      const auto x = g.mul(g.mul(k, p), h);
      if (space.N().contains(x)) return x;
    }
  }
  return std::nullopt;
}

template <class Law>
std::optional<Point<Law::dim>> representative_in_normalizer(const DoubleCosetSpace<ChartedGroup<Law>>& space,
                                                             const Point<Law::dim>& p) {
  const auto rep = space.project(p);
  if (space.N().contains(rep)) return rep;
  return std::nullopt;
}

// ----------------------------------------------------------------- checks

/// |int_K f(k) dk - int_K f(n k n^-1) dk| for n in N.
template <class G>
Residual check_in_property(const DoubleCosetSpace<G>& space, const typename G::element_type& n,
                           const TestFunction<G>& f, const IntegrationScheme& s) {
  space.require_in_normalizer(n);
  const auto& g = space.group();
  const auto ni = g.inv(n);
  const auto plain = integrate_subgroup(space.K(), [&](const auto& k) { return f(k); }, s);
  const auto conj = integrate_subgroup(space.K(), [&](const auto& k) { return f(g.mul(g.mul(n, k), ni)); }, s);
  return residual_of(plain, conj);
}

/// Distance between q(k x h) and q(x), and between q(q(x)) and q(x).
template <class G>
double canonical_residual(const DoubleCosetSpace<G>& space, const typename G::element_type& k,
                          const typename G::element_type& x, const typename G::element_type& h) {
  const auto& g = space.group();
  const auto p = space.project(x);
  return std::max(element_distance(g, space.project(g.mul(g.mul(k, x), h)), p),
                  element_distance(g, space.project(p), p));
}

/// Distance between n1.(n2.p) and (n1 n2).p, and between e.p and p.
template <class G>
double action_residual(const DoubleCosetSpace<G>& space, const typename G::element_type& n1,
                       const typename G::element_type& n2, const typename G::element_type& p) {
  const auto& g = space.group();
  const auto q = space.project(p);
  return std::max(element_distance(g, space.n_action(n1, space.n_action(n2, q)), space.n_action(g.mul(n1, n2), q)),
                  element_distance(g, space.n_action(g.identity(), q), q));
}

}  // namespace dcoset
