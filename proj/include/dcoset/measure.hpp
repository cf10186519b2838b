#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcoset/averaging.hpp"
#include "dcoset/coset_space.hpp"
#include "dcoset/errors.hpp"
#include "dcoset/group_core.hpp"
#include "dcoset/rho.hpp"
#include "dcoset/test_function.hpp"

namespace dcoset {

/// mu_rho on K\G/H, represented by its pairing
///   F -> int_G f1(x) rho(x) dx   with Q(f1) = F,
/// where f1 is the section lift of F against a dominating function.
template <class G>
class MeasureFunctional {
 public:
  using element_type = typename G::element_type;

  MeasureFunctional(const DoubleCosetSpace<G>& space, RhoFunction<G> rho, TestFunction<G> dominating,
                    IntegrationScheme s)
      : space_(&space),
        rho_(std::move(rho)),
        dominating_(std::move(dominating)),
        s_(std::move(s)),
        q_dominating_(make_q_function(space, dominating_, s_)) {}

  /// Reuses a memoised Q(dominating) shared with other functionals.
  MeasureFunctional(const DoubleCosetSpace<G>& space, RhoFunction<G> rho, TestFunction<G> dominating,
                    CosetFunction<G> q_dominating, IntegrationScheme s)
      : space_(&space),
        rho_(std::move(rho)),
        dominating_(std::move(dominating)),
        s_(std::move(s)),
        q_dominating_(std::move(q_dominating)) {}

  const DoubleCosetSpace<G>& space() const { return *space_; }
  const RhoFunction<G>& rho() const { return rho_; }
  const TestFunction<G>& dominating() const { return dominating_; }
  const IntegrationScheme& scheme() const { return s_; }

  Integral pair(const CosetFunction<G>& F) const { return pair_lift(F, dominating_, q_dominating_); }

  /// Pairing through a different dominating function; equal to pair(F)
  /// whenever both lifts are valid.
  Integral pair_with(const CosetFunction<G>& F, const TestFunction<G>& dominating) const {
    return pair_lift(F, dominating, make_q_function(*space_, dominating, s_));
  }
  Integral pair_with(const CosetFunction<G>& F, const TestFunction<G>& dominating,
                     const CosetFunction<G>& q_dominating) const {
    return pair_lift(F, dominating, q_dominating);
  }

  /// int_G f rho dx, the right-hand side of the Weil identity.
  Integral integrate_against_rho(const TestFunction<G>& f) const {
    const auto& g = space_->group();
    auto fr = multiply(f, [this](const element_type& x) { return rho_(x); }, true);
    auto v = integrate_haar(g, fr, s_);
    v.error += rho_.relative_error() * std::abs(v.value);
    return v;
  }

 private:
  // The integration errors of F and Q(d) are propagated by integrating
  // |d| rho (err F / Q(d) + |F| err Q(d) / Q(d)^2) over the same support.
  Integral pair_lift(const CosetFunction<G>& F, const TestFunction<G>& dominating,
                     const CosetFunction<G>& qd) const {
    const auto f1 = section_lift(F, dominating, qd);
    auto v = integrate_against_rho(f1);
    if (is_exact(s_)) return v;
    const TestFunction<G> spread(
        [F, dominating, qd](const element_type& x) {
          const double d = dominating(x);
          if (d == 0.0) return 0.0;
          const auto num = F.eval(x);
          if (num.value == 0.0 && num.error == 0.0) return 0.0;
          const auto den = qd.eval(x);
          return std::abs(d) * (num.error / den.value + std::abs(num.value) * den.error / (den.value * den.value));
        },
        dominating.support(), true);
    const auto e = integrate_against_rho(spread);
    v.error += std::abs(e.value) + e.error;
    return v;
  }

  const DoubleCosetSpace<G>* space_;
  RhoFunction<G> rho_;
  TestFunction<G> dominating_;
  IntegrationScheme s_;
  CosetFunction<G> q_dominating_;
};

/// mu~(f) = mu_rho(Q(f)), a measure on G.
template <class G>
class LiftedMeasure {
 public:
  explicit LiftedMeasure(const MeasureFunctional<G>& mu) : mu_(&mu) {}

  Integral operator()(const TestFunction<G>& f) const {
    return mu_->pair(make_q_function(mu_->space(), f, mu_->scheme()));
  }

  const MeasureFunctional<G>& base() const { return *mu_; }

 private:
  const MeasureFunctional<G>* mu_;
};

template <class G>
LiftedMeasure<G> lift(const MeasureFunctional<G>& mu) {
  return LiftedMeasure<G>(mu);
}

/// |int f(k x h^-1) dmu~ - Delta_K(k) Delta_H(h) int f dmu~|.
template <class G>
Residual check_lift_property(const LiftedMeasure<G>& mut, const typename G::element_type& k,
                             const typename G::element_type& h, const TestFunction<G>& f) {
  const auto& space = mut.base().space();
  const auto& g = space.group();
  const auto lhs = mut(translate(g, f, k, g.inv(h)));
  const auto rhs = (space.K().modular(k) * space.H().modular(h)) * mut(f);
  return residual_of(lhs, rhs);
}

/// |int Q(f) dmu - int f rho dx|.
template <class G>
Residual check_weil(const MeasureFunctional<G>& mu, const TestFunction<G>& f) {
  return residual_of(mu.pair(make_q_function(mu.space(), f, mu.scheme())), mu.integrate_against_rho(f));
}

/// Per-class weights mu(1_c) = sum_{x in c} rho(x) / (|K| |H|) on a finite
/// space, keyed by canonical representative.
inline std::map<FiniteElement, double> class_weights(const DoubleCosetSpace<FiniteGroup>& space,
                                                      const RhoFunction<FiniteGroup>& rho) {
  std::map<FiniteElement, double> w;
  const double kh = static_cast<double>(space.K().order() * space.H().order());
  for (const auto& c : enumerate_classes(space)) {
    double sum = 0.0;
    for (auto x : c.members) sum += rho(x);
    w[c.representative] = sum / kh;
  }
  return w;
}

inline CosetFunction<FiniteGroup> class_indicator(const DoubleCosetSpace<FiniteGroup>& space, FiniteElement rep) {
  const auto r = space.project(rep);
  return CosetFunction<FiniteGroup>::exact(space, [r](FiniteElement p) { return p == r ? 1.0 : 0.0; });
}

inline std::vector<FiniteElement> null_classes(const MeasureFunctional<FiniteGroup>& mu) {
  std::vector<FiniteElement> out;
  for (const auto& c : enumerate_classes(mu.space())) {
    if (mu.pair(class_indicator(mu.space(), c.representative)).value == 0.0) out.push_back(c.representative);
  }
  return out;
}

// ---------------------------------------------------------------- cocycle

/// lambda : N x K\G/H -> (0, inf).
template <class G>
class Cocycle {
 public:
  using element_type = typename G::element_type;
  using Fn = std::function<double(const element_type&, const element_type&)>;

  Cocycle(const DoubleCosetSpace<G>& space, Fn fn, std::string source)
      : space_(&space), fn_(std::move(fn)), source_(std::move(source)) {}

  double operator()(const element_type& n, const element_type& p) const {
    space_->require_in_normalizer(n);
    return fn_(n, space_->project(p));
  }

  const std::string& source() const { return source_; }
  const DoubleCosetSpace<G>& space() const { return *space_; }

 private:
  const DoubleCosetSpace<G>* space_;
  Fn fn_;
  std::string source_;
};

/// lambda(n, p) = rho(n p^) / rho(p^) at the canonical representative p^.
template <class G>
Cocycle<G> lambda_from_rho(const DoubleCosetSpace<G>& space, const RhoFunction<G>& rho) {
  if (!space.K().flags().in_group) throw PreconditionError(space.K().name() + " is not flagged IN");
  const auto* sp = &space;
  return Cocycle<G>(
      space,
      [sp, rho](const typename G::element_type& n, const typename G::element_type& p) {
        const double den = rho(p);
        if (den == 0.0) throw DivisionDomainError("rho vanishes at a class representative");
        return rho(sp->group().mul(n, p)) / den;
      },
      "from-rho");
}

/// max over `alternatives` (elements of the class of p) of the relative
/// spread |rho(n r)/rho(r) - lambda(n, p)| / lambda(n, p).
template <class G>
double lambda_well_definedness(const Cocycle<G>& lambda, const RhoFunction<G>& rho, const typename G::element_type& n,
                               const typename G::element_type& p,
                               const std::vector<typename G::element_type>& alternatives) {
  const auto& g = lambda.space().group();
  const double ref = lambda(n, p);
  double worst = 0.0;
  for (const auto& r : alternatives) {
    const double den = rho(r);
    if (den == 0.0) throw DivisionDomainError("rho vanishes at an alternative representative");
    worst = std::max(worst, std::abs(rho(g.mul(n, r)) / den - ref) / ref);
  }
  return worst;
}

/// |lambda(n1 n2, p) - lambda(n1, n2.p) lambda(n2, p)|.
template <class G>
double check_cocycle(const Cocycle<G>& lambda, const typename G::element_type& n1, const typename G::element_type& n2,
                     const typename G::element_type& p) {
  const auto& space = lambda.space();
  const auto& g = space.group();
  return std::abs(lambda(g.mul(n1, n2), p) - lambda(n1, space.n_action(n2, p)) * lambda(n2, p));
}

/// |pair(L_n F) - pair(F lambda(n, .))|. The translated side is lifted
/// against the translated dominating function so the lift stays valid.
template <class G>
Residual check_quasi_invariance(const MeasureFunctional<G>& mu, const Cocycle<G>& lambda,
                                const typename G::element_type& n, const CosetFunction<G>& F) {
  const auto& space = mu.space();
  space.require_in_normalizer(n);
  const auto lhs = mu.pair_with(left_translate(F, n), left_translate(space.group(), mu.dominating(), n));
  const auto rhs = mu.pair(scale(F, std::function<double(const typename G::element_type&)>(
                                        [&lambda, n](const typename G::element_type& p) { return lambda(n, p); })));
  return residual_of(lhs, rhs);
}

/// rho'(x) = c lambda(x, KH) on N and 0 off N, with c fixed by matching
/// mu(Q(reference)) = int reference rho' dx.
template <class G>
RhoFunction<G> rho_from_lambda(const MeasureFunctional<G>& mu, const Cocycle<G>& lambda,
                               const TestFunction<G>& reference, const std::vector<typename G::element_type>& h_samples,
                               double* constant = nullptr) {
  const auto& space = mu.space();
  if (!space.n_is_open()) throw PreconditionError("the normalizer is not open");
  if (!space.K().flags().in_group) throw PreconditionError(space.K().name() + " is not flagged IN");
  for (const auto& h : h_samples) {
    if (!space.N().contains(h)) throw PreconditionError(space.H().name() + " is not contained in the normalizer");
  }
  using E = typename G::element_type;
  const auto e = space.group().identity();
  auto shape = [&space, lambda, e](const E& x) { return space.N().contains(x) ? lambda(x, e) : 0.0; };
  const auto target = mu.pair(make_q_function(space, reference, mu.scheme()));
  const auto base = integrate_haar(space.group(), multiply(reference, shape, true), mu.scheme());
  if (base.value == 0.0) throw DivisionDomainError("reference function does not meet the normalizer");
  const double c = target.value / base.value;
  if (constant) *constant = c;
  return RhoFunction<G>([shape, c](const E& x) { return Integral{c * shape(x), 0.0}; }, RhoProvenance::from_lambda);
}

/// max/min - 1 of rho'(x)/rho(x) over `points` of N (rho > 0 there).
template <class G>
double ratio_spread(const RhoFunction<G>& a, const RhoFunction<G>& b, const std::vector<typename G::element_type>& points) {
  double lo = kInf, hi = 0.0;
  for (const auto& x : points) {
    const double den = b(x);
    if (den == 0.0) throw DivisionDomainError("ratio denominator vanishes");
    const double r = a(x) / den;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi / lo - 1.0;
}

/// phi(KxH) = rho1(x) / rho2(x); the covariance weights cancel, so the ratio
/// is a class function.
template <class G>
CosetFunction<G> equivalence_density(const DoubleCosetSpace<G>& space, const RhoFunction<G>& rho1,
                                     const RhoFunction<G>& rho2) {
  return CosetFunction<G>::exact(space, [rho1, rho2](const typename G::element_type& p) {
    const double den = rho2(p);
    if (den == 0.0) throw DivisionDomainError("rho2 vanishes at a class representative");
    return rho1(p) / den;
  });
}

/// |pair1(F) - pair2(F phi)|.
template <class G>
Residual check_equivalence(const MeasureFunctional<G>& mu1, const MeasureFunctional<G>& mu2,
                           const CosetFunction<G>& phi, const CosetFunction<G>& F) {
  const auto rhs = mu2.pair(scale(F, std::function<double(const typename G::element_type&)>(
                                         [phi](const typename G::element_type& p) { return phi(p); })));
  return residual_of(mu1.pair(F), rhs);
}

/// True iff every basis function pairs to a positive value.
template <class G>
bool check_support(const MeasureFunctional<G>& mu, const std::vector<CosetFunction<G>>& basis,
                   double* min_pairing = nullptr) {
  bool ok = true;
  double lo = kInf;
  for (const auto& F : basis) {
    const double v = mu.pair(F).value;
    lo = std::min(lo, v);
    ok = ok && v > 0.0;
  }
  if (min_pairing) *min_pairing = lo;
  return ok;
}

/// rho * (1 - 1_c): still covariant, but the class c becomes null.
inline RhoFunction<FiniteGroup> zero_class(const DoubleCosetSpace<FiniteGroup>& space, const RhoFunction<FiniteGroup>& rho,
                                           FiniteElement c) {
  const auto r = space.project(c);
  const auto* sp = &space;
  return RhoFunction<FiniteGroup>(
      [sp, rho, r](FiniteElement x) { return sp->project(x) == r ? Integral{} : rho.eval(x); },
      RhoProvenance::modified);
}

/// int f(n x h^-1) dmu~ against Delta_H(h) int f(x) lambda(n^-1, q(x)) dmu~.
template <class G>
Residual check_translated_lift(const LiftedMeasure<G>& mut, const Cocycle<G>& lambda,
                               const typename G::element_type& n, const typename G::element_type& h,
                               const TestFunction<G>& f) {
  const auto& space = mut.base().space();
  const auto& g = space.group();
  space.require_in_normalizer(n);
  if (!space.K().flags().in_group) throw PreconditionError(space.K().name() + " is not flagged IN");
  const auto ni = g.inv(n);
  const auto lhs = mut(translate(g, f, n, g.inv(h)));
  const auto weighted = multiply(f, [&lambda, ni](const typename G::element_type& x) { return lambda(ni, x); }, true);
  const auto rhs = space.H().modular(h) * mut(weighted);
  return residual_of(lhs, rhs);
}

/// The same identity with lambda(n, q(x)) in place of lambda(n^-1, q(x)).
template <class G>
Residual check_translated_lift_literal(const LiftedMeasure<G>& mut, const Cocycle<G>& lambda,
                                       const typename G::element_type& n, const typename G::element_type& h,
                                       const TestFunction<G>& f) {
  const auto& space = mut.base().space();
  const auto& g = space.group();
  const auto lhs = mut(translate(g, f, n, g.inv(h)));
  const auto weighted = multiply(f, [&lambda, n](const typename G::element_type& x) { return lambda(n, x); }, true);
  return residual_of(lhs, space.H().modular(h) * mut(weighted));
}

}  // namespace dcoset
