#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcoset/averaging.hpp"
#include "dcoset/coset_space.hpp"
#include "dcoset/errors.hpp"
#include "dcoset/group_core.hpp"
#include "dcoset/test_function.hpp"

namespace dcoset {

enum class RhoProvenance { from_f, covering_sum, from_lambda, catalog_analytic, translated, modified };

inline const char* to_string(RhoProvenance p) {
  switch (p) {
    case RhoProvenance::from_f: return "from-f";
    case RhoProvenance::covering_sum: return "covering-sum";
    case RhoProvenance::from_lambda: return "from-lambda";
    case RhoProvenance::catalog_analytic: return "catalog-analytic";
    case RhoProvenance::translated: return "translated";
    case RhoProvenance::modified: return "modified";
  }
  return "?";
}

/// A nonnegative function on G satisfying
///   rho(k x h) = Delta_K(k) Delta_H(h) / Delta_G(h) rho(x).
/// Values may carry an integration error (quadrature-defined rho).
template <class G>
class RhoFunction {
 public:
  using element_type = typename G::element_type;
  using Fn = std::function<Integral(const element_type&)>;

  RhoFunction(Fn fn, RhoProvenance provenance, bool strictly_positive = false)
      : fn_(std::move(fn)), provenance_(provenance), strictly_positive_(strictly_positive),
        errors_(std::make_shared<ErrorTrack>()) {}

  static RhoFunction analytic(std::function<double(const element_type&)> fn) {
    return RhoFunction([fn = std::move(fn)](const element_type& x) { return Integral{fn(x), 0.0}; },
                       RhoProvenance::catalog_analytic, true);
  }

  Integral eval(const element_type& x) const {
    const auto v = fn_(x);
    errors_->note(v);
    return v;
  }
  double operator()(const element_type& x) const { return eval(x).value; }

  RhoProvenance provenance() const { return provenance_; }
  bool strictly_positive() const { return strictly_positive_; }
  void mark_strictly_positive() { strictly_positive_ = true; }
  double relative_error() const { return errors_->worst(); }

 private:
  Fn fn_;
  RhoProvenance provenance_;
  bool strictly_positive_;
  std::shared_ptr<ErrorTrack> errors_;
};

/// rho_f(x) = int_K int_H Delta_G(h) / (Delta_H(h) Delta_K(k^-1)) f(k^-1 x h) dh dk.
template <class G>
Integral rho_f_value(const DoubleCosetSpace<G>& space, const TestFunction<G>& f, const typename G::element_type& x,
                     const IntegrationScheme& s) {
  const auto& g = space.group();
  return integrate_pair(
      space.K(), space.H(),
      [&](const auto& k, const auto& h) {
        const auto ki = g.inv(k);
        const double v = f(g.mul(g.mul(ki, x), h));
        if (v == 0.0) return 0.0;
        return v * g.modular(h) / (space.H().modular(h) * space.K().modular(ki));
      },
      s);
}

template <class G>
RhoFunction<G> rho_from_f(const DoubleCosetSpace<G>& space, const TestFunction<G>& f, const IntegrationScheme& s) {
  return RhoFunction<G>([&space, f, s](const typename G::element_type& x) { return rho_f_value(space, f, x, s); },
                        RhoProvenance::from_f);
}

/// x -> rho(n^-1 x) for n in N.
template <class G>
RhoFunction<G> translate_rho(const DoubleCosetSpace<G>& space, const typename G::element_type& n,
                             const RhoFunction<G>& rho) {
  space.require_in_normalizer(n);
  if (!space.K().flags().in_group) throw PreconditionError(space.K().name() + " is not flagged IN");
  const auto ni = space.group().inv(n);
  return RhoFunction<G>([&space, ni, rho](const typename G::element_type& x) { return rho.eval(space.group().mul(ni, x)); },
                        RhoProvenance::translated, rho.strictly_positive());
}

/// |rho(k x h) - w rho(x)| with w the covariance weight. `error` bounds the
/// part of the discrepancy explained by the integration error of rho.
struct CovarianceResidual {
  double absolute = 0.0;
  double relative = 0.0;  // absolute / (w rho(x)), 0 when rho(x) = 0
  double error = 0.0;
};

template <class G>
CovarianceResidual check_covariance(const DoubleCosetSpace<G>& space, const RhoFunction<G>& rho,
                                    const typename G::element_type& k, const typename G::element_type& x,
                                    const typename G::element_type& h) {
  const auto& g = space.group();
  const double w = space.rho_weight(k, h);
  const auto lhs = rho.eval(g.mul(g.mul(k, x), h));
  const auto rhs = rho.eval(x);
  CovarianceResidual r;
  r.absolute = std::abs(lhs.value - w * rhs.value);
  r.relative = rhs.value > 0.0 ? r.absolute / (w * rhs.value) : 0.0;
  r.error = lhs.error + w * rhs.error;
  return r;
}

// --------------------------------------------------------------- covering

/// U = {x : gauge(x) < 1}; the symmetric bump used for the positive sum is
/// nonzero exactly on U.
template <class G>
struct UnitNeighbourhood {
  std::function<double(const typename G::element_type&)> gauge;

  bool contains(const typename G::element_type& x) const { return gauge(x) < 1.0; }
};

/// Decides a ~ b :<=> k a h b^-1 in U_N for some (k, h) on a parameter grid.
/// A positive `margin` widens U so that borderline cases count as related.
/// When N is not open, U_N is not a neighbourhood and U is used instead.
template <class G>
class RelationTest {
 public:
  using element_type = typename G::element_type;

  RelationTest(const DoubleCosetSpace<G>& space, UnitNeighbourhood<G> u, int grid)
      : space_(&space),
        u_(std::move(u)),
        ks_(space.K().grid(grid)),
        hs_(space.H().grid(grid)),
        restrict_(space.n_is_open()) {}

  /// min over the grid of gauge(k a h b^-1), restricted to N when `in_n`.
  double min_gauge(const element_type& a, const element_type& b, bool in_n) const {
    const auto& g = space_->group();
    const auto bi = g.inv(b);
    double best = kInf;
    for (const auto& k : ks_) {
      const auto ka = g.mul(k, a);
      for (const auto& h : hs_) {
        const auto x = g.mul(g.mul(ka, h), bi);
        if (in_n && restrict_ && !space_->N().contains(x)) continue;
        best = std::min(best, u_.gauge(x));
      }
    }
    return best;
  }

  /// K a H meets U_N b.
  bool covers(const element_type& a, const element_type& b) const { return min_gauge(a, b, true) < 1.0; }
  bool related(const element_type& a, const element_type& b, double margin, bool in_n = true) const {
    return min_gauge(a, b, in_n) < 1.0 + margin;
  }

  const UnitNeighbourhood<G>& unit() const { return u_; }

 private:
  const DoubleCosetSpace<G>* space_;
  UnitNeighbourhood<G> u_;
  std::vector<element_type> ks_;
  std::vector<element_type> hs_;
  bool restrict_;
};

template <class G>
struct CoveringSet {
  std::vector<typename G::element_type> points;
  std::size_t verified = 0;      // verification points found covered
  double separation_gap = kInf;  // min over accepted pairs of the related-gauge minus 1
};

/// Greedy sweep: accept a candidate unless it is related to an accepted
/// point. Every verification point must then be covered, otherwise
/// CoverIncompleteError names the first uncovered one.
template <class G>
CoveringSet<G> build_covering_set(const RelationTest<G>& rel, const std::vector<typename G::element_type>& candidates,
                                  const std::vector<typename G::element_type>& verification, double margin,
                                  const std::function<std::string(const typename G::element_type&)>& show) {
  CoveringSet<G> cover;
  for (const auto& c : candidates) {
    bool taken = false;
    for (const auto& b : cover.points) {
      if (rel.related(c, b, margin)) {
        taken = true;
        break;
      }
    }
    if (!taken) cover.points.push_back(c);
  }
  for (std::size_t i = 0; i < cover.points.size(); ++i) {
    for (std::size_t j = 0; j < cover.points.size(); ++j) {
      if (i != j) cover.separation_gap = std::min(cover.separation_gap, rel.min_gauge(cover.points[i], cover.points[j], true) - 1.0);
    }
  }
  for (const auto& x : verification) {
    bool hit = false;
    for (const auto& a : cover.points) {
      if (rel.covers(x, a)) {
        hit = true;
        break;
      }
    }
    if (!hit) throw CoverIncompleteError("covering set misses " + show(x));
    ++cover.verified;
  }
  return cover;
}

/// rho = sum over y in A of rho_{f^y}, f^y(x) = f(x y^-1). Evaluation at x
/// keeps only the terms with x in K U y H.
template <class G>
class CoveringRho {
 public:
  using element_type = typename G::element_type;

  CoveringRho(const DoubleCosetSpace<G>& space, CoveringSet<G> cover, TestFunction<G> f, RelationTest<G> rel,
              double margin, IntegrationScheme s)
      : space_(&space), cover_(std::move(cover)), rel_(std::move(rel)), margin_(margin), s_(std::move(s)) {
    const auto& g = space.group();
    for (const auto& y : cover_.points) terms_.push_back(translate(g, f, g.identity(), g.inv(y)));
  }

  /// Indices of the terms kept at x.
  std::vector<std::size_t> active_terms(const element_type& x) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cover_.points.size(); ++i) {
      if (rel_.related(x, cover_.points[i], margin_, false)) out.push_back(i);
    }
    return out;
  }

  std::size_t term_count(const element_type& x) const { return active_terms(x).size(); }

  Integral filtered(const element_type& x) const {
    Integral sum;
    for (auto i : active_terms(x)) sum += rho_f_value(*space_, terms_[i], x, s_);
    return sum;
  }

  Integral unfiltered(const element_type& x) const {
    Integral sum;
    for (const auto& t : terms_) sum += rho_f_value(*space_, t, x, s_);
    return sum;
  }

  const CoveringSet<G>& cover() const { return cover_; }

  RhoFunction<G> rho() const {
    auto self = std::make_shared<CoveringRho>(*this);
    return RhoFunction<G>([self](const element_type& x) { return self->filtered(x); }, RhoProvenance::covering_sum);
  }

 private:
  const DoubleCosetSpace<G>* space_;
  CoveringSet<G> cover_;
  RelationTest<G> rel_;
  double margin_;
  IntegrationScheme s_;
  std::vector<TestFunction<G>> terms_;
};

/// The covering sum, marked strictly positive after checking rho > 0 on
/// every grid point; PositivityFailure otherwise.
template <class G>
RhoFunction<G> strictly_positive_rho(const CoveringRho<G>& sum, const std::vector<typename G::element_type>& grid,
                                     const std::function<std::string(const typename G::element_type&)>& show,
                                     double* min_value = nullptr) {
  auto rho = sum.rho();
  double lo = kInf;
  for (const auto& x : grid) {
    const double v = rho(x);
    lo = std::min(lo, v);
    if (!(v > 0.0)) throw PositivityFailure("covering-sum rho vanishes at " + show(x));
  }
  if (min_value) *min_value = lo;
  rho.mark_strictly_positive();
  return rho;
}

}  // namespace dcoset
