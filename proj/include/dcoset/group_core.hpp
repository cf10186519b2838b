#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

#include "dcoset/charted_group.hpp"
#include "dcoset/finite_group.hpp"
#include "dcoset/quadrature.hpp"
#include "dcoset/subgroup.hpp"
#include "dcoset/test_function.hpp"

namespace dcoset {

/// A nonnegative discrepancy together with the integration error of the
/// quantities it was computed from. `error` is zero for exact sums.
struct Residual {
  double value = 0.0;
  double error = 0.0;

  Residual& merge(const Residual& o) {
    value = std::max(value, o.value);
    error = std::max(error, o.error);
    return *this;
  }
};

inline Residual residual_of(const Integral& a, const Integral& b) {
  return {std::abs(a.value - b.value), a.error + b.error};
}

// ------------------------------------------------------------ integration

/// int_G f(x) dx under counting measure.
inline Integral integrate_haar(const FiniteGroup& g, const TestFunction<FiniteGroup>& f, const IntegrationScheme& s) {
  require_exact_scheme(s);
  double sum = 0.0;
  for (auto x : g.elements()) sum += f(x);
  return {sum, 0.0};
}

/// int_G f(x) dx over the support box of f, with the group's Haar density.
template <class Law>
Integral integrate_haar(const ChartedGroup<Law>& g, const TestFunction<ChartedGroup<Law>>& f,
                        const IntegrationScheme& s) {
  require_continuous_scheme(s);
  constexpr std::size_t d = Law::dim;
  return integrate_box(f.support(), s, [&](std::span<const double> t) {
    Point<d> x;
    std::copy(t.begin(), t.end(), x.x.begin());
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * g.haar_density(x);
  });
}

/// |int f(x y) dx - Delta_G(y)^-1 int f(x) dx|.
template <class G>
Residual modular_residual(const G& g, const TestFunction<G>& f, const typename G::element_type& y,
                          const IntegrationScheme& s) {
  const auto lhs = integrate_haar(g, translate(g, f, g.identity(), y), s);
  const auto rhs = (1.0 / g.modular(y)) * integrate_haar(g, f, s);
  return residual_of(lhs, rhs);
}

/// |int f(y x) dx - int f(x) dx|.
template <class G>
Residual left_invariance_residual(const G& g, const TestFunction<G>& f, const typename G::element_type& y,
                                  const IntegrationScheme& s) {
  return residual_of(integrate_haar(g, translate(g, f, y, g.identity()), s), integrate_haar(g, f, s));
}

// ---------------------------------------------------------------- axioms

struct AxiomReport {
  double max_deviation = 0.0;
  std::size_t triples = 0;
};

/// Associativity, identity and inverses on every triple.
inline AxiomReport check_group_axioms(const FiniteGroup& g) {
  AxiomReport r;
  const auto els = g.elements();
  const auto e = g.identity();
  for (auto x : els) {
    if (g.mul(x, g.inv(x)) != e || g.mul(g.inv(x), x) != e) r.max_deviation = 1.0;
    if (g.mul(x, e) != x || g.mul(e, x) != x) r.max_deviation = 1.0;
    for (auto y : els) {
      for (auto z : els) {
        ++r.triples;
        if (g.mul(g.mul(x, y), z) != g.mul(x, g.mul(y, z))) r.max_deviation = 1.0;
      }
    }
  }
  return r;
}

template <class Law>
Point<Law::dim> sample_in_box(const Box& box, std::mt19937_64& rng) {
  Point<Law::dim> p;
  for (std::size_t j = 0; j < Law::dim; ++j) {
    std::uniform_real_distribution<double> d(box[j].lo, box[j].hi);
    p[j] = d(rng);
  }
  return p;
}

/// Same laws on `count` random triples drawn from `box`; deviations are
/// coordinate distances.
template <class Law>
AxiomReport check_group_axioms(const ChartedGroup<Law>& g, const Box& box, std::size_t count, std::mt19937_64& rng) {
  AxiomReport r;
  const auto e = g.identity();
  for (std::size_t i = 0; i < count; ++i) {
    const auto x = sample_in_box<Law>(box, rng), y = sample_in_box<Law>(box, rng), z = sample_in_box<Law>(box, rng);
    const double scale = 1.0 + g.distance(x, e) + g.distance(y, e) + g.distance(z, e);
    double dev = g.distance(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
    dev = std::max(dev, g.distance(g.mul(x, g.inv(x)), e));
    dev = std::max(dev, g.distance(g.mul(g.inv(x), x), e));
    dev = std::max(dev, g.distance(g.mul(x, e), x));
    r.max_deviation = std::max(r.max_deviation, dev / (scale * scale));
    ++r.triples;
  }
  return r;
}

/// max |Delta(xy) - Delta(x) Delta(y)| relative to max(1, Delta(x) Delta(y)).
inline double check_modular_homomorphism(const FiniteGroup& g) {
  double worst = 0.0;
  for (auto x : g.elements()) {
    for (auto y : g.elements()) worst = std::max(worst, std::abs(g.modular(g.mul(x, y)) - g.modular(x) * g.modular(y)));
  }
  return std::max(worst, std::abs(g.modular(g.identity()) - 1.0));
}

template <class Law>
double check_modular_homomorphism(const ChartedGroup<Law>& g, const Box& box, std::size_t count,
                                  std::mt19937_64& rng) {
  double worst = std::abs(g.modular(g.identity()) - 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto x = sample_in_box<Law>(box, rng), y = sample_in_box<Law>(box, rng);
    const double prod = g.modular(x) * g.modular(y);
    worst = std::max(worst, std::abs(g.modular(g.mul(x, y)) - prod) / std::max(1.0, prod));
  }
  return worst;
}

}  // namespace dcoset
