#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "dcoset/charted_group.hpp"
#include "dcoset/finite_group.hpp"
#include "dcoset/quadrature.hpp"

namespace dcoset {

template <class G>
struct support_traits;

// Finite supports are sorted element lists.
template <>
struct support_traits<FiniteGroup> {
  using type = std::vector<FiniteElement>;
};

// Charted supports are chart boxes; periodic axes always span the full period.
template <class Law>
struct support_traits<ChartedGroup<Law>> {
  using type = Box;
};

template <class G>
using support_t = typename support_traits<G>::type;

/// A compactly supported function on G with a declared support region.
template <class G>
class TestFunction {
 public:
  using element_type = typename G::element_type;
  using Fn = std::function<double(const element_type&)>;

  TestFunction() : fn_([](const element_type&) { return 0.0; }), nonnegative_(true) {}
  TestFunction(Fn fn, support_t<G> support, bool nonnegative)
      : fn_(std::move(fn)), support_(std::move(support)), nonnegative_(nonnegative) {}

  double operator()(const element_type& x) const { return fn_(x); }
  const support_t<G>& support() const { return support_; }
  bool nonnegative() const { return nonnegative_; }

 private:
  Fn fn_;
  support_t<G> support_;
  bool nonnegative_ = false;
};

/// (1 - t^2)^8 on |t| < 1: a C^7 bump that the trapezoid rule integrates to
/// high accuracy.
inline double poly_bump(double t) {
  const double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  const double u = 1.0 - t2;
  const double u2 = u * u;
  const double u4 = u2 * u2;
  return u4 * u4;
}

// ---------------------------------------------------------------- supports

inline support_t<FiniteGroup> transport_support(const FiniteGroup& g, const support_t<FiniteGroup>& s,
                                                const std::function<FiniteElement(FiniteElement)>& map) {
  support_t<FiniteGroup> out;
  out.reserve(s.size());
  for (auto x : s) out.push_back(map(x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  (void)g;
  return out;
}

/// Bounding box of the image of `box` under `map`, estimated from a 9-point
/// lattice per axis and padded by 10% of the extent. Exact (before padding)
/// when `map` is affine on the box.
template <class Law>
Box transport_support(const ChartedGroup<Law>& g, const Box& box,
                      const std::function<Point<Law::dim>(const Point<Law::dim>&)>& map) {
  constexpr std::size_t d = Law::dim;
  constexpr int m = 9;
  const auto chart = g.chart();
  std::array<double, d> lo, hi;
  lo.fill(kInf);
  hi.fill(-kInf);
  std::array<int, d> idx{};
  while (true) {
    Point<d> p;
    for (std::size_t j = 0; j < d; ++j) {
      const double t = static_cast<double>(idx[j]) / (m - 1);
      p[j] = box[j].lo + t * box[j].width();
      if (chart[j].periodic) p[j] = wrap_angle(p[j]);
    }
    const auto q = map(p);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], q[j]);
      hi[j] = std::max(hi[j], q[j]);
    }
    std::size_t j = 0;
    for (; j < d; ++j) {
      if (++idx[j] < m) break;
      idx[j] = 0;
    }
    if (j == d) break;
  }
  Box out(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (chart[j].periodic) {
      out[j] = chart[j];
      continue;
    }
    const double pad = 0.1 * (hi[j] - lo[j]) + 1e-9;
    double a = lo[j] - pad, b = hi[j] + pad;
    if (std::isfinite(chart[j].lo)) a = std::max(a, chart[j].lo + 0.5 * (lo[j] - chart[j].lo));
    if (std::isfinite(chart[j].hi)) b = std::min(b, chart[j].hi - 0.5 * (chart[j].hi - hi[j]));
    out[j] = Interval{a, b};
  }
  return out;
}

inline support_t<FiniteGroup> support_union(const FiniteGroup&, const support_t<FiniteGroup>& a,
                                            const support_t<FiniteGroup>& b) {
  support_t<FiniteGroup> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

template <class Law>
Box support_union(const ChartedGroup<Law>&, const Box& a, const Box& b) {
  Box out = a;
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].lo = std::min(a[j].lo, b[j].lo);
    out[j].hi = std::max(a[j].hi, b[j].hi);
  }
  return out;
}

// ------------------------------------------------------------- combinators

/// x -> f(a x b), supported on a^-1 supp(f) b^-1.
template <class G>
TestFunction<G> translate(const G& g, const TestFunction<G>& f, const typename G::element_type& a,
                          const typename G::element_type& b) {
  using E = typename G::element_type;
  const E ai = g.inv(a), bi = g.inv(b);
  auto support = transport_support(g, f.support(), std::function<E(const E&)>([&g, ai, bi](const E& y) {
                                     return g.mul(g.mul(ai, y), bi);
                                   }));
  return TestFunction<G>([&g, f, a, b](const E& x) { return f(g.mul(g.mul(a, x), b)); }, std::move(support),
                         f.nonnegative());
}

/// L_n f(x) = f(n^-1 x).
template <class G>
TestFunction<G> left_translate(const G& g, const TestFunction<G>& f, const typename G::element_type& n) {
  return translate(g, f, g.inv(n), g.identity());
}

/// alpha f + beta h.
template <class G>
TestFunction<G> combine(const G& g, double alpha, const TestFunction<G>& f, double beta, const TestFunction<G>& h) {
  using E = typename G::element_type;
  return TestFunction<G>([f, h, alpha, beta](const E& x) { return alpha * f(x) + beta * h(x); },
                         support_union(g, f.support(), h.support()),
                         alpha >= 0 && beta >= 0 && f.nonnegative() && h.nonnegative());
}

/// x -> f(x) w(x); the support of f is kept.
template <class G>
TestFunction<G> multiply(const TestFunction<G>& f, std::function<double(const typename G::element_type&)> w,
                         bool w_nonnegative) {
  using E = typename G::element_type;
  return TestFunction<G>(
      [f, w = std::move(w)](const E& x) {
        const double v = f(x);
        return v == 0.0 ? 0.0 : v * w(x);
      },
      f.support(), f.nonnegative() && w_nonnegative);
}

// ------------------------------------------------------------ constructors

/// Tabulated function on a finite group.
inline TestFunction<FiniteGroup> table_function(const FiniteGroup& g, std::vector<double> values) {
  if (values.size() != g.order()) throw ConfigurationError("table size does not match group order");
  support_t<FiniteGroup> support;
  bool nonneg = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) support.push_back({i});
    nonneg = nonneg && values[i] >= 0.0;
  }
  return TestFunction<FiniteGroup>([v = std::move(values)](FiniteElement x) { return v.at(x.index); },
                                   std::move(support), nonneg);
}

/// Random table with values in {1/64, ..., 64/64}; dyadic so sums are exact.
template <class Rng>
TestFunction<FiniteGroup> random_table_function(const FiniteGroup& g, Rng& rng) {
  std::uniform_int_distribution<int> dist(1, 64);
  std::vector<double> v(g.order());
  for (auto& x : v) x = dist(rng) / 64.0;
  return table_function(g, std::move(v));
}

/// Product bump in chart coordinates centred at `c` with per-axis halfwidths.
template <class Law>
TestFunction<ChartedGroup<Law>> box_bump(const ChartedGroup<Law>& g, const Point<Law::dim>& c,
                                         const std::array<double, Law::dim>& halfwidth, double height = 1.0) {
  constexpr std::size_t d = Law::dim;
  const auto chart = g.chart();
  Box support(d);
  for (std::size_t j = 0; j < d; ++j) {
    support[j] = chart[j].periodic ? chart[j] : Interval{c[j] - halfwidth[j], c[j] + halfwidth[j]};
  }
  return TestFunction<ChartedGroup<Law>>(
      [c, halfwidth, chart, support, height](const Point<d>& x) {
        double v = height;
        for (std::size_t j = 0; j < d && v != 0.0; ++j) {
          if (!chart[j].periodic && (x[j] <= support[j].lo || x[j] >= support[j].hi)) return 0.0;
          const double diff = chart[j].periodic ? wrap_angle(x[j] - c[j]) : x[j] - c[j];
          v *= poly_bump(diff / halfwidth[j]);
        }
        return v;
      },
      support, height >= 0.0);
}

}  // namespace dcoset
