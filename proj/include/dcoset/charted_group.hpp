#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "dcoset/errors.hpp"
#include "dcoset/quadrature.hpp"

namespace dcoset {

/// Coordinates of an element of a charted group.
template <std::size_t Dim>
struct Point {
  std::array<double, Dim> x{};

  double& operator[](std::size_t i) { return x[i]; }
  double operator[](std::size_t i) const { return x[i]; }
  friend auto operator<=>(const Point&, const Point&) = default;
};

inline double wrap_angle(double t) {
  const double r = std::remainder(t, 2.0 * std::numbers::pi);
  return r <= -std::numbers::pi ? r + 2.0 * std::numbers::pi : r;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A Lie group with a single global chart. `Law` supplies the closed-form
/// group law, Haar density and modular function in chart coordinates:
///
///   static constexpr std::size_t dim; static constexpr std::string_view name;
///   static Point<dim> mul(a, b), inv(a), identity();
///   static double haar_density(a), modular(a);
///   static std::array<Interval, dim> chart();
///
/// Modular convention: int f(x y) dx = modular(y)^-1 int f(x) dx.
template <class Law>
class ChartedGroup {
 public:
  static constexpr std::size_t dim = Law::dim;
  using element_type = Point<dim>;
  using law_type = Law;
  static constexpr bool is_finite = false;

  std::string_view name() const { return Law::name; }

  element_type identity() const { return Law::identity(); }

  element_type mul(const element_type& a, const element_type& b) const {
    require(a);
    require(b);
    return Law::mul(a, b);
  }

  element_type inv(const element_type& a) const {
    require(a);
    return Law::inv(a);
  }

  double modular(const element_type& a) const {
    require(a);
    return Law::modular(a);
  }

  double haar_density(const element_type& a) const {
    require(a);
    return Law::haar_density(a);
  }

  std::array<Interval, dim> chart() const { return Law::chart(); }

  bool in_domain(const element_type& a) const {
    const auto box = Law::chart();
    for (std::size_t i = 0; i < dim; ++i) {
      if (!std::isfinite(a[i])) return false;
      if (box[i].periodic) continue;
      if (!(a[i] > box[i].lo && a[i] < box[i].hi)) return false;
    }
    return true;
  }

  /// Largest coordinate difference, measured around the circle on periodic axes.
  double distance(const element_type& a, const element_type& b) const {
    const auto box = Law::chart();
    double d = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double diff = box[i].periodic ? wrap_angle(a[i] - b[i]) : a[i] - b[i];
      d = std::max(d, std::abs(diff));
    }
    return d;
  }

 private:
  void require(const element_type& a) const {
    if (!in_domain(a)) {
      std::string coords;
      for (std::size_t i = 0; i < dim; ++i) coords += (i ? ", " : "") + std::to_string(a[i]);
      throw DomainViolation(std::string(Law::name) + ": element (" + coords + ") outside the chart domain");
    }
  }
};

/// The ax+b group, coordinates (a, b) with a > 0, (a,b)(c,d) = (ac, ad+b).
/// Left Haar measure da db / a^2, modular function 1/a.
struct AffineLaw {
  static constexpr std::size_t dim = 2;
  static constexpr std::string_view name = "axb";
  using P = Point<2>;

  static P identity() { return {{1.0, 0.0}}; }
  static P mul(const P& p, const P& q) { return {{p[0] * q[0], p[0] * q[1] + p[1]}}; }
  static P inv(const P& p) { return {{1.0 / p[0], -p[1] / p[0]}}; }
  static double haar_density(const P& p) { return 1.0 / (p[0] * p[0]); }
  static double modular(const P& p) { return 1.0 / p[0]; }
  static std::array<Interval, 2> chart() { return {Interval{0.0, kInf}, Interval{-kInf, kInf}}; }
};

/// Heisenberg group, (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y').
/// Unimodular with Haar measure dx dy dz.
struct HeisenbergLaw {
  static constexpr std::size_t dim = 3;
  static constexpr std::string_view name = "heisenberg";
  using P = Point<3>;

  static P identity() { return {}; }
  static P mul(const P& p, const P& q) { return {{p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[0] * q[1]}}; }
  static P inv(const P& p) { return {{-p[0], -p[1], -p[2] + p[0] * p[1]}}; }
  static double haar_density(const P&) { return 1.0; }
  static double modular(const P&) { return 1.0; }
  static std::array<Interval, 3> chart() {
    return {Interval{-kInf, kInf}, Interval{-kInf, kInf}, Interval{-kInf, kInf}};
  }
};

/// SE(2) as (theta, t1, t2) acting by v -> R(theta) v + t; theta in (-pi, pi].
/// Unimodular with Haar measure dtheta dt1 dt2.
struct EuclideanMotionLaw {
  static constexpr std::size_t dim = 3;
  static constexpr std::string_view name = "se2";
  using P = Point<3>;

  static P identity() { return {}; }
  static P mul(const P& p, const P& q) {
    const double c = std::cos(p[0]), s = std::sin(p[0]);
    return {{wrap_angle(p[0] + q[0]), p[1] + c * q[1] - s * q[2], p[2] + s * q[1] + c * q[2]}};
  }
  static P inv(const P& p) {
    const double c = std::cos(p[0]), s = std::sin(p[0]);
    return {{wrap_angle(-p[0]), -(c * p[1] + s * p[2]), -(-s * p[1] + c * p[2])}};
  }
  static double haar_density(const P&) { return 1.0; }
  static double modular(const P&) { return 1.0; }
  static std::array<Interval, 3> chart() {
    return {Interval{-std::numbers::pi, std::numbers::pi, true}, Interval{-kInf, kInf}, Interval{-kInf, kInf}};
  }
};

using AffineGroup = ChartedGroup<AffineLaw>;
using HeisenbergGroup = ChartedGroup<HeisenbergLaw>;
using EuclideanMotionGroup = ChartedGroup<EuclideanMotionLaw>;

}  // namespace dcoset
