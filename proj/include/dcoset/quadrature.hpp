#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dcoset/errors.hpp"

namespace dcoset {

/// One axis of an integration box. Periodic axes are integrated over the
/// full period with equal weights and are never tightened.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool periodic = false;

  double width() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

using Box = std::vector<Interval>;

inline constexpr std::size_t kMaxBoxDim = 8;

struct ExactSum {};

/// Composite trapezoid rule, `points_per_axis` subintervals per non-periodic
/// axis (nodes per periodic axis). The error estimate compares against the
/// nested rules with n/2 and (when 4 divides n) n/4 subintervals.
struct TensorQuadrature {
  int points_per_axis = 64;
};

/// Uniform sampling on the (tightened) box. `stream` selects an independent
/// substream of `seed`, so results do not depend on call order.
struct MonteCarlo {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
};

using IntegrationScheme = std::variant<ExactSum, TensorQuadrature, MonteCarlo>;

inline bool is_exact(const IntegrationScheme& s) { return std::holds_alternative<ExactSum>(s); }

inline std::string describe(const IntegrationScheme& s) {
  if (std::holds_alternative<ExactSum>(s)) return "exact-sum";
  if (const auto* t = std::get_if<TensorQuadrature>(&s)) {
    return "tensor-quadrature(" + std::to_string(t->points_per_axis) + ")";
  }
  const auto& mc = std::get<MonteCarlo>(s);
  return "monte-carlo(" + std::to_string(mc.samples) + ", seed " + std::to_string(mc.seed) + ")";
}

/// Same scheme at twice the resolution (tensor) or four times the samples.
inline IntegrationScheme refined(const IntegrationScheme& s) {
  if (const auto* t = std::get_if<TensorQuadrature>(&s)) return TensorQuadrature{2 * t->points_per_axis};
  if (const auto* mc = std::get_if<MonteCarlo>(&s)) {
    return MonteCarlo{4 * mc->samples, mc->seed, mc->stream};
  }
  return s;
}

inline IntegrationScheme with_stream(const IntegrationScheme& s, std::uint64_t stream) {
  if (const auto* mc = std::get_if<MonteCarlo>(&s)) return MonteCarlo{mc->samples, mc->seed, stream};
  return s;
}

/// A value together with its reported (nonnegative) error estimate.
struct Integral {
  double value = 0.0;
  double error = 0.0;

  Integral& operator+=(const Integral& o) {
    value += o.value;
    error += o.error;
    return *this;
  }
  friend Integral operator+(Integral a, const Integral& b) { return a += b; }
  friend Integral operator-(const Integral& a, const Integral& b) {
    return {a.value - b.value, a.error + b.error};
  }
  friend Integral operator*(double s, const Integral& a) { return {s * a.value, std::abs(s) * a.error}; }
  double relative_error() const { return value == 0.0 ? (error == 0.0 ? 0.0 : 1.0) : error / std::abs(value); }
};

namespace detail {

struct AxisNodes {
  std::vector<double> x;
  std::vector<double> fine;
  std::vector<double> coarse;
  std::vector<double> coarser;  // n/4 rule; empty unless 4 divides n
  bool periodic = false;
};

inline AxisNodes trapezoid_nodes(const Interval& iv, int n) {
  AxisNodes a;
  a.periodic = iv.periodic;
  const double h = iv.width() / n;
  const int count = iv.periodic ? n : n + 1;
  a.x.resize(count);
  a.fine.resize(count);
  a.coarse.resize(count);
  for (int i = 0; i < count; ++i) {
    a.x[i] = iv.lo + i * h;
    a.fine[i] = h;
    a.coarse[i] = (i % 2 == 0) ? 2 * h : 0.0;
  }
  if (n % 4 == 0) {
    a.coarser.resize(count);
    for (int i = 0; i < count; ++i) a.coarser[i] = (i % 4 == 0) ? 4 * h : 0.0;
    if (!iv.periodic) a.coarser.front() = a.coarser.back() = 2 * h;
  }
  if (!iv.periodic) {
    a.x.back() = iv.hi;
    a.fine.front() = a.fine.back() = 0.5 * h;
    a.coarse.front() = a.coarse.back() = h;
  }
  return a;
}

inline void require_resolution(int n) {
  if (n < 2 || n % 2 != 0) {
    throw ConfigurationError("tensor quadrature needs an even number of points per axis >= 2, got " +
                             std::to_string(n));
  }
}

inline void require_dim(const Box& box) {
  if (box.size() > kMaxBoxDim) throw ConfigurationError("integration box dimension too large");
  for (const auto& iv : box) {
    if (!(iv.hi > iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw IntegrationDomainError("integration box must be bounded and nonempty");
    }
  }
}

// Visits every node of the tensor grid built from `axes`.
template <class Visit>
void for_each_node(const std::vector<AxisNodes>& axes, Visit&& visit) {
  const std::size_t d = axes.size();
  std::array<std::size_t, kMaxBoxDim> idx{};
  std::array<double, kMaxBoxDim> point{};
  for (std::size_t j = 0; j < d; ++j) point[j] = axes[j].x[0];
  while (true) {
    visit(std::span<const double>(point.data(), d), std::span<const std::size_t>(idx.data(), d));
    std::size_t j = 0;
    for (; j < d; ++j) {
      if (++idx[j] < axes[j].x.size()) {
        point[j] = axes[j].x[idx[j]];
        break;
      }
      idx[j] = 0;
      point[j] = axes[j].x[0];
    }
    if (j == d) return;
  }
}

}  // namespace detail

namespace detail {

struct TensorPass {
  Integral value;
  std::vector<char> lo_hit, hi_hit;
  bool escaped = false;
};

// Trapezoid rule on a fixed box, recording faces where the integrand is nonzero.
template <class Fn>
TensorPass tensor_pass(const Box& box, int n, Fn& fn) {
  std::vector<AxisNodes> axes;
  axes.reserve(box.size());
  for (const auto& iv : box) axes.push_back(trapezoid_nodes(iv, n));
  TensorPass out;
  out.lo_hit.assign(box.size(), 0);
  out.hi_hit.assign(box.size(), 0);
  const bool three_level = std::all_of(axes.begin(), axes.end(), [](const AxisNodes& a) { return !a.coarser.empty(); });
  double fine = 0.0, coarse = 0.0, coarser = 0.0, magnitude = 0.0;
  for_each_node(axes, [&](std::span<const double> p, std::span<const std::size_t> idx) {
    const double v = fn(p);
    if (v == 0.0) return;
    double wf = 1.0, wc = 1.0, wcc = 1.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const auto& a = axes[j];
      if (!a.periodic) {
        if (idx[j] == 0) out.lo_hit[j] = out.escaped = true;
        if (idx[j] + 1 == a.x.size()) out.hi_hit[j] = out.escaped = true;
      }
      wf *= a.fine[idx[j]];
      wc *= a.coarse[idx[j]];
      if (three_level) wcc *= a.coarser[idx[j]];
    }
    fine += wf * v;
    coarse += wc * v;
    if (three_level) coarser += wcc * v;
    magnitude += std::abs(wf * v);
  });
  // With three levels the error of T_n is extrapolated from the observed
  // contraction e1 / e2; the e2 floor guards against T_n and T_{n/2}
  // agreeing by accident.
  const double e1 = std::abs(fine - coarse);
  double estimate = e1;
  if (three_level) {
    const double e2 = std::abs(coarse - coarser);
    if (e2 > 0.0) estimate = std::max(e1 * std::min(1.0, e1 / e2), e2 / 65536.0);
  }
  out.value = {fine, estimate + 1e-14 * magnitude};
  return out;
}

}  // namespace detail

/// Trapezoid rule on a fixed box. Throws IntegrationDomainError if the
/// integrand is nonzero on a non-periodic face of the box.
template <class Fn>
Integral integrate_tensor_fixed(const Box& box, int n, Fn&& fn) {
  detail::require_resolution(n);
  detail::require_dim(box);
  if (box.empty()) return {fn(std::span<const double>{}), 0.0};
  const auto pass = detail::tensor_pass(box, n, fn);
  if (pass.escaped) throw IntegrationDomainError("integrand support escapes the integration box");
  return pass.value;
}

/// Smallest sub-box (on a `scan`-interval grid, padded by two cells) holding
/// every scanned nonzero of `fn`. A periodic axis is cut open at its longest
/// run of zero nodes and becomes an ordinary interval, possibly extending past
/// the period bounds. Returns nullopt when every scanned value is zero.
template <class Fn>
std::optional<Box> support_hull(const Box& box, int scan, Fn&& fn) {
  detail::require_dim(box);
  if (box.empty()) return box;
  std::vector<detail::AxisNodes> axes;
  for (const auto& iv : box) axes.push_back(detail::trapezoid_nodes(iv, scan));
  const std::size_t d = box.size();
  std::vector<std::size_t> lo(d, SIZE_MAX), hi(d, 0);
  std::vector<std::vector<char>> hit(d);
  for (std::size_t j = 0; j < d; ++j) hit[j].assign(axes[j].x.size(), 0);
  bool any = false;
  detail::for_each_node(axes, [&](std::span<const double> p, std::span<const std::size_t> idx) {
    if (fn(p) == 0.0) return;
    any = true;
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], idx[j]);
      hi[j] = std::max(hi[j], idx[j]);
      hit[j][idx[j]] = 1;
    }
  });
  if (!any) return std::nullopt;
  Box out = box;
  for (std::size_t j = 0; j < d; ++j) {
    const auto& x = axes[j].x;
    if (box[j].periodic) {
      // Longest circular run of zero nodes; keep the axis whole unless the
      // run leaves room for the padding.
      const std::size_t n = x.size();
      std::size_t best = 0, best_end = 0, run = 0;
      for (std::size_t i = 0; i < 2 * n; ++i) {
        run = hit[j][i % n] ? 0 : std::min(run + 1, n);
        if (run > best) {
          best = run;
          best_end = i;
        }
      }
      if (best < 6 || best >= n) continue;
      const double h = box[j].width() / static_cast<double>(n);
      const std::size_t first = best_end + 1;  // first nonzero node after the run
      const double start = box[j].lo + static_cast<double>(first) * h;
      out[j] = Interval{start - 2 * h, start + static_cast<double>(n - best - 1) * h + 2 * h, false};
      continue;
    }
    const std::size_t last = x.size() - 1;
    if (lo[j] == 0 || hi[j] == last) {
      throw IntegrationDomainError("integrand support escapes the integration box");
    }
    const std::size_t a = lo[j] >= 2 ? lo[j] - 2 : 0;
    const std::size_t b = std::min(hi[j] + 2, last);
    out[j].lo = x[a];
    out[j].hi = x[b];
  }
  return out;
}

inline int scan_resolution(int n) { return std::max(8, n); }

/// Support-adaptive trapezoid rule: tighten the box, then integrate.
template <class Fn>
Integral integrate_tensor(const Box& box, int n, Fn&& fn) {
  detail::require_resolution(n);
  auto hull = support_hull(box, scan_resolution(n), fn);
  if (!hull) return {};
  if (hull->empty()) return {fn(std::span<const double>{}), 0.0};
  // A scan can miss thin parts of the support; widen any face the fine grid
  // finds nonzero on, up to the original box.
  while (true) {
    const auto pass = detail::tensor_pass(*hull, n, fn);
    if (!pass.escaped) return pass.value;
    for (std::size_t j = 0; j < hull->size(); ++j) {
      auto& iv = (*hull)[j];
      const double grow = 0.5 * iv.width();
      if (box[j].periodic) {
        if (pass.lo_hit[j]) iv.lo -= grow;
        if (pass.hi_hit[j]) iv.hi += grow;
        if (iv.width() >= box[j].width()) iv = box[j];
        continue;
      }
      for (int side = 0; side < 2; ++side) {
        if (!(side == 0 ? pass.lo_hit[j] : pass.hi_hit[j])) continue;
        double& edge = side == 0 ? iv.lo : iv.hi;
        const double limit = side == 0 ? box[j].lo : box[j].hi;
        if (edge == limit) throw IntegrationDomainError("integrand support escapes the integration box");
        edge = side == 0 ? std::max(limit, edge - grow) : std::min(limit, edge + grow);
      }
    }
  }
}

namespace detail {

// 53-bit uniform in [0, 1); portable across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Mean-value Monte Carlo on the tightened box; reported error is three
/// standard errors.
template <class Fn>
Integral integrate_monte_carlo(const Box& box, const MonteCarlo& mc, Fn&& fn) {
  if (mc.samples < 2) throw ConfigurationError("monte-carlo needs at least two samples");
  auto hull = support_hull(box, 16, fn);
  if (!hull) return {};
  if (hull->empty()) return {fn(std::span<const double>{}), 0.0};
  std::seed_seq seq{static_cast<std::uint32_t>(mc.seed), static_cast<std::uint32_t>(mc.seed >> 32),
                    static_cast<std::uint32_t>(mc.stream), static_cast<std::uint32_t>(mc.stream >> 32)};
  std::mt19937_64 rng(seq);
  const std::size_t d = hull->size();
  double volume = 1.0;
  for (const auto& iv : *hull) volume *= iv.width();
  std::array<double, kMaxBoxDim> p{};
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < mc.samples; ++i) {
    for (std::size_t j = 0; j < d; ++j) p[j] = (*hull)[j].lo + (*hull)[j].width() * detail::unit_uniform(rng);
    const double v = fn(std::span<const double>(p.data(), d));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(mc.samples - 1);
  return {volume * mean, 3.0 * volume * std::sqrt(var / static_cast<double>(mc.samples))};
}

/// Integrates `fn` over `box` with a continuous scheme.
template <class Fn>
Integral integrate_box(const Box& box, const IntegrationScheme& scheme, Fn&& fn) {
  if (const auto* t = std::get_if<TensorQuadrature>(&scheme)) return integrate_tensor(box, t->points_per_axis, fn);
  if (const auto* mc = std::get_if<MonteCarlo>(&scheme)) return integrate_monte_carlo(box, *mc, fn);
  throw ConfigurationError("exact-sum is only valid on finite groups");
}

}  // namespace dcoset
