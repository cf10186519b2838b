#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dcoset/coset_space.hpp"
#include "dcoset/errors.hpp"
#include "dcoset/group_core.hpp"
#include "dcoset/quadrature.hpp"
#include "dcoset/test_function.hpp"

namespace dcoset {

/// Largest relative error seen among the values a function has produced.
/// Shared between copies so pairings can propagate inner quadrature error.
class ErrorTrack {
 public:
  void note(const Integral& v) {
    const double r = v.relative_error();
    std::lock_guard lock(mutex_);
    worst_ = std::max(worst_, r);
  }
  void note_relative(double r) {
    std::lock_guard lock(mutex_);
    worst_ = std::max(worst_, r);
  }
  double worst() const {
    std::lock_guard lock(mutex_);
    return worst_;
  }

 private:
  mutable std::mutex mutex_;
  double worst_ = 0.0;
};

namespace detail {

struct ElementHash {
  std::size_t operator()(const FiniteElement& e) const { return std::hash<std::size_t>{}(e.index); }
  template <std::size_t D>
  std::size_t operator()(const Point<D>& p) const {
    std::size_t h = 0;
    for (double v : p.x) h = h * 1000003u ^ std::hash<double>{}(v + 0.0);  // + 0.0 folds -0 into 0
    return h;
  }
};

}  // namespace detail

/// A function on K\G/H, stored on canonical representatives. Evaluation at
/// any element first projects, so the value depends only on the class.
/// Values are memoised per representative when `cache` is set.
template <class G>
class CosetFunction {
 public:
  using element_type = typename G::element_type;
  using Fn = std::function<Integral(const element_type&)>;

  CosetFunction(const DoubleCosetSpace<G>& space, Fn fn, bool cache = true)
      : state_(std::make_shared<State>()) {
    state_->space = &space;
    state_->fn = std::move(fn);
    state_->cache = cache;
  }

  /// Wraps a closed-form function of the representative (no error).
  static CosetFunction exact(const DoubleCosetSpace<G>& space, std::function<double(const element_type&)> fn) {
    return CosetFunction(space, [fn = std::move(fn)](const element_type& p) { return Integral{fn(p), 0.0}; },
                         false);
  }

  static CosetFunction zero(const DoubleCosetSpace<G>& space) {
    return exact(space, [](const element_type&) { return 0.0; });
  }

  Integral eval(const element_type& x) const {
    const auto p = state_->space->project(x);
    if (!state_->cache) {
      const auto v = state_->fn(p);
      state_->errors.note(v);
      return v;
    }
    {
      std::lock_guard lock(state_->mutex);
      if (auto it = state_->memo.find(p); it != state_->memo.end()) return it->second;
    }
    const auto v = state_->fn(p);
    state_->errors.note(v);
    std::lock_guard lock(state_->mutex);
    state_->memo.emplace(p, v);
    return v;
  }

  double operator()(const element_type& x) const { return eval(x).value; }
  double relative_error() const { return state_->errors.worst(); }
  const DoubleCosetSpace<G>& space() const { return *state_->space; }

 private:
  struct State {
    const DoubleCosetSpace<G>* space = nullptr;
    Fn fn;
    bool cache = true;
    std::mutex mutex;
    std::unordered_map<element_type, Integral, detail::ElementHash> memo;
    ErrorTrack errors;
  };
  std::shared_ptr<State> state_;
};

/// F * w pointwise on classes.
template <class G>
CosetFunction<G> scale(const CosetFunction<G>& F, std::function<double(const typename G::element_type&)> w) {
  return CosetFunction<G>(
      F.space(),
      [F, w = std::move(w)](const typename G::element_type& p) {
        const auto v = F.eval(p);
        if (v.value == 0.0 && v.error == 0.0) return v;
        const double s = w(p);
        return Integral{s * v.value, std::abs(s) * v.error};
      },
      false);
}

/// p -> F(n^-1 . p).
template <class G>
CosetFunction<G> left_translate(const CosetFunction<G>& F, const typename G::element_type& n) {
  const auto& space = F.space();
  space.require_in_normalizer(n);
  const auto ni = space.group().inv(n);
  return CosetFunction<G>(
      space, [F, ni, &space](const typename G::element_type& p) { return F.eval(space.n_action(ni, p)); }, false);
}

// ------------------------------------------------------------------- Q

/// Q(f)(KpH) = int_K int_H f(k^-1 p h) dh dk.
template <class G>
Integral q_apply(const DoubleCosetSpace<G>& space, const TestFunction<G>& f, const typename G::element_type& p,
                 const IntegrationScheme& s) {
  const auto& g = space.group();
  return integrate_pair(
      space.K(), space.H(),
      [&](const auto& k, const auto& h) { return f(g.mul(g.mul(g.inv(k), p), h)); }, s);
}

/// The same double integral computed as an iterated integral; `k_outer`
/// selects the order. Used to cross-check the product quadrature.
template <class G>
Integral q_apply_iterated(const DoubleCosetSpace<G>& space, const TestFunction<G>& f,
                          const typename G::element_type& p, const IntegrationScheme& s, bool k_outer) {
  const auto& g = space.group();
  auto val = [&](const auto& k, const auto& h) { return f(g.mul(g.mul(g.inv(k), p), h)); };
  // The outer rule integrates the inner values; a second pass integrates the
  // inner error estimates so the result carries both.
  auto outer = [&](bool errors) {
    if (k_outer) {
      return integrate_subgroup(space.K(), [&](const auto& k) {
        const auto v = integrate_subgroup(space.H(), [&](const auto& h) { return val(k, h); }, s);
        return errors ? v.error : v.value;
      }, s);
    }
    return integrate_subgroup(space.H(), [&](const auto& h) {
      const auto v = integrate_subgroup(space.K(), [&](const auto& k) { return val(k, h); }, s);
      return errors ? v.error : v.value;
    }, s);
  };
  auto r = outer(false);
  if (!is_exact(s)) r.error += std::abs(outer(true).value);
  return r;
}

/// Q(f) as a memoised coset function.
template <class G>
CosetFunction<G> make_q_function(const DoubleCosetSpace<G>& space, const TestFunction<G>& f,
                                 const IntegrationScheme& s) {
  return CosetFunction<G>(space,
                          [&space, f, s](const typename G::element_type& p) { return q_apply(space, f, p, s); });
}

/// f1(x) = f(x) F(q(x)) / Q(f)(q(x)), so that Q(f1) = F wherever Q(f) > 0.
/// `qf` must be Q(f). Throws CoverageError where F(q(x)) != 0 but Q(f)
/// vanishes at a point of supp f.
template <class G>
TestFunction<G> section_lift(const CosetFunction<G>& F, const TestFunction<G>& f, const CosetFunction<G>& qf) {
  using E = typename G::element_type;
  return TestFunction<G>(
      [F, f, qf](const E& x) {
        const double v = f(x);
        if (v == 0.0) return 0.0;
        const double num = F(x);
        if (num == 0.0) return 0.0;
        const double den = qf(x);
        if (den == 0.0) throw CoverageError("the dominating function does not cover the support of F");
        return v * num / den;
      },
      f.support(), f.nonnegative());
}

template <class G>
TestFunction<G> section_lift(const DoubleCosetSpace<G>& space, const CosetFunction<G>& F, const TestFunction<G>& f,
                             const IntegrationScheme& s) {
  return section_lift(F, f, make_q_function(space, f, s));
}

/// A nonnegative f with Q(f) = plateau on the classes where the plateau is
/// defined; `plateau` is 1 on the target region and decays to 0 outside,
/// `dominating` must be positive on the preimage of its support.
template <class G>
TestFunction<G> unit_on_compact(const DoubleCosetSpace<G>& space, const CosetFunction<G>& plateau,
                                const TestFunction<G>& dominating, const IntegrationScheme& s) {
  return section_lift(space, plateau, dominating, s);
}

/// max over `classes` of |Q(f1)(p) - F(p)|.
template <class G>
Residual verify_lift(const DoubleCosetSpace<G>& space, const TestFunction<G>& f1, const CosetFunction<G>& F,
                     const std::vector<typename G::element_type>& classes, const IntegrationScheme& s) {
  Residual r;
  for (const auto& p : classes) r.merge(residual_of(q_apply(space, f1, p, s), F.eval(p)));
  return r;
}

/// max over `classes` of |Q(L_n f)(p) - Q(f)(n^-1 . p)|. K should be an
/// IN-group; otherwise the identity may fail and `warning` is set.
template <class G>
Residual check_intertwining(const DoubleCosetSpace<G>& space, const typename G::element_type& n,
                            const TestFunction<G>& f, const std::vector<typename G::element_type>& classes,
                            const IntegrationScheme& s, std::string* warning = nullptr) {
  space.require_in_normalizer(n);
  if (!space.K().flags().in_group && warning) *warning = space.K().name() + " is not flagged IN";
  const auto& g = space.group();
  const auto lnf = left_translate(g, f, n);
  const auto ni = g.inv(n);
  Residual r;
  for (const auto& p : classes) r.merge(residual_of(q_apply(space, lnf, p, s), q_apply(space, f, space.n_action(ni, p), s)));
  return r;
}

}  // namespace dcoset
