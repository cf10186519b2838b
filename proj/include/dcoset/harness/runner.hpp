#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dcoset/averaging.hpp"
#include "dcoset/coset_space.hpp"
#include "dcoset/group_core.hpp"
#include "dcoset/harness/catalog.hpp"
#include "dcoset/harness/config.hpp"
#include "dcoset/harness/report.hpp"
#include "dcoset/measure.hpp"
#include "dcoset/rho.hpp"

namespace dcoset::harness {

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// Keeps the sample closest to (or furthest past) its tolerance.
class Aggregate {
 public:
  void add(double residual, double error, double tolerance) {
    ++count_;
    const bool ok = residual <= tolerance;
    pass_ = pass_ && ok;
    max_error_ = std::max(max_error_, error);
    const double ratio = tolerance > 0 ? residual / tolerance : (residual > 0 ? kInf : 0.0);
    if (count_ == 1 || ratio > ratio_) {
      ratio_ = ratio;
      residual_ = residual;
      tolerance_ = tolerance;
    }
  }

  CheckRecord record(std::string section, std::string name, std::string tag, std::string note = {}) const {
    CheckRecord r;
    r.section = std::move(section);
    r.name = std::move(name);
    r.tag = std::move(tag);
    r.residual = residual_;
    r.error = max_error_;
    r.tolerance = tolerance_;
    r.status = pass_ ? Status::pass : Status::fail;
    r.note = note.empty() ? std::to_string(count_) + " cases" : note;
    return r;
  }

 private:
  std::size_t count_ = 0;
  bool pass_ = true;
  double ratio_ = 0.0;
  double residual_ = 0.0;
  double tolerance_ = 0.0;
  double max_error_ = 0.0;
};

inline CheckRecord single(std::string section, std::string name, std::string tag, double residual, double error,
                          double tolerance, std::string note = {}) {
  Aggregate a;
  a.add(residual, error, tolerance);
  auto r = a.record(std::move(section), std::move(name), std::move(tag), std::move(note));
  if (r.note == "1 cases") r.note.clear();
  return r;
}

inline CheckRecord skipped(std::string section, std::string name, std::string tag, std::string why) {
  CheckRecord r;
  r.section = std::move(section);
  r.name = std::move(name);
  r.tag = std::move(tag);
  r.status = Status::skipped;
  r.note = std::move(why);
  r.counts_toward_error_ceiling = false;
  return r;
}

template <class T>
std::vector<T> take(std::vector<T> v, std::size_t n) {
  if (v.size() > n) v.resize(n);
  return v;
}

}  // namespace detail

/// Runs every check suite for one kit and assembles the report.
template <class G>
class ScenarioRun {
 public:
  using E = typename G::element_type;

  explicit ScenarioRun(ScenarioKit<G>& kit)
      : kit_(kit),
        c_(kit.config),
        g_(*kit.group),
        space_(*kit.space),
        basis_(kit.basis()),
        q_dominating_(make_q_function(space_, kit.dominating, kit.scheme)),
        q_alternate_(make_q_function(space_, kit.alternate, kit.scheme)) {}

  Report run() {
    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.config = c_;
    describe(rep);
    build_cover(rep);
    register_tasks();
    std::vector<std::vector<CheckRecord>> results(tasks_.size());
    if (c_.concurrent) {
      std::vector<std::future<std::vector<CheckRecord>>> futures;
      for (std::size_t i = 0; i < tasks_.size(); ++i) {
        futures.push_back(std::async(std::launch::async, [this, i] { return execute(i); }));
      }
      for (std::size_t i = 0; i < tasks_.size(); ++i) results[i] = futures[i].get();
    } else {
      for (std::size_t i = 0; i < tasks_.size(); ++i) results[i] = execute(i);
    }
    for (auto& r : results) rep.checks.insert(rep.checks.end(), r.begin(), r.end());
    if (!kit_.exact) error_ceiling(rep);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }

 private:
  struct Task {
    std::string section, name, tag;
    std::function<std::vector<CheckRecord>(std::mt19937_64&)> fn;
  };

  // ------------------------------------------------------------- plumbing

  double tol(double error) const { return kit_.exact ? c_.tolerance.exact : c_.tolerance.slack * error + c_.tolerance.exact; }
  int samples() const { return c_.samples; }

  std::vector<CheckRecord> execute(std::size_t i) {
    const auto& t = tasks_[i];
    std::seed_seq seq{static_cast<std::uint32_t>(c_.seed), static_cast<std::uint32_t>(c_.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    try {
      return t.fn(rng);
    } catch (const std::exception& e) {
      CheckRecord r;
      r.section = t.section;
      r.name = t.name;
      r.tag = t.tag;
      r.status = Status::error;
      r.note = e.what();
      r.counts_toward_error_ceiling = false;
      return {r};
    }
  }

  void add(std::string section, std::string name, std::string tag,
           std::function<std::vector<CheckRecord>(std::mt19937_64&)> fn) {
    tasks_.push_back({std::move(section), std::move(name), std::move(tag), std::move(fn)});
  }

  void add1(std::string section, std::string name, std::string tag, std::function<CheckRecord(std::mt19937_64&)> fn) {
    add(std::move(section), std::move(name), std::move(tag), [fn](std::mt19937_64& rng) { return std::vector{fn(rng)}; });
  }

  std::vector<E> draw_g(std::mt19937_64& rng, int n) const { return kit_.draw_g(rng, n); }
  std::vector<E> draw_k(std::mt19937_64& rng, int n) const { return kit_.draw_k(rng, n); }
  std::vector<E> draw_h(std::mt19937_64& rng, int n) const { return kit_.draw_h(rng, n); }
  std::vector<E> draw_n(std::mt19937_64& rng, int n) const { return kit_.draw_n(rng, n); }

  // Memoised coset functions are shared between tasks; their values do not
  // depend on evaluation order.
  MeasureFunctional<G> measure() const { return measure(kit_.measure_rho()); }
  MeasureFunctional<G> measure(RhoFunction<G> rho) const {
    return MeasureFunctional<G>(space_, std::move(rho), kit_.dominating, q_dominating_, kit_.scheme);
  }

  // ------------------------------------------------------------- header

  void describe(Report& rep) const {
    rep.header.push_back("group " + c_.group + "  K " + space_.K().name() + " [" + flag_text(space_.K().flags()) +
                         "]  H " + space_.H().name() + " [" + flag_text(space_.H().flags()) + "]");
    rep.header.push_back("scheme " + describe_scheme() + "  seed " + std::to_string(c_.seed) + "  samples " +
                         std::to_string(c_.samples));
    rep.header.push_back("canonical form " + kit_.canonical_form + "  N " + space_.N().name() +
                         (space_.n_is_open() ? " (open)" : " (not open)"));
    if constexpr (G::is_finite) {
      const auto classes = enumerate_classes(space_);
      std::string sizes;
      for (const auto& cl : classes) sizes += " " + std::to_string(cl.members.size());
      rep.header.push_back("|K\\G/H| = " + std::to_string(classes.size()) + "  class sizes" + sizes +
                           "  |N| = " + std::to_string(space_.N().order()));
    }
    rep.header.push_back("measure rho: " + kit_.measure_rho_note);
  }

  std::string describe_scheme() const { return dcoset::describe(kit_.scheme); }

  // ------------------------------------------------------------- cover

  void build_cover(Report& rep) {
    relation_ = std::make_unique<RelationTest<G>>(space_, kit_.unit, kit_.relation_grid);
    try {
      auto cover = build_covering_set(*relation_, kit_.cover_candidates, kit_.cover_grid, kit_.relation_margin, kit_.show);
      covering_ = std::make_unique<CoveringRho<G>>(space_, cover, kit_.symmetric_bump, *relation_,
                                                   kit_.relation_margin + 0.5, kit_.scheme);
      rep.header.push_back("covering set |A| = " + std::to_string(cover.points.size()) + " over " +
                           std::to_string(kit_.cover_grid.size()) + " verification points");
      cover_error_.clear();
    } catch (const Error& e) {
      cover_error_ = e.what();
      rep.header.push_back(std::string("covering set failed: ") + e.what());
    }
  }

  const CoveringRho<G>& covering() const {
    if (!covering_) throw CoverIncompleteError(cover_error_);
    return *covering_;
  }

  // ------------------------------------------------------------- tasks

  void register_tasks() {
    group_core_tasks();
    coset_space_tasks();
    averaging_tasks();
    rho_tasks();
    measure_tasks();
  }

  void group_core_tasks() {
    add1("group", "group-axioms", "group-law", [this](std::mt19937_64& rng) {
      AxiomReport a;
      if constexpr (G::is_finite) a = check_group_axioms(g_);
      else a = check_group_axioms(g_, kit_.axiom_box, 1000, rng);
      return detail::single("group", "group-axioms", "group-law", a.max_deviation, 0, c_.tolerance.exact,
                            std::to_string(a.triples) + " triples");
    });
    add1("group", "modular-homomorphism", "modular-function", [this](std::mt19937_64& rng) {
      double d;
      if constexpr (G::is_finite) d = check_modular_homomorphism(g_);
      else d = check_modular_homomorphism(g_, kit_.axiom_box, 1000, rng);
      return detail::single("group", "modular-homomorphism", "modular-function", d, 0, c_.tolerance.exact);
    });
    add1("group", "haar-left-invariance", "haar-left-invariance", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      for (const auto& f : kit_.tests) {
        for (const auto& y : draw_g(rng, samples())) {
          const auto r = left_invariance_residual(g_, f, y, kit_.scheme);
          a.add(r.value, r.error, tol(r.error));
        }
      }
      return a.record("group", "haar-left-invariance", "haar-left-invariance");
    });
    add1("group", "modular-residual", "modular-function", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto fine = refined(kit_.scheme);
      for (const auto& f : kit_.tests) {
        for (const auto& y : draw_g(rng, samples())) {
          const auto r = modular_residual(g_, f, y, fine);
          a.add(r.value, r.error, kit_.exact ? c_.tolerance.exact : c_.tolerance.modular);
        }
      }
      return a.record("group", "modular-residual", "modular-function",
                      kit_.exact ? std::string{} : "at " + dcoset::describe(fine));
    });
    if constexpr (!G::is_finite) {
      add1("group", "haar-cross-scheme", "haar-integral", [this](std::mt19937_64&) {
        detail::Aggregate a;
        std::uint64_t stream = 1;
        for (const auto& f : kit_.tests) {
          const auto t = integrate_haar(g_, f, kit_.scheme);
          const auto m = integrate_haar(g_, f, MonteCarlo{c_.mc_samples, c_.seed, stream++});
          a.add(std::abs(t.value - m.value), t.error + m.error, t.error + m.error);
        }
        auto r = a.record("group", "haar-cross-scheme", "haar-integral", "tensor vs monte-carlo");
        r.counts_toward_error_ceiling = false;
        return r;
      });
    }
  }

  void coset_space_tasks() {
    add1("coset", "canonical-form", "double-coset-projection", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto ks = draw_k(rng, samples()), hs = draw_h(rng, samples());
      for (const auto& x : draw_g(rng, 5 * samples())) {
        for (const auto& k : ks) {
          for (const auto& h : hs) a.add(canonical_residual(space_, k, x, h), 0, c_.tolerance.coords);
        }
      }
      return a.record("coset", "canonical-form", "double-coset-projection");
    });
    if constexpr (G::is_finite) {
      add1("coset", "class-partition", "double-coset-partition", [this](std::mt19937_64&) {
        std::size_t total = 0;
        std::vector<char> seen(g_.order(), 0);
        double overlap = 0;
        const auto classes = enumerate_classes(space_);
        for (const auto& cl : classes) {
          total += cl.members.size();
          for (auto x : cl.members) {
            if (seen[x.index]) overlap += 1;
            seen[x.index] = 1;
          }
        }
        const double r = std::abs(static_cast<double>(total) - static_cast<double>(g_.order())) + overlap;
        return detail::single("coset", "class-partition", "double-coset-partition", r, 0, c_.tolerance.exact,
                              std::to_string(classes.size()) + " classes");
      });
    }
    add1("coset", "normalizer", "normalizer", [this](std::mt19937_64& rng) {
      double bad = 0;
      const auto ks = draw_k(rng, samples());
      for (const auto& n : draw_n(rng, samples())) {
        for (const auto& k : ks) {
          if (!space_.K().contains(g_.mul(g_.mul(n, k), g_.inv(n)))) bad += 1;
          if (!space_.N().contains(k)) bad += 1;
        }
      }
      return detail::single("coset", "normalizer", "normalizer", bad, 0, c_.tolerance.exact, "n K n^-1 = K, K in N");
    });
    add1("coset", "subgroup-closure", "subgroup", [this](std::mt19937_64& rng) {
      double bad = 0;
      for (const auto* S : {&space_.K(), &space_.H(), &space_.N()}) {
        auto xs = S == &space_.K() ? draw_k(rng, samples()) : S == &space_.H() ? draw_h(rng, samples()) : draw_n(rng, samples());
        for (const auto& a : xs) {
          if (!S->contains(a) || !S->contains(g_.inv(a))) bad += 1;
          for (const auto& b : xs) bad += S->contains(g_.mul(a, b)) ? 0 : 1;
        }
      }
      return detail::single("coset", "subgroup-closure", "subgroup", bad, 0, c_.tolerance.exact);
    });
    add1("coset", "n-action", "normalizer-action", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto ns = draw_n(rng, samples());
      for (const auto& n1 : ns) {
        for (const auto& n2 : ns) {
          for (const auto& p : kit_.classes) a.add(action_residual(space_, n1, n2, p), 0, c_.tolerance.coords);
        }
      }
      return a.record("coset", "n-action", "normalizer-action");
    });
    add1("coset", "in-property", "in-group-conjugation", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      for (const auto& n : draw_n(rng, samples())) {
        for (const auto& f : kit_.tests) {
          const auto r = check_in_property(space_, n, f, kit_.scheme);
          a.add(r.value, r.error, tol(r.error));
        }
      }
      return a.record("coset", "in-property", "in-group-conjugation");
    });
  }

  void averaging_tasks() {
    add1("averaging", "q-representative-independence", "averaging-well-defined", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto ks = draw_k(rng, 2), hs = draw_h(rng, 2);
      for (const auto& f : kit_.tests) {
        for (const auto& x : draw_g(rng, samples())) {
          const auto base = q_apply(space_, f, x, kit_.scheme);
          for (const auto& k : ks) {
            for (const auto& h : hs) {
              const auto r = residual_of(q_apply(space_, f, g_.mul(g_.mul(k, x), h), kit_.scheme), base);
              a.add(r.value, r.error, tol(r.error));
            }
          }
        }
      }
      return a.record("averaging", "q-representative-independence", "averaging-well-defined");
    });
    add1("averaging", "q-linearity", "averaging-linear", [this](std::mt19937_64&) {
      detail::Aggregate a;
      const auto mix = combine(g_, 0.75, kit_.tests[0], -1.25, kit_.tests[1]);
      for (const auto& p : kit_.classes) {
        const auto lhs = q_apply(space_, mix, p, kit_.scheme);
        const auto rhs = 0.75 * q_apply(space_, kit_.tests[0], p, kit_.scheme) +
                         (-1.25) * q_apply(space_, kit_.tests[1], p, kit_.scheme);
        const auto r = residual_of(lhs, rhs);
        a.add(r.value, r.error, tol(r.error));
      }
      return a.record("averaging", "q-linearity", "averaging-linear");
    });
    add1("averaging", "q-positivity", "averaging-positive", [this](std::mt19937_64&) {
      detail::Aggregate a;
      for (const auto& f : kit_.tests) {
        for (const auto& p : kit_.classes) a.add(std::max(0.0, -q_apply(space_, f, p, kit_.scheme).value), 0, 0);
      }
      return a.record("averaging", "q-positivity", "averaging-positive");
    });
    if constexpr (G::is_finite) {
      add1("averaging", "q-support", "averaging-support", [this](std::mt19937_64&) {
        // f = 1_{x0}: Q(f) must vanish off the class of x0.
        detail::Aggregate a;
        for (auto x0 : g_.elements()) {
          std::vector<double> v(g_.order(), 0.0);
          v[x0.index] = 1.0;
          const auto f = table_function(g_, v);
          for (const auto& p : kit_.classes) {
            if (space_.project(x0) != p) a.add(std::abs(q_apply(space_, f, p, kit_.scheme).value), 0, c_.tolerance.exact);
          }
        }
        return a.record("averaging", "q-support", "averaging-support");
      });
    }
    add1("averaging", "q-intertwining", "averaging-intertwining", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      std::string warning;
      for (const auto& n : draw_n(rng, samples())) {
        for (const auto& f : kit_.tests) {
          const auto r = check_intertwining(space_, n, f, kit_.classes, kit_.scheme, &warning);
          a.add(r.value, r.error, tol(r.error));
        }
      }
      return a.record("averaging", "q-intertwining", "averaging-intertwining", warning);
    });
    add1("averaging", "q-fubini", "averaging-iterated", [this](std::mt19937_64&) {
      detail::Aggregate a;
      const auto& f = kit_.tests[0];
      for (const auto& p : detail::take(kit_.classes, 2)) {
        const auto prod = q_apply(space_, f, p, kit_.scheme);
        for (bool k_outer : {true, false}) {
          const auto r = residual_of(q_apply_iterated(space_, f, p, kit_.scheme, k_outer), prod);
          a.add(r.value, r.error, tol(r.error));
        }
      }
      return a.record("averaging", "q-fubini", "averaging-iterated");
    });
    add1("averaging", "section-lift", "averaging-surjective", [this](std::mt19937_64&) {
      detail::Aggregate a;
      for (const auto& F : basis_) {
        const auto f1 = section_lift(F, kit_.dominating, q_dominating_);
        for (const auto& p : kit_.classes) {
          const auto r = residual_of(q_apply(space_, f1, p, kit_.scheme), F.eval(p));
          const double err = r.error + F.eval(p).error;
          a.add(r.value, err, tol(err));
        }
      }
      return a.record("averaging", "section-lift", "averaging-surjective");
    });
    add1("averaging", "unit-on-compact", "averaging-unit", [this](std::mt19937_64&) {
      detail::Aggregate a;
      const auto u = section_lift(kit_.plateau(), kit_.dominating, q_dominating_);
      for (const auto& p : kit_.plateau_classes) {
        const auto v = q_apply(space_, u, p, kit_.scheme);
        a.add(std::abs(v.value - 1.0), v.error, tol(v.error));
      }
      return a.record("averaging", "unit-on-compact", "averaging-unit", "section-lift construction");
    });
  }

  void rho_tasks() {
    auto triples = [this](std::mt19937_64& rng) {
      std::vector<std::array<E, 3>> out;
      if constexpr (G::is_finite) {
        for (auto k : space_.K().members())
          for (auto x : g_.elements())
            for (auto h : space_.H().members()) out.push_back({k, x, h});
      } else {
        const int n = 5 * samples();
        const auto ks = draw_k(rng, n), xs = draw_g(rng, n), hs = draw_h(rng, n);
        for (int i = 0; i < n; ++i) out.push_back({ks[i], xs[i], hs[i]});
      }
      return out;
    };
    add("rho", "rho-f-covariance", "rho-covariance", [this, triples](std::mt19937_64& rng) {
      detail::Aggregate abs_part, rel_part;
      const auto rho = rho_from_f(space_, kit_.tests[0], kit_.scheme);
      for (const auto& [k, x, h] : triples(rng)) {
        const auto r = check_covariance(space_, rho, k, x, h);
        abs_part.add(r.absolute, r.error, tol(r.error));
        rel_part.add(r.relative, 0, kit_.exact ? c_.tolerance.exact : c_.tolerance.covariance);
      }
      std::vector<CheckRecord> out{abs_part.record("rho", "rho-f-covariance", "rho-covariance")};
      if (!kit_.exact) {
        auto rr = rel_part.record("rho", "rho-f-covariance-relative", "rho-covariance");
        rr.error = 0;
        out.push_back(rr);
      }
      return out;
    });
    add1("rho", "rho-f-linear-monotone", "rho-homogeneity", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto& f = kit_.tests[0];
      const auto& h = kit_.tests[1];
      const auto sum = combine(g_, 1.0, f, 2.0, h);
      for (const auto& x : draw_g(rng, samples())) {
        const auto rf = rho_f_value(space_, f, x, kit_.scheme);
        const auto rh = rho_f_value(space_, h, x, kit_.scheme);
        const auto rs = rho_f_value(space_, sum, x, kit_.scheme);
        const auto lin = residual_of(rs, rf + 2.0 * rh);
        a.add(lin.value, lin.error, tol(lin.error));
        const double mono = std::max(0.0, rf.value - rs.value);
        a.add(mono, rf.error + rs.error, tol(rf.error + rs.error));
      }
      return a.record("rho", "rho-f-linear-monotone", "rho-homogeneity");
    });
    add1("rho", "covering-set", "covering-set", [this](std::mt19937_64&) {
      const auto& cr = covering();
      const auto& cv = cr.cover();
      return detail::single("rho", "covering-set", "covering-set", std::max(0.0, -cv.separation_gap), 0,
                            c_.tolerance.exact,
                            "|A| = " + std::to_string(cv.points.size()) + ", " + std::to_string(cv.verified) +
                                " points covered");
    });
    add1("rho", "covering-positivity", "rho-strictly-positive", [this](std::mt19937_64&) {
      double lo = 0;
      strictly_positive_rho(covering(), kit_.cover_grid, kit_.show, &lo);
      return detail::single("rho", "covering-positivity", "rho-strictly-positive", 0, 0, c_.tolerance.exact,
                            "min rho " + detail::fmt("%.3e", lo) + " on " + std::to_string(kit_.cover_grid.size()) +
                                " grid points");
    });
    add1("rho", "local-finiteness", "covering-local-finiteness", [this](std::mt19937_64&) {
      detail::Aggregate a;
      const auto& cr = covering();
      std::size_t most = 0;
      const auto pts = detail::take(kit_.cover_grid, kit_.exact ? kit_.cover_grid.size() : 40);
      for (std::size_t i = 0; i < pts.size(); i += kit_.exact ? 1 : 3) {
        const auto& x = pts[i];
        most = std::max(most, cr.term_count(x));
        const auto r = residual_of(cr.filtered(x), cr.unfiltered(x));
        a.add(r.value, r.error, tol(r.error));
      }
      return a.record("rho", "local-finiteness", "covering-local-finiteness",
                      "at most " + std::to_string(most) + " of " + std::to_string(cr.cover().points.size()) +
                          " terms active");
    });
    add1("rho", "covering-covariance", "rho-covariance", [this, triples](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto rho = covering().rho();
      auto ts = triples(rng);
      if (!kit_.exact) ts = detail::take(ts, static_cast<std::size_t>(2 * samples()));
      for (const auto& [k, x, h] : ts) {
        const auto r = check_covariance(space_, rho, k, x, h);
        a.add(r.absolute, r.error, tol(r.error));
      }
      return a.record("rho", "covering-covariance", "rho-covariance");
    });
    add1("rho", "translated-rho-covariance", "rho-translate", [this, triples](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto base = rho_from_f(space_, kit_.tests[0], kit_.scheme);
      auto ts = triples(rng);
      if (!kit_.exact) ts = detail::take(ts, static_cast<std::size_t>(samples()));
      for (const auto& n : draw_n(rng, kit_.exact ? 0 : samples())) {
        const auto rho = translate_rho(space_, n, base);
        for (const auto& [k, x, h] : ts) {
          const auto r = check_covariance(space_, rho, k, x, h);
          a.add(r.absolute, r.error, tol(r.error));
        }
      }
      return a.record("rho", "translated-rho-covariance", "rho-translate");
    });
  }

  void measure_tasks() {
    add1("measure", "weil-identity", "weil-identity", [this](std::mt19937_64&) {
      detail::Aggregate a;
      const auto mu = measure();
      for (const auto& f : kit_.tests) {
        const auto r = check_weil(mu, f);
        a.add(r.value, r.error, tol(r.error));
      }
      return a.record("measure", "weil-identity", "weil-identity");
    });
    add1("measure", "kernel-property", "pairing-well-defined", [this](std::mt19937_64&) {
      detail::Aggregate a;
      const auto mu = measure();
      // f0 and its lift through the alternate dominating function differ by
      // an element of ker Q, so their rho-integrals agree.
      for (const auto& f0 : kit_.tests) {
        const auto qf = make_q_function(space_, f0, kit_.scheme);
        const auto r = residual_of(mu.integrate_against_rho(f0), mu.pair_with(qf, kit_.alternate, q_alternate_));
        a.add(r.value, r.error, tol(r.error));
      }
      return a.record("measure", "kernel-property", "pairing-well-defined");
    });
    add1("measure", "pairing-positivity", "pairing-positive", [this](std::mt19937_64&) {
      detail::Aggregate a;
      const auto mu = measure();
      for (const auto& F : basis_) a.add(std::max(0.0, -mu.pair(F).value), 0, 0);
      return a.record("measure", "pairing-positivity", "pairing-positive");
    });
    add1("measure", "pairing-lift-independence", "pairing-well-defined", [this](std::mt19937_64&) {
      detail::Aggregate a;
      const auto mu = measure();
      for (const auto& F : basis_) {
        const auto r = residual_of(mu.pair(F), mu.pair_with(F, kit_.alternate, q_alternate_));
        a.add(r.value, r.error, tol(r.error));
      }
      return a.record("measure", "pairing-lift-independence", "pairing-well-defined");
    });
    add1("measure", "lift-property", "lifted-measure-covariance", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto mu = measure();
      const auto mut = lift(mu);
      const auto ks = draw_k(rng, kit_.exact ? 0 : samples());
      const auto hs = draw_h(rng, kit_.exact ? 0 : samples());
      const auto tests = kit_.exact ? kit_.tests : detail::take(kit_.tests, 1);
      for (const auto& f : tests) {
        for (std::size_t i = 0; i < ks.size(); ++i) {
          for (std::size_t j = 0; j < hs.size(); ++j) {
            if (!kit_.exact && i != j) continue;
            const auto r = check_lift_property(mut, ks[i], hs[j], f);
            a.add(r.value, r.error, tol(r.error));
          }
        }
      }
      return a.record("measure", "lift-property", "lifted-measure-covariance");
    });
    add("measure", "cocycle", "cocycle", [this](std::mt19937_64& rng) {
      std::vector<CheckRecord> out;
      const auto rho = kit_.measure_rho();
      const auto lambda = lambda_from_rho(space_, rho);
      detail::Aggregate unit, welldef, coc;
      for (const auto& p : kit_.classes) unit.add(std::abs(lambda(g_.identity(), p) - 1.0), 0, c_.tolerance.exact);
      const auto ns = draw_n(rng, samples());
      const auto ks = draw_k(rng, kit_.exact ? 0 : 3), hs = draw_h(rng, kit_.exact ? 0 : 3);
      for (const auto& n : ns) {
        for (const auto& p : kit_.classes) {
          std::vector<E> alts;
          for (const auto& k : ks)
            for (const auto& h : hs) alts.push_back(g_.mul(g_.mul(k, space_.project(p)), h));
          const double spread = lambda_well_definedness(lambda, rho, n, p, alts);
          welldef.add(spread, rho.relative_error(), tol(rho.relative_error()));
        }
      }
      for (const auto& n1 : ns) {
        for (const auto& n2 : ns) {
          for (const auto& p : kit_.classes) {
            coc.add(check_cocycle(lambda, n1, n2, p), 0, kit_.exact ? c_.tolerance.exact : c_.tolerance.coords);
          }
        }
      }
      out.push_back(unit.record("measure", "lambda-unit", "cocycle"));
      out.push_back(welldef.record("measure", "lambda-well-defined", "cocycle"));
      out.push_back(coc.record("measure", "cocycle-identity", "cocycle"));
      return out;
    });
    add1("measure", "quasi-invariance", "quasi-invariance", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto mu = measure();
      const auto lambda = lambda_from_rho(space_, mu.rho());
      const auto basis = basis_;
      for (const auto& n : draw_n(rng, samples())) {
        for (const auto& F : basis) {
          const auto r = check_quasi_invariance(mu, lambda, n, F);
          a.add(r.value, r.error, tol(r.error));
        }
      }
      return a.record("measure", "quasi-invariance", "quasi-invariance");
    });
    if constexpr (G::is_finite) {
      add1("measure", "radon-nikodym", "quasi-invariance", [this](std::mt19937_64&) {
        // lambda(n, c) against mu(n.c) / mu(c) from the class-weight table.
        detail::Aggregate a;
        const auto rho = kit_.measure_rho();
        const auto lambda = lambda_from_rho(space_, rho);
        const auto w = class_weights(space_, rho);
        for (auto n : space_.N().members()) {
          for (const auto& [c, wc] : w) {
            const double ratio = w.at(space_.n_action(n, c)) / wc;
            a.add(std::abs(lambda(n, c) - ratio) / ratio, 0, c_.tolerance.exact);
          }
        }
        return a.record("measure", "radon-nikodym", "quasi-invariance", "class-weight oracle");
      });
    }
    add1("measure", "round-trip", "converse-rho", [this](std::mt19937_64& rng) {
      if (!space_.n_is_open()) {
        return detail::skipped("measure", "round-trip", "converse-rho", "N is not open");
      }
      const auto mu = measure();
      const auto lambda = lambda_from_rho(space_, mu.rho());
      double cst = 0;
      const auto rho2 = rho_from_lambda(mu, lambda, kit_.reference, draw_h(rng, 5 * samples()), &cst);
      const auto pts = draw_n(rng, 25 * samples());
      const double spread = ratio_spread(rho2, mu.rho(), pts);
      return detail::single("measure", "round-trip", "converse-rho", spread, 0,
                            kit_.exact ? c_.tolerance.exact : c_.tolerance.roundtrip,
                            "c = " + detail::fmt("%.6g", cst) + " over " + std::to_string(pts.size()) + " points of N");
    });
    add("measure", "equivalence", "equivalence", [this](std::mt19937_64&) {
      std::vector<CheckRecord> out;
      const auto rho1 = kit_.measure_rho();
      const auto rho2 = second_rho();
      const auto mu1 = measure(rho1);
      const auto mu2 = measure(rho2);
      const auto phi = equivalence_density(space_, rho1, rho2);
      detail::Aggregate a;
      for (const auto& F : basis_) {
        const auto r = check_equivalence(mu1, mu2, phi, F);
        a.add(r.value, r.error, tol(r.error));
      }
      out.push_back(a.record("measure", "equivalence", "equivalence"));
      if constexpr (G::is_finite) {
        const bool same = null_classes(mu1) == null_classes(mu2);
        out.push_back(detail::single("measure", "null-class-equality", "equivalence", same ? 0.0 : 1.0, 0,
                                     c_.tolerance.exact, std::to_string(null_classes(mu1).size()) + " null classes"));
        detail::Aggregate ratio;
        const auto w1 = class_weights(space_, rho1), w2 = class_weights(space_, rho2);
        for (const auto& [cl, v1] : w1) ratio.add(std::abs(v1 / w2.at(cl) - phi(cl)) / phi(cl), 0, c_.tolerance.exact);
        out.push_back(ratio.record("measure", "classwise-density", "equivalence"));
      }
      return out;
    });
    add("measure", "support", "full-support", [this](std::mt19937_64&) {
      std::vector<CheckRecord> out;
      const auto mu = measure();
      double lo = 0;
      const bool ok = check_support(mu, basis_, &lo);
      out.push_back(detail::single("measure", "support", "full-support", ok ? 0.0 : 1.0, 0, c_.tolerance.exact,
                                   "min pairing " + detail::fmt("%.3e", lo)));
      if constexpr (G::is_finite) {
        const auto zeroed = zero_class(space_, kit_.measure_rho(), kit_.classes.back());
        const auto bad = measure(zeroed);
        const bool detected = !check_support(bad, basis_);
        out.push_back(detail::single("measure", "support-counterexample", "full-support", detected ? 0.0 : 1.0, 0,
                                     c_.tolerance.exact, detected ? "zeroed class detected" : "zeroed class missed"));
      }
      return out;
    });
    add1("measure", "translated-lift-identity", "lifted-measure-cocycle", [this](std::mt19937_64& rng) {
      detail::Aggregate a;
      const auto mu = measure();
      const auto mut = lift(mu);
      const auto lambda = lambda_from_rho(space_, mu.rho());
      const auto ns = draw_n(rng, samples());
      const auto hs = draw_h(rng, kit_.exact ? 0 : samples());
      const auto tests = kit_.exact ? kit_.tests : detail::take(kit_.tests, 1);
      for (const auto& f : tests) {
        for (std::size_t i = 0; i < ns.size(); ++i) {
          for (std::size_t j = 0; j < hs.size(); ++j) {
            if (!kit_.exact && i != j) continue;
            const auto r = check_translated_lift(mut, lambda, ns[i], hs[j], f);
            a.add(r.value, r.error, tol(r.error));
          }
        }
      }
      return a.record("measure", "translated-lift-identity", "lifted-measure-cocycle", "lambda(n^-1, q(x)) form");
    });
  }

  RhoFunction<G> second_rho() const {
    if (kit_.second_rho) return kit_.second_rho();
    return covering().rho();
  }

  void error_ceiling(Report& rep) const {
    double worst = 0;
    std::string where;
    for (const auto& r : rep.checks) {
      if (r.counts_toward_error_ceiling && r.error > worst) {
        worst = r.error;
        where = r.name;
      }
    }
    rep.checks.push_back(detail::single("report", "max-reported-error", "integration-error", worst, 0,
                                        c_.tolerance.reported_error, where.empty() ? "" : "largest in " + where));
  }

  ScenarioKit<G>& kit_;
  const ScenarioConfig& c_;
  const G& g_;
  const DoubleCosetSpace<G>& space_;
  std::vector<CosetFunction<G>> basis_;
  CosetFunction<G> q_dominating_;
  CosetFunction<G> q_alternate_;
  std::vector<Task> tasks_;
  std::unique_ptr<RelationTest<G>> relation_;
  std::unique_ptr<CoveringRho<G>> covering_;
  std::string cover_error_;
};

/// Builds the kit named by the config and runs it.
inline Report run_scenario(const ScenarioConfig& c) {
  return visit_kit(c, [](auto& kit) { return ScenarioRun(kit).run(); });
}

}  // namespace dcoset::harness
