#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dcoset/averaging.hpp"
#include "dcoset/charted_group.hpp"
#include "dcoset/coset_space.hpp"
#include "dcoset/finite_group.hpp"
#include "dcoset/harness/config.hpp"
#include "dcoset/measure.hpp"
#include "dcoset/rho.hpp"
#include "dcoset/subgroup.hpp"
#include "dcoset/test_function.hpp"

namespace dcoset::harness {

// ------------------------------------------------------------ finite groups

inline FiniteGroup make_finite_group(const std::string& name) {
  if (name == "S3") return make_symmetric_group(3);
  if (name == "S4") return make_symmetric_group(4);
  if (name == "D4") return make_dihedral_group(4);
  throw ConfigurationError("unknown finite group '" + name + "'");
}

inline bool is_finite_group_name(const std::string& name) { return name == "S3" || name == "S4" || name == "D4"; }

/// "e", "G", "klein4" (S4) or a generator list such as "<(12)>", "<r2,s>".
inline Subgroup<FiniteGroup> make_finite_subgroup(const FiniteGroup& g, const std::string& name) {
  if (name == "e") return Subgroup<FiniteGroup>::trivial(g);
  if (name == "G") return Subgroup<FiniteGroup>::whole(g);
  if (name == "klein4") {
    if (g.name() != "S4") throw ConfigurationError("klein4 is declared for S4 only");
    return Subgroup<FiniteGroup>(g, "klein4",
                                 {g.parse("e"), g.parse("(12)(34)"), g.parse("(13)(24)"), g.parse("(14)(23)")});
  }
  if (name.size() >= 2 && name.front() == '<' && name.back() == '>') {
    std::vector<FiniteElement> gens;
    std::stringstream in(name.substr(1, name.size() - 2));
    std::string tok;
    while (std::getline(in, tok, ',')) gens.push_back(g.parse(detail::trim(tok)));
    return Subgroup<FiniteGroup>::generated(g, name, gens);
  }
  throw ConfigurationError("unknown subgroup '" + name + "' of " + g.name());
}

// ----------------------------------------------------------- charted groups

template <class Law>
using CSub = Subgroup<ChartedGroup<Law>>;

/// One-parameter subgroup t -> embed(t) with Haar dt.
template <class Law>
CSub<Law> line_subgroup(std::string name, Interval param, Interval sample, std::function<Point<Law::dim>(double)> embed,
                        std::function<bool(const Point<Law::dim>&)> contains, SubgroupFlags flags) {
  return CSub<Law>(
      std::move(name), {param}, {sample}, [embed](std::span<const double> t) { return embed(t[0]); },
      [](std::span<const double>) { return 1.0; }, [](const Point<Law::dim>&) { return 1.0; }, std::move(contains),
      flags);
}

/// The whole group viewed as a subgroup (used for N when K is normal).
template <class Law>
CSub<Law> whole_subgroup(const ChartedGroup<Law>& g, Box sample) {
  constexpr std::size_t d = Law::dim;
  Box param(sample);
  return CSub<Law>(
      "G", param, std::move(sample),
      [](std::span<const double> t) {
        Point<d> p;
        std::copy(t.begin(), t.end(), p.x.begin());
        return p;
      },
      [](std::span<const double>) { return 1.0; }, [g](const Point<d>& x) { return g.modular(x); },
      [g](const Point<d>& x) { return g.in_domain(x); }, {false, true, false});
}

inline constexpr double kMemberTol = 1e-9;

inline CSub<HeisenbergLaw> heisenberg_subgroup(const HeisenbergGroup& g, const std::string& name) {
  using P = Point<3>;
  if (name == "e") return CSub<HeisenbergLaw>::trivial(g, kMemberTol);
  if (name == "center") {
    return line_subgroup<HeisenbergLaw>(
        "center", {-10, 10}, {-1, 1}, [](double c) { return P{{0, 0, c}}; },
        [](const P& x) { return std::abs(x[0]) <= kMemberTol && std::abs(x[1]) <= kMemberTol; }, {true, true, false});
  }
  if (name == "x-axis") {
    return line_subgroup<HeisenbergLaw>(
        "x-axis", {-10, 10}, {-1, 1}, [](double t) { return P{{t, 0, 0}}; },
        [](const P& x) { return std::abs(x[1]) <= kMemberTol && std::abs(x[2]) <= kMemberTol; }, {true, false, false});
  }
  throw ConfigurationError("unknown subgroup '" + name + "' of heisenberg");
}

inline CSub<AffineLaw> affine_subgroup(const AffineGroup& g, const std::string& name) {
  using P = Point<2>;
  if (name == "e") return CSub<AffineLaw>::trivial(g, kMemberTol);
  if (name == "dilations") {
    return line_subgroup<AffineLaw>(
        "dilations", {-4, 4}, {-0.7, 0.7}, [](double s) { return P{{std::exp(s), 0}}; },
        [](const P& x) { return x[0] > 0 && std::abs(x[1]) <= kMemberTol; }, {true, false, false});
  }
  if (name == "translations") {
    return line_subgroup<AffineLaw>(
        "translations", {-6, 6}, {-1, 1}, [](double t) { return P{{1, t}}; },
        [](const P& x) { return std::abs(x[0] - 1) <= kMemberTol; }, {true, true, false});
  }
  throw ConfigurationError("unknown subgroup '" + name + "' of axb");
}

inline CSub<EuclideanMotionLaw> motion_subgroup(const EuclideanMotionGroup& g, const std::string& name) {
  using P = Point<3>;
  if (name == "e") return CSub<EuclideanMotionLaw>::trivial(g, kMemberTol);
  if (name == "SO(2)") {
    return line_subgroup<EuclideanMotionLaw>(
        "SO(2)", {-std::numbers::pi, std::numbers::pi, true}, {-std::numbers::pi, std::numbers::pi},
        [](double a) { return P{{wrap_angle(a), 0, 0}}; },
        [](const P& x) { return std::abs(x[1]) <= kMemberTol && std::abs(x[2]) <= kMemberTol; }, {true, false, true});
  }
  throw ConfigurationError("unknown subgroup '" + name + "' of se2");
}

template <std::size_t D>
std::string show_point(const Point<D>& p) {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < D; ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", p[i]);
    out += buf;
  }
  return out + ")";
}

// --------------------------------------------------------------- the kits

/// Everything a scenario run needs for one (G, K, H) triple. Functions in
/// the kit refer to `group` and `space` by address, so kits are never moved.
template <class G>
struct ScenarioKit {
  using E = typename G::element_type;

  ScenarioKit() = default;
  ScenarioKit(const ScenarioKit&) = delete;
  ScenarioKit& operator=(const ScenarioKit&) = delete;

  ScenarioConfig config;
  std::unique_ptr<G> group;
  std::unique_ptr<DoubleCosetSpace<G>> space;
  IntegrationScheme scheme;
  bool exact = false;
  std::string canonical_form;

  std::vector<TestFunction<G>> tests;  // nonnegative test functions
  TestFunction<G> dominating;          // positive on the preimage of every class used
  TestFunction<G> alternate;           // a second dominating function
  TestFunction<G> reference;           // reference pairing for rho_from_lambda
  std::vector<E> classes;              // canonical representatives probed by the checks
  std::vector<E> plateau_classes;      // classes on which the plateau equals 1
  std::function<CosetFunction<G>()> plateau;
  std::function<std::vector<CosetFunction<G>>()> basis;  // nonnegative, nonzero coset functions

  std::function<RhoFunction<G>()> measure_rho;  // rho used for the measure suite
  std::function<RhoFunction<G>()> second_rho;   // independent rho for equivalence
  std::string measure_rho_note;

  UnitNeighbourhood<G> unit;
  TestFunction<G> symmetric_bump;
  int relation_grid = 0;
  double relation_margin = 0.0;
  std::vector<E> cover_candidates;
  std::vector<E> cover_grid;

  Box axiom_box;  // charted only
  std::function<std::vector<E>(std::mt19937_64&, int)> draw_g, draw_k, draw_h, draw_n;
  std::function<std::string(const E&)> show;
};

// Finite kits enumerate: draws return every element, so sampled checks are
// exhaustive.
inline std::unique_ptr<ScenarioKit<FiniteGroup>> make_finite_kit(const ScenarioConfig& c) {
  auto kit = std::make_unique<ScenarioKit<FiniteGroup>>();
  kit->config = c;
  kit->group = std::make_unique<FiniteGroup>(make_finite_group(c.group));
  const auto& g = *kit->group;
  kit->space = std::make_unique<DoubleCosetSpace<FiniteGroup>>(
      make_finite_space(g, make_finite_subgroup(g, c.K), make_finite_subgroup(g, c.H)));
  const auto& space = *kit->space;
  kit->scheme = c.integration_scheme();
  require_exact_scheme(kit->scheme);
  kit->exact = true;
  kit->canonical_form = "least index in KxH";

  std::mt19937_64 rng(c.seed);
  for (int i = 0; i < 3; ++i) kit->tests.push_back(random_table_function(g, rng));
  kit->dominating = table_function(g, std::vector<double>(g.order(), 1.0));
  kit->alternate = random_table_function(g, rng);
  kit->reference = kit->tests[1];
  for (const auto& cl : enumerate_classes(space)) kit->classes.push_back(cl.representative);
  kit->plateau_classes = kit->classes;
  kit->plateau = [&space] { return CosetFunction<FiniteGroup>::exact(space, [](FiniteElement) { return 1.0; }); };
  kit->basis = [&space] {
    std::vector<CosetFunction<FiniteGroup>> out;
    for (const auto& cl : enumerate_classes(space)) out.push_back(class_indicator(space, cl.representative));
    return out;
  };

  auto rho_table = random_table_function(g, rng);
  kit->measure_rho = [&space, rho_table, s = kit->scheme] { return rho_from_f(space, rho_table, s); };
  kit->measure_rho_note = "rho_f of a random positive table";

  // U = {e, s, s^-1} with s the first non-identity element of N (or {e}).
  std::vector<double> gauge(g.order(), 2.0), bump(g.order(), 0.0);
  gauge[g.identity().index] = 0.0;
  bump[g.identity().index] = 1.0;
  for (auto n : space.N().members()) {
    if (n == g.identity()) continue;
    gauge[n.index] = gauge[g.inv(n).index] = 0.5;
    bump[n.index] = bump[g.inv(n).index] = 0.5;
    break;
  }
  kit->unit = {[gauge](FiniteElement x) { return gauge.at(x.index); }};
  kit->symmetric_bump = table_function(g, bump);
  kit->relation_grid = 0;
  kit->relation_margin = 0.0;
  kit->cover_candidates = g.elements();
  kit->cover_grid = g.elements();

  auto all = [&g](std::mt19937_64&, int) { return g.elements(); };
  kit->draw_g = all;
  kit->draw_k = [&space](std::mt19937_64&, int) { return space.K().members(); };
  kit->draw_h = [&space](std::mt19937_64&, int) { return space.H().members(); };
  kit->draw_n = [&space](std::mt19937_64&, int) { return space.N().members(); };
  kit->show = [&g](FiniteElement x) { return g.label(x); };
  return kit;
}

namespace detail {

template <class Law>
std::vector<Point<Law::dim>> lattice(const Box& box, int m) {
  constexpr std::size_t d = Law::dim;
  std::vector<Point<d>> out;
  std::array<int, d> idx{};
  while (true) {
    Point<d> p;
    for (std::size_t j = 0; j < d; ++j) p[j] = box[j].lo + box[j].width() * idx[j] / (m - 1);
    out.push_back(p);
    std::size_t j = 0;
    for (; j < d; ++j) {
      if (++idx[j] < m) break;
      idx[j] = 0;
    }
    if (j == d) return out;
  }
}

template <class Law>
std::vector<Point<Law::dim>> draw_box(const Box& box, std::mt19937_64& rng, int count) {
  std::vector<Point<Law::dim>> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_in_box<Law>(box, rng));
  return out;
}

template <class Law>
std::vector<Point<Law::dim>> draw_subgroup(const CSub<Law>& S, std::mt19937_64& rng, int count) {
  std::vector<Point<Law::dim>> out;
  for (int i = 0; i < count; ++i) out.push_back(S.sample(rng));
  return out;
}

// Smooth step from 1 on |t| <= a to 0 on |t| >= b.
inline double plateau_profile(double t, double a, double b) {
  const double u = (std::abs(t) - a) / (b - a);
  if (u <= 0) return 1.0;
  if (u >= 1) return 0.0;
  const double v = 1.0 - u * u;
  return v * v * v * v;
}

}  // namespace detail

/// Fills the parts common to every charted kit.
template <class Law>
void finish_charted_kit(ScenarioKit<ChartedGroup<Law>>& kit) {
  using E = Point<Law::dim>;
  const auto& c = kit.config;
  auto& space = *kit.space;
  kit.scheme = c.integration_scheme();
  require_continuous_scheme(kit.scheme);
  kit.exact = false;
  if (c.cover_region == "all") throw ConfigurationError("charted scenarios need a bounded cover_region");
  const Box region = parse_region(c.cover_region);
  if (region.size() != Law::dim) throw ConfigurationError("cover_region dimension does not match " + c.group);
  kit.cover_candidates = detail::lattice<Law>(region, c.cover_grid);
  kit.cover_grid = detail::lattice<Law>(region, 10);
  kit.draw_k = [&space](std::mt19937_64& rng, int n) { return detail::draw_subgroup<Law>(space.K(), rng, n); };
  kit.draw_h = [&space](std::mt19937_64& rng, int n) { return detail::draw_subgroup<Law>(space.H(), rng, n); };
  kit.draw_n = [&space](std::mt19937_64& rng, int n) { return detail::draw_subgroup<Law>(space.N(), rng, n); };
  kit.show = [](const E& x) { return show_point(x); };
}

inline std::unique_ptr<ScenarioKit<HeisenbergGroup>> make_heisenberg_kit(const ScenarioConfig& c) {
  using P = Point<3>;
  if (c.K != "center" || c.H != "x-axis") {
    throw ConfigurationError("heisenberg: no canonical form declared for K=" + c.K + ", H=" + c.H);
  }
  auto kit = std::make_unique<ScenarioKit<HeisenbergGroup>>();
  kit->config = c;
  kit->group = std::make_unique<HeisenbergGroup>();
  const auto& g = *kit->group;
  kit->space = std::make_unique<DoubleCosetSpace<HeisenbergGroup>>(
      g, heisenberg_subgroup(g, c.K), heisenberg_subgroup(g, c.H), whole_subgroup(g, {{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}),
      true, [](const P& x) { return P{{0, x[1], 0}}; });
  kit->canonical_form = "(0, y, 0)";
  const auto& space = *kit->space;
  finish_charted_kit(*kit);
  kit->axiom_box = {{-2, 2}, {-2, 2}, {-2, 2}};

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(-1.0, 1.0);
  for (int i = 0; i < 3; ++i) kit->tests.push_back(box_bump(g, P{{ux(rng), uy(rng), ux(rng)}}, {0.6, 0.6, 0.6}));
  kit->dominating = box_bump(g, P{{0, 0, 0}}, {2.5, 2.5, 2.5});
  kit->alternate = box_bump(g, P{{0.3, 0.1, -0.2}}, {2.0, 2.6, 2.2});
  kit->reference = kit->tests[1];
  kit->classes = {P{{0, -1.1, 0}}, P{{0, -0.35, 0}}, P{{0, 0.2, 0}}, P{{0, 0.9, 0}}};
  kit->plateau_classes = {P{{0, -0.8, 0}}, P{{0, 0, 0}}, P{{0, 0.55, 0}}};
  kit->plateau = [&space] {
    return CosetFunction<HeisenbergGroup>::exact(space, [](const P& p) { return detail::plateau_profile(p[1], 1.0, 1.8); });
  };
  kit->basis = [kit = kit.get()] {
    std::vector<CosetFunction<HeisenbergGroup>> out;
    for (const auto& f : kit->tests) out.push_back(make_q_function(*kit->space, f, kit->scheme));
    return out;
  };

  kit->measure_rho = [] { return RhoFunction<HeisenbergGroup>::analytic([](const P& x) { return 1.0 + 0.5 * std::tanh(x[1]); }); };
  kit->second_rho = [] { return RhoFunction<HeisenbergGroup>::analytic([](const P& x) { return std::exp(0.4 * x[1]); }); };
  kit->measure_rho_note = "closed form 1 + tanh(y)/2";

  const double w = c.u_halfwidth;
  kit->unit = {[w](const P& x) {
    return std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2] - 0.5 * x[0] * x[1])}) / w;
  }};
  kit->symmetric_bump = TestFunction<HeisenbergGroup>(
      [w](const P& x) { return poly_bump(x[0] / w) * poly_bump(x[1] / w) * poly_bump((x[2] - 0.5 * x[0] * x[1]) / w); },
      Box{{-w, w}, {-w, w}, {-w - 0.5 * w * w, w + 0.5 * w * w}}, true);
  kit->relation_grid = 49;
  kit->relation_margin = 0.05;

  const Box gbox{{-1, 1}, {-1, 1}, {-1, 1}};
  kit->draw_g = [gbox](std::mt19937_64& r, int n) { return detail::draw_box<HeisenbergLaw>(gbox, r, n); };
  return kit;
}

/// ax+b with K = e; H = dilations (nontrivial weight) or translations.
inline std::unique_ptr<ScenarioKit<AffineGroup>> make_affine_kit(const ScenarioConfig& c) {
  using P = Point<2>;
  if (c.K != "e" || (c.H != "dilations" && c.H != "translations")) {
    throw ConfigurationError("axb: no canonical form declared for K=" + c.K + ", H=" + c.H);
  }
  const bool dil = c.H == "dilations";
  auto kit = std::make_unique<ScenarioKit<AffineGroup>>();
  kit->config = c;
  kit->group = std::make_unique<AffineGroup>();
  const auto& g = *kit->group;
  auto canonical = dil ? std::function<P(const P&)>([](const P& x) { return P{{1, x[1]}}; })
                       : std::function<P(const P&)>([](const P& x) { return P{{x[0], 0}}; });
  kit->space = std::make_unique<DoubleCosetSpace<AffineGroup>>(
      g, affine_subgroup(g, c.K), affine_subgroup(g, c.H), whole_subgroup(g, {{0.8, 1.25}, {-0.5, 0.5}}), true,
      canonical);
  kit->canonical_form = dil ? "(1, b)" : "(a, 0)";
  const auto& space = *kit->space;
  finish_charted_kit(*kit);
  kit->axiom_box = {{0.25, 4}, {-2, 2}};

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> ua(0.8, 1.4), ub(-0.8, 0.8);
  for (int i = 0; i < 3; ++i) kit->tests.push_back(box_bump(g, P{{ua(rng), ub(rng)}}, {0.3, 0.5}));
  kit->dominating = box_bump(g, P{{1.1, 0}}, {0.95, 2.5});
  kit->alternate = box_bump(g, P{{1.2, 0.2}}, {1.0, 2.4});
  kit->reference = kit->tests[1];
  if (dil) {
    kit->classes = {P{{1, -1.0}}, P{{1, -0.3}}, P{{1, 0.25}}, P{{1, 0.9}}};
    kit->plateau_classes = {P{{1, -0.6}}, P{{1, 0}}, P{{1, 0.7}}};
    kit->plateau = [&space] {
      return CosetFunction<AffineGroup>::exact(space, [](const P& p) { return detail::plateau_profile(p[1], 0.8, 1.6); });
    };
    kit->measure_rho = [] { return RhoFunction<AffineGroup>::analytic([](const P& x) { return x[0] * (2.0 + std::cos(x[1])); }); };
    kit->second_rho = [] { return RhoFunction<AffineGroup>::analytic([](const P& x) { return x[0] * std::exp(0.3 * x[1]); }); };
    kit->measure_rho_note = "closed form a (2 + cos b)";
  } else {
    kit->classes = {P{{0.7, 0}}, P{{0.95, 0}}, P{{1.2, 0}}, P{{1.5, 0}}};
    kit->plateau_classes = {P{{0.9, 0}}, P{{1.1, 0}}, P{{1.3, 0}}};
    kit->plateau = [&space] {
      return CosetFunction<AffineGroup>::exact(
          space, [](const P& p) { return detail::plateau_profile(std::log(p[0] / 1.1), 0.25, 0.5); });
    };
    kit->measure_rho = [] { return RhoFunction<AffineGroup>::analytic([](const P& x) { return 2.0 + std::sin(std::log(x[0])); }); };
    kit->second_rho = [] { return RhoFunction<AffineGroup>::analytic([](const P& x) { return 1.0 / (1.0 + x[0]); }); };
    kit->measure_rho_note = "closed form 2 + sin(log a)";
  }
  kit->basis = [kit = kit.get()] {
    std::vector<CosetFunction<AffineGroup>> out;
    for (const auto& f : kit->tests) out.push_back(make_q_function(*kit->space, f, kit->scheme));
    return out;
  };

  const double w = c.u_halfwidth;
  kit->unit = {[w](const P& x) { return std::max(std::abs(std::log(x[0])), std::abs(x[1]) / std::sqrt(x[0])) / w; }};
  kit->symmetric_bump = TestFunction<AffineGroup>(
      [w](const P& x) { return poly_bump(std::log(x[0]) / w) * poly_bump(x[1] / (w * std::sqrt(x[0]))); },
      Box{{std::exp(-w), std::exp(w)}, {-w * std::exp(0.5 * w), w * std::exp(0.5 * w)}}, true);
  kit->relation_grid = 97;
  kit->relation_margin = 0.05;

  const Box gbox{{0.5, 2}, {-1, 1}};
  kit->draw_g = [gbox](std::mt19937_64& r, int n) { return detail::draw_box<AffineLaw>(gbox, r, n); };
  return kit;
}

/// SE(2) with K = H = SO(2); N = SO(2) is not open.
inline std::unique_ptr<ScenarioKit<EuclideanMotionGroup>> make_motion_kit(const ScenarioConfig& c) {
  using P = Point<3>;
  if (c.K != "SO(2)" || c.H != "SO(2)") {
    throw ConfigurationError("se2: no canonical form declared for K=" + c.K + ", H=" + c.H);
  }
  auto kit = std::make_unique<ScenarioKit<EuclideanMotionGroup>>();
  kit->config = c;
  kit->group = std::make_unique<EuclideanMotionGroup>();
  const auto& g = *kit->group;
  kit->space = std::make_unique<DoubleCosetSpace<EuclideanMotionGroup>>(
      g, motion_subgroup(g, c.K), motion_subgroup(g, c.H), motion_subgroup(g, "SO(2)"), false,
      [](const P& x) { return P{{0, std::hypot(x[1], x[2]), 0}}; });
  kit->canonical_form = "(0, |t|, 0)";
  const auto& space = *kit->space;
  finish_charted_kit(*kit);
  kit->axiom_box = {{-3, 3}, {-2, 2}, {-2, 2}};

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> ut(-3.0, 3.0), ur(0.5, 1.2);
  for (int i = 0; i < 3; ++i) kit->tests.push_back(box_bump(g, P{{ut(rng), ur(rng), ur(rng)}}, {1.0, 0.5, 0.5}));
  auto radial = [&g](double R, double x0) {
    return TestFunction<EuclideanMotionGroup>(
        [R, x0](const P& x) { return poly_bump(std::hypot(x[1] - x0, x[2]) / R); },
        Box{g.chart()[0], {x0 - R, x0 + R}, {-R, R}}, true);
  };
  kit->dominating = radial(3.0, 0.0);
  kit->alternate = radial(3.2, 0.1);
  kit->reference = kit->tests[1];
  kit->classes = {P{{0, 0.6, 0}}, P{{0, 1.1, 0}}, P{{0, 1.5, 0}}, P{{0, 2.0, 0}}};
  kit->plateau_classes = {P{{0, 0.7, 0}}, P{{0, 1.2, 0}}, P{{0, 1.6, 0}}};
  kit->plateau = [&space] {
    return CosetFunction<EuclideanMotionGroup>::exact(space,
                                                      [](const P& p) { return detail::plateau_profile(p[1] - 1.2, 0.5, 1.0); });
  };
  kit->basis = [kit = kit.get()] {
    std::vector<CosetFunction<EuclideanMotionGroup>> out;
    for (const auto& f : kit->tests) out.push_back(make_q_function(*kit->space, f, kit->scheme));
    return out;
  };
  kit->measure_rho = [] {
    return RhoFunction<EuclideanMotionGroup>::analytic([](const P& x) { return 1.0 + 0.5 * std::tanh(x[1] * x[1] + x[2] * x[2] - 1.0); });
  };
  kit->second_rho = [] {
    return RhoFunction<EuclideanMotionGroup>::analytic([](const P& x) { return 1.0 / (1.0 + x[1] * x[1] + x[2] * x[2]); });
  };
  kit->measure_rho_note = "closed form 1 + tanh(|t|^2 - 1)/2";

  const double w = c.u_halfwidth, wa = 2.0;
  kit->unit = {[w, wa](const P& x) { return std::max(std::abs(wrap_angle(x[0])) / wa, std::hypot(x[1], x[2]) / w); }};
  kit->symmetric_bump = TestFunction<EuclideanMotionGroup>(
      [w, wa](const P& x) { return poly_bump(wrap_angle(x[0]) / wa) * poly_bump(std::hypot(x[1], x[2]) / w); },
      Box{g.chart()[0], {-w, w}, {-w, w}}, true);
  kit->relation_grid = 65;
  kit->relation_margin = 0.05;

  const Box gbox{{-std::numbers::pi, std::numbers::pi}, {-1.5, 1.5}, {-1.5, 1.5}};
  kit->draw_g = [gbox](std::mt19937_64& r, int n) { return detail::draw_box<EuclideanMotionLaw>(gbox, r, n); };
  return kit;
}

/// Builds the kit named by `c.group` and hands it to `f`.
template <class F>
decltype(auto) visit_kit(const ScenarioConfig& c, F&& f) {
  if (is_finite_group_name(c.group)) return f(*make_finite_kit(c));
  if (c.group == "heisenberg") return f(*make_heisenberg_kit(c));
  if (c.group == "axb") return f(*make_affine_kit(c));
  if (c.group == "se2") return f(*make_motion_kit(c));
  throw ConfigurationError("unknown group '" + c.group + "'");
}

// ----------------------------------------------------------------- listing

struct CatalogEntry {
  std::string group;
  std::string subgroup;
  std::string flags;
};

inline std::string flag_text(SubgroupFlags f) {
  std::string out;
  if (f.in_group) out += " IN";
  if (f.normal) out += " normal";
  if (f.compact) out += " compact";
  return out.empty() ? "-" : out.substr(1);
}

}  // namespace dcoset::harness
