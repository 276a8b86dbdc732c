#include "doctest.h"

#include <cmath>
#include <vector>

#include "choquet/economy.hpp"
#include "choquet/error.hpp"
#include "choquet/random.hpp"

using namespace clab;

namespace {

SectionFamily lebesgue_family(std::size_t K) {
  return SectionFamily::homothetic(K, FuzzyMeasure::distorted(Distortion::identity()), true);
}

double node(std::size_t k, std::size_t K) { return (k + 0.5) / K; }

Economy cobb_douglas_economy(std::size_t K = 100, SectionFamily fam = lebesgue_family(100)) {
  std::vector<std::vector<double>> a(K), e(K, {1.0, 1.0});
  for (std::size_t k = 0; k < K; ++k) a[k] = {node(k, K), 1.0 - node(k, K)};
  return Economy::create(std::move(fam), SectionalFunction::from_values(e),
                         Preference::cobb_douglas(a));
}

Allocation walras_allocation(std::size_t K = 100) {
  std::vector<std::vector<double>> f(K);
  for (std::size_t k = 0; k < K; ++k) f[k] = {2 * node(k, K), 2 * (1 - node(k, K))};
  return SectionalFunction::from_values(f);
}

Economy dominance_economy(std::vector<std::vector<std::size_t>> sets, std::size_t goods = 2,
                          std::size_t K = 100) {
  std::vector<std::vector<double>> e(K, std::vector<double>(goods, 1.0));
  return Economy::create(lebesgue_family(K), SectionalFunction::from_values(e),
                         Preference::coordinate_dominance(goods, std::move(sets)));
}

std::vector<std::vector<std::size_t>> split_sets(std::size_t K = 100) {
  std::vector<std::vector<std::size_t>> j(K);
  for (std::size_t k = 0; k < K; ++k) j[k] = {node(k, K) < 0.5 ? 0u : 1u};
  return j;
}

const std::vector<double> half{0.5, 0.5};

} // namespace

TEST_CASE("economy validation") {
  std::vector<std::vector<double>> e(10, {1.0, 1.0}), bad(10, {1.0, 0.0});
  const auto prefs = Preference::linear(std::vector<std::vector<double>>(10, {1.0, 1.0}));
  CHECK_THROWS_AS(Economy::create(lebesgue_family(10), SectionalFunction::from_values(bad), prefs),
                  DomainError);
  CHECK_THROWS_AS(Economy::create(lebesgue_family(9), SectionalFunction::from_values(e), prefs),
                  StructuralError);
  const auto convex = SectionFamily::homothetic(10, FuzzyMeasure::distorted(Distortion::power(2)), true);
  CHECK_THROWS_AS(Economy::create(convex, SectionalFunction::from_values(e), prefs),
                  UnsupportedModeError);
  CHECK_THROWS_AS(Preference::cobb_douglas({{0.3, 0.3}}), InvalidPreferenceError);
  CHECK_THROWS_AS(Preference::coordinate_dominance(2, {{2}}), InvalidPreferenceError);
  CHECK_THROWS_AS(normalize_price(std::vector<double>{0.0, 0.0}), InvalidPriceError);
}

TEST_CASE("feasibility examples") {
  const auto eco = cobb_douglas_economy();
  const auto r = is_feasible(eco, eco.endowment());
  CHECK(r.feasible);
  CHECK(r.deviation == 0.0);
  CHECK(is_feasible(eco, walras_allocation()).deviation <= 1e-4);
  CHECK(is_feasible(eco, walras_allocation()).feasible);
  auto twice = eco.endowment();
  for (auto& v : twice.values) v = {2.0, 2.0};
  const auto t = is_feasible(eco, twice);
  CHECK_FALSE(t.feasible);
  CHECK(t.deviation == doctest::Approx(1.0));
  CHECK_THROWS_AS(is_feasible(eco, SectionalFunction::constant(100, std::vector<double>{1.0})),
                  StructuralError);
}

TEST_CASE("budget examples") {
  const auto eco = cobb_douglas_economy();
  CHECK(budget_check(eco, half, eco.endowment().at(3), 3));
  CHECK(budget_check(eco, half, std::vector<double>{2.0, 0.0}, 3));
  CHECK_FALSE(budget_check(eco, half, std::vector<double>{3.0, 0.0}, 3));
}

TEST_CASE("maximality examples") {
  const auto eco = cobb_douglas_economy();
  const auto f = walras_allocation();
  for (std::size_t k = 0; k < 100; ++k) CHECK(is_maximal_in_budget(eco, half, f, k).maximal);

  // Zero allocation under monotone preferences: the endowment is an
  // affordable strict improvement.
  const auto zero = SectionalFunction::constant(100, std::vector<double>{0.0, 0.0});
  const auto m = is_maximal_in_budget(eco, half, zero, 10);
  CHECK_FALSE(m.maximal);
  CHECK(eco.preferences().strictly_prefers(10, eco.endowment().at(10), zero.at(10)));
  const auto lin = Economy::create(lebesgue_family(100), eco.endowment(),
                                   Preference::linear(std::vector<std::vector<double>>(100, {1.0, 2.0})));
  const auto ml = is_maximal_in_budget(lin, half, zero, 10);
  REQUIRE_FALSE(ml.maximal);
  CHECK(budget_check(lin, half, *ml.violator, 10));

  CHECK_THROWS_AS(is_maximal_in_budget(eco, std::vector<double>{0.0, 0.0}, f, 0), InvalidPriceError);
}

TEST_CASE("walras examples") {
  const auto eco = cobb_douglas_economy();
  const auto v = check_walras(eco, walras_allocation(), half);
  CHECK(v.equilibrium());

  const auto at_e = check_walras(eco, eco.endowment(), half);
  CHECK(at_e.w1.feasible);
  CHECK_FALSE(at_e.w2);
  // Oracle: demand (2y, 2(1-y)) differs from (1, 1) at every midpoint node.
  CHECK(at_e.failing_nodes.size() == 100);

  auto twice = eco.endowment();
  for (auto& x : twice.values) x = {2.0, 2.0};
  CHECK_FALSE(check_walras(eco, twice, half).w1.feasible);
}

TEST_CASE("closed-form Cobb-Douglas equilibrium") {
  const auto eco = cobb_douglas_economy();
  const auto eq = cobb_douglas_equilibrium(eco);
  CHECK(eq.price[0] == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(eq.allocation.at(k)[0] == doctest::Approx(2 * node(k, 100)));
  }
}

TEST_CASE("I_f sample examples") {
  const auto eco = cobb_douglas_economy();
  const auto f = walras_allocation();
  const auto empty = make_I_f_sample(eco, f, ProductSet::empty(100), "");
  CHECK(empty.z == std::vector<double>{0.0, 0.0});
  const auto refl = make_I_f_sample(eco, f, ProductSet::full(100), "");
  CHECK(std::abs(refl.z[0]) <= 1e-12);
  CHECK(std::abs(refl.z[1]) <= 1e-12);
  auto shifted = f;
  for (auto& v : shifted.values) v[0] += 1.0;
  const auto t = make_I_f_sample(eco, shifted, ProductSet::full(100), "");
  CHECK(t.z[0] == doctest::Approx(1.0));
  CHECK(std::abs(t.z[1]) <= 1e-12);

  const auto cloud = sample_I_f(eco, f, 300, 1);
  for (const auto& s : cloud) {
    for (std::size_t k = 0; k < 100; ++k) {
      if (s.tau[k] > 0.0) CHECK(eco.preferences().weakly_prefers(k, s.s.at(k), f.at(k), 1e-9));
    }
  }
  CHECK(sample_I_f(eco, f, 0, 1).empty());
}

TEST_CASE("find_price examples") {
  const auto eco = cobb_douglas_economy();
  const auto r = find_price(eco, walras_allocation(), 2000, 42);
  REQUIRE(r.found);
  CHECK(std::abs(r.price[0] - 0.5) <= 1e-3);
  CHECK(std::abs(r.price[1] - 0.5) <= 1e-3);

  std::vector<std::vector<double>> one(10, {1.0});
  const auto single = Economy::create(lebesgue_family(10), SectionalFunction::from_values(one),
                                      Preference::cobb_douglas(one));
  const auto p1 = find_price(single, single.endowment(), 100, 1);
  REQUIRE(p1.found);
  CHECK(p1.price == std::vector<double>{1.0});

  CHECK_THROWS_AS(find_price(eco, walras_allocation(), 0, 1), InsufficientSamplesError);
  std::vector<IfSample> zeros(3);
  for (auto& z : zeros) z.z = {0.0, 0.0};
  CHECK_THROWS_AS(find_price(zeros, 2), InsufficientSamplesError);
}

TEST_CASE("split dominance sets admit no supporting price for the endowment") {
  // For every p in the simplex some node has an affordable bundle strictly
  // dominating e on its relevant good: (1 + p2/p1, 0) when p2 > 0, or any
  // bundle with more of the free good 2 when p2 = 0.
  const auto eco = dominance_economy(split_sets());
  for (int i = 0; i <= 20; ++i) {
    const std::vector<double> p{i / 20.0, 1 - i / 20.0};
    CHECK_FALSE(check_walras(eco, eco.endowment(), p).w2);
  }
  const auto r = find_price(eco, eco.endowment(), 500, 42);
  CHECK_FALSE(r.found);
  CHECK_FALSE(r.violated.empty());
  const auto v = endowment_is_walrasian(eco);
  CHECK_FALSE(v.walrasian);
}

TEST_CASE("endowment is walrasian when every agent cares about every good") {
  const auto both = dominance_economy(std::vector<std::vector<std::size_t>>(100, {0, 1}));
  const auto v = endowment_is_walrasian(both);
  CHECK(v.walrasian);
  REQUIRE(v.price.found);
  CHECK(v.price.price[0] > 0.0);
  CHECK(v.price.price[1] > 0.0);
  for (std::size_t k = 0; k < 100; k += 7) {
    CHECK(is_maximal_in_budget(both, v.price.price, both.endowment(), k).maximal);
  }

  const auto one = dominance_economy(std::vector<std::vector<std::size_t>>(20, {0}), 1, 20);
  const auto v1 = endowment_is_walrasian(one);
  CHECK(v1.walrasian);
  CHECK(v1.price.price == std::vector<double>{1.0});

  const auto none = dominance_economy(std::vector<std::vector<std::size_t>>(20), 2, 20);
  CHECK_THROWS_AS(endowment_is_walrasian(none), InvalidPreferenceError);
  CHECK_THROWS_AS(endowment_is_walrasian(cobb_douglas_economy()), InvalidPreferenceError);
}

TEST_CASE("strassen examples") {
  const auto eco = cobb_douglas_economy();
  const auto self = check_strassen(eco, eco.endowment(), half);
  CHECK(self.holds);
  CHECK(self.max_gap == 0.0);
  const auto eq = check_strassen(eco, walras_allocation(), half);
  CHECK(eq.holds);
  CHECK(eq.max_gap <= 1e-9);
  auto less = eco.endowment();
  less.values[4][0] -= 0.1;
  less.values[9][0] -= 0.1;
  const auto bad = check_strassen(eco, less, std::vector<double>{0.3, 0.7});
  CHECK_FALSE(bad.holds);
  CHECK(bad.violations == std::vector<std::size_t>{4, 9});
}

TEST_CASE("walras allocation cannot be improved (exhaustive block search)") {
  const auto eco = cobb_douglas_economy();
  const auto r = search_improvement(eco, walras_allocation(), ImprovementMode::Improve);
  CHECK_FALSE(r.witness.has_value());
  CHECK_FALSE(r.truncated);
  CHECK(r.coalitions == 390624 + 2000);
  const auto s = search_improvement(eco, walras_allocation(), ImprovementMode::StronglyImprove);
  CHECK_FALSE(s.witness.has_value());
}

TEST_CASE("improvement witnesses") {
  const auto eco = cobb_douglas_economy();
  const auto zero = SectionalFunction::constant(100, std::vector<double>{0.0, 0.0});
  const auto r = search_improvement(eco, zero, ImprovementMode::Improve);
  REQUIRE(r.witness.has_value());
  CHECK(verify_witness(eco, zero, *r.witness).valid);
  CHECK(r.witness->origin == "endowment");

  // Gains from trade: demand at (1/2, 1/2) improves e on X*.
  const auto g = search_improvement(eco, eco.endowment(), ImprovementMode::Improve);
  REQUIRE(g.witness.has_value());
  const auto check = verify_witness(eco, eco.endowment(), *g.witness);
  CHECK(check.valid);
  CHECK(check.balance_deviation <= 1e-8);

  CHECK_THROWS_AS(search_improvement(eco, zero, ImprovementMode::Improve, 0), InvalidBudgetError);
  const auto tiny = search_improvement(eco, walras_allocation(), ImprovementMode::Improve, 10);
  CHECK(tiny.truncated);
  CHECK(tiny.evaluations == 10);
}

TEST_CASE("witness verification rejects bad witnesses") {
  const auto eco = cobb_douglas_economy();
  const auto f = walras_allocation();
  ImprovementWitness w;
  w.coalition = ProductSet::empty(100);
  w.allocation = ProductStepFunction::from_sectional(f);
  CHECK_FALSE(verify_witness(eco, f, w).valid);
  w.coalition = ProductSet::full(100);
  CHECK_FALSE(verify_witness(eco, f, w).valid);
  auto more = f;
  for (auto& v : more.values) v = {v[0] + 1, v[1] + 1};
  w.allocation = ProductStepFunction::from_sectional(more);
  const auto c = verify_witness(eco, f, w);
  CHECK_FALSE(c.valid);
  CHECK(c.failure == "coalition balance violated");
}

TEST_CASE("failed price search yields a strong improvement on constructed allocations") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto eco = cobb_douglas_economy();
    // Take eps of every good away from a few nodes and hand it to one other
    // node: feasible, but not individually rational where it was taken.
    auto f = eco.endowment();
    const double eps = uniform(rng, 0.05, 0.5);
    std::vector<std::size_t> losers;
    for (int i = 0; i < 3; ++i) losers.push_back(std::uniform_int_distribution<std::size_t>(0, 98)(rng));
    for (std::size_t k : losers) {
      f.values[k] = {f.values[k][0] - eps, f.values[k][1] - eps};
      f.values[99] = {f.values[99][0] + eps, f.values[99][1] + eps};
    }
    REQUIRE(is_feasible(eco, f).feasible);
    const auto price = find_price(eco, f, 300, trial);
    REQUIRE_FALSE(price.found);
    bool rebuilt = false;
    for (const auto& s : price.violated) rebuilt = rebuilt || witness_from_sample(eco, f, s).has_value();
    CHECK(rebuilt);
    const auto strong = search_improvement(eco, f, ImprovementMode::StronglyImprove);
    REQUIRE(strong.witness.has_value());
    CHECK(verify_witness(eco, f, *strong.witness).valid);
  }
}

TEST_CASE("sectionalize") {
  const auto fam = lebesgue_family(50);
  Rng rng(3);
  std::vector<std::vector<double>> v(50);
  for (auto& x : v) x = {uniform(rng, 0, 2), uniform(rng, 0, 2)};
  const auto phi = SectionalFunction::from_values(v);
  const auto back = sectionalize(fam, ProductStepFunction::from_sectional(phi), ProductSet::full(50));
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(back.at(k)[0] == doctest::Approx(v[k][0]).epsilon(1e-12));
  }

  std::vector<double> mids(1000);
  for (std::size_t i = 0; i < 1000; ++i) mids[i] = (i + 0.5) / 1000;
  const std::vector<StepFunction> xs(50, StepFunction::on_uniform_cells(mids));
  const auto halfway = sectionalize(fam, ProductStepFunction::from_scalar_sections(xs), ProductSet::full(50));
  for (const auto& x : halfway.values) CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-12));

  // Two-valued sections with both values in the convex upper contour set.
  const auto eco = cobb_douglas_economy(50, lebesgue_family(50));
  const auto f = walras_allocation(50);
  const auto cd = SectionFamily::homothetic(50, FuzzyMeasure::distorted(Distortion::power(0.5)), true);
  std::vector<VectorStepFunction> sections;
  for (std::size_t k = 0; k < 50; ++k) {
    const double y = node(k, 50);
    const std::vector<double> lo{f.at(k)[0] * 1.5, f.at(k)[1] * std::pow(1.5, -y / (1 - y))};
    const std::vector<double> hi{f.at(k)[0] * 0.7, f.at(k)[1] * std::pow(0.7, -y / (1 - y)) + 0.1};
    const double cut = uniform(rng, 0.1, 0.9);
    sections.push_back(VectorStepFunction::from_pieces(
        2, {{IntervalSet::interval(0, cut), lo}, {IntervalSet::interval(cut, 1), hi}}));
  }
  const auto mixed = sectionalize(cd, ProductStepFunction::from_sections(sections), ProductSet::full(50));
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(eco.preferences().weakly_prefers(k, mixed.at(k), f.at(k), 1e-9));
  }
}

TEST_CASE("sectionalize preserves integrals over the coalition") {
  Rng rng(31);
  const auto fam = SectionFamily::homothetic(20, FuzzyMeasure::distorted(Distortion::power(0.6)), true);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<VectorStepFunction> sections;
    ProductSet a;
    for (std::size_t k = 0; k < 20; ++k) {
      const std::vector<StepFunction> comps{random_step_function(rng, 8, 3.0),
                                            random_step_function(rng, 8, 3.0)};
      sections.push_back(VectorStepFunction::from_components(comps));
      a.sections.push_back(random_interval_set(rng));
    }
    const auto s = ProductStepFunction::from_sections(sections);
    const auto g = sectionalize(fam, s, a);
    const auto lhs = integrate_sectional_over(fam, g, a);
    std::vector<VectorStepFunction> restricted;
    for (std::size_t k = 0; k < 20; ++k) restricted.push_back(sections[k].restricted(a.sections[k]));
    const auto rhs = integrate_product(fam, ProductStepFunction::from_sections(restricted));
    CHECK(std::abs(lhs[0] - rhs[0]) <= 1e-9);
    CHECK(std::abs(lhs[1] - rhs[1]) <= 1e-9);
  }
}

TEST_CASE("I_f convexity by the mixing formula") {
  const auto eco = cobb_douglas_economy();
  const auto r = check_I_f_convexity(eco, walras_allocation(), 200, 9);
  CHECK(r.trials == 200);
  CHECK(r.max_deviation <= 1e-8);
  CHECK(r.membership_failures == 0);
  const auto d = dominance_economy(split_sets());
  CHECK(check_I_f_convexity(d, d.endowment(), 200, 9).max_deviation <= 1e-8);
}

TEST_CASE("condition (c1) under subadditive sections") {
  const auto fam = SectionFamily::homothetic(10, FuzzyMeasure::distorted(Distortion::power(0.5)), true);
  const auto r = check_c1(fam, 500, 4);
  CHECK(r.sections_subadditive);
  CHECK(r.violations == 0);
  const auto halves = SectionFamily::sectioned(10, {IntervalSet::interval(0, 0.3), IntervalSet::interval(0.3, 1)},
                                               {{0, 0.4}, {0.4, 1}});
  CHECK(check_c1(halves, 500, 5).violations == 0);
}

TEST_CASE("condition (c2) diagnostic finds a violating coalition") {
  Rng rng(8);
  const auto fam = lebesgue_family(40);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> g(40), f(40);
    for (std::size_t k = 0; k < 40; ++k) {
      g[k] = {uniform(rng, 0, 2), uniform(rng, 0, 2)};
      f[k] = {g[k][0] * uniform(rng, 0, 1), g[k][1] * uniform(rng, 0, 1)};
    }
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 39)(rng);
    const std::size_t i = trial % 2;
    f[k][i] = g[k][i] + uniform(rng, 0.01, 1.0);
    const auto r = check_c2(fam, SectionalFunction::from_values(f), SectionalFunction::from_values(g));
    CHECK_FALSE(r.pointwise);
    REQUIRE(r.violating.has_value());
    CHECK(r.lhs > r.rhs);
    const auto lf = integrate_sectional_over(fam, SectionalFunction::from_values(f), *r.violating);
    const auto lg = integrate_sectional_over(fam, SectionalFunction::from_values(g), *r.violating);
    CHECK(lf[r.component] > lg[r.component]);
  }
  std::vector<std::vector<double>> lo(40, {0.5, 0.5}), hi(40, {1.0, 0.5});
  const auto ok = check_c2(fam, SectionalFunction::from_values(lo), SectionalFunction::from_values(hi));
  CHECK(ok.pointwise);
  CHECK_FALSE(ok.violating.has_value());
}

TEST_CASE("walras allocations are in the core and satisfy strassen with equality") {
  Rng rng(12);
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t K = 16;
    std::vector<std::vector<double>> a(K), e(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double t = uniform(rng, 0.1, 0.9);
      a[k] = {t, 1 - t};
      e[k] = {uniform(rng, 0.5, 2), uniform(rng, 0.5, 2)};
    }
    const auto eco = Economy::create(lebesgue_family(K), SectionalFunction::from_values(e),
                                     Preference::cobb_douglas(a));
    const auto eq = cobb_douglas_equilibrium(eco);
    REQUIRE(check_walras(eco, eq.allocation, eq.price).equilibrium());
    const auto st = check_strassen(eco, eq.allocation, eq.price);
    CHECK(st.holds);
    CHECK(st.max_gap <= 1e-9);
    SearchOptions opt;
    opt.random_coalitions = 500;
    opt.seed = trial;
    CHECK_FALSE(search_improvement(eco, eq.allocation, ImprovementMode::Improve, kDefaultSearchBudget, opt)
                    .witness.has_value());
  }
}
