#include <cmath>

#include "choquet/error.hpp"
#include "choquet/filtering.hpp"
#include "choquet/fuzzy_measure.hpp"
#include "choquet/measure_checks.hpp"
#include "choquet/random.hpp"
#include "doctest.h"

using namespace clab;

namespace {

FuzzyMeasure two_block(double w1 = 1.0, double w2 = 1.0) {
  return FuzzyMeasure::sectioned({IntervalSet::interval(0.0, 0.5), IntervalSet::interval(0.5, 1.0)},
                                 {w1, w2});
}

} // namespace

TEST_CASE("interval sets reject malformed input") {
  CHECK_THROWS_AS(IntervalSet::from_intervals({{0.0, 0.5}, {0.4, 0.8}}), StructuralError);
  CHECK_THROWS_AS(IntervalSet::from_intervals({{0.5, 0.8}, {0.1, 0.2}}), StructuralError);
  CHECK_THROWS_AS(IntervalSet::from_intervals({{0.3, 0.3}}), StructuralError);
  CHECK_THROWS_AS(IntervalSet::from_intervals({{-0.1, 0.3}}), StructuralError);
  CHECK_THROWS_AS(IntervalSet::from_intervals({{0.2, 1.5}}), StructuralError);

  // Touching pieces are legal and merged.
  const auto s = IntervalSet::from_intervals({{0.0, 0.25}, {0.25, 0.5}});
  CHECK(s.size() == 1);
  CHECK(s == IntervalSet::interval(0.0, 0.5));
}

TEST_CASE("interval set algebra") {
  const auto a = IntervalSet::from_intervals({{0.0, 0.25}, {0.5, 0.75}});
  const auto b = IntervalSet::interval(0.125, 0.625);
  CHECK(a.intersect(b) == IntervalSet::from_intervals({{0.125, 0.25}, {0.5, 0.625}}));
  CHECK(a.unite(b) == IntervalSet::interval(0.0, 0.75));
  CHECK(a.complement() == IntervalSet::from_intervals({{0.25, 0.5}, {0.75, 1.0}}));
  CHECK(a.minus(b) == IntervalSet::from_intervals({{0.0, 0.125}, {0.625, 0.75}}));
  CHECK(a.prefix(0.375) == IntervalSet::from_intervals({{0.0, 0.25}, {0.5, 0.625}}));
  CHECK(a.contains(0.5));
  CHECK_FALSE(a.contains(0.75));
  CHECK(IntervalSet::interval(0.1, 0.2).snapped(3) == IntervalSet::interval(0.125, 0.25));
}

TEST_CASE("interval set measure identities on random sets") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_interval_set(rng);
    const auto b = random_interval_set(rng);
    CHECK(std::abs(a.minus(b).lebesgue() + a.intersect(b).lebesgue() - a.lebesgue()) <= 1e-12);
    CHECK(std::abs(a.unite(b).lebesgue() + a.intersect(b).lebesgue() - a.lebesgue() -
                   b.lebesgue()) <= 1e-12);
    CHECK(a.intersect(b).is_subset_of(a));
    CHECK(a.is_subset_of(a.unite(b)));
    CHECK(a.lebesgue() >= 0.0);
    CHECK(a.lebesgue() <= 1.0);
  }
}

TEST_CASE("distortions invert and report concavity consistently") {
  const std::vector<Distortion> shapes{
      Distortion::identity(), Distortion::power(2.0), Distortion::power(0.5),
      Distortion::piecewise_linear({{0, 0}, {0.3, 0.6}, {1, 1}}),
      Distortion::piecewise_linear({{0, 0}, {0.5, 0.1}, {1, 1.5}})};
  for (const auto& g : shapes) {
    CHECK(g(0.0) == 0.0);
    for (int i = 0; i <= 100; ++i) {
      const double s = i / 100.0;
      CHECK(std::abs(g.inverse(g(s)) - s) <= 1e-10);
      if (i > 0) CHECK(g(s) > g((i - 1) / 100.0));
    }
    if (g.concave()) {
      for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
          const double lambda = i / 20.0, s = j / 20.0;
          CHECK(g(lambda * s) >= lambda * g(s) - 1e-15);
        }
      }
    }
  }
  CHECK(shapes[2].concave());
  CHECK(shapes[3].concave());
  CHECK_FALSE(shapes[1].concave());
  CHECK_FALSE(shapes[4].concave());
  CHECK_THROWS_AS(Distortion::power(0.0), DomainError);
  CHECK_THROWS_AS(Distortion::piecewise_linear({{0, 0}, {0.5, 0.5}, {0.4, 0.7}, {1, 1}}), DomainError);
}

TEST_CASE("measure evaluation examples") {
  const auto sq = FuzzyMeasure::distorted(Distortion::power(2.0));
  CHECK(measure(sq, IntervalSet::interval(0.0, 0.5)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(measure(sq, IntervalSet{}) == 0.0);
  CHECK(measure(two_block(), IntervalSet{}) == 0.0);
  // 1 * 0.25/0.5 + 1 * 0.25/0.5
  CHECK(measure(two_block(), IntervalSet::interval(0.25, 0.75)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(two_block(2.0, 3.0).total() == 5.0);
  CHECK(sq.scaled(3.0)(IntervalSet::interval(0.0, 0.5)) == doctest::Approx(0.75));
}

TEST_CASE("sectioned measures validate their blocks") {
  CHECK_THROWS_AS(FuzzyMeasure::sectioned({IntervalSet::interval(0, 0.6), IntervalSet::interval(0.5, 1)},
                                          {1, 1}),
                  StructuralError);
  CHECK_THROWS_AS(FuzzyMeasure::sectioned({IntervalSet::interval(0, 0.4), IntervalSet::interval(0.5, 1)},
                                          {1, 1}),
                  StructuralError);
  CHECK_THROWS_AS(two_block(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(two_block(0.0, 0.0), DomainError);
}

TEST_CASE("property checker: convex distortion fails subadditivity") {
  const auto sq = FuzzyMeasure::distorted(Distortion::power(2.0));
  const auto report = check_properties(sq, 1000, 42);
  CHECK(report.monotone.passed);
  CHECK_FALSE(report.subadditive.passed);
  REQUIRE(report.subadditive.witness.has_value());
  const auto& w = *report.subadditive.witness;
  CHECK(sq(w.a.unite(w.b)) > sq(w.a) + sq(w.b));

  // The textbook pair.
  const auto a = IntervalSet::interval(0.0, 0.5), b = IntervalSet::interval(0.5, 1.0);
  CHECK(sq(a.unite(b)) == 1.0);
  CHECK(sq(a) + sq(b) == 0.5);
}

TEST_CASE("property checker: concave, identity and sectioned pass") {
  for (const auto& mu : {FuzzyMeasure::distorted(Distortion::power(0.5)),
                         FuzzyMeasure::distorted(Distortion::identity()),
                         FuzzyMeasure::distorted(Distortion::piecewise_linear({{0, 0}, {0.2, 0.7}, {1, 1}})),
                         two_block(0.3, 2.0)}) {
    const auto report = check_properties(mu, 1000, 11);
    CHECK(report.all_passed());
    CHECK(report.trials == 1000);
  }
  CHECK_THROWS_AS(check_properties(two_block(), 0, 1), DomainError);
}

TEST_CASE("property checker is reproducible under a fixed seed") {
  const auto sq = FuzzyMeasure::distorted(Distortion::power(3.0));
  const auto r1 = check_properties(sq, 200, 5);
  const auto r2 = check_properties(sq, 200, 5);
  REQUIRE(r1.subadditive.witness.has_value());
  CHECK(r1.subadditive.witness->a == r2.subadditive.witness->a);
  CHECK(r1.subadditive.witness->b == r2.subadditive.witness->b);
  CHECK(r1.subadditive.worst_excess == r2.subadditive.worst_excess);
}

TEST_CASE("exhaustive submodularity oracle for sqrt on a 16-cell grid") {
  // For a distortion of Lebesgue measure only the cell counts |A|, |B|,
  // |A & B| matter, so enumerating admissible count triples covers every pair
  // of grid sets.
  const auto g = Distortion::power(0.5);
  const int n = 16;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      for (int both = 0; both <= std::min(a, b); ++both) {
        const int either = a + b - both;
        if (either > n) continue;
        const double u = g(either / 16.0), i = g(both / 16.0), ga = g(a / 16.0), gb = g(b / 16.0);
        CHECK(u + i <= ga + gb + 1e-15);
        CHECK(u <= ga + gb + 1e-15);
      }
    }
  }
  // And literally on all pairs of subsets of a 4-cell grid.
  const auto mu = FuzzyMeasure::distorted(g);
  auto grid_set = [](unsigned mask) {
    std::vector<Interval> parts;
    for (int c = 0; c < 4; ++c) {
      if (mask & (1u << c)) parts.push_back({c / 4.0, (c + 1) / 4.0});
    }
    return IntervalSet::union_of(parts);
  };
  for (unsigned ma = 0; ma < 16; ++ma) {
    for (unsigned mb = 0; mb < 16; ++mb) {
      const auto a = grid_set(ma), b = grid_set(mb);
      CHECK(mu(a.unite(b)) + mu(a.intersect(b)) <= mu(a) + mu(b) + 1e-15);
    }
  }
}

TEST_CASE("monotonicity holds for nested random pairs") {
  Rng rng(3);
  const std::vector<FuzzyMeasure> measures{FuzzyMeasure::distorted(Distortion::power(2.0)),
                                           FuzzyMeasure::distorted(Distortion::power(0.3)),
                                           two_block(1.0, 4.0)};
  for (const auto& mu : measures) {
    for (int i = 0; i < 300; ++i) {
      const auto a = random_interval_set(rng);
      const auto b = a.unite(random_interval_set(rng));
      CHECK(mu(a) <= mu(b) + 1e-15);
    }
  }
}

TEST_CASE("filtering family examples") {
  const auto id = FuzzyMeasure::distorted(Distortion::identity());
  const auto sq = FuzzyMeasure::distorted(Distortion::power(2.0));
  const auto x = IntervalSet::full();

  const auto fam_id = filtering_family(id, x);
  const auto a03 = fam_id.at(0.3);
  REQUIRE(a03.size() == 1);
  CHECK(a03.intervals()[0].lo == 0.0);
  CHECK(a03.intervals()[0].hi == doctest::Approx(0.3).epsilon(1e-15));

  const auto fam_sq = filtering_family(sq, x);
  CHECK(fam_sq.at(0.25) == IntervalSet::interval(0.0, 0.5));
  CHECK(fam_sq.at(1.0) == x);
  CHECK(fam_sq.at(0.0).empty());

  const auto a = IntervalSet::from_intervals({{0.1, 0.2}, {0.6, 0.9}});
  CHECK(filtering_family(sq, a).at(1.0) == a);
  CHECK_THROWS_AS(filtering_family(sq, IntervalSet{}), DegenerateSetError);
}

TEST_CASE("filtering chains hit t * mu(A) and are nested") {
  Rng rng(99);
  const std::vector<FuzzyMeasure> measures{
      FuzzyMeasure::distorted(Distortion::power(2.0)),
      FuzzyMeasure::distorted(Distortion::power(0.5), 2.0),
      FuzzyMeasure::distorted(Distortion::piecewise_linear({{0, 0}, {0.4, 0.1}, {0.7, 0.8}, {1, 1}})),
      two_block(0.2, 1.3)};
  for (const auto& mu : measures) {
    int done = 0;
    while (done < 100) {
      const auto a = random_interval_set(rng);
      if (a.lebesgue() <= 0.0) continue;
      ++done;
      const auto fam = filtering_family(mu, a);
      const double t = uniform(rng);
      const double t2 = std::min(1.0, t + uniform(rng, 0.0, 0.5));
      CHECK(std::abs(mu(fam.at(t)) - t * mu(a)) <= 1e-9);
      CHECK(fam.at(t).is_subset_of(fam.at(t2)));
      CHECK(fam.at(t).is_subset_of(a));
    }
  }
}

TEST_CASE("semiconvex condition (iii) diagnostic") {
  const auto id = FuzzyMeasure::distorted(Distortion::identity());
  const auto r_id = check_semiconvex_condition_iii(filtering_family(id, IntervalSet::full()), 20);
  CHECK(r_id.max_deviation <= 1e-12);
  CHECK(r_id.pairs == 210);

  const auto sq = FuzzyMeasure::distorted(Distortion::power(2.0));
  const auto fam = filtering_family(sq, IntervalSet::full());
  // t = 0, t' = 0.5: exact.
  CHECK(sq(fam.at(0.5).minus(fam.at(0.0))) == doctest::Approx(0.5));
  // t = 0.25, t' = 0.75: [0.5, sqrt(0.75)) has measure (sqrt(.75) - .5)^2.
  const double hand = std::pow(std::sqrt(0.75) - 0.5, 2);
  CHECK(sq(fam.at(0.75).minus(fam.at(0.25))) == doctest::Approx(hand).epsilon(1e-12));
  CHECK(hand == doctest::Approx(0.134).epsilon(1e-2));
  const auto r = check_semiconvex_condition_iii(fam, 4);
  CHECK(r.max_deviation >= 0.5 - hand - 1e-12);
  CHECK_FALSE(r.note.empty());
}
