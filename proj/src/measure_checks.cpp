#include "choquet/measure_checks.hpp"

#include "choquet/error.hpp"
#include "choquet/random.hpp"

namespace clab {

namespace {

void record(PropertyCheck& check, const IntervalSet& a, const IntervalSet& b, double lhs,
            double rhs) {
  const double excess = lhs - rhs;
  if (excess > check.worst_excess) check.worst_excess = excess;
  if (excess > kMeasurePropertyTolerance && check.passed) {
    check.passed = false;
    check.witness = SetPairWitness{a, b, lhs, rhs};
  }
}

} // namespace

MeasurePropertyReport check_properties(const FuzzyMeasure& mu, std::size_t trials,
                                       std::uint64_t seed) {
  if (trials == 0) throw DomainError("check_properties needs at least one trial");
  Rng rng(seed);
  MeasurePropertyReport report;
  report.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    const IntervalSet a = random_interval_set(rng);
    const IntervalSet b = random_interval_set(rng);
    const IntervalSet both = a.intersect(b);
    const IntervalSet either = a.unite(b);
    const double ma = mu(a), mb = mu(b), m_both = mu(both), m_either = mu(either);

    record(report.monotone, both, a, m_both, ma);
    record(report.monotone, a, either, ma, m_either);
    record(report.subadditive, a, b, m_either, ma + mb);
    record(report.submodular, a, b, m_either + m_both, ma + mb);
  }
  return report;
}

} // namespace clab
