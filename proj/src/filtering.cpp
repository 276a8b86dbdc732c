#include "choquet/filtering.hpp"

#include <cmath>

#include "choquet/error.hpp"

namespace clab {

FilteringFamily::FilteringFamily(FuzzyMeasure mu, IntervalSet base)
    : mu_(std::move(mu)), base_(std::move(base)), base_length_(base_.lebesgue()) {
  if (mu_.mode() == FuzzyMeasure::Mode::Sectioned) {
    for (const auto& block : mu_.blocks()) block_parts_.push_back(base_.intersect(block));
  }
}

FilteringFamily filtering_family(const FuzzyMeasure& mu, const IntervalSet& a) {
  if (!(a.lebesgue() > 0.0)) {
    throw DegenerateSetError("filtering family requested for a null set");
  }
  return FilteringFamily(mu, a);
}

IntervalSet FilteringFamily::at(double t) const {
  if (!(t > 0.0)) return IntervalSet{};
  if (t >= 1.0) return base_;
  if (mu_.mode() == FuzzyMeasure::Mode::Distorted) {
    const auto& g = mu_.distortion();
    return base_.prefix(g.inverse(t * g(base_length_)));
  }
  IntervalSet out;
  for (const auto& part : block_parts_) out = out.unite(part.prefix(t * part.lebesgue()));
  return out;
}

SemiconvexDiagnostic check_semiconvex_condition_iii(const FilteringFamily& family,
                                                    std::size_t samples) {
  SemiconvexDiagnostic report;
  report.note =
      "condition (iii) is diagnostic only; sigma-additive measures with full range can still "
      "violate it, e.g. mu(E) = sum_n 1_E(n) / 2^n on the natural numbers";
  if (samples == 0) return report;
  const double total = family.measure()(family.base());
  std::vector<IntervalSet> chain;
  chain.reserve(samples + 1);
  for (std::size_t i = 0; i <= samples; ++i) {
    chain.push_back(family.at(static_cast<double>(i) / static_cast<double>(samples)));
  }
  for (std::size_t i = 0; i <= samples; ++i) {
    for (std::size_t j = i + 1; j <= samples; ++j) {
      const double t = static_cast<double>(i) / static_cast<double>(samples);
      const double tp = static_cast<double>(j) / static_cast<double>(samples);
      const double lhs = family.measure()(chain[j].minus(chain[i]));
      const double dev = std::abs(lhs - (tp - t) * total);
      ++report.pairs;
      if (dev > report.max_deviation) {
        report.max_deviation = dev;
        report.worst_t = t;
        report.worst_t_prime = tp;
      }
    }
  }
  return report;
}

} // namespace clab
