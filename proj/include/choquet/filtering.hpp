#pragma once

#include <string>

#include "choquet/fuzzy_measure.hpp"
#include "choquet/interval_set.hpp"

namespace clab {

/// Increasing chain t -> A_t of subsets of a base set A with A_0 = {},
/// A_1 = A and mu(A_t) = t * mu(A).
///
/// Realized as left prefixes: for a distorted measure the prefix of A with
/// Lebesgue length g^-1(t * g(lebesgue(A))); for a sectioned measure the union
/// of per-block prefixes with lebesgue(A_t & E_i) = t * lebesgue(A & E_i).
/// The chain depends on mu only through its distortion or its blocks, so it is
/// shared by every rescaling of mu (and, in sectioned mode, by every weight
/// vector over the same blocks).
class FilteringFamily {
public:
  const IntervalSet& base() const { return base_; }
  const FuzzyMeasure& measure() const { return mu_; }

  /// A_t; t is clamped to [0, 1]. Cost is linear in the size of the base set.
  IntervalSet at(double t) const;

private:
  friend FilteringFamily filtering_family(const FuzzyMeasure& mu, const IntervalSet& a);
  FilteringFamily(FuzzyMeasure mu, IntervalSet base);

  FuzzyMeasure mu_;
  IntervalSet base_;
  double base_length_ = 0.0;
  std::vector<IntervalSet> block_parts_;
};

/// Throws DegenerateSetError when lebesgue(a) == 0.
FilteringFamily filtering_family(const FuzzyMeasure& mu, const IntervalSet& a);

/// Result of the (iii) diagnostic: mu(A_t' \ A_t) against (t' - t) mu(A).
struct SemiconvexDiagnostic {
  double max_deviation = 0.0;
  double worst_t = 0.0;
  double worst_t_prime = 0.0;
  std::size_t pairs = 0;
  std::string note;
};

/// Evaluates |mu(A_t' \ A_t) - (t' - t) mu(A)| over all pairs t < t' of a
/// uniform grid with `samples` + 1 points. Never throws on a violation; the
/// condition is informational only.
SemiconvexDiagnostic check_semiconvex_condition_iii(const FilteringFamily& family,
                                                    std::size_t samples);

} // namespace clab
