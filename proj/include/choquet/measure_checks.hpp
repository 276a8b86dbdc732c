#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "choquet/fuzzy_measure.hpp"

namespace clab {

/// A pair of sets violating an inequality lhs <= rhs.
struct SetPairWitness {
  IntervalSet a;
  IntervalSet b;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct PropertyCheck {
  explicit PropertyCheck(std::string label = {}) : name(std::move(label)) {}

  std::string name;
  bool passed = true;
  double worst_excess = 0.0; // max(lhs - rhs) over all trials
  std::optional<SetPairWitness> witness;
};

struct MeasurePropertyReport {
  PropertyCheck monotone{"monotone"};
  PropertyCheck subadditive{"subadditive"};
  PropertyCheck submodular{"submodular"};
  std::size_t trials = 0;

  bool all_passed() const {
    return monotone.passed && subadditive.passed && submodular.passed;
  }
};

/// Tolerance used by the property checkers.
inline constexpr double kMeasurePropertyTolerance = 1e-12;

/// Samples `trials` random pairs (A, B) and checks monotonicity
/// (A & B <= A <= A | B), subadditivity and submodularity. Reproducible for a
/// fixed seed; the first counterexample of each property is kept as witness.
/// Throws DomainError when trials == 0.
MeasurePropertyReport check_properties(const FuzzyMeasure& mu, std::size_t trials,
                                       std::uint64_t seed);

} // namespace clab
