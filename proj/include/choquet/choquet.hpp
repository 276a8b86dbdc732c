#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "choquet/fuzzy_measure.hpp"
#include "choquet/step_function.hpp"

namespace clab {

/// Choquet integral of a non-negative step function,
///   sum_k (v_k - v_{k+1}) * mu([f > v_{k+1}]),
/// over the distinct values v_1 > ... > v_m of f with v_{m+1} = 0. Exact up to
/// floating-point rounding since t -> mu([f > t]) is itself a step function.
double choquet(const StepFunction& f, const FuzzyMeasure& mu);

/// Componentwise integral of a vector-valued step function.
std::vector<double> choquet(const VectorStepFunction& f, const FuzzyMeasure& mu);

/// Integral of f over A, taken as choquet(f * 1_A, mu). For non-negative f this
/// coincides with integrating against the restriction of mu to A.
double choquet_restricted(const StepFunction& f, const FuzzyMeasure& mu, const IntervalSet& a);

struct IntegralPropertyResult {
  explicit IntegralPropertyResult(std::string label = {}) : name(std::move(label)) {}

  std::string name;
  bool checked = true;
  bool passed = true;
  std::size_t trials = 0;
  double worst_deviation = 0.0;
  std::string counterexample;
};

struct ChoquetPropertyReport {
  IntegralPropertyResult homogeneity{"(ii) positive homogeneity"};
  IntegralPropertyResult monotonicity{"(iii) monotonicity"};
  IntegralPropertyResult translation{"(iv) translation"};
  IntegralPropertyResult subadditivity{"(v) subadditivity"};
  IntegralPropertyResult comonotonic_additivity{"(vi) comonotonic additivity"};
  IntegralPropertyResult horizontal_additivity{"(vii) horizontal additivity"};

  std::vector<const IntegralPropertyResult*> all() const {
    return {&homogeneity,   &monotonicity,           &translation,
            &subadditivity, &comonotonic_additivity, &horizontal_additivity};
  }
  bool all_passed() const;
};

struct ChoquetCheckOptions {
  std::size_t max_cells = 24;
  double max_value = 4.0;
  double tolerance = 1e-9;
  /// Evaluate (v) even if mu is not flagged subadditive; a convex distortion
  /// then produces a recorded counterexample.
  bool force_subadditivity = false;
};

/// Random-trial check of the integral's structural identities and
/// inequalities. (v) is skipped (checked = false) unless mu is subadditive by
/// construction or forced. Throws DomainError when trials == 0.
ChoquetPropertyReport check_choquet_properties(const FuzzyMeasure& mu, std::size_t trials,
                                               std::uint64_t seed,
                                               const ChoquetCheckOptions& options = {});

} // namespace clab
