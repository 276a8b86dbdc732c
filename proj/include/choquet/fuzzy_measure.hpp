#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choquet/distortion.hpp"
#include "choquet/interval_set.hpp"

namespace clab {

/// Monotone set function on IntervalSets with mu(empty) = 0 and finite total.
///
/// Two constructive modes:
///  - distorted:  mu(A) = scale * g(lebesgue(A))
///  - sectioned:  mu(A) = scale * sum_i w_i * lebesgue(A & E_i) / lebesgue(E_i)
///    for disjoint blocks E_i covering [0, 1).
class FuzzyMeasure {
public:
  enum class Mode { Distorted, Sectioned };

  static FuzzyMeasure distorted(Distortion g, double scale = 1.0);
  /// Blocks must be non-null, pairwise disjoint and cover [0, 1); weights are
  /// non-negative with a positive sum. Throws StructuralError / DomainError.
  static FuzzyMeasure sectioned(std::vector<IntervalSet> blocks, std::vector<double> weights,
                                double scale = 1.0);

  Mode mode() const { return mode_; }
  double scale() const { return scale_; }
  const Distortion& distortion() const { return distortion_; }
  const std::vector<IntervalSet>& blocks() const { return blocks_; }
  const std::vector<double>& weights() const { return weights_; }

  double operator()(const IntervalSet& a) const;
  double total() const { return total_; }

  /// Same measure multiplied by c > 0.
  FuzzyMeasure scaled(double c) const;

  /// Concave distortion or sectioned-additive: the measure is subadditive and
  /// submodular.
  bool submodular_by_construction() const;

  std::string describe() const;

  /// Incremental evaluation of mu over a growing union of pairwise disjoint
  /// pieces.
  class Accumulator {
  public:
    void add(const IntervalSet& piece);
    double value() const;

  private:
    friend class FuzzyMeasure;
    explicit Accumulator(const FuzzyMeasure& mu);

    const FuzzyMeasure* mu_;
    double length_ = 0.0;
    std::vector<double> block_lengths_;
  };

  Accumulator accumulator() const { return Accumulator(*this); }

private:
  FuzzyMeasure() = default;

  Mode mode_ = Mode::Distorted;
  double scale_ = 1.0;
  Distortion distortion_ = Distortion::identity();
  std::vector<IntervalSet> blocks_;
  std::vector<double> weights_;
  std::vector<double> block_lebesgue_;
  double total_ = 0.0;
};

/// mu(A).
inline double measure(const FuzzyMeasure& mu, const IntervalSet& a) { return mu(a); }

} // namespace clab
