#pragma once

#include <functional>
#include <span>
#include <vector>

#include "choquet/interval_set.hpp"
#include "choquet/random.hpp"

namespace clab {

/// Non-negative piecewise-constant function on [0, 1): a list of cells that
/// partition the space, each carrying one value.
class StepFunction {
public:
  struct Piece {
    IntervalSet cell;
    double value = 0.0;
  };

  /// Maximal interval on which the function is constant.
  struct Atom {
    Interval where;
    double value = 0.0;
  };

  /// Throws StructuralError unless the non-empty cells partition [0, 1), and
  /// DomainError on a negative or non-finite value.
  static StepFunction from_pieces(std::vector<Piece> pieces);
  static StepFunction constant(double c);
  static StepFunction indicator(const IntervalSet& a, double height = 1.0);
  /// values.size() equal-width cells, left to right.
  static StepFunction on_uniform_cells(std::span<const double> values);
  /// Cell i is [breaks[i], breaks[i+1]); breaks must run from 0 to 1.
  static StepFunction on_breaks(std::span<const double> breaks, std::span<const double> values);

  const std::vector<Piece>& pieces() const { return pieces_; }
  double max_value() const;
  double operator()(double x) const;

  /// [f > t] as an IntervalSet.
  IntervalSet superlevel(double t) const;

  /// Sorted atomic intervals.
  std::vector<Atom> atoms() const;

  /// f * 1_A.
  StepFunction restricted(const IntervalSet& a) const;
  StepFunction scaled(double c) const;
  StepFunction plus(double c) const;
  StepFunction min_with(double c) const;

  /// Pointwise op over the common refinement of both partitions.
  static StepFunction combine(const StepFunction& f, const StepFunction& h,
                              const std::function<double(double, double)>& op);

  friend StepFunction operator+(const StepFunction& f, const StepFunction& h);

private:
  explicit StepFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {}

  std::vector<Piece> pieces_;
};

/// Piecewise-constant function on [0, 1) with values in R^n_+.
class VectorStepFunction {
public:
  struct Piece {
    IntervalSet cell;
    std::vector<double> value;
  };

  /// Same partition rules as StepFunction; every value must have dimension
  /// `dim` and non-negative entries.
  static VectorStepFunction from_pieces(std::size_t dim, std::vector<Piece> pieces);
  static VectorStepFunction constant(std::span<const double> value);
  static VectorStepFunction from_scalar(const StepFunction& f);
  /// Component functions must share the same partition into cells.
  static VectorStepFunction from_components(std::span<const StepFunction> components);

  std::size_t dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  StepFunction component(std::size_t i) const;
  /// x -> p . f(x).
  StepFunction dot(std::span<const double> p) const;
  VectorStepFunction restricted(const IntervalSet& a) const;

private:
  VectorStepFunction(std::size_t dim, std::vector<Piece> pieces)
      : dim_(dim), pieces_(std::move(pieces)) {}

  std::size_t dim_ = 1;
  std::vector<Piece> pieces_;
};

/// Random step function: up to max_cells dyadic atoms with values in
/// [0, max_value); some atoms are grouped into non-contiguous cells.
StepFunction random_step_function(Rng& rng, std::size_t max_cells, double max_value);

/// Two random step functions on a shared partition that never cross: values
/// of both are sorted along one random ordering of the cells.
std::pair<StepFunction, StepFunction> random_comonotone_pair(Rng& rng, std::size_t cells,
                                                             double max_value);

} // namespace clab
