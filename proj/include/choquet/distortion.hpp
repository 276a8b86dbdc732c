#pragma once

#include <string>
#include <vector>

namespace clab {

/// Knot of a piecewise-linear distortion.
struct Knot {
  double s = 0.0;
  double g = 0.0;
};

/// Increasing transform g: [0,1] -> [0,inf) with g(0) = 0 applied to Lebesgue
/// measure. Three shapes are supported: identity, power s^alpha, and
/// piecewise-linear through a list of knots.
class Distortion {
public:
  enum class Kind { Identity, Power, PiecewiseLinear };

  /// Bisection tolerance for inverses without a closed form.
  static constexpr double kInverseTolerance = 1e-12;

  static Distortion identity();
  /// Throws DomainError unless alpha > 0.
  static Distortion power(double alpha);
  /// Knots must start at (0,0), end at s = 1 and be strictly increasing in
  /// both coordinates; throws DomainError otherwise.
  static Distortion piecewise_linear(std::vector<Knot> knots);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<Knot>& knots() const { return knots_; }

  /// g(s) for s in [0, 1] (s is clamped).
  double operator()(double s) const;

  /// The s in [0, 1] with g(s) = value; value is clamped to [0, g(1)].
  double inverse(double value) const;

  /// True when g(lambda * s) >= lambda * g(s) on [0,1]: power with alpha <= 1,
  /// identity, or piecewise-linear with non-increasing slopes.
  bool concave() const;

  std::string describe() const;

private:
  Distortion(Kind kind, double alpha, std::vector<Knot> knots)
      : kind_(kind), alpha_(alpha), knots_(std::move(knots)) {}

  Kind kind_ = Kind::Identity;
  double alpha_ = 1.0;
  std::vector<Knot> knots_;
};

} // namespace clab
