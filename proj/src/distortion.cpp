#include "choquet/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "choquet/error.hpp"

namespace clab {

Distortion Distortion::identity() { return Distortion(Kind::Identity, 1.0, {}); }

Distortion Distortion::power(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("power distortion needs alpha > 0, got " + std::to_string(alpha));
  }
  return Distortion(Kind::Power, alpha, {});
}

Distortion Distortion::piecewise_linear(std::vector<Knot> knots) {
  if (knots.size() < 2) throw DomainError("piecewise-linear distortion needs at least two knots");
  if (knots.front().s != 0.0 || knots.front().g != 0.0) {
    throw DomainError("piecewise-linear distortion must start at (0, 0)");
  }
  if (knots.back().s != 1.0) throw DomainError("piecewise-linear distortion must end at s = 1");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].s > knots[i - 1].s) || !(knots[i].g > knots[i - 1].g) ||
        !std::isfinite(knots[i].g)) {
      throw DomainError("piecewise-linear knots must be strictly increasing in s and g");
    }
  }
  return Distortion(Kind::PiecewiseLinear, 1.0, std::move(knots));
}

double Distortion::operator()(double s) const {
  s = std::clamp(s, 0.0, 1.0);
  switch (kind_) {
  case Kind::Identity:
    return s;
  case Kind::Power:
    return std::pow(s, alpha_);
  case Kind::PiecewiseLinear: {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), s,
                               [](double v, const Knot& k) { return v < k.s; });
    if (it == knots_.end()) return knots_.back().g;
    const Knot& hi = *it;
    const Knot& lo = *(it - 1);
    return lo.g + (hi.g - lo.g) * (s - lo.s) / (hi.s - lo.s);
  }
  }
  return s;
}

double Distortion::inverse(double value) const {
  const double top = (*this)(1.0);
  value = std::clamp(value, 0.0, top);
  switch (kind_) {
  case Kind::Identity:
    return value;
  case Kind::Power:
    return std::pow(value, 1.0 / alpha_);
  case Kind::PiecewiseLinear:
    break;
  }
  // Monotone bisection.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kInverseTolerance) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < value) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool Distortion::concave() const {
  switch (kind_) {
  case Kind::Identity:
    return true;
  case Kind::Power:
    return alpha_ <= 1.0;
  case Kind::PiecewiseLinear: {
    double previous = INFINITY;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      const double slope = (knots_[i].g - knots_[i - 1].g) / (knots_[i].s - knots_[i - 1].s);
      if (slope > previous * (1.0 + 1e-12)) return false;
      previous = slope;
    }
    return true;
  }
  }
  return false;
}

std::string Distortion::describe() const {
  std::ostringstream os;
  switch (kind_) {
  case Kind::Identity:
    os << "identity";
    break;
  case Kind::Power:
    os << "power(alpha=" << alpha_ << ")";
    break;
  case Kind::PiecewiseLinear:
    os << "piecewise-linear(" << knots_.size() << " knots)";
    break;
  }
  return os.str();
}

} // namespace clab
