#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace clab {

/// Default dyadic resolution: endpoints of generated / parsed sets live on the
/// grid k * 2^-20.
inline constexpr int kDefaultGridBits = 20;

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Rounds x to the nearest multiple of 2^-bits, clamped to [0, 1].
double snap_to_grid(double x, int bits = kDefaultGridBits);

/// A measurable subset of X = [0, 1): a finite union of disjoint half-open
/// intervals, kept sorted with touching pieces merged, so equal sets compare
/// equal.
class IntervalSet {
public:
  IntervalSet() = default;

  /// Validating constructor. Intervals must already be sorted, non-empty,
  /// pairwise disjoint and inside [0, 1]; throws StructuralError otherwise.
  static IntervalSet from_intervals(std::vector<Interval> intervals);

  /// Accepts arbitrary (possibly overlapping, unsorted, empty) pieces and
  /// returns their union clipped to [0, 1].
  static IntervalSet union_of(std::vector<Interval> pieces);

  static IntervalSet interval(double lo, double hi);
  static IntervalSet full() { return interval(0.0, 1.0); }

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }

  /// Lebesgue measure, in [0, 1].
  double lebesgue() const;

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet complement() const;
  IntervalSet minus(const IntervalSet& other) const;

  bool is_subset_of(const IntervalSet& other) const;
  bool contains(double x) const;

  /// Left prefix of this set with the given Lebesgue measure (clamped to
  /// [0, lebesgue()]).
  IntervalSet prefix(double length) const;

  /// Endpoints rounded to the dyadic grid; pieces that collapse are dropped.
  IntervalSet snapped(int bits = kDefaultGridBits) const;

  std::string to_string() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
  explicit IntervalSet(std::vector<Interval> canonical) : intervals_(std::move(canonical)) {}

  std::vector<Interval> intervals_;
};

} // namespace clab
