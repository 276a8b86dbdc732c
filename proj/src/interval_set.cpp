#include "choquet/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "choquet/error.hpp"

namespace clab {

namespace {

// Merges sorted pieces whose endpoints touch or overlap.
std::vector<Interval> merge_sorted(std::vector<Interval> pieces) {
  std::vector<Interval> out;
  out.reserve(pieces.size());
  for (const auto& iv : pieces) {
    if (!(iv.lo < iv.hi)) continue;
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

} // namespace

double snap_to_grid(double x, int bits) {
  const double scale = std::ldexp(1.0, bits);
  return std::clamp(std::round(x * scale) / scale, 0.0, 1.0);
}

IntervalSet IntervalSet::from_intervals(std::vector<Interval> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo < 0.0 || iv.hi > 1.0) {
      throw StructuralError("interval [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
                            ") is not inside [0, 1]");
    }
    if (!(iv.lo < iv.hi)) {
      throw StructuralError("interval [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
                            ") is empty");
    }
    if (i > 0 && intervals[i - 1].hi > iv.lo) {
      throw StructuralError("intervals overlap or are unsorted at index " + std::to_string(i));
    }
  }
  return IntervalSet(merge_sorted(std::move(intervals)));
}

IntervalSet IntervalSet::union_of(std::vector<Interval> pieces) {
  for (auto& iv : pieces) {
    iv.lo = std::clamp(iv.lo, 0.0, 1.0);
    iv.hi = std::clamp(iv.hi, 0.0, 1.0);
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return IntervalSet(merge_sorted(std::move(pieces)));
}

IntervalSet IntervalSet::interval(double lo, double hi) {
  if (!(lo < hi)) return IntervalSet{};
  return from_intervals({Interval{lo, hi}});
}

double IntervalSet::lebesgue() const {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all;
  all.reserve(intervals_.size() + other.intervals_.size());
  std::merge(intervals_.begin(), intervals_.end(), other.intervals_.begin(),
             other.intervals_.end(), std::back_inserter(all),
             [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return IntervalSet(merge_sorted(std::move(all)));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  const auto& a = intervals_;
  const auto& b = other.intervals_;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement() const {
  std::vector<Interval> out;
  double cursor = 0.0;
  for (const auto& iv : intervals_) {
    if (cursor < iv.lo) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < 1.0) out.push_back({cursor, 1.0});
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::minus(const IntervalSet& other) const {
  return intersect(other.complement());
}

bool IntervalSet::is_subset_of(const IntervalSet& other) const {
  return minus(other).empty();
}

bool IntervalSet::contains(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.hi; });
  return it != intervals_.end() && it->lo <= x;
}

IntervalSet IntervalSet::prefix(double length) const {
  std::vector<Interval> out;
  double remaining = length;
  for (const auto& iv : intervals_) {
    if (remaining <= 0.0) break;
    if (iv.length() <= remaining) {
      out.push_back(iv);
      remaining -= iv.length();
    } else {
      const double hi = iv.lo + remaining;
      if (iv.lo < hi) out.push_back({iv.lo, hi});
      remaining = 0.0;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::snapped(int bits) const {
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) {
    out.push_back({snap_to_grid(iv.lo, bits), snap_to_grid(iv.hi, bits)});
  }
  return IntervalSet(merge_sorted(std::move(out)));
}

std::string IntervalSet::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '{';
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) os << ", ";
    os << '[' << intervals_[i].lo << ", " << intervals_[i].hi << ')';
  }
  os << '}';
  return os.str();
}

} // namespace clab
