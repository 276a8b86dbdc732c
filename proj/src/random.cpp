#include "choquet/random.hpp"

#include <algorithm>
#include <vector>

namespace clab {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

IntervalSet random_interval_set(Rng& rng, std::size_t max_pieces, int bits) {
  const double roll = uniform(rng);
  if (roll < 0.03) return IntervalSet{};
  if (roll < 0.06) return IntervalSet::full();
  const std::size_t pieces =
      1 + std::uniform_int_distribution<std::size_t>(0, max_pieces > 0 ? max_pieces - 1 : 0)(rng);
  std::vector<double> points;
  points.reserve(2 * pieces);
  for (std::size_t i = 0; i < 2 * pieces; ++i) points.push_back(snap_to_grid(uniform(rng), bits));
  std::sort(points.begin(), points.end());
  std::vector<Interval> intervals;
  for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
    if (points[i] < points[i + 1]) intervals.push_back({points[i], points[i + 1]});
  }
  return IntervalSet::union_of(std::move(intervals));
}

} // namespace clab
