#pragma once

#include <cstdint>
#include <random>

#include "choquet/interval_set.hpp"

namespace clab {

using Rng = std::mt19937_64;

/// Random IntervalSet with at most max_pieces intervals and endpoints on the
/// dyadic grid of the given resolution. Occasionally returns the empty set or
/// the whole space.
IntervalSet random_interval_set(Rng& rng, std::size_t max_pieces = 6,
                                int bits = kDefaultGridBits);

/// Uniform draw in [lo, hi).
double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);

} // namespace clab
