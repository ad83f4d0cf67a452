#pragma once

// Seeded generators for the property suites. Draws use only the raw 64-bit
// engine output, so a seed reproduces the same instances on every platform.

#include <cstdint>
#include <random>

#include "deltakit/freespace.hpp"
#include "deltakit/metric.hpp"
#include "deltakit/rational.hpp"
#include "deltakit/rtree.hpp"

namespace deltakit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform on [lo, hi].
  long between(long lo, long hi);
  bool coin() { return below(2) == 1; }
  /// num / den with |num| <= max_num and 1 <= den <= max_den.
  Rational rational(long max_num, long max_den);
  /// num / den in (0, max_value], den <= max_den.
  Rational positive(long max_value, long max_den);

 private:
  std::mt19937_64 engine_;
};

/// Shortest-path completion of random positive edge weights on `points`
/// points named p0, p1, ... with base p0.
FiniteMetricSpace random_metric_space(Rng& rng, std::size_t points);

/// Random recursive tree on `vertices` vertices named v0, v1, ... with base
/// v0 and rational edge lengths in (0, 3].
WeightedTree random_tree(Rng& rng, std::size_t vertices);

/// A 1-Lipschitz function taking the fixed values, with every other value
/// drawn from the interval its assigned neighbours allow. The fixed data
/// must itself be 1-Lipschitz.
LipschitzFunction random_lipschitz(Rng& rng, const SpaceRef& space, const std::map<std::size_t, Rational>& fixed);

}  // namespace deltakit
