#pragma once

// Exact uncapacitated transportation on the complete graph of a finite
// metric space, solved by successive shortest paths over the residual graph.

#include <cstddef>
#include <utility>
#include <vector>

#include "deltakit/metric.hpp"
#include "deltakit/rational.hpp"

namespace deltakit {

struct FlowArc {
  std::size_t from;  // space indices
  std::size_t to;
  Rational amount;
};

struct TransportPlan {
  Rational cost;
  std::vector<FlowArc> arcs;
  /// Participating space indices, sorted.
  std::vector<std::size_t> nodes;
  /// Node prices aligned with `nodes`: 1-Lipschitz, and
  /// sum_k excess[k] * price[k] == cost.
  std::vector<Rational> price;
};

/// Moves mass from positive to negative excess at minimum cost d(p,q) per
/// unit. `excess` lists (space index, amount) pairs that must sum to zero;
/// repeated indices accumulate. Throws PreconditionError otherwise.
TransportPlan solve_transport(const FiniteMetricSpace& space,
                              const std::vector<std::pair<std::size_t, Rational>>& excess);

}  // namespace deltakit
