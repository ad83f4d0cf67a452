#include "deltakit/transport.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "deltakit/error.hpp"

namespace deltakit {

namespace {

struct Residual {
  const FiniteMetricSpace& space;
  const std::vector<std::size_t>& nodes;
  std::vector<std::vector<Rational>> flow;  // flow[k][l] >= 0 on arc k -> l

  const Rational& cost(std::size_t k, std::size_t l) const { return space.dist(nodes[k], nodes[l]); }
};

enum class ArcKind { forward, backward };

struct Label {
  std::optional<Rational> dist;
  std::optional<std::size_t> pred;
  ArcKind kind = ArcKind::forward;
};

// Bellman-Ford over the residual graph. Forward arcs k -> l always exist with
// cost d; backward arcs l -> k exist with cost -d while flow[k][l] > 0.
std::vector<Label> shortest_paths(const Residual& g, const std::vector<bool>& is_source) {
  const std::size_t m = g.nodes.size();
  std::vector<Label> label(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (is_source[k]) label[k].dist = Rational(0);
  }
  for (std::size_t round = 0; round < m; ++round) {
    bool changed = false;
    for (std::size_t k = 0; k < m; ++k) {
      if (!label[k].dist) continue;
      for (std::size_t l = 0; l < m; ++l) {
        if (k == l) continue;
        auto relax = [&](const Rational& candidate, ArcKind kind) {
          if (!label[l].dist || candidate < *label[l].dist) {
            label[l].dist = candidate;
            label[l].pred = k;
            label[l].kind = kind;
            changed = true;
          }
        };
        relax(*label[k].dist + g.cost(k, l), ArcKind::forward);
        if (g.flow[l][k] > 0) relax(*label[k].dist - g.cost(k, l), ArcKind::backward);
      }
    }
    if (!changed) return label;
  }
  throw Error("transport residual graph has a negative cycle");
}

}  // namespace

TransportPlan solve_transport(const FiniteMetricSpace& space,
                              const std::vector<std::pair<std::size_t, Rational>>& excess) {
  std::map<std::size_t, Rational> merged;
  for (const auto& [p, amount] : excess) {
    if (p >= space.size()) throw PreconditionError("transport node out of range");
    merged[p] += amount;
  }
  Rational total;
  for (const auto& [p, amount] : merged) total += amount;
  if (total != 0) throw PreconditionError("transport excesses must sum to zero");

  TransportPlan plan;
  std::vector<Rational> remaining;
  for (const auto& [p, amount] : merged) {
    plan.nodes.push_back(p);
    remaining.push_back(amount);
  }
  const std::size_t m = plan.nodes.size();
  Residual g{space, plan.nodes, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m))};

  for (;;) {
    std::vector<bool> is_source(m);
    bool any = false;
    for (std::size_t k = 0; k < m; ++k) {
      is_source[k] = remaining[k] > 0;
      any = any || is_source[k];
    }
    if (!any) break;

    const auto label = shortest_paths(g, is_source);
    std::optional<std::size_t> sink;
    for (std::size_t l = 0; l < m; ++l) {
      if (remaining[l] < 0 && label[l].dist && (!sink || *label[l].dist < *label[*sink].dist)) sink = l;
    }
    if (!sink) throw Error("transport: no demand node reachable");

    // Walk back to the originating source and find the bottleneck.
    Rational amount = -remaining[*sink];
    std::size_t node = *sink;
    while (label[node].pred) {
      const std::size_t prev = *label[node].pred;
      if (label[node].kind == ArcKind::backward) amount = min_of(amount, g.flow[node][prev]);
      node = prev;
    }
    const std::size_t source = node;
    amount = min_of(amount, remaining[source]);

    node = *sink;
    while (label[node].pred) {
      const std::size_t prev = *label[node].pred;
      if (label[node].kind == ArcKind::forward) {
        g.flow[prev][node] += amount;
      } else {
        g.flow[node][prev] -= amount;
      }
      node = prev;
    }
    remaining[source] -= amount;
    remaining[*sink] += amount;
  }

  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      if (g.flow[k][l] > 0) {
        plan.cost += g.flow[k][l] * g.cost(k, l);
        plan.arcs.push_back({plan.nodes[k], plan.nodes[l], g.flow[k][l]});
      }
    }
  }

  // Optimal residual graphs have no negative cycle. Distances from a virtual
  // root satisfy dist(l) - dist(k) == d(k,l) on every used arc k -> l.
  const auto label = shortest_paths(g, std::vector<bool>(m, true));
  plan.price.reserve(m);
  for (std::size_t k = 0; k < m; ++k) plan.price.push_back(-*label[k].dist);
  return plan;
}

}  // namespace deltakit
