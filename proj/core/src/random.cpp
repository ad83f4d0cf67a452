#include "deltakit/random.hpp"

#include <limits>
#include <string>

#include "deltakit/error.hpp"

namespace deltakit {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % n;
}

long Rng::between(long lo, long hi) {
  if (hi < lo) throw PreconditionError("empty range");
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rational Rng::rational(long max_num, long max_den) {
  const long num = between(-max_num, max_num);
  const long den = between(1, max_den);
  return make_rational(num, den);
}

Rational Rng::positive(long max_value, long max_den) {
  const long den = between(1, max_den);
  const long num = between(1, max_value * den);
  return make_rational(num, den);
}

FiniteMetricSpace random_metric_space(Rng& rng, std::size_t points) {
  if (points == 0) throw PreconditionError("metric space needs a point");
  const std::size_t n = points;
  std::vector<Rational> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational w = rng.positive(4, 4);
      d[i * n + j] = w;
      d[j * n + i] = w;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        Rational via = d[i * n + k] + d[k * n + j];
        if (i != k && j != k && via < d[i * n + j]) d[i * n + j] = std::move(via);
      }
    }
  }
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  return FiniteMetricSpace(ids, ids.front(), std::move(d));
}

WeightedTree random_tree(Rng& rng, std::size_t vertices) {
  if (vertices == 0) throw PreconditionError("tree needs a vertex");
  std::vector<std::string> ids;
  std::vector<TreeEdge> edges;
  for (std::size_t i = 0; i < vertices; ++i) {
    ids.push_back("v" + std::to_string(i));
    if (i > 0) edges.push_back({static_cast<std::size_t>(rng.below(i)), i, rng.positive(3, 4)});
  }
  return WeightedTree(ids, std::move(edges), ids.front());
}

LipschitzFunction random_lipschitz(Rng& rng, const SpaceRef& space, const std::map<std::size_t, Rational>& fixed) {
  if (lipschitz_constant(*space, fixed) > 1) throw PreconditionError("fixed data is not 1-Lipschitz");
  std::map<std::size_t, Rational> assigned = fixed;
  for (std::size_t p = 0; p < space->size(); ++p) {
    if (assigned.count(p)) continue;
    std::optional<Rational> lo;
    std::optional<Rational> hi;
    for (const auto& [q, value] : assigned) {
      Rational down = value - space->dist(p, q);
      Rational up = value + space->dist(p, q);
      if (!lo || down > *lo) lo = std::move(down);
      if (!hi || up < *hi) hi = std::move(up);
    }
    if (!lo) {
      assigned.emplace(p, Rational(0));
      continue;
    }
    assigned.emplace(p, *lo + (*hi - *lo) * make_rational(rng.between(0, 16), 16));
  }
  std::vector<Rational> values;
  for (const auto& [p, value] : assigned) values.push_back(value);
  return LipschitzFunction(space, std::move(values));
}

}  // namespace deltakit
