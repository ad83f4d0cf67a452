#include "deltakit/metric.hpp"

#include <algorithm>
#include <set>

#include "deltakit/error.hpp"

namespace deltakit {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> points, std::string_view base,
                                     std::vector<Rational> row_major_dist)
    : points_(std::move(points)), dist_(std::move(row_major_dist)) {
  if (points_.empty()) {
    throw InputError("metric space needs at least one point");
  }
  if (dist_.size() != points_.size() * points_.size()) {
    throw InputError("distance table is not square over the point set");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i], i).second) {
      throw InputError("duplicate point identifier '" + points_[i] + "'");
    }
  }
  auto it = index_.find(base);
  if (it == index_.end()) {
    throw InputError("base point '" + std::string(base) + "' is not a point of the space");
  }
  base_ = it->second;
}

FiniteMetricSpace FiniteMetricSpace::from_table(const MetricTable& table) {
  const ValidationReport report = validate_metric(table);
  if (!report.ok()) {
    throw InputError("invalid metric table: " + report.message);
  }
  std::vector<Rational> flat;
  flat.reserve(table.points.size() * table.points.size());
  for (const auto& row : table.dist) {
    for (const auto& entry : row) flat.push_back(*entry);
  }
  return FiniteMetricSpace(table.points, table.base, std::move(flat));
}

std::optional<std::size_t> FiniteMetricSpace::find(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteMetricSpace::index(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw PreconditionError("unknown point '" + std::string(id) + "'");
}

FiniteMetricSpace FiniteMetricSpace::subspace(const std::vector<std::size_t>& keep) const {
  if (std::find(keep.begin(), keep.end(), base_) == keep.end()) {
    throw PreconditionError("subspace must contain the base point");
  }
  std::vector<std::string> ids;
  std::vector<Rational> flat;
  for (std::size_t i : keep) ids.push_back(points_.at(i));
  for (std::size_t i : keep) {
    for (std::size_t j : keep) flat.push_back(dist(i, j));
  }
  return FiniteMetricSpace(std::move(ids), points_[base_], std::move(flat));
}

MetricTable FiniteMetricSpace::to_table() const {
  MetricTable t;
  t.points = points_;
  t.base = points_[base_];
  t.dist.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) t.dist[i].emplace_back(dist(i, j));
  }
  return t;
}

namespace {

ValidationReport fail(ValidationStatus status, std::string message,
                      std::vector<std::string> witness = {}) {
  return ValidationReport{status, std::move(message), std::move(witness)};
}

template <typename Dist>
ValidationReport check_axioms(const std::vector<std::string>& ids, Dist&& d) {
  const std::size_t n = ids.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (d(p, p) != 0) {
      return fail(ValidationStatus::axiom_violated, "d(" + ids[p] + "," + ids[p] + ") != 0", {ids[p]});
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (d(p, q) <= 0) {
        return fail(ValidationStatus::axiom_violated,
                    "d(" + ids[p] + "," + ids[q] + ") must be positive", {ids[p], ids[q]});
      }
      if (d(p, q) != d(q, p)) {
        return fail(ValidationStatus::axiom_violated,
                    "asymmetric distance between " + ids[p] + " and " + ids[q], {ids[p], ids[q]});
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t r = 0; r < n; ++r) {
        if (d(p, r) > d(p, q) + d(q, r)) {
          return fail(ValidationStatus::axiom_violated,
                      "triangle inequality fails: d(" + ids[p] + "," + ids[r] + ") > d(" + ids[p] +
                          "," + ids[q] + ") + d(" + ids[q] + "," + ids[r] + ")",
                      {ids[p], ids[q], ids[r]});
        }
      }
    }
  }
  return {};
}

}  // namespace

ValidationReport validate_metric(const MetricTable& table) {
  const std::size_t n = table.points.size();
  if (n == 0) return fail(ValidationStatus::malformed, "empty point set");
  std::set<std::string> seen;
  for (const auto& id : table.points) {
    if (!seen.insert(id).second) {
      return fail(ValidationStatus::malformed, "duplicate point identifier '" + id + "'", {id});
    }
  }
  if (!seen.contains(table.base)) {
    return fail(ValidationStatus::malformed, "base point '" + table.base + "' not in point set");
  }
  if (table.dist.size() != n) {
    return fail(ValidationStatus::malformed, "distance table has " + std::to_string(table.dist.size()) +
                                                 " rows, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (table.dist[i].size() != n) {
      return fail(ValidationStatus::malformed, "row " + table.points[i] + " has wrong length",
                  {table.points[i]});
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = table.dist[i][j];
      if (!e) {
        return fail(ValidationStatus::malformed,
                    "missing entry d(" + table.points[i] + "," + table.points[j] + ")",
                    {table.points[i], table.points[j]});
      }
      if (*e < 0) {
        return fail(ValidationStatus::malformed,
                    "negative entry d(" + table.points[i] + "," + table.points[j] + ")",
                    {table.points[i], table.points[j]});
      }
    }
  }
  return check_axioms(table.points,
                      [&](std::size_t i, std::size_t j) -> const Rational& { return *table.dist[i][j]; });
}

ValidationReport validate_metric(const FiniteMetricSpace& space) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (space.dist(i, j) < 0) {
        return fail(ValidationStatus::malformed,
                    "negative entry d(" + space.id(i) + "," + space.id(j) + ")", {space.id(i), space.id(j)});
      }
    }
  }
  return check_axioms(space.points(),
                      [&](std::size_t i, std::size_t j) -> const Rational& { return space.dist(i, j); });
}

std::vector<std::size_t> metric_segment(const FiniteMetricSpace& space, std::size_t x, std::size_t y) {
  if (x >= space.size() || y >= space.size()) {
    throw PreconditionError("segment endpoint out of range");
  }
  std::vector<std::size_t> out;
  const Rational& dxy = space.dist(x, y);
  for (std::size_t p = 0; p < space.size(); ++p) {
    if (space.dist(x, p) + space.dist(p, y) == dxy) out.push_back(p);
  }
  return out;
}

std::vector<std::size_t> metric_segment(const FiniteMetricSpace& space, std::string_view x,
                                        std::string_view y) {
  return metric_segment(space, space.index(x), space.index(y));
}

// ---------------------------------------------------------------------------

std::string GridPoint::id() const { return to_string(a) + "," + to_string(b); }

GridPoint GridPoint::parse(std::string_view id) {
  const auto comma = id.find(',');
  if (comma == std::string_view::npos) {
    throw InputError("grid point id '" + std::string(id) + "' lacks a comma");
  }
  return GridPoint{parse_rational(id.substr(0, comma)), parse_rational(id.substr(comma + 1))};
}

Rational ladder_distance(const GridPoint& p, const GridPoint& q) {
  if (p.b == q.b) return abs_value(p.a - q.a);
  const Rational s = p.a + q.a;
  const Rational across = 2 - s;
  return min_of(s, across) + abs_value(p.b - q.b);
}

namespace landmarks {
GridPoint x() { return {Rational(0), Rational(0)}; }
GridPoint y() { return {Rational(1), Rational(0)}; }
GridPoint u() { return {Rational(0), make_rational(1, 2)}; }
GridPoint v() { return {Rational(1), make_rational(1, 2)}; }
}  // namespace landmarks

std::vector<std::vector<GridPoint>> example_rows(ExampleKind kind, int level) {
  if (level < 1) throw PreconditionError("example level must be >= 1");
  std::vector<std::vector<GridPoint>> rows;
  rows.push_back({landmarks::x(), landmarks::y()});
  for (int n = 1; n <= level; ++n) {
    std::vector<GridPoint> row;
    const Rational height = pow2(-n);
    if (kind == ExampleKind::relative_not_daugavet) {
      if (n == 1) {
        row = {landmarks::u(), landmarks::v()};
      } else {
        const long count = 1L << n;
        for (long k = 0; k <= count; ++k) row.push_back({make_rational(k, count), height});
      }
    } else {
      const long count = 1L << (n - 1);
      for (long k = 0; k <= count; ++k) row.push_back({make_rational(k, count), height});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

FiniteMetricSpace example_space(ExampleKind kind, int level) {
  std::vector<GridPoint> pts;
  for (auto& row : example_rows(kind, level)) {
    pts.insert(pts.end(), row.begin(), row.end());
  }
  std::vector<std::string> ids;
  std::vector<Rational> flat;
  flat.reserve(pts.size() * pts.size());
  for (const auto& p : pts) ids.push_back(p.id());
  for (const auto& p : pts) {
    for (const auto& q : pts) flat.push_back(ladder_distance(p, q));
  }
  return FiniteMetricSpace(std::move(ids), landmarks::x().id(), std::move(flat));
}

}  // namespace deltakit
