#pragma once

// Finite pointed metric spaces with exact rational distance tables, the
// metric validator, metric segments, and the two ladder-shaped example spaces
// (rows S_0..S_level of grid points in [0,1] x [0,1/2]).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deltakit/rational.hpp"

namespace deltakit {

/// Raw distance table as read from external input; entries may be missing.
struct MetricTable {
  std::vector<std::string> points;
  std::string base;
  std::vector<std::vector<std::optional<Rational>>> dist;
};

enum class ValidationStatus {
  ok,
  malformed,      // missing entry, negative value, wrong shape, bad base
  axiom_violated  // identity, symmetry or triangle inequality fails
};

struct ValidationReport {
  ValidationStatus status = ValidationStatus::ok;
  std::string message;
  /// Witnessing identifiers: one point (identity), a pair (symmetry,
  /// positivity) or a triple (p,q,r) with d(p,r) > d(p,q) + d(q,r).
  std::vector<std::string> witness;

  bool ok() const { return status == ValidationStatus::ok; }
};

/// Pointed finite metric space. Construction only checks the shape of the
/// table; use validate_metric (or from_table) for the metric axioms.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> points, std::string_view base,
                    std::vector<Rational> row_major_dist);

  /// Validates `table` and throws InputError with the report message on failure.
  static FiniteMetricSpace from_table(const MetricTable& table);

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& id(std::size_t i) const { return points_.at(i); }
  std::size_t base() const { return base_; }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws PreconditionError for unknown identifiers.
  std::size_t index(std::string_view id) const;

  const Rational& dist(std::size_t i, std::size_t j) const { return dist_[i * points_.size() + j]; }

  /// The subspace on `keep` (indices into this space, must contain base).
  FiniteMetricSpace subspace(const std::vector<std::size_t>& keep) const;

  MetricTable to_table() const;

 private:
  std::vector<std::string> points_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::size_t base_ = 0;
  std::vector<Rational> dist_;
};

ValidationReport validate_metric(const MetricTable& table);
ValidationReport validate_metric(const FiniteMetricSpace& space);

/// { p : d(x,p) + d(p,y) = d(x,y) }, as sorted indices.
std::vector<std::size_t> metric_segment(const FiniteMetricSpace& space, std::size_t x, std::size_t y);
std::vector<std::size_t> metric_segment(const FiniteMetricSpace& space, std::string_view x,
                                        std::string_view y);

// ---------------------------------------------------------------------------
// Example spaces

struct GridPoint {
  Rational a;
  Rational b;

  /// "a_num/a_den,b_num/b_den"
  std::string id() const;
  static GridPoint parse(std::string_view id);

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// |a1 - a2| on a common row, otherwise min{a1 + a2, 2 - (a1 + a2)} + |b1 - b2|.
Rational ladder_distance(const GridPoint& p, const GridPoint& q);

enum class ExampleKind {
  relative_not_daugavet,  // example A: S_1 = {u, v}, S_n = {(k/2^n, 1/2^n)}
  delta_not_relative      // example B: S_n = {(k/2^(n-1), 1/2^n)}
};

/// Rows S_0, ..., S_level in generation order.
std::vector<std::vector<GridPoint>> example_rows(ExampleKind kind, int level);

FiniteMetricSpace example_space(ExampleKind kind, int level);
inline FiniteMetricSpace example_space_a(int level) {
  return example_space(ExampleKind::relative_not_daugavet, level);
}
inline FiniteMetricSpace example_space_b(int level) {
  return example_space(ExampleKind::delta_not_relative, level);
}

/// Landmark points shared by both examples.
namespace landmarks {
GridPoint x();  // (0, 0), the base point
GridPoint y();  // (1, 0)
GridPoint u();  // (0, 1/2)
GridPoint v();  // (1, 1/2)
}  // namespace landmarks

}  // namespace deltakit
