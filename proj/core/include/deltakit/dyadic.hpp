#pragma once

// A dyadic tree of step functions in L1[0,1].
//
// [0,1/2) is cut into rows B_n = [2^-n-1, 2^-n) and [1/2,1) into C_n = 1/2 + B_n.
// A node t (a bit string) halves a row |t| times, left half for 0, giving
// the cells B_n^t and C_n^t of measure 2^(-|t|-n-1). Every node t with |t| >= 1
// carries
//   f_t = 2^(|t|+1) (1 on C_|t|^t and on B_i^t for i <= |t|)
//   h_t = 2^(|t|+1) (1 on B_i^t for every i >= 1).
// Elements of span{f_t, h_t} are evaluated exactly on cells; rows below the
// deepest node repeat one pattern whose mass halves per row, so the infinite
// tail sums in closed form.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deltakit/random.hpp"
#include "deltakit/rational.hpp"

namespace deltakit {

class Node {
 public:
  Node() = default;
  /// Bits '0'/'1', possibly empty. Throws InputError on other characters.
  static Node parse(std::string_view bits);
  static Node from_index(std::uint64_t value, std::size_t depth);

  std::size_t depth() const { return bits_.size(); }
  bool bit(std::size_t i) const { return bits_.at(i) == '1'; }
  const std::string& bits() const { return bits_; }
  /// Bits read as a binary number, first bit most significant.
  std::uint64_t index() const;

  Node prefix(std::size_t length) const;
  Node child(bool bit) const;
  bool is_prefix_of(const Node& other) const;

  friend bool operator==(const Node&, const Node&) = default;
  friend std::strong_ordering operator<=>(const Node& x, const Node& y);

 private:
  std::string bits_;
};

/// All nodes of the given depth in index order.
std::vector<Node> nodes_at_depth(std::size_t depth);
/// Extensions of t by exactly `extra` bits.
std::vector<Node> extensions(const Node& t, std::size_t extra);

struct DyadicInterval {
  Rational lo;
  Rational hi;

  Rational measure() const { return hi - lo; }
};

/// B_n^t and C_n^t; n >= 1 (PreconditionError otherwise), t may be empty.
DyadicInterval b_set(const Node& t, long n);
DyadicInterval c_set(const Node& t, long n);

/// A function constant on [k/2^L, (k+1)/2^L).
class DyadicStep {
 public:
  static constexpr std::size_t kMaxResolution = 20;

  /// The zero function. Throws LimitError above kMaxResolution.
  explicit DyadicStep(std::size_t resolution);
  DyadicStep(std::size_t resolution, std::vector<Rational> values);

  std::size_t resolution() const { return resolution_; }
  const std::vector<Rational>& values() const { return values_; }

  DyadicStep refined(std::size_t resolution) const;
  /// Adds value on the interval; endpoints must lie on the grid.
  void add_indicator(const DyadicInterval& interval, const Rational& value);

  Rational l1_norm() const;
  Rational l1_norm_on(const DyadicInterval& interval) const;

  DyadicStep& operator+=(const DyadicStep& other);
  DyadicStep& operator-=(const DyadicStep& other);
  DyadicStep& operator*=(const Rational& scale);
  friend DyadicStep operator+(DyadicStep a, const DyadicStep& b) { return a += b; }
  friend DyadicStep operator-(DyadicStep a, const DyadicStep& b) { return a -= b; }
  friend DyadicStep operator*(const Rational& s, DyadicStep a) { return a *= s; }
  /// Equal as functions, at any pair of resolutions.
  friend bool operator==(const DyadicStep& a, const DyadicStep& b);

 private:
  std::pair<std::size_t, std::size_t> cell_range(const DyadicInterval& interval) const;

  std::size_t resolution_;
  std::vector<Rational> values_;
};

/// Throws PreconditionError for the empty node.
DyadicStep f_fn(const Node& t);
/// 2^-m times the sum of f_u over the extensions u of t by m bits.
DyadicStep h_fn_approx(const Node& t, std::size_t m);
/// h_t restricted to the rows B_1, ..., B_rows.
DyadicStep h_fn_truncated(const Node& t, std::size_t rows);

/// Finite combination sum a_t f_t + sum b_t h_t. Zero coefficients are
/// dropped; the empty node is rejected.
class TreeSpanElement {
 public:
  TreeSpanElement() = default;
  TreeSpanElement(const std::map<Node, Rational>& f, const std::map<Node, Rational>& h);

  static TreeSpanElement f_node(const Node& t, const Rational& coeff = Rational(1));
  static TreeSpanElement h_node(const Node& t, const Rational& coeff = Rational(1));

  const std::map<Node, Rational>& f() const { return f_; }
  const std::map<Node, Rational>& h() const { return h_; }
  bool is_zero() const { return f_.empty() && h_.empty(); }
  /// Deepest node, 0 for the zero element.
  std::size_t depth() const;

  TreeSpanElement& operator+=(const TreeSpanElement& other);
  TreeSpanElement& operator-=(const TreeSpanElement& other);
  TreeSpanElement& operator*=(const Rational& scale);
  friend TreeSpanElement operator+(TreeSpanElement a, const TreeSpanElement& b) { return a += b; }
  friend TreeSpanElement operator-(TreeSpanElement a, const TreeSpanElement& b) { return a -= b; }
  friend TreeSpanElement operator*(const Rational& s, TreeSpanElement a) { return a *= s; }
  friend bool operator==(const TreeSpanElement&, const TreeSpanElement&) = default;

 private:
  std::map<Node, Rational> f_;
  std::map<Node, Rational> h_;
};

enum class CellKind { b, c };

/// B_row^node or C_row^node; row >= 1.
struct CellRef {
  CellKind kind;
  long row;
  Node node;
};

using Region = std::vector<CellRef>;

/// A function constant on every B_j^s and C_j^s with |s| = depth and
/// j <= depth, and constant in j on the deeper rows of each node s.
class CellFunction {
 public:
  static constexpr std::size_t kMaxDepth = 16;

  /// The zero function. Throws LimitError above kMaxDepth.
  explicit CellFunction(std::size_t depth);
  /// Requires depth >= e.depth().
  static CellFunction of(const TreeSpanElement& e, std::size_t depth);
  static CellFunction of(const TreeSpanElement& e) { return of(e, e.depth()); }

  std::size_t depth() const { return depth_; }
  std::size_t width() const { return std::size_t{1} << depth_; }

  /// Any row >= 1; rows beyond depth read the tail.
  const Rational& value(CellKind kind, long row, std::uint64_t s) const;
  void set(CellKind kind, long row, std::uint64_t s, Rational v);
  void set_tail(CellKind kind, std::uint64_t s, Rational v);

  CellFunction refined(std::size_t depth) const;
  /// Mean value over B_row^node or C_row^node.
  Rational average(CellKind kind, long row, const Node& node) const;

  Rational l1_norm() const;
  Rational sup_abs() const;
  /// -1, 0 or 1 on every cell.
  CellFunction sign() const;

  friend bool operator==(const CellFunction& a, const CellFunction& b);

 private:
  std::size_t slot(long row, std::uint64_t s) const { return static_cast<std::size_t>(row - 1) * width() + s; }

  std::size_t depth_;
  std::vector<Rational> b_;
  std::vector<Rational> c_;
  std::vector<Rational> b_tail_;
  std::vector<Rational> c_tail_;
};

/// Integral of the product.
Rational pair(const CellFunction& functional, const CellFunction& g);
Rational pair(const CellFunction& functional, const TreeSpanElement& e);
Rational pair_f(const CellFunction& functional, const Node& u);
Rational pair_h(const CellFunction& functional, const Node& t);

Rational l1_norm(const TreeSpanElement& e);
/// Independent evaluation by dense integration of the rows above the tail.
Rational l1_norm_by_integration(const TreeSpanElement& e);

/// L1 norm and integral of e on a union of cells.
Rational restricted_norm(const TreeSpanElement& e, const Region& region);
Rational restricted_integral(const TreeSpanElement& e, const Region& region);

/// Closed form for f-span elements; throws PreconditionError if h-part present.
Rational span_norm_formula(const TreeSpanElement& e);

struct InequalityResult {
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

/// alpha[i-1] holds alpha_i; requires 1 <= m <= n <= alpha.size().
InequalityResult cascade_inequality_check(const std::vector<Rational>& alpha, long m, long n);

/// ||g on B_1 u ... u B_m|| <= (1 - 2^-m) ||g|| for an f-span element g.
InequalityResult concentration_check(const TreeSpanElement& g, long m);

/// Distance ||f_t - h|| when h lies in the slice {||h|| <= 1,
/// <1 on supp f_t, h> > 1 - 2^-|t| eps}; none otherwise.
std::optional<Rational> exposure_distance(const Node& t, const Rational& eps, const TreeSpanElement& h);

struct ExposureReport {
  Node node;
  Rational eps;
  Rational width;               // 2^-|t| eps
  std::size_t directed = 0;
  std::size_t rejection_attempts = 0;
  std::size_t rejection_accepted = 0;
  std::size_t violations = 0;   // members with ||f_t - h|| >= 2 eps
  Rational max_distance;

  std::size_t samples() const { return directed + rejection_accepted; }
  bool ok() const { return violations == 0; }
};

/// Requires a nonempty node and 0 < eps < 1.
ExposureReport exposure_experiment(const Node& t, const Rational& eps, std::size_t samples, Rng& rng);

struct MartingaleReport {
  long level = 0;
  std::size_t nodes_checked = 0;
  bool martingale_ok = true;
  Rational coefficient_sum;
  Rational norm;
  Rational norm_by_integration;
  bool isometry_ok = false;

  bool ok() const { return martingale_ok && isometry_ok; }
};

/// h_t = (h_t0 + h_t1)/2 for 1 <= |t| <= level, and ||sum a_t h_t|| = sum |a_t|
/// for coefficients on nodes of depth exactly `level`.
MartingaleReport martingale_and_isometry_check(long level, const std::map<Node, Rational>& a);

/// <1_P - 1_N, f_s> with P = B_{|t|+1}^t u C_{|t|+1}^t and N = C_|t|^t.
Rational separation_functional_value(const Node& t, const Node& s);

struct NotRelativeDaugavetWitness {
  Node level_node;        // t with sign(alpha_t) h_t in the slice
  std::size_t descent = 0;
  Node node;              // u
  int sign = 1;
  Rational slice_value;   // <x*, sign f_u>
  Rational distance_plus;   // ||g + f_u||
  Rational distance_minus;  // ||g - f_u||

  bool ok() const { return min_of(distance_plus, distance_minus) < 2; }
};

/// g in the h-span with ||g|| = 1; x* with sup |x*| = 1, x*(g) = 1 and
/// x* = 0 off the support of g; eps > 0. Throws PreconditionError otherwise.
NotRelativeDaugavetWitness not_relative_daugavet_witness(const TreeSpanElement& g, const CellFunction& functional,
                                                         const Rational& eps);

struct DeltaWitness {
  TreeSpanElement y;
  Rational norm;
  Rational functional_value;
  Rational distance;
  Rational support_measure;

  bool ok(const Rational& alpha, const Rational& eps) const {
    return norm <= 1 && functional_value > 1 - alpha && distance >= 2 - eps;
  }
};

/// g in the h-span with ||g|| = 1 and x*(g) > 1 - alpha, sup |x*| <= 1.
/// Returns y in the h-span slice with ||g - y|| >= 2 - eps.
DeltaWitness delta_witness(const TreeSpanElement& g, const CellFunction& functional, const Rational& alpha,
                           const Rational& eps);

}  // namespace deltakit
