#pragma once

// Absolute normalized norms on the plane: polyhedral norms given by the
// boundary of the unit ball in the closed positive quadrant, and the lp
// family. All predicates are exact.

#include <optional>
#include <variant>
#include <vector>

#include "deltakit/rational.hpp"

namespace deltakit {

struct PlanePoint {
  Rational a;
  Rational b;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
  friend PlanePoint operator+(const PlanePoint& p, const PlanePoint& q) { return {p.a + q.a, p.b + q.b}; }
  friend PlanePoint operator-(const PlanePoint& p, const PlanePoint& q) { return {p.a - q.a, p.b - q.b}; }
  friend PlanePoint operator*(const Rational& s, const PlanePoint& p) { return {s * p.a, s * p.b}; }
};

Rational dot(const PlanePoint& p, const PlanePoint& q);
Rational cross(const PlanePoint& p, const PlanePoint& q);

class PolyhedralNorm {
 public:
  /// Cone vertices from (1,0) to (0,1) with a non-increasing, b
  /// non-decreasing and a strict left turn at every interior vertex.
  /// Throws InputError otherwise.
  explicit PolyhedralNorm(std::vector<PlanePoint> cone_vertices);

  const std::vector<PlanePoint>& cone_vertices() const { return cone_; }
  /// Normals (c,d) with c*a + d*b == 1 along each cone edge, in order.
  const std::vector<PlanePoint>& edge_normals() const { return normals_; }

  Rational operator()(const PlanePoint& p) const;

  friend bool operator==(const PolyhedralNorm& x, const PolyhedralNorm& y) { return x.cone_ == y.cone_; }

 private:
  std::vector<PlanePoint> cone_;
  std::vector<PlanePoint> normals_;
};

class LpNorm {
 public:
  /// p >= 1; throws InputError otherwise.
  static LpNorm finite(Rational p);
  static LpNorm infinity() { return LpNorm(); }

  bool is_infinite() const { return !exponent_; }
  const Rational& exponent() const { return *exponent_; }

  friend bool operator==(const LpNorm&, const LpNorm&) = default;

 private:
  LpNorm() = default;
  std::optional<Rational> exponent_;
};

using AbsNorm2 = std::variant<PolyhedralNorm, LpNorm>;

/// Cone vertices (1,0), (3/4,1/2), (1/2,3/4), (0,1).
PolyhedralNorm figure_alpha_norm();

/// lp for p in {1, infinity} as a polyhedral norm; none for 1 < p < infinity.
std::optional<PolyhedralNorm> as_polyhedral(const AbsNorm2& norm);

/// Sign of N(p) - threshold. For lp with non-integer p the comparison
/// brackets rational roots with growing precision and throws LimitError if
/// still undecided at the cap.
int norm_cmp(const AbsNorm2& norm, const PlanePoint& p, const Rational& threshold);

/// N(p) when it is rational (always for polyhedral norms).
std::optional<Rational> norm_value(const AbsNorm2& norm, const PlanePoint& p);

bool on_unit_sphere(const AbsNorm2& norm, const PlanePoint& p);

PolyhedralNorm dual_norm(const PolyhedralNorm& norm);
/// Polyhedral duals by polarity, lp duals by the conjugate exponent.
AbsNorm2 dual_norm(const AbsNorm2& norm);

/// Vertices of the full unit ball, counterclockwise, without points
/// interior to facets.
std::vector<PlanePoint> extreme_points(const PolyhedralNorm& norm);

struct VPointWitness {
  PlanePoint y;
  PlanePoint z;
};

/// Throws PreconditionError unless x is on the unit sphere.
bool is_v_point(const AbsNorm2& norm, const PlanePoint& x);
/// Decides the sphere point in the direction of a nonzero vector, which may
/// be irrational for lp norms.
bool is_v_point_along(const AbsNorm2& norm, const PlanePoint& direction);
/// Neighbouring extreme points for polyhedral vertices; none otherwise.
std::optional<VPointWitness> v_point_witness(const AbsNorm2& norm, const PlanePoint& x);
/// ||x+y|| = ||x+z|| = 2 > ||y+z|| with y, z on the sphere.
bool witness_is_valid(const AbsNorm2& norm, const PlanePoint& x, const VPointWitness& w);

struct VPointDecomposition {
  PlanePoint first;
  PlanePoint second;
  Rational weight;  // x = weight * first + (1 - weight) * second
};

std::optional<VPointDecomposition> vpoint_decomposition(const AbsNorm2& norm, const PlanePoint& x);

bool is_polyhedral(const AbsNorm2& norm);

/// Requires a, b >= 0 and N(a,b) = 1.
bool transfer_predicate(const AbsNorm2& norm, const PlanePoint& x);

struct SupportingSlice {
  PlanePoint functional;  // x*(p) = c*a + d*b
  Rational width;
  PlanePoint first;       // extreme points every subslice must meet
  PlanePoint second;
  Rational separation;    // ||y1 + y2|| (vertex case) or max ||y_i + x|| (facet case)
  bool vertex_case = false;
};

/// x on the unit sphere; throws PreconditionError otherwise.
SupportingSlice supporting_slice_construction(const PolyhedralNorm& norm, const PlanePoint& x);

struct SliceVerification {
  bool supports = false;          // x*(x) = 1 and dual norm of x* is 1
  bool separation_bound = false;  // ||y1+y2|| < 2 - 2 width, or max ||y_i+x|| < 2 - width
  std::vector<PlanePoint> extreme_in_slice;
  bool extreme_points_ok = false; // nonempty and contained in {first, second}
  std::size_t faces_probed = 0;
  bool faces_ok = false;          // every exposed face inside the slice meets {first, second}

  bool ok() const { return supports && separation_bound && extreme_points_ok && faces_ok; }
};

SliceVerification verify_supporting_slice(const PolyhedralNorm& norm, const PlanePoint& x,
                                          const SupportingSlice& slice);

}  // namespace deltakit
