#include "deltakit/absnorm.hpp"

#include <algorithm>

#include "deltakit/error.hpp"

namespace deltakit {

Rational dot(const PlanePoint& p, const PlanePoint& q) { return p.a * q.a + p.b * q.b; }
Rational cross(const PlanePoint& p, const PlanePoint& q) { return p.a * q.b - p.b * q.a; }

namespace {

PlanePoint abs_point(const PlanePoint& p) { return {abs_value(p.a), abs_value(p.b)}; }

// The (c,d) with c*a + d*b == 1 at both p and q.
PlanePoint facet_normal(const PlanePoint& p, const PlanePoint& q) {
  const Rational det = cross(p, q);
  if (det == 0) throw Error("facet passes through the origin");
  return {(q.b - p.b) / det, (p.a - q.a) / det};
}

Rational rational_pow(const Rational& x, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), x.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

struct Bracket {
  Rational lo;
  Rational hi;
  bool exact = false;
};

// x^(1/s) for x >= 0, within 2^-bits / den(x).
Bracket root_bracket(const Rational& x, unsigned long s, unsigned long bits) {
  if (x == 0 || s == 1) return {x, x, true};
  Integer scaled;
  mpz_pow_ui(scaled.get_mpz_t(), x.get_den_mpz_t(), s - 1);
  scaled *= x.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), bits * s);
  Integer root;
  const bool exact = mpz_root(root.get_mpz_t(), scaled.get_mpz_t(), s) != 0;
  Integer denom = x.get_den();
  mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), bits);
  Rational lo(root, denom);
  lo.canonicalize();
  if (exact) return {lo, lo, true};
  Rational hi(root + 1, denom);
  hi.canonicalize();
  return {lo, hi, false};
}

std::optional<Rational> exact_root(const Rational& x, unsigned long s) {
  auto b = root_bracket(x, s, 0);
  if (b.exact) return b.lo;
  return std::nullopt;
}

unsigned long small_integer(const Integer& z) {
  if (!z.fits_ulong_p() || z > 4096) throw LimitError("lp exponent has too large a numerator or denominator");
  return z.get_ui();
}

constexpr unsigned long kMaxBits = 1UL << 14;

int cmp_sign(const Rational& x, const Rational& y) { return x < y ? -1 : (x > y ? 1 : 0); }

int lp_cmp(const LpNorm& norm, const PlanePoint& p, const Rational& threshold) {
  const PlanePoint q = abs_point(p);
  if (threshold < 0) return 1;
  if (threshold == 0) return (q.a == 0 && q.b == 0) ? 0 : 1;
  if (norm.is_infinite()) return cmp_sign(max_of(q.a, q.b), threshold);
  const unsigned long r = small_integer(norm.exponent().get_num());
  const unsigned long s = small_integer(norm.exponent().get_den());
  const Rational pa = rational_pow(q.a, r);
  const Rational pb = rational_pow(q.b, r);
  const Rational pt = rational_pow(threshold, r);
  if (s == 1) return cmp_sign(pa + pb, pt);
  for (unsigned long bits = 32; bits <= kMaxBits; bits *= 2) {
    const Bracket ba = root_bracket(pa, s, bits);
    const Bracket bb = root_bracket(pb, s, bits);
    const Bracket bt = root_bracket(pt, s, bits);
    if (ba.exact && bb.exact && bt.exact) return cmp_sign(ba.lo + bb.lo, bt.lo);
    if (ba.hi + bb.hi < bt.lo) return -1;
    if (ba.lo + bb.lo > bt.hi) return 1;
  }
  throw LimitError("lp norm comparison undecided at the precision cap");
}

}  // namespace

// ---------------------------------------------------------------------------

PolyhedralNorm::PolyhedralNorm(std::vector<PlanePoint> cone_vertices) : cone_(std::move(cone_vertices)) {
  if (cone_.size() < 2) throw InputError("cone vertex list needs at least (1,0) and (0,1)");
  if (!(cone_.front() == PlanePoint{Rational(1), Rational(0)}) ||
      !(cone_.back() == PlanePoint{Rational(0), Rational(1)})) {
    throw InputError("cone vertex list must run from (1,0) to (0,1)");
  }
  for (std::size_t i = 0; i + 1 < cone_.size(); ++i) {
    const PlanePoint step = cone_[i + 1] - cone_[i];
    if (step.a > 0 || step.b < 0 || (step.a == 0 && step.b == 0)) {
      throw InputError("cone vertices must move monotonically from (1,0) to (0,1)");
    }
    if (i > 0 && cross(cone_[i] - cone_[i - 1], step) <= 0) {
      throw InputError("cone vertices are not in strictly convex position");
    }
  }
  for (std::size_t i = 0; i + 1 < cone_.size(); ++i) normals_.push_back(facet_normal(cone_[i], cone_[i + 1]));
}

Rational PolyhedralNorm::operator()(const PlanePoint& p) const {
  const PlanePoint q = abs_point(p);
  Rational best = dot(normals_.front(), q);
  for (const auto& n : normals_) best = max_of(best, dot(n, q));
  return best;
}

LpNorm LpNorm::finite(Rational p) {
  if (p < 1) throw InputError("lp exponent must be at least 1");
  LpNorm n;
  n.exponent_ = std::move(p);
  return n;
}

PolyhedralNorm figure_alpha_norm() {
  return PolyhedralNorm({{Rational(1), Rational(0)},
                         {make_rational(3, 4), make_rational(1, 2)},
                         {make_rational(1, 2), make_rational(3, 4)},
                         {Rational(0), Rational(1)}});
}

std::optional<PolyhedralNorm> as_polyhedral(const AbsNorm2& norm) {
  if (const auto* poly = std::get_if<PolyhedralNorm>(&norm)) return *poly;
  const auto& lp = std::get<LpNorm>(norm);
  if (lp.is_infinite()) {
    return PolyhedralNorm({{Rational(1), Rational(0)}, {Rational(1), Rational(1)}, {Rational(0), Rational(1)}});
  }
  if (lp.exponent() == 1) return PolyhedralNorm({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  return std::nullopt;
}

int norm_cmp(const AbsNorm2& norm, const PlanePoint& p, const Rational& threshold) {
  if (const auto* poly = std::get_if<PolyhedralNorm>(&norm)) return cmp_sign((*poly)(p), threshold);
  return lp_cmp(std::get<LpNorm>(norm), p, threshold);
}

std::optional<Rational> norm_value(const AbsNorm2& norm, const PlanePoint& p) {
  if (const auto* poly = std::get_if<PolyhedralNorm>(&norm)) return (*poly)(p);
  const auto& lp = std::get<LpNorm>(norm);
  const PlanePoint q = abs_point(p);
  if (lp.is_infinite()) return max_of(q.a, q.b);
  const unsigned long r = small_integer(lp.exponent().get_num());
  const unsigned long s = small_integer(lp.exponent().get_den());
  const auto ra = exact_root(rational_pow(q.a, r), s);
  const auto rb = exact_root(rational_pow(q.b, r), s);
  if (!ra || !rb) return std::nullopt;
  // N = (A + B)^(s/r)
  return exact_root(rational_pow(*ra + *rb, s), r);
}

bool on_unit_sphere(const AbsNorm2& norm, const PlanePoint& p) { return norm_cmp(norm, p, Rational(1)) == 0; }

PolyhedralNorm dual_norm(const PolyhedralNorm& norm) {
  std::vector<PlanePoint> cone;
  const PlanePoint e1{Rational(1), Rational(0)};
  const PlanePoint e2{Rational(0), Rational(1)};
  if (!(norm.edge_normals().front() == e1)) cone.push_back(e1);
  for (const auto& n : norm.edge_normals()) cone.push_back(n);
  if (!(norm.edge_normals().back() == e2)) cone.push_back(e2);
  return PolyhedralNorm(std::move(cone));
}

AbsNorm2 dual_norm(const AbsNorm2& norm) {
  if (const auto* poly = std::get_if<PolyhedralNorm>(&norm)) return dual_norm(*poly);
  const auto& lp = std::get<LpNorm>(norm);
  if (lp.is_infinite()) return LpNorm::finite(Rational(1));
  if (lp.exponent() == 1) return LpNorm::infinity();
  return LpNorm::finite(lp.exponent() / (lp.exponent() - 1));
}

std::vector<PlanePoint> extreme_points(const PolyhedralNorm& norm) {
  const auto& cone = norm.cone_vertices();
  std::vector<PlanePoint> ring;
  for (const auto& p : cone) ring.push_back(p);
  for (auto it = cone.rbegin(); it != cone.rend(); ++it) ring.push_back({-it->a, it->b});
  for (const auto& p : cone) ring.push_back({-p.a, -p.b});
  for (auto it = cone.rbegin(); it != cone.rend(); ++it) ring.push_back({it->a, -it->b});

  std::vector<PlanePoint> unique;
  for (const auto& p : ring) {
    if (unique.empty() || !(unique.back() == p)) unique.push_back(p);
  }
  while (unique.size() > 1 && unique.front() == unique.back()) unique.pop_back();

  bool removed = true;
  while (removed && unique.size() > 3) {
    removed = false;
    const std::size_t m = unique.size();
    for (std::size_t i = 0; i < m; ++i) {
      const PlanePoint& prev = unique[(i + m - 1) % m];
      const PlanePoint& next = unique[(i + 1) % m];
      if (cross(unique[i] - prev, next - unique[i]) == 0) {
        unique.erase(unique.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
  }
  return unique;
}

// ---------------------------------------------------------------------------

namespace {

void require_sphere(const AbsNorm2& norm, const PlanePoint& x) {
  if (!on_unit_sphere(norm, x)) throw PreconditionError("point is not on the unit sphere");
}

std::optional<std::size_t> vertex_index(const std::vector<PlanePoint>& ext, const PlanePoint& x) {
  auto it = std::find(ext.begin(), ext.end(), x);
  if (it == ext.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ext.begin());
}

// Facet (ext[i], ext[i+1]) whose relative interior contains x.
std::optional<std::size_t> facet_index(const std::vector<PlanePoint>& ext, const PlanePoint& x) {
  const std::size_t m = ext.size();
  for (std::size_t i = 0; i < m; ++i) {
    const PlanePoint& p = ext[i];
    const PlanePoint& q = ext[(i + 1) % m];
    const PlanePoint edge = q - p;
    if (cross(edge, x - p) != 0) continue;
    const Rational t = dot(x - p, edge);
    if (t > 0 && t < dot(edge, edge)) return i;
  }
  return std::nullopt;
}

}  // namespace

bool is_v_point(const AbsNorm2& norm, const PlanePoint& x) {
  require_sphere(norm, x);
  if (auto poly = as_polyhedral(norm)) return vertex_index(extreme_points(*poly), x).has_value();
  return false;
}

bool is_v_point_along(const AbsNorm2& norm, const PlanePoint& direction) {
  if (direction.a == 0 && direction.b == 0) throw PreconditionError("zero direction");
  auto poly = as_polyhedral(norm);
  if (!poly) return false;
  const Rational scale = (*poly)(direction);
  return is_v_point(norm, (1 / scale) * direction);
}

std::optional<VPointWitness> v_point_witness(const AbsNorm2& norm, const PlanePoint& x) {
  require_sphere(norm, x);
  auto poly = as_polyhedral(norm);
  if (!poly) return std::nullopt;
  const auto ext = extreme_points(*poly);
  const auto i = vertex_index(ext, x);
  if (!i) return std::nullopt;
  const std::size_t m = ext.size();
  return VPointWitness{ext[(*i + m - 1) % m], ext[(*i + 1) % m]};
}

bool witness_is_valid(const AbsNorm2& norm, const PlanePoint& x, const VPointWitness& w) {
  const Rational two(2);
  return on_unit_sphere(norm, w.y) && on_unit_sphere(norm, w.z) && norm_cmp(norm, x + w.y, two) == 0 &&
         norm_cmp(norm, x + w.z, two) == 0 && norm_cmp(norm, w.y + w.z, two) < 0;
}

std::optional<VPointDecomposition> vpoint_decomposition(const AbsNorm2& norm, const PlanePoint& x) {
  require_sphere(norm, x);
  auto poly = as_polyhedral(norm);
  if (!poly) return std::nullopt;
  const auto ext = extreme_points(*poly);
  if (vertex_index(ext, x)) return VPointDecomposition{x, x, Rational(1)};
  const auto i = facet_index(ext, x);
  if (!i) throw Error("sphere point lies on no facet");
  const PlanePoint& p = ext[*i];
  const PlanePoint& q = ext[(*i + 1) % ext.size()];
  // x = w p + (1 - w) q, so x - q = w (p - q).
  const PlanePoint span = p - q;
  const Rational w = span.a != 0 ? (x.a - q.a) / span.a : (x.b - q.b) / span.b;
  return VPointDecomposition{p, q, w};
}

bool is_polyhedral(const AbsNorm2& norm) { return as_polyhedral(norm).has_value(); }

bool transfer_predicate(const AbsNorm2& norm, const PlanePoint& x) {
  if (x.a < 0 || x.b < 0) throw PreconditionError("transfer predicate needs a point of the positive cone");
  return vpoint_decomposition(norm, x).has_value();
}

// ---------------------------------------------------------------------------

SupportingSlice supporting_slice_construction(const PolyhedralNorm& norm, const PlanePoint& x) {
  if (norm(x) != 1) throw PreconditionError("point is not on the unit sphere");
  const auto ext = extreme_points(norm);
  const std::size_t m = ext.size();
  auto at = [&](std::size_t i, long shift) {
    return ext[(i + m + static_cast<std::size_t>(shift + static_cast<long>(m))) % m];
  };

  SupportingSlice slice;
  if (auto i = vertex_index(ext, x)) {
    const PlanePoint y1 = at(*i, -1);
    const PlanePoint y2 = at(*i, 1);
    const PlanePoint n1 = facet_normal(y1, x);
    const PlanePoint n2 = facet_normal(x, y2);
    slice.functional = Rational(1, 2) * (n1 + n2);
    slice.separation = norm(y1 + y2);
    slice.width = (2 - slice.separation) / 4;
    slice.first = x;
    slice.second = x;
    slice.vertex_case = true;
    return slice;
  }
  const auto f = facet_index(ext, x);
  if (!f) throw Error("sphere point lies on no facet");
  const PlanePoint x1 = ext[*f];
  const PlanePoint x2 = at(*f, 1);
  const PlanePoint y1 = at(*f, -1);
  const PlanePoint y2 = at(*f, 2);
  slice.functional = facet_normal(x1, x2);
  slice.separation = max_of(norm(y1 + x), norm(y2 + x));
  slice.width = (2 - slice.separation) / 2;
  slice.first = x1;
  slice.second = x2;
  return slice;
}

SliceVerification verify_supporting_slice(const PolyhedralNorm& norm, const PlanePoint& x,
                                          const SupportingSlice& slice) {
  SliceVerification v;
  const PolyhedralNorm dual = dual_norm(norm);
  v.supports = slice.width > 0 && dot(slice.functional, x) == 1 && dual(slice.functional) == 1;
  v.separation_bound = slice.vertex_case ? slice.separation < 2 - 2 * slice.width
                                         : slice.separation < 2 - slice.width;

  const auto ext = extreme_points(norm);
  const Rational floor = 1 - slice.width;
  auto in_slice = [&](const PlanePoint& p) { return dot(slice.functional, p) > floor; };
  auto is_target = [&](const PlanePoint& p) { return p == slice.first || p == slice.second; };
  for (const auto& e : ext) {
    if (in_slice(e)) v.extreme_in_slice.push_back(e);
  }
  v.extreme_points_ok = !v.extreme_in_slice.empty() &&
                        std::all_of(v.extreme_in_slice.begin(), v.extreme_in_slice.end(), is_target);

  // Every slice of the ball is maximized on a face exposed by a facet normal
  // or by a functional strictly inside a vertex's normal cone. A subslice of
  // S(x*, width) contains its maximizing face, so the face must meet the targets.
  const std::size_t m = ext.size();
  std::vector<PlanePoint> probes;
  for (std::size_t i = 0; i < m; ++i) {
    const PlanePoint n_prev = facet_normal(ext[(i + m - 1) % m], ext[i]);
    const PlanePoint n_next = facet_normal(ext[i], ext[(i + 1) % m]);
    probes.push_back(n_next);
    probes.push_back(Rational(1, 2) * (n_prev + n_next));
  }
  v.faces_ok = true;
  for (const auto& probe : probes) {
    Rational top = dot(probe, ext.front());
    for (const auto& e : ext) top = max_of(top, dot(probe, e));
    std::vector<PlanePoint> face;
    for (const auto& e : ext) {
      if (dot(probe, e) == top) face.push_back(e);
    }
    if (!std::all_of(face.begin(), face.end(), in_slice)) continue;
    ++v.faces_probed;
    if (std::none_of(face.begin(), face.end(), is_target)) v.faces_ok = false;
  }
  v.faces_ok = v.faces_ok && v.faces_probed > 0;
  return v;
}

}  // namespace deltakit
