#pragma once

// Finitely supported elements of the Lipschitz-free space over a finite
// pointed metric space, Lipschitz functions vanishing at the base point,
// slices, and the denting-molecule certificates for the example spaces.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deltakit/metric.hpp"
#include "deltakit/rational.hpp"
#include "deltakit/transport.hpp"

namespace deltakit {

using SpaceRef = std::shared_ptr<const FiniteMetricSpace>;

inline SpaceRef share(FiniteMetricSpace space) {
  return std::make_shared<const FiniteMetricSpace>(std::move(space));
}

/// Sum of coeff(p) * delta_p. The base point is never stored and zero
/// coefficients are dropped, so equal elements compare equal.
class FreeElement {
 public:
  explicit FreeElement(SpaceRef space);
  FreeElement(SpaceRef space, const std::map<std::size_t, Rational>& coeffs);

  static FreeElement delta(SpaceRef space, std::size_t p);

  const FiniteMetricSpace& space() const { return *space_; }
  const SpaceRef& space_ref() const { return space_; }
  const std::map<std::size_t, Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t p) const;
  bool is_zero() const { return coeffs_.empty(); }

  FreeElement& operator+=(const FreeElement& other);
  FreeElement& operator-=(const FreeElement& other);
  FreeElement& operator*=(const Rational& scale);

  friend FreeElement operator+(FreeElement a, const FreeElement& b) { return a += b; }
  friend FreeElement operator-(FreeElement a, const FreeElement& b) { return a -= b; }
  friend FreeElement operator*(const Rational& s, FreeElement a) { return a *= s; }
  friend FreeElement operator-(FreeElement a) { return a *= Rational(-1); }
  friend bool operator==(const FreeElement& a, const FreeElement& b);

 private:
  void add_scaled(const FreeElement& other, const Rational& scale);

  SpaceRef space_;
  std::map<std::size_t, Rational> coeffs_;
};

/// (delta_x - delta_y) / d(x,y). Throws PreconditionError when x == y.
FreeElement molecule(SpaceRef space, std::size_t x, std::size_t y);
FreeElement molecule(SpaceRef space, std::string_view x, std::string_view y);

/// Values on every point of the space, normalized to 0 at the base.
class LipschitzFunction {
 public:
  LipschitzFunction(SpaceRef space, std::vector<Rational> values);

  const FiniteMetricSpace& space() const { return *space_; }
  const SpaceRef& space_ref() const { return space_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& operator()(std::size_t p) const { return values_.at(p); }

  friend LipschitzFunction operator+(const LipschitzFunction& a, const LipschitzFunction& b);
  friend bool operator==(const LipschitzFunction&, const LipschitzFunction&) = default;

 private:
  SpaceRef space_;
  std::vector<Rational> values_;
};

/// max |f(p) - f(q)| / d(p,q) over distinct pairs.
Rational lip_norm(const LipschitzFunction& f);

/// Lipschitz constant of partial data on a subset.
Rational lipschitz_constant(const FiniteMetricSpace& space, const std::map<std::size_t, Rational>& partial);

/// p -> max_a (partial(a) - L d(p,a)), then shifted to vanish at the base.
/// L defaults to the Lipschitz constant of the data. Throws on empty data.
LipschitzFunction mcshane_extend(SpaceRef space, const std::map<std::size_t, Rational>& partial,
                                 std::optional<Rational> lipschitz = std::nullopt);

Rational eval_functional(const LipschitzFunction& f, const FreeElement& mu);

struct NormCertificate {
  Rational value;
  TransportPlan plan;
  /// 1-Lipschitz and vanishing at the base, with dual(mu) == value.
  LipschitzFunction dual;
};

Rational free_norm(const FreeElement& mu);
NormCertificate free_norm_certified(const FreeElement& mu);

/// Throws Error if the certificate is not primal-dual consistent for mu.
void check_certificate(const FreeElement& mu, const NormCertificate& cert);

class Slice {
 public:
  /// 0 < width <= 2.
  Slice(LipschitzFunction functional, Rational width);

  const LipschitzFunction& functional() const { return functional_; }
  const Rational& width() const { return width_; }

  /// f(mu) > 1 - width, without the ball condition.
  bool admits(const FreeElement& mu) const;

 private:
  LipschitzFunction functional_;
  Rational width_;
};

/// Members of the unit ball lying in the slice. Throws PreconditionError
/// when the functional has norm > 1.
std::vector<FreeElement> slice_members(const Slice& slice, const std::vector<FreeElement>& candidates);

/// Level-wise certificate for the example spaces: u, v outside {x, y} and
/// the metric segment [u,v] reduced to {u, v}.
bool denting_molecule_certificate(const FiniteMetricSpace& space, std::size_t u, std::size_t v);

struct DentingDistance {
  std::size_t p;
  std::size_t q;
  Rational distance;  // ||mu - m_pq||
};

struct DentingReport {
  std::vector<DentingDistance> entries;     // certified molecules inside the slice
  std::vector<DentingDistance> exceptions;  // those at distance != 2
  bool all_at_distance_two = true;
};

/// Requires ||mu|| == 1.
DentingReport distance_to_denting_report(const FreeElement& mu, const Slice& slice);

/// Every ordered pair (p,q) with a level certificate, in index order.
std::vector<std::pair<std::size_t, std::size_t>> certified_denting_pairs(const FiniteMetricSpace& space);

}  // namespace deltakit
