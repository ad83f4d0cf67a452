#include "deltakit/freespace.hpp"

#include "deltakit/error.hpp"

namespace deltakit {

namespace {

bool same_space(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  return &a == &b || (a.base() == b.base() && a.points() == b.points());
}

void require_same_space(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  if (!same_space(a, b)) throw PreconditionError("operands live over different metric spaces");
}

}  // namespace

FreeElement::FreeElement(SpaceRef space) : space_(std::move(space)) {
  if (!space_) throw PreconditionError("free element needs a metric space");
}

FreeElement::FreeElement(SpaceRef space, const std::map<std::size_t, Rational>& coeffs)
    : FreeElement(std::move(space)) {
  for (const auto& [p, c] : coeffs) {
    if (p >= space_->size()) throw PreconditionError("coefficient index out of range");
    if (p != space_->base() && c != 0) coeffs_.emplace(p, c);
  }
}

FreeElement FreeElement::delta(SpaceRef space, std::size_t p) {
  return FreeElement(std::move(space), {{p, Rational(1)}});
}

Rational FreeElement::coeff(std::size_t p) const {
  auto it = coeffs_.find(p);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void FreeElement::add_scaled(const FreeElement& other, const Rational& scale) {
  require_same_space(*space_, *other.space_);
  for (const auto& [p, c] : other.coeffs_) {
    auto [it, inserted] = coeffs_.emplace(p, c * scale);
    if (!inserted) {
      it->second += c * scale;
      if (it->second == 0) coeffs_.erase(it);
    }
  }
}

FreeElement& FreeElement::operator+=(const FreeElement& other) {
  add_scaled(other, Rational(1));
  return *this;
}

FreeElement& FreeElement::operator-=(const FreeElement& other) {
  add_scaled(other, Rational(-1));
  return *this;
}

FreeElement& FreeElement::operator*=(const Rational& scale) {
  if (scale == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [p, c] : coeffs_) c *= scale;
  return *this;
}

bool operator==(const FreeElement& a, const FreeElement& b) {
  return same_space(*a.space_, *b.space_) && a.coeffs_ == b.coeffs_;
}

FreeElement molecule(SpaceRef space, std::size_t x, std::size_t y) {
  if (x == y) throw PreconditionError("molecule needs two distinct points");
  if (x >= space->size() || y >= space->size()) throw PreconditionError("molecule point out of range");
  const Rational inv = 1 / space->dist(x, y);
  return FreeElement(space, {{x, inv}, {y, Rational(-inv)}});
}

FreeElement molecule(SpaceRef space, std::string_view x, std::string_view y) {
  const std::size_t i = space->index(x);
  const std::size_t j = space->index(y);
  return molecule(std::move(space), i, j);
}

// ---------------------------------------------------------------------------

LipschitzFunction::LipschitzFunction(SpaceRef space, std::vector<Rational> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw PreconditionError("Lipschitz function needs a metric space");
  if (values_.size() != space_->size()) throw PreconditionError("function values do not cover the space");
  const Rational shift = values_[space_->base()];
  if (shift != 0) {
    for (auto& v : values_) v -= shift;
  }
}

LipschitzFunction operator+(const LipschitzFunction& a, const LipschitzFunction& b) {
  require_same_space(*a.space_, *b.space_);
  std::vector<Rational> sum(a.values_.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a.values_[i] + b.values_[i];
  return LipschitzFunction(a.space_, std::move(sum));
}

Rational lip_norm(const LipschitzFunction& f) {
  const auto& space = f.space();
  Rational best;
  for (std::size_t p = 0; p < space.size(); ++p) {
    for (std::size_t q = p + 1; q < space.size(); ++q) {
      Rational slope = abs_value(f(p) - f(q)) / space.dist(p, q);
      if (slope > best) best = std::move(slope);
    }
  }
  return best;
}

Rational lipschitz_constant(const FiniteMetricSpace& space, const std::map<std::size_t, Rational>& partial) {
  Rational best;
  for (auto a = partial.begin(); a != partial.end(); ++a) {
    for (auto b = std::next(a); b != partial.end(); ++b) {
      Rational slope = abs_value(a->second - b->second) / space.dist(a->first, b->first);
      if (slope > best) best = std::move(slope);
    }
  }
  return best;
}

LipschitzFunction mcshane_extend(SpaceRef space, const std::map<std::size_t, Rational>& partial,
                                 std::optional<Rational> lipschitz) {
  if (partial.empty()) throw PreconditionError("McShane extension of empty data");
  for (const auto& [a, value] : partial) {
    if (a >= space->size()) throw PreconditionError("partial data point out of range");
  }
  const Rational constant = lipschitz ? *lipschitz : lipschitz_constant(*space, partial);
  if (constant < 0) throw PreconditionError("negative Lipschitz constant");
  std::vector<Rational> values(space->size());
  for (std::size_t p = 0; p < space->size(); ++p) {
    std::optional<Rational> best;
    for (const auto& [a, value] : partial) {
      Rational candidate = value - constant * space->dist(p, a);
      if (!best || candidate > *best) best = std::move(candidate);
    }
    values[p] = *best;
  }
  return LipschitzFunction(std::move(space), std::move(values));
}

Rational eval_functional(const LipschitzFunction& f, const FreeElement& mu) {
  require_same_space(f.space(), mu.space());
  Rational total;
  for (const auto& [p, c] : mu.coeffs()) total += c * f(p);
  return total;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<std::size_t, Rational>> excess_of(const FreeElement& mu) {
  std::vector<std::pair<std::size_t, Rational>> excess;
  Rational balance;
  for (const auto& [p, c] : mu.coeffs()) {
    excess.emplace_back(p, c);
    balance -= c;
  }
  excess.emplace_back(mu.space().base(), balance);
  return excess;
}

}  // namespace

NormCertificate free_norm_certified(const FreeElement& mu) {
  TransportPlan plan = solve_transport(mu.space(), excess_of(mu));
  std::map<std::size_t, Rational> partial;
  for (std::size_t k = 0; k < plan.nodes.size(); ++k) partial.emplace(plan.nodes[k], plan.price[k]);
  LipschitzFunction dual = mcshane_extend(mu.space_ref(), partial, Rational(1));
  Rational value = plan.cost;
  return NormCertificate{std::move(value), std::move(plan), std::move(dual)};
}

Rational free_norm(const FreeElement& mu) {
  if (mu.is_zero()) return Rational(0);
  return solve_transport(mu.space(), excess_of(mu)).cost;
}

void check_certificate(const FreeElement& mu, const NormCertificate& cert) {
  const auto& space = mu.space();
  Rational primal;
  std::map<std::size_t, Rational> net;
  for (const auto& arc : cert.plan.arcs) {
    if (arc.amount <= 0) throw Error("certificate: non-positive flow");
    primal += arc.amount * space.dist(arc.from, arc.to);
    net[arc.from] += arc.amount;
    net[arc.to] -= arc.amount;
  }
  if (primal != cert.value) throw Error("certificate: flow cost differs from reported norm");
  for (const auto& [p, c] : excess_of(mu)) {
    if (net[p] != c) throw Error("certificate: flow does not realize the element");
    net.erase(p);
  }
  for (const auto& [p, c] : net) {
    if (c != 0) throw Error("certificate: flow leaks at a point outside the support");
  }
  if (lip_norm(cert.dual) > 1) throw Error("certificate: dual function is not 1-Lipschitz");
  if (eval_functional(cert.dual, mu) != cert.value) throw Error("certificate: duality gap is nonzero");
}

// ---------------------------------------------------------------------------

Slice::Slice(LipschitzFunction functional, Rational width)
    : functional_(std::move(functional)), width_(std::move(width)) {
  if (width_ <= 0 || width_ > 2) throw PreconditionError("slice width must lie in (0, 2]");
}

bool Slice::admits(const FreeElement& mu) const { return eval_functional(functional_, mu) > 1 - width_; }

std::vector<FreeElement> slice_members(const Slice& slice, const std::vector<FreeElement>& candidates) {
  if (lip_norm(slice.functional()) > 1) throw PreconditionError("slice functional has norm > 1");
  std::vector<FreeElement> out;
  for (const auto& mu : candidates) {
    if (slice.admits(mu) && free_norm(mu) <= 1) out.push_back(mu);
  }
  return out;
}

bool denting_molecule_certificate(const FiniteMetricSpace& space, std::size_t u, std::size_t v) {
  if (u >= space.size() || v >= space.size()) throw PreconditionError("point outside the space");
  const auto x = space.find(landmarks::x().id());
  const auto y = space.find(landmarks::y().id());
  if (!x || !y) throw PreconditionError("denting certificate needs an example space");
  if (u == v || u == *x || u == *y || v == *x || v == *y) return false;
  return metric_segment(space, u, v).size() == 2;
}

std::vector<std::pair<std::size_t, std::size_t>> certified_denting_pairs(const FiniteMetricSpace& space) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < space.size(); ++p) {
    for (std::size_t q = 0; q < space.size(); ++q) {
      if (p != q && denting_molecule_certificate(space, p, q)) out.emplace_back(p, q);
    }
  }
  return out;
}

DentingReport distance_to_denting_report(const FreeElement& mu, const Slice& slice) {
  if (free_norm(mu) != 1) throw PreconditionError("element is not on the unit sphere");
  const auto& space = mu.space_ref();
  DentingReport report;
  for (const auto& [p, q] : certified_denting_pairs(*space)) {
    const FreeElement m = molecule(space, p, q);
    if (!slice.admits(m)) continue;
    DentingDistance entry{p, q, free_norm(mu - m)};
    if (entry.distance != 2) {
      report.all_at_distance_two = false;
      report.exceptions.push_back(entry);
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace deltakit
