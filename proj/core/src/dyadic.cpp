#include "deltakit/dyadic.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "deltakit/error.hpp"

namespace deltakit {

namespace {

constexpr std::size_t kMaxIndexDepth = 62;

Rational sign_of(const Rational& v) { return Rational(sgn(v)); }

}  // namespace

// ---------------------------------------------------------------------------
// Nodes and sets

Node Node::parse(std::string_view bits) {
  Node n;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InputError("node bits must be 0 or 1: '" + std::string(bits) + "'");
  }
  n.bits_ = std::string(bits);
  return n;
}

Node Node::from_index(std::uint64_t value, std::size_t depth) {
  if (depth > kMaxIndexDepth) throw LimitError("node too deep for an index");
  Node n;
  n.bits_.resize(depth);
  for (std::size_t i = 0; i < depth; ++i) n.bits_[i] = ((value >> (depth - 1 - i)) & 1U) ? '1' : '0';
  return n;
}

std::uint64_t Node::index() const {
  if (depth() > kMaxIndexDepth) throw LimitError("node too deep for an index");
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | (c == '1' ? 1U : 0U);
  return v;
}

Node Node::prefix(std::size_t length) const {
  if (length > depth()) throw PreconditionError("prefix longer than the node");
  Node n;
  n.bits_ = bits_.substr(0, length);
  return n;
}

Node Node::child(bool bit) const {
  Node n = *this;
  n.bits_.push_back(bit ? '1' : '0');
  return n;
}

bool Node::is_prefix_of(const Node& other) const {
  return depth() <= other.depth() && other.bits_.compare(0, depth(), bits_) == 0;
}

std::strong_ordering operator<=>(const Node& x, const Node& y) {
  if (auto c = x.depth() <=> y.depth(); c != 0) return c;
  return x.bits_.compare(y.bits_) <=> 0;
}

std::vector<Node> nodes_at_depth(std::size_t depth) { return extensions(Node(), depth); }

std::vector<Node> extensions(const Node& t, std::size_t extra) {
  if (t.depth() + extra > kMaxIndexDepth || extra > 24) throw LimitError("too many node extensions");
  std::vector<Node> out;
  const std::uint64_t base = t.index() << extra;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << extra); ++k) out.push_back(Node::from_index(base + k, t.depth() + extra));
  return out;
}

DyadicInterval b_set(const Node& t, long n) {
  if (n < 1) throw PreconditionError("row index must be at least 1");
  const long d = static_cast<long>(t.depth());
  const Rational len = pow2(-n - 1 - d);
  Rational lo = pow2(-n - 1) + Rational(Integer(static_cast<unsigned long>(t.index()))) * len;
  Rational hi = lo + len;
  return {std::move(lo), std::move(hi)};
}

DyadicInterval c_set(const Node& t, long n) {
  DyadicInterval b = b_set(t, n);
  const Rational half(1, 2);
  return {b.lo + half, b.hi + half};
}

// ---------------------------------------------------------------------------
// Dense step functions

DyadicStep::DyadicStep(std::size_t resolution) : resolution_(resolution) {
  if (resolution_ > kMaxResolution) throw LimitError("step function resolution exceeds 2^20 cells");
  values_.assign(std::size_t{1} << resolution_, Rational(0));
}

DyadicStep::DyadicStep(std::size_t resolution, std::vector<Rational> values) : DyadicStep(resolution) {
  if (values.size() != values_.size()) throw PreconditionError("step values do not match the resolution");
  values_ = std::move(values);
}

DyadicStep DyadicStep::refined(std::size_t resolution) const {
  if (resolution < resolution_) throw PreconditionError("refinement cannot lower the resolution");
  DyadicStep out(resolution);
  const std::size_t shift = resolution - resolution_;
  for (std::size_t k = 0; k < out.values_.size(); ++k) out.values_[k] = values_[k >> shift];
  return out;
}

std::pair<std::size_t, std::size_t> DyadicStep::cell_range(const DyadicInterval& interval) const {
  const Rational scale = pow2(static_cast<long>(resolution_));
  const Rational lo = interval.lo * scale;
  const Rational hi = interval.hi * scale;
  if (lo.get_den() != 1 || hi.get_den() != 1) throw PreconditionError("interval is finer than the step resolution");
  if (lo < 0 || hi < lo || hi > scale) throw PreconditionError("interval outside [0,1]");
  return {lo.get_num().get_ui(), hi.get_num().get_ui()};
}

void DyadicStep::add_indicator(const DyadicInterval& interval, const Rational& value) {
  const auto [lo, hi] = cell_range(interval);
  for (std::size_t k = lo; k < hi; ++k) values_[k] += value;
}

Rational DyadicStep::l1_norm() const {
  Rational total;
  for (const auto& v : values_) total += abs_value(v);
  return total / pow2(static_cast<long>(resolution_));
}

Rational DyadicStep::l1_norm_on(const DyadicInterval& interval) const {
  const auto [lo, hi] = cell_range(interval);
  Rational total;
  for (std::size_t k = lo; k < hi; ++k) total += abs_value(values_[k]);
  return total / pow2(static_cast<long>(resolution_));
}

DyadicStep& DyadicStep::operator+=(const DyadicStep& other) {
  if (other.resolution_ > resolution_) *this = refined(other.resolution_);
  const DyadicStep rhs = other.refined(resolution_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += rhs.values_[k];
  return *this;
}

DyadicStep& DyadicStep::operator-=(const DyadicStep& other) { return *this += Rational(-1) * other; }

DyadicStep& DyadicStep::operator*=(const Rational& scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

bool operator==(const DyadicStep& a, const DyadicStep& b) {
  const std::size_t r = std::max(a.resolution_, b.resolution_);
  return a.refined(r).values_ == b.refined(r).values_;
}

DyadicStep f_fn(const Node& t) {
  if (t.depth() == 0) throw PreconditionError("f is not defined at the empty node");
  const long n = static_cast<long>(t.depth());
  DyadicStep step(static_cast<std::size_t>(2 * n + 1));
  const Rational height = pow2(n + 1);
  step.add_indicator(c_set(t, n), height);
  for (long i = 1; i <= n; ++i) step.add_indicator(b_set(t, i), height);
  return step;
}

DyadicStep h_fn_approx(const Node& t, std::size_t m) {
  if (t.depth() == 0) throw PreconditionError("h is not defined at the empty node");
  DyadicStep step(2 * (t.depth() + m) + 1);
  for (const auto& u : extensions(t, m)) step += f_fn(u);
  step *= pow2(-static_cast<long>(m));
  return step;
}

DyadicStep h_fn_truncated(const Node& t, std::size_t rows) {
  if (t.depth() == 0) throw PreconditionError("h is not defined at the empty node");
  const long n = static_cast<long>(t.depth());
  DyadicStep step(rows + 1 + t.depth());
  const Rational height = pow2(n + 1);
  for (long i = 1; i <= static_cast<long>(rows); ++i) step.add_indicator(b_set(t, i), height);
  return step;
}

// ---------------------------------------------------------------------------
// Span elements

namespace {

void merge_into(std::map<Node, Rational>& target, const std::map<Node, Rational>& source, const Rational& scale) {
  for (const auto& [node, c] : source) {
    if (node.depth() == 0) throw PreconditionError("span elements cannot use the empty node");
    auto [it, inserted] = target.emplace(node, c * scale);
    if (!inserted) it->second += c * scale;
    if (it->second == 0) target.erase(it);
  }
}

}  // namespace

TreeSpanElement::TreeSpanElement(const std::map<Node, Rational>& f, const std::map<Node, Rational>& h) {
  merge_into(f_, f, Rational(1));
  merge_into(h_, h, Rational(1));
}

TreeSpanElement TreeSpanElement::f_node(const Node& t, const Rational& coeff) { return TreeSpanElement({{t, coeff}}, {}); }

TreeSpanElement TreeSpanElement::h_node(const Node& t, const Rational& coeff) { return TreeSpanElement({}, {{t, coeff}}); }

std::size_t TreeSpanElement::depth() const {
  std::size_t d = 0;
  for (const auto& [node, c] : f_) d = std::max(d, node.depth());
  for (const auto& [node, c] : h_) d = std::max(d, node.depth());
  return d;
}

TreeSpanElement& TreeSpanElement::operator+=(const TreeSpanElement& other) {
  merge_into(f_, other.f_, Rational(1));
  merge_into(h_, other.h_, Rational(1));
  return *this;
}

TreeSpanElement& TreeSpanElement::operator-=(const TreeSpanElement& other) {
  merge_into(f_, other.f_, Rational(-1));
  merge_into(h_, other.h_, Rational(-1));
  return *this;
}

TreeSpanElement& TreeSpanElement::operator*=(const Rational& scale) {
  if (scale == 0) {
    f_.clear();
    h_.clear();
    return *this;
  }
  for (auto& [node, c] : f_) c *= scale;
  for (auto& [node, c] : h_) c *= scale;
  return *this;
}

// ---------------------------------------------------------------------------
// Cell functions

CellFunction::CellFunction(std::size_t depth) : depth_(depth) {
  if (depth_ > kMaxDepth) throw LimitError("cell function depth exceeds the limit");
  b_.assign(depth_ * width(), Rational(0));
  c_.assign(depth_ * width(), Rational(0));
  b_tail_.assign(width(), Rational(0));
  c_tail_.assign(width(), Rational(0));
}

namespace {

// coefficient tables indexed [depth][node index]
std::vector<std::vector<Rational>> by_depth(const std::map<Node, Rational>& coeffs, std::size_t depth) {
  std::vector<std::vector<Rational>> table(depth + 1);
  for (std::size_t k = 0; k <= depth; ++k) table[k].assign(std::size_t{1} << k, Rational(0));
  for (const auto& [node, c] : coeffs) table[node.depth()][node.index()] = c;
  return table;
}

}  // namespace

CellFunction CellFunction::of(const TreeSpanElement& e, std::size_t depth) {
  if (depth < e.depth()) throw PreconditionError("cell depth is shallower than the element");
  CellFunction out(depth);
  const auto alpha = by_depth(e.f(), depth);
  const auto beta = by_depth(e.h(), depth);
  for (std::uint64_t s = 0; s < out.width(); ++s) {
    Rational tail;
    for (std::size_t k = 1; k <= depth; ++k) tail += pow2(static_cast<long>(k) + 1) * beta[k][s >> (depth - k)];
    Rational running = tail;
    for (long j = static_cast<long>(depth); j >= 1; --j) {
      const Rational& a = alpha[static_cast<std::size_t>(j)][s >> (depth - static_cast<std::size_t>(j))];
      const Rational weighted = pow2(j + 1) * a;
      running += weighted;
      out.b_[out.slot(j, s)] = running;
      out.c_[out.slot(j, s)] = weighted;
    }
    out.b_tail_[s] = std::move(tail);
  }
  return out;
}

const Rational& CellFunction::value(CellKind kind, long row, std::uint64_t s) const {
  if (row < 1) throw PreconditionError("row index must be at least 1");
  if (static_cast<std::size_t>(row) > depth_) return kind == CellKind::b ? b_tail_.at(s) : c_tail_.at(s);
  return kind == CellKind::b ? b_.at(slot(row, s)) : c_.at(slot(row, s));
}

void CellFunction::set(CellKind kind, long row, std::uint64_t s, Rational v) {
  if (row < 1 || static_cast<std::size_t>(row) > depth_) throw PreconditionError("row outside the explicit rows");
  (kind == CellKind::b ? b_ : c_).at(slot(row, s)) = std::move(v);
}

void CellFunction::set_tail(CellKind kind, std::uint64_t s, Rational v) {
  (kind == CellKind::b ? b_tail_ : c_tail_).at(s) = std::move(v);
}

CellFunction CellFunction::refined(std::size_t depth) const {
  if (depth < depth_) throw PreconditionError("refinement cannot lower the depth");
  if (depth == depth_) return *this;
  CellFunction out(depth);
  const std::size_t shift = depth - depth_;
  for (std::uint64_t s = 0; s < out.width(); ++s) {
    const std::uint64_t sigma = s >> shift;
    for (long j = 1; j <= static_cast<long>(depth); ++j) {
      out.b_[out.slot(j, s)] = value(CellKind::b, j, sigma);
      out.c_[out.slot(j, s)] = value(CellKind::c, j, sigma);
    }
    out.b_tail_[s] = b_tail_[sigma];
    out.c_tail_[s] = c_tail_[sigma];
  }
  return out;
}

Rational CellFunction::average(CellKind kind, long row, const Node& node) const {
  if (node.depth() >= depth_) {
    const std::size_t shift = node.depth() - depth_;
    if (shift >= 64) return value(kind, row, 0);
    return value(kind, row, node.index() >> shift);
  }
  const std::size_t extra = depth_ - node.depth();
  const std::uint64_t base = node.index() << extra;
  const std::uint64_t count = std::uint64_t{1} << extra;
  Rational total;
  for (std::uint64_t k = 0; k < count; ++k) total += value(kind, row, base + k);
  return total / Rational(Integer(static_cast<unsigned long>(count)));
}

Rational CellFunction::l1_norm() const {
  const long d = static_cast<long>(depth_);
  Rational total;
  for (std::uint64_t s = 0; s < width(); ++s) {
    for (long j = 1; j <= d; ++j) {
      total += (abs_value(b_[slot(j, s)]) + abs_value(c_[slot(j, s)])) * pow2(-d - j - 1);
    }
    total += (abs_value(b_tail_[s]) + abs_value(c_tail_[s])) * pow2(-2 * d - 1);
  }
  return total;
}

Rational CellFunction::sup_abs() const {
  Rational best;
  for (const auto* values : {&b_, &c_, &b_tail_, &c_tail_}) {
    for (const auto& v : *values) best = max_of(best, abs_value(v));
  }
  return best;
}

CellFunction CellFunction::sign() const {
  CellFunction out = *this;
  for (auto* values : {&out.b_, &out.c_, &out.b_tail_, &out.c_tail_}) {
    for (auto& v : *values) v = sign_of(v);
  }
  return out;
}

bool operator==(const CellFunction& a, const CellFunction& b) {
  const std::size_t d = std::max(a.depth_, b.depth_);
  const CellFunction x = a.refined(d);
  const CellFunction y = b.refined(d);
  return x.b_ == y.b_ && x.c_ == y.c_ && x.b_tail_ == y.b_tail_ && x.c_tail_ == y.c_tail_;
}

Rational pair(const CellFunction& functional, const CellFunction& g) {
  const std::size_t depth = std::max(functional.depth(), g.depth());
  const CellFunction x = functional.refined(depth);
  const CellFunction y = g.refined(depth);
  const long d = static_cast<long>(depth);
  Rational total;
  for (std::uint64_t s = 0; s < x.width(); ++s) {
    for (long j = 1; j <= d + 1; ++j) {
      const Rational mass = j <= d ? pow2(-d - j - 1) : pow2(-2 * d - 1);
      total += (x.value(CellKind::b, j, s) * y.value(CellKind::b, j, s) +
                x.value(CellKind::c, j, s) * y.value(CellKind::c, j, s)) *
               mass;
    }
  }
  return total;
}

Rational pair(const CellFunction& functional, const TreeSpanElement& e) {
  return pair(functional, CellFunction::of(e, std::max(functional.depth(), e.depth())));
}

Rational pair_f(const CellFunction& functional, const Node& u) {
  if (u.depth() == 0) throw PreconditionError("f is not defined at the empty node");
  const long n = static_cast<long>(u.depth());
  Rational total;
  for (long i = 1; i <= n; ++i) total += pow2(-i) * functional.average(CellKind::b, i, u);
  total += pow2(-n) * functional.average(CellKind::c, n, u);
  return total;
}

Rational pair_h(const CellFunction& functional, const Node& t) {
  if (t.depth() == 0) throw PreconditionError("h is not defined at the empty node");
  const long rows = static_cast<long>(std::max(functional.depth(), t.depth()));
  Rational total;
  for (long i = 1; i <= rows; ++i) total += pow2(-i) * functional.average(CellKind::b, i, t);
  total += pow2(-rows) * functional.average(CellKind::b, rows + 1, t);
  return total;
}

// ---------------------------------------------------------------------------
// Norms

Rational l1_norm(const TreeSpanElement& e) { return CellFunction::of(e).l1_norm(); }

Rational l1_norm_by_integration(const TreeSpanElement& e) {
  if (e.is_zero()) return Rational(0);
  const std::size_t depth = e.depth();
  const std::size_t rows = depth + 1;
  DyadicStep step(rows + 1 + depth);
  for (const auto& [t, c] : e.f()) step += c * f_fn(t);
  for (const auto& [t, c] : e.h()) step += c * h_fn_truncated(t, rows);
  // rows beyond `rows` halve their mass each time, so together they weigh
  // as much as the last dense row
  return step.l1_norm() + step.l1_norm_on(b_set(Node(), static_cast<long>(rows)));
}

namespace {

template <typename Accumulate>
Rational over_region(const TreeSpanElement& e, const Region& region, Accumulate accumulate) {
  std::size_t depth = e.depth();
  for (const auto& cell : region) {
    if (cell.row < 1) throw PreconditionError("row index must be at least 1");
    depth = std::max(depth, cell.node.depth());
  }
  const CellFunction g = CellFunction::of(e, depth);
  std::set<std::tuple<int, long, std::uint64_t>> cells;
  for (const auto& cell : region) {
    const std::size_t extra = depth - cell.node.depth();
    const std::uint64_t base = cell.node.index() << extra;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << extra); ++k) {
      cells.emplace(cell.kind == CellKind::b ? 0 : 1, cell.row, base + k);
    }
  }
  const long d = static_cast<long>(depth);
  Rational total;
  for (const auto& [kind, row, s] : cells) {
    total += accumulate(g.value(kind == 0 ? CellKind::b : CellKind::c, row, s)) * pow2(-d - row - 1);
  }
  return total;
}

}  // namespace

Rational restricted_norm(const TreeSpanElement& e, const Region& region) {
  return over_region(e, region, [](const Rational& v) { return abs_value(v); });
}

Rational restricted_integral(const TreeSpanElement& e, const Region& region) {
  return over_region(e, region, [](const Rational& v) { return v; });
}

Rational span_norm_formula(const TreeSpanElement& e) {
  if (!e.h().empty()) throw PreconditionError("the closed form covers f-span elements only");
  const std::size_t n = e.depth();
  if (n == 0) return Rational(0);
  const auto alpha = by_depth(e.f(), n);
  const long ln = static_cast<long>(n);
  Rational total;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    auto a = [&](long i) -> const Rational& { return alpha[static_cast<std::size_t>(i)][s >> (n - static_cast<std::size_t>(i))]; };
    for (long j = 1; j <= ln; ++j) {
      Rational inner;
      for (long i = j; i <= ln; ++i) inner += pow2(i - j) * a(i);
      total += abs_value(inner) + abs_value(a(j));
    }
  }
  return total * pow2(-ln);
}

// ---------------------------------------------------------------------------
// Inequalities

InequalityResult cascade_inequality_check(const std::vector<Rational>& alpha, long m, long n) {
  if (m > n) throw PreconditionError("cascade needs m <= n");
  if (m < 1 || static_cast<std::size_t>(n) > alpha.size()) throw PreconditionError("cascade indices out of range");
  auto a = [&](long i) -> const Rational& { return alpha[static_cast<std::size_t>(i - 1)]; };
  auto weighted_tail = [&](long j) {
    Rational sum;
    for (long i = j; i <= n; ++i) sum += pow2(i - j) * a(i);
    return abs_value(sum);
  };
  InequalityResult r;
  r.lhs = weighted_tail(m);
  for (long j = m + 1; j <= n; ++j) r.rhs += weighted_tail(j);
  for (long i = m; i <= n; ++i) r.rhs += abs_value(a(i));
  r.holds = r.lhs <= r.rhs;
  return r;
}

InequalityResult concentration_check(const TreeSpanElement& g, long m) {
  if (!g.h().empty()) throw PreconditionError("concentration applies to f-span elements");
  if (m < 1) throw PreconditionError("concentration needs m >= 1");
  Region rows;
  for (long i = 1; i <= m; ++i) rows.push_back({CellKind::b, i, Node()});
  InequalityResult r;
  r.lhs = restricted_norm(g, rows);
  r.rhs = (1 - pow2(-m)) * l1_norm(g);
  r.holds = r.lhs <= r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Exposure

namespace {

Region support_of_f(const Node& t) {
  const long n = static_cast<long>(t.depth());
  Region region{{CellKind::c, n, t}};
  for (long i = 1; i <= n; ++i) region.push_back({CellKind::b, i, t});
  return region;
}

TreeSpanElement random_perturbation(const Node& t, Rng& rng) {
  std::map<Node, Rational> coeffs;
  while (coeffs.empty()) {
    for (std::size_t depth = 1; depth <= t.depth() + 1; ++depth) {
      for (const auto& u : nodes_at_depth(depth)) {
        if (rng.coin()) continue;
        Rational c = rng.rational(3, 4);
        if (c != 0) coeffs.emplace(u, std::move(c));
      }
    }
  }
  return TreeSpanElement(coeffs, {});
}

}  // namespace

std::optional<Rational> exposure_distance(const Node& t, const Rational& eps, const TreeSpanElement& h) {
  const Rational width = pow2(-static_cast<long>(t.depth())) * eps;
  if (l1_norm(h) > 1) return std::nullopt;
  if (restricted_integral(h, support_of_f(t)) <= 1 - width) return std::nullopt;
  return l1_norm(TreeSpanElement::f_node(t) - h);
}

ExposureReport exposure_experiment(const Node& t, const Rational& eps, std::size_t samples, Rng& rng) {
  if (t.depth() == 0) throw PreconditionError("exposure needs a nonempty node");
  if (eps <= 0 || eps >= 1) throw PreconditionError("exposure needs 0 < eps < 1");
  ExposureReport report;
  report.node = t;
  report.eps = eps;
  report.width = pow2(-static_cast<long>(t.depth())) * eps;
  const TreeSpanElement ft = TreeSpanElement::f_node(t);
  const Region support = support_of_f(t);

  auto record = [&](const Rational& distance) {
    if (distance >= 2 * eps) ++report.violations;
    report.max_distance = max_of(report.max_distance, distance);
  };
  auto directed = [&]() {
    TreeSpanElement q = random_perturbation(t, rng);
    q *= 1 / l1_norm(q);
    const Rational on_support = restricted_integral(q, support);
    const long k = rng.between(2, 64);
    Rational s = on_support < 1 ? report.width / (1 - on_support) * make_rational(k - 1, k) : make_rational(k - 1, k);
    if (s > 1) s = 1;
    const TreeSpanElement h = (1 - s) * ft + s * q;
    const auto distance = exposure_distance(t, eps, h);
    if (!distance) throw Error("directed exposure sample left the slice");
    ++report.directed;
    record(*distance);
  };
  auto rejection = [&]() {
    for (int attempt = 0; attempt < 16; ++attempt) {
      ++report.rejection_attempts;
      TreeSpanElement q = random_perturbation(t, rng);
      q *= 1 / l1_norm(q);
      const Rational c = 1 - report.width * make_rational(rng.between(0, 63), 64);
      const Rational eta = report.width * make_rational(rng.between(1, 64), 64);
      TreeSpanElement h = c * ft + eta * q;
      const Rational norm = l1_norm(h);
      if (norm > 1) h *= 1 / norm;
      if (const auto distance = exposure_distance(t, eps, h)) {
        ++report.rejection_accepted;
        record(*distance);
        return true;
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < samples; ++i) {
    if (i % 2 == 1 && rejection()) continue;
    directed();
  }
  return report;
}

// ---------------------------------------------------------------------------
// Martingale and isometry

MartingaleReport martingale_and_isometry_check(long level, const std::map<Node, Rational>& a) {
  if (level < 1) throw PreconditionError("level must be at least 1");
  MartingaleReport report;
  report.level = level;
  for (long depth = 1; depth <= level; ++depth) {
    for (const auto& t : nodes_at_depth(static_cast<std::size_t>(depth))) {
      const TreeSpanElement diff = TreeSpanElement::h_node(t) - Rational(1, 2) * TreeSpanElement::h_node(t.child(false)) -
                                   Rational(1, 2) * TreeSpanElement::h_node(t.child(true));
      const CellFunction cells = CellFunction::of(diff, static_cast<std::size_t>(depth) + 1);
      if (cells.sup_abs() != 0) report.martingale_ok = false;
      ++report.nodes_checked;
    }
  }
  TreeSpanElement combination;
  for (const auto& [t, c] : a) {
    if (static_cast<long>(t.depth()) != level) throw PreconditionError("isometry coefficients must sit at the given level");
    report.coefficient_sum += abs_value(c);
    combination += TreeSpanElement::h_node(t, c);
  }
  report.norm = l1_norm(combination);
  report.norm_by_integration = l1_norm_by_integration(combination);
  report.isometry_ok = report.norm == report.coefficient_sum && report.norm_by_integration == report.coefficient_sum;
  return report;
}

Rational separation_functional_value(const Node& t, const Node& s) {
  if (t.depth() == 0 || s.depth() == 0) throw PreconditionError("separation needs nonempty nodes");
  const long n = static_cast<long>(t.depth());
  const TreeSpanElement fs = TreeSpanElement::f_node(s);
  const Region positive{{CellKind::b, n + 1, t}, {CellKind::c, n + 1, t}};
  const Region negative{{CellKind::c, n, t}};
  return restricted_integral(fs, positive) - restricted_integral(fs, negative);
}

// ---------------------------------------------------------------------------
// Witnesses

namespace {

void require_h_sphere(const TreeSpanElement& g) {
  if (!g.f().empty() || g.h().empty()) throw PreconditionError("element must be a nonzero h-span element");
  if (l1_norm(g) != 1) throw PreconditionError("element is not on the unit sphere");
}

// Coefficients of g on h_s for every s of the given depth.
std::vector<Rational> level_coefficients(const TreeSpanElement& g, std::size_t depth) {
  std::vector<Rational> gamma(std::size_t{1} << depth, Rational(0));
  for (const auto& [t, c] : g.h()) {
    const std::size_t extra = depth - t.depth();
    const Rational share = c * pow2(-static_cast<long>(extra));
    const std::uint64_t base = t.index() << extra;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << extra); ++k) gamma[base + k] += share;
  }
  return gamma;
}

struct LevelChoice {
  Node node;
  int sign = 1;
  Rational value;
};

LevelChoice best_level_node(const CellFunction& functional, const std::vector<Rational>& gamma, std::size_t depth) {
  std::optional<LevelChoice> best;
  for (std::uint64_t s = 0; s < gamma.size(); ++s) {
    if (gamma[s] == 0) continue;
    const Node node = Node::from_index(s, depth);
    const int sign = gamma[s] > 0 ? 1 : -1;
    Rational value = sign * pair_h(functional, node);
    if (!best || value > best->value) best = LevelChoice{node, sign, std::move(value)};
  }
  if (!best) throw PreconditionError("element has no h-coefficients");
  return *best;
}

constexpr std::size_t kMaxDescent = 20;

}  // namespace

NotRelativeDaugavetWitness not_relative_daugavet_witness(const TreeSpanElement& g, const CellFunction& functional,
                                                         const Rational& eps) {
  require_h_sphere(g);
  if (eps <= 0) throw PreconditionError("eps must be positive");
  if (functional.sup_abs() != 1) throw PreconditionError("functional must have essential supremum 1");
  if (pair(functional, g) != 1) throw PreconditionError("functional does not support the element");
  {
    const std::size_t depth = std::max(functional.depth(), g.depth());
    const CellFunction x = functional.refined(depth);
    const CellFunction cells = CellFunction::of(g, depth);
    for (std::uint64_t s = 0; s < x.width(); ++s) {
      for (long j = 1; j <= static_cast<long>(depth) + 1; ++j) {
        for (CellKind kind : {CellKind::b, CellKind::c}) {
          if (x.value(kind, j, s) != 0 && cells.value(kind, j, s) == 0) {
            throw PreconditionError("functional is not supported inside the element's support");
          }
        }
      }
    }
  }

  const std::size_t level = g.depth();
  const LevelChoice choice = best_level_node(functional, level_coefficients(g, level), level);
  if (choice.value <= 1 - eps) throw Error("no level node lies in the slice");

  NotRelativeDaugavetWitness w;
  w.level_node = choice.node;
  w.sign = choice.sign;
  for (std::size_t m = 0;; ++m) {
    if (m > kMaxDescent) throw LimitError("descent toward the slice did not terminate");
    const auto candidates = extensions(choice.node, m);
    Rational sum;
    std::optional<std::pair<Rational, Node>> best;
    for (const auto& u : candidates) {
      Rational v = choice.sign * pair_f(functional, u);
      sum += v;
      if (!best || v > best->first) best = std::make_pair(v, u);
    }
    if (sum * pow2(-static_cast<long>(m)) <= 1 - eps) continue;
    w.descent = m;
    w.node = best->second;
    w.slice_value = best->first;
    break;
  }
  const TreeSpanElement fu = TreeSpanElement::f_node(w.node);
  w.distance_plus = l1_norm(g + fu);
  w.distance_minus = l1_norm(g - fu);
  return w;
}

DeltaWitness delta_witness(const TreeSpanElement& g, const CellFunction& functional, const Rational& alpha,
                           const Rational& eps) {
  require_h_sphere(g);
  if (alpha <= 0 || eps <= 0) throw PreconditionError("alpha and eps must be positive");
  const Rational sup = functional.sup_abs();
  if (sup == 0 || sup > 1) throw PreconditionError("functional must lie on the dual unit sphere");
  const Rational on_g = pair(functional, g);
  if (on_g <= 1 - alpha) throw PreconditionError("element is not in the slice");

  DeltaWitness w;
  if (eps >= 2) {
    w.y = g;
    w.norm = Rational(1);
    w.functional_value = on_g;
    w.distance = Rational(0);
    w.support_measure = CellFunction::of(g).sign().l1_norm();
    return w;
  }
  const std::size_t level = std::max(functional.depth(), g.depth());
  const LevelChoice choice = best_level_node(functional, level_coefficients(g, level), level);
  Rational best_distance;
  for (std::size_t k = 0; level + k <= CellFunction::kMaxDepth; ++k) {
    Node s = choice.node;
    for (std::size_t i = 0; i < k; ++i) s = s.child(false);
    const TreeSpanElement y = TreeSpanElement::h_node(s, Rational(choice.sign));
    Rational distance = l1_norm(g - y);
    if (distance >= 2 - eps) {
      w.y = y;
      w.norm = l1_norm(y);
      w.functional_value = pair(functional, y);
      w.distance = std::move(distance);
      w.support_measure = pow2(-static_cast<long>(s.depth()) - 1);
      return w;
    }
    best_distance = max_of(best_distance, distance);
  }
  throw LimitError("delta witness budget infeasible; smallest reachable eps is " + to_string(2 - best_distance));
}

}  // namespace deltakit
