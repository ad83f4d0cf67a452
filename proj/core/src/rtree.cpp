#include "deltakit/rtree.hpp"

#include <algorithm>
#include <deque>

#include "deltakit/error.hpp"

namespace deltakit {

WeightedTree::WeightedTree(std::vector<std::string> vertices, std::vector<TreeEdge> edges, std::string_view base)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const std::size_t n = vertices_.size();
  if (n == 0) throw InputError("tree needs at least one vertex");
  if (edges_.size() + 1 != n) throw InputError("a tree on n vertices has n - 1 edges");
  std::map<std::string, std::size_t, std::less<>> ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ids.emplace(vertices_[i], i).second) throw InputError("duplicate vertex '" + vertices_[i] + "'");
  }
  auto b = ids.find(base);
  if (b == ids.end()) throw InputError("base vertex '" + std::string(base) + "' not in tree");
  base_ = b->second;

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacent(n);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    if (edge.u >= n || edge.v >= n || edge.u == edge.v) throw InputError("edge endpoints are invalid");
    if (edge.length <= 0) throw InputError("edge lengths must be positive");
    const auto key = std::minmax(edge.u, edge.v);
    if (!edge_index_.emplace(key, e).second) throw InputError("parallel edges are not allowed");
    adjacent[edge.u].emplace_back(edge.v, e);
    adjacent[edge.v].emplace_back(edge.u, e);
  }

  parent_.assign(n, n);
  depth_.assign(n, 0);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{base_};
  seen[base_] = true;
  std::size_t reached = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    ++reached;
    for (const auto& [w, e] : adjacent[v]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent_[w] = v;
      depth_[w] = depth_[v] + 1;
      queue.push_back(w);
    }
  }
  if (reached != n) throw InputError("tree edges do not connect all vertices");

  dist_.assign(n * n, Rational(0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> done(n, false);
    std::deque<std::size_t> q{s};
    done[s] = true;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      for (const auto& [w, e] : adjacent[v]) {
        if (done[w]) continue;
        done[w] = true;
        dist_[s * n + w] = dist_[s * n + v] + edges_[e].length;
        q.push_back(w);
      }
    }
  }
}

std::size_t WeightedTree::vertex(std::string_view id) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end()) throw PreconditionError("unknown vertex '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::optional<std::size_t> WeightedTree::edge_between(std::size_t a, std::size_t b) const {
  auto it = edge_index_.find(std::minmax(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> WeightedTree::vertex_path(std::size_t a, std::size_t b) const {
  std::vector<std::size_t> front{a};
  std::vector<std::size_t> back{b};
  while (a != b) {
    if (depth_[a] >= depth_[b]) {
      a = parent_[a];
      front.push_back(a);
    } else {
      b = parent_[b];
      back.push_back(b);
    }
  }
  back.pop_back();
  front.insert(front.end(), back.rbegin(), back.rend());
  return front;
}

TreePoint WeightedTree::point_on_edge(std::size_t edge, const Rational& offset_from_u) const {
  const auto& e = edges_.at(edge);
  if (offset_from_u < 0 || offset_from_u > e.length) throw PreconditionError("edge offset out of range");
  if (offset_from_u == 0) return TreePoint::vertex(e.u);
  if (offset_from_u == e.length) return TreePoint::vertex(e.v);
  return TreePoint::interior(edge, offset_from_u);
}

std::string WeightedTree::describe(const TreePoint& p) const {
  if (p.is_vertex()) return vertices_.at(p.vertex_index());
  const auto& e = edges_.at(p.edge_index());
  return vertices_[e.u] + "-" + vertices_[e.v] + "@" + to_string(p.offset());
}

FiniteMetricSpace WeightedTree::vertex_space(const std::vector<std::size_t>& keep) const {
  std::vector<std::string> ids;
  std::vector<Rational> flat;
  for (std::size_t v : keep) ids.push_back(vertices_.at(v));
  for (std::size_t a : keep) {
    for (std::size_t b : keep) flat.push_back(distance(a, b));
  }
  return FiniteMetricSpace(std::move(ids), vertices_[base_], std::move(flat));
}

// ---------------------------------------------------------------------------

namespace {

struct Anchor {
  std::size_t vertex;
  Rational offset;  // distance from the point to the vertex
};

std::vector<Anchor> anchors(const WeightedTree& tree, const TreePoint& p) {
  if (p.is_vertex()) return {{p.vertex_index(), Rational(0)}};
  const auto& e = tree.edges().at(p.edge_index());
  return {{e.u, p.offset()}, {e.v, e.length - p.offset()}};
}

bool same_open_edge(const TreePoint& p, const TreePoint& q) {
  return !p.is_vertex() && !q.is_vertex() && p.edge_index() == q.edge_index();
}

// Consecutive waypoints share an edge; the first is p and the last is q.
std::vector<TreePoint> route(const WeightedTree& tree, const TreePoint& p, const TreePoint& q) {
  if (p == q) return {p};
  if (same_open_edge(p, q)) return {p, q};
  const auto from = anchors(tree, p);
  const auto to = anchors(tree, q);
  std::optional<Rational> best;
  std::size_t exit_p = 0;
  std::size_t exit_q = 0;
  for (const auto& a : from) {
    for (const auto& b : to) {
      Rational len = a.offset + tree.distance(a.vertex, b.vertex) + b.offset;
      if (!best || len < *best) {
        best = std::move(len);
        exit_p = a.vertex;
        exit_q = b.vertex;
      }
    }
  }
  std::vector<TreePoint> out;
  if (!p.is_vertex()) out.push_back(p);
  for (std::size_t v : tree.vertex_path(exit_p, exit_q)) out.push_back(TreePoint::vertex(v));
  if (!q.is_vertex()) out.push_back(q);
  return out;
}

std::size_t shared_edge(const WeightedTree& tree, const TreePoint& a, const TreePoint& b) {
  if (!a.is_vertex()) return a.edge_index();
  if (!b.is_vertex()) return b.edge_index();
  auto e = tree.edge_between(a.vertex_index(), b.vertex_index());
  if (!e) throw Error("route waypoints do not share an edge");
  return *e;
}

Rational offset_on(const WeightedTree& tree, std::size_t edge, const TreePoint& p) {
  if (!p.is_vertex()) return p.offset();
  const auto& e = tree.edges()[edge];
  return p.vertex_index() == e.u ? Rational(0) : e.length;
}

}  // namespace

Rational tree_distance(const WeightedTree& tree, const TreePoint& p, const TreePoint& q) {
  if (same_open_edge(p, q)) return abs_value(p.offset() - q.offset());
  std::optional<Rational> best;
  for (const auto& a : anchors(tree, p)) {
    for (const auto& b : anchors(tree, q)) {
      Rational len = a.offset + tree.distance(a.vertex, b.vertex) + b.offset;
      if (!best || len < *best) best = std::move(len);
    }
  }
  return *best;
}

TreePoint point_along(const WeightedTree& tree, const TreePoint& x, const TreePoint& y, const Rational& along) {
  if (along < 0) throw PreconditionError("negative position along a segment");
  const auto waypoints = route(tree, x, y);
  Rational walked;
  for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
    const std::size_t e = shared_edge(tree, waypoints[k], waypoints[k + 1]);
    const Rational start = offset_on(tree, e, waypoints[k]);
    const Rational stop = offset_on(tree, e, waypoints[k + 1]);
    const Rational piece = abs_value(stop - start);
    if (along <= walked + piece) {
      const Rational step = along - walked;
      return tree.point_on_edge(e, stop > start ? Rational(start + step) : Rational(start - step));
    }
    walked += piece;
  }
  if (along == walked) return y;
  throw PreconditionError("position beyond the end of the segment");
}

TreePoint retract(const WeightedTree& tree, const TreePoint& x, const TreePoint& y, const TreePoint& p) {
  if (x == y) throw PreconditionError("retraction onto a degenerate segment");
  const Rational dxy = tree_distance(tree, x, y);
  const Rational along = (tree_distance(tree, p, x) + dxy - tree_distance(tree, p, y)) / 2;
  return point_along(tree, x, y, along);
}

std::vector<TreePoint> segment_samples(const WeightedTree& tree, const TreePoint& p, const TreePoint& q) {
  const auto waypoints = route(tree, p, q);
  std::vector<TreePoint> out;
  for (std::size_t k = 0; k < waypoints.size(); ++k) {
    out.push_back(waypoints[k]);
    if (k + 1 == waypoints.size()) break;
    const std::size_t e = shared_edge(tree, waypoints[k], waypoints[k + 1]);
    const Rational mid = (offset_on(tree, e, waypoints[k]) + offset_on(tree, e, waypoints[k + 1])) / 2;
    out.push_back(tree.point_on_edge(e, mid));
  }
  return out;
}

RetractionCheck retraction_identities_check(const WeightedTree& tree, const TreePoint& x, const TreePoint& y,
                                            const TreePoint& p, const TreePoint& q) {
  RetractionCheck check;
  const TreePoint yp = retract(tree, x, y, p);
  const TreePoint yq = retract(tree, x, y, q);
  check.projections_differ = !(yp == yq);
  if (check.projections_differ) {
    const Rational through =
        tree_distance(tree, p, yp) + tree_distance(tree, yp, yq) + tree_distance(tree, yq, q);
    check.decomposition_holds = tree_distance(tree, p, q) == through;
    check.samples = 1;
    return check;
  }
  for (const auto& r : segment_samples(tree, p, q)) {
    ++check.samples;
    if (!(retract(tree, x, y, r) == yp)) check.constant_on_segment = false;
  }
  return check;
}

// ---------------------------------------------------------------------------

RTreeSubset::RTreeSubset(TreeRef tree, std::set<std::size_t> members, std::set<std::size_t> full_edges)
    : tree_(std::move(tree)), members_(std::move(members)), full_edges_(std::move(full_edges)) {
  if (!tree_) throw InputError("subset needs a tree");
  for (std::size_t v : members_) {
    if (v >= tree_->size()) throw InputError("member vertex out of range");
  }
  for (std::size_t e : full_edges_) {
    if (e >= tree_->edges().size()) throw InputError("full edge out of range");
    const auto& edge = tree_->edges()[e];
    if (!members_.contains(edge.u) || !members_.contains(edge.v)) {
      throw InputError("full edge endpoints must be member vertices");
    }
  }
  if (!members_.contains(tree_->base())) throw InputError("the base vertex must belong to the subset");
  member_list_.assign(members_.begin(), members_.end());
  space_ = share(tree_->vertex_space(member_list_));
}

RTreeSubset RTreeSubset::whole(TreeRef tree) {
  std::set<std::size_t> members;
  std::set<std::size_t> edges;
  for (std::size_t v = 0; v < tree->size(); ++v) members.insert(v);
  for (std::size_t e = 0; e < tree->edges().size(); ++e) edges.insert(e);
  return RTreeSubset(std::move(tree), std::move(members), std::move(edges));
}

bool RTreeSubset::contains(const TreePoint& p) const {
  return p.is_vertex() ? members_.contains(p.vertex_index()) : full_edges_.contains(p.edge_index());
}

std::size_t RTreeSubset::space_index(std::size_t vertex) const {
  auto it = std::lower_bound(member_list_.begin(), member_list_.end(), vertex);
  if (it == member_list_.end() || *it != vertex) throw PreconditionError("vertex is not a member of the subset");
  return static_cast<std::size_t>(it - member_list_.begin());
}

bool segment_in_subset(const RTreeSubset& subset, const TreePoint& x, const TreePoint& y) {
  if (!subset.contains(x) || !subset.contains(y)) throw PreconditionError("segment endpoint outside the subset");
  const auto& tree = subset.tree();
  const auto waypoints = route(tree, x, y);
  for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
    if (!subset.full_edges().contains(shared_edge(tree, waypoints[k], waypoints[k + 1]))) return false;
  }
  return true;
}

FreeElement linearized_retraction(const RTreeSubset& subset, std::size_t x, std::size_t y, const FreeElement& mu) {
  if (x == y) throw PreconditionError("retraction onto a degenerate segment");
  const auto& tree = subset.tree();
  auto project = [&](std::size_t space_idx) {
    const TreePoint image =
        retract(tree, TreePoint::vertex(x), TreePoint::vertex(y), TreePoint::vertex(subset.tree_vertex(space_idx)));
    if (!image.is_vertex() || !subset.members().contains(image.vertex_index())) {
      throw PreconditionError("projection of an atom leaves the subset");
    }
    return subset.space_index(image.vertex_index());
  };
  // Push the zero-mass measure including the base atom; the base image
  // need not be the base.
  std::map<std::size_t, Rational> pushed;
  Rational mass;
  for (const auto& [p, c] : mu.coeffs()) {
    pushed[project(p)] += c;
    mass += c;
  }
  pushed[project(mu.space().base())] -= mass;
  return FreeElement(mu.space_ref(), pushed);
}

LProjectionSplit l_projection_split(const RTreeSubset& subset, std::size_t x, std::size_t y,
                                    const FreeElement& mu) {
  FreeElement head = linearized_retraction(subset, x, y, mu);
  FreeElement tail = mu - head;
  LProjectionSplit split{head, tail, free_norm(mu), free_norm(head), free_norm(tail), false};
  split.additive = split.norm == split.head_norm + split.tail_norm;
  return split;
}

// ---------------------------------------------------------------------------

FreeElement combination_element(const RTreeSubset& subset, const MoleculeCombination& combination) {
  FreeElement total(subset.space());
  for (const auto& m : combination) {
    total += m.weight * molecule(subset.space(), subset.space_index(m.x), subset.space_index(m.y));
  }
  return total;
}

namespace {

void require_convex(const MoleculeCombination& combination) {
  if (combination.empty()) throw PreconditionError("empty molecule combination");
  Rational total;
  for (const auto& m : combination) {
    if (m.weight <= 0) throw PreconditionError("combination weights must be positive");
    if (m.x == m.y) throw PreconditionError("molecule needs two distinct points");
    total += m.weight;
  }
  if (total != 1) throw PreconditionError("combination weights must sum to 1");
}

// d(a, Y_{a b} p), with the degenerate segment a == b giving 0.
Rational reach_from(const WeightedTree& tree, std::size_t a, std::size_t b, std::size_t p) {
  if (a == b) return Rational(0);
  const TreePoint image = retract(tree, TreePoint::vertex(a), TreePoint::vertex(b), TreePoint::vertex(p));
  return tree_distance(tree, TreePoint::vertex(a), image);
}

}  // namespace

LipschitzFunction g_mu_build(const RTreeSubset& subset, const MoleculeCombination& combination,
                             const LipschitzFunction& norming) {
  require_convex(combination);
  const FreeElement mu = combination_element(subset, combination);
  if (lip_norm(norming) > 1 || eval_functional(norming, mu) != 1) {
    throw PreconditionError("functional does not norm the combination");
  }
  const auto& tree = subset.tree();
  const auto& space = subset.space();
  std::vector<Rational> values(space->size());
  for (std::size_t s = 0; s < space->size(); ++s) {
    const std::size_t p = subset.tree_vertex(s);
    std::optional<Rational> outer;
    for (const auto& mi : combination) {
      Rational farthest;
      for (const auto& mj : combination) {
        Rational reach = reach_from(tree, mi.x, mj.y, p);
        if (reach > farthest) farthest = std::move(reach);
      }
      Rational candidate = norming(subset.space_index(mi.x)) - farthest;
      if (!outer || candidate > *outer) outer = std::move(candidate);
    }
    values[s] = *outer;
  }
  return LipschitzFunction(space, std::move(values));
}

GMuPropertyResult g_mu_property_check(const RTreeSubset& subset, const MoleculeCombination& combination,
                                      const LipschitzFunction& g, std::size_t u, std::size_t v,
                                      const Rational& alpha) {
  if (u == v) throw PreconditionError("property check needs u != v");
  const auto& tree = subset.tree();
  const Rational duv = tree.distance(u, v);
  GMuPropertyResult result;
  const Rational value = (g(subset.space_index(u)) - g(subset.space_index(v))) / duv;
  result.in_slice = value > 1 - alpha;
  if (!result.in_slice) return result;
  const Rational bound = (1 - alpha) * duv;
  for (std::size_t i = 0; i < combination.size(); ++i) {
    for (std::size_t j = 0; j < combination.size(); ++j) {
      const std::size_t a = combination[i].x;
      const std::size_t b = combination[j].y;
      if (a == b) continue;
      const TreePoint ya = TreePoint::vertex(a);
      const TreePoint yb = TreePoint::vertex(b);
      Rational projected = tree_distance(tree, retract(tree, ya, yb, TreePoint::vertex(u)),
                                         retract(tree, ya, yb, TreePoint::vertex(v)));
      if (bound < projected) {
        result.witness = ProjectionWitness{i, j, std::move(projected)};
        return result;
      }
    }
  }
  return result;
}

MoleculeCombination recombine(const RTreeSubset& subset, const MoleculeCombination& combination) {
  require_convex(combination);
  const auto& tree = subset.tree();
  for (const auto& m : combination) {
    if (!segment_in_subset(subset, TreePoint::vertex(m.x), TreePoint::vertex(m.y))) {
      throw PreconditionError("segment [" + tree.vertices()[m.x] + "," + tree.vertices()[m.y] +
                              "] is not contained in the subset");
    }
  }
  std::vector<std::size_t> endpoints;
  for (const auto& m : combination) {
    endpoints.push_back(m.x);
    endpoints.push_back(m.y);
  }

  std::map<std::pair<std::size_t, std::size_t>, Rational> merged;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (const auto& m : combination) {
    const TreePoint from = TreePoint::vertex(m.x);
    const TreePoint to = TreePoint::vertex(m.y);
    std::vector<std::pair<Rational, std::size_t>> stops;
    for (std::size_t e : endpoints) {
      const TreePoint image = retract(tree, from, to, TreePoint::vertex(e));
      // Endpoints are vertices, so their projections onto [x,y] are too.
      stops.emplace_back(tree.distance(m.x, image.vertex_index()), image.vertex_index());
    }
    std::sort(stops.begin(), stops.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    stops.erase(std::unique(stops.begin(), stops.end(),
                            [](const auto& a, const auto& b) { return a.second == b.second; }),
                stops.end());
    const Rational& total = tree.distance(m.x, m.y);
    for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
      const auto key = std::make_pair(stops[k].second, stops[k + 1].second);
      auto [it, inserted] = merged.emplace(key, Rational(0));
      if (inserted) order.push_back(key);
      it->second += m.weight * (stops[k + 1].first - stops[k].first) / total;
    }
  }
  MoleculeCombination out;
  for (const auto& key : order) out.push_back({merged[key], key.first, key.second});
  return out;
}

bool recombination_property_holds(const WeightedTree& tree, const MoleculeCombination& combination) {
  for (std::size_t j = 0; j < combination.size(); ++j) {
    const TreePoint a = TreePoint::vertex(combination[j].x);
    const TreePoint b = TreePoint::vertex(combination[j].y);
    for (std::size_t k = 0; k < combination.size(); ++k) {
      if (j == k) continue;
      const TreePoint pu = retract(tree, a, b, TreePoint::vertex(combination[k].x));
      const TreePoint pv = retract(tree, a, b, TreePoint::vertex(combination[k].y));
      if (!(pu == pv) || !(pu == a || pu == b)) return false;
    }
  }
  return true;
}

DaugavetWitness daugavet_witness_h(const RTreeSubset& subset, const FreeElement& mu, const LipschitzFunction& f,
                                   std::size_t x, std::size_t y, const Rational& eps) {
  if (eps <= 0 || eps >= Rational(1, 2)) throw PreconditionError("eps must lie in (0, 1/2)");
  if (x == y) throw PreconditionError("target molecule needs x != y");
  if (lip_norm(f) > 1 || eval_functional(f, mu) != 1) throw PreconditionError("functional does not norm mu");
  const auto& tree = subset.tree();
  const auto& space = subset.space();
  const std::size_t sx = subset.space_index(x);
  const std::size_t sy = subset.space_index(y);
  const Rational dxy = tree.distance(x, y);

  // f shifted to vanish at x, then extended to the whole tree with constant 1.
  auto shifted = [&](std::size_t s) { return f(s) - f(sx); };
  auto extended = [&](const TreePoint& q) {
    std::optional<Rational> best;
    for (std::size_t s = 0; s < space->size(); ++s) {
      Rational candidate = shifted(s) - tree_distance(tree, q, TreePoint::vertex(subset.tree_vertex(s)));
      if (!best || candidate > *best) best = std::move(candidate);
    }
    return *best;
  };
  const Rational cap = (1 - 4 * eps) * dxy - shifted(sy);
  if (cap <= 0) throw PreconditionError("f already separates m_xy; no auxiliary function needed");

  std::vector<Rational> g(space->size());
  const TreePoint tx = TreePoint::vertex(x);
  const TreePoint ty = TreePoint::vertex(y);
  for (std::size_t s = 0; s < space->size(); ++s) {
    const TreePoint image = retract(tree, tx, ty, TreePoint::vertex(subset.tree_vertex(s)));
    Rational raw = tree_distance(tree, tx, image) - extended(image) - 2 * eps * dxy;
    g[s] = min_of(max_of(raw, Rational(0)), cap);
  }
  const LipschitzFunction g_fn(space, g);
  LipschitzFunction h = f + g_fn;

  const FreeElement m_xy = molecule(space, sx, sy);
  const FreeElement m_yx = molecule(space, sy, sx);
  Rational g_on_mu = eval_functional(g_fn, mu);
  Rational lip = lip_norm(h);
  Rational h_on_mu = eval_functional(h, mu);
  Rational h_on_reverse = eval_functional(h, m_yx);
  Rational gap = h_on_mu - eval_functional(h, m_xy);
  return DaugavetWitness{g_fn, cap, std::move(h), std::move(g_on_mu), std::move(lip), std::move(h_on_mu),
                         std::move(h_on_reverse), std::move(gap)};
}

}  // namespace deltakit
