#pragma once

// Finite R-trees realized as edge-weighted trees. Points may sit on vertices
// or strictly inside edges, so projections onto segments are exact without
// subdividing. A closed subset M is given by member vertices plus edges that
// are wholly contained in M.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "deltakit/freespace.hpp"
#include "deltakit/rational.hpp"

namespace deltakit {

struct TreeEdge {
  std::size_t u;
  std::size_t v;
  Rational length;
};

class TreePoint {
 public:
  static TreePoint vertex(std::size_t v) { return TreePoint(v, std::nullopt, Rational(0)); }
  /// Offset measured from the edge's `u` endpoint; must be interior.
  /// Use WeightedTree::point_on_edge to normalize endpoints.
  static TreePoint interior(std::size_t edge, Rational offset) {
    return TreePoint(0, edge, std::move(offset));
  }

  bool is_vertex() const { return !edge_; }
  std::size_t vertex_index() const { return vertex_; }
  std::size_t edge_index() const { return *edge_; }
  const Rational& offset() const { return offset_; }

  friend bool operator==(const TreePoint&, const TreePoint&) = default;

 private:
  TreePoint(std::size_t v, std::optional<std::size_t> e, Rational offset)
      : vertex_(v), edge_(e), offset_(std::move(offset)) {}

  std::size_t vertex_;
  std::optional<std::size_t> edge_;
  Rational offset_;
};

class WeightedTree {
 public:
  /// Throws InputError unless the edges form a spanning tree with positive
  /// lengths over distinct vertex ids.
  WeightedTree(std::vector<std::string> vertices, std::vector<TreeEdge> edges, std::string_view base);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  std::size_t base() const { return base_; }
  std::size_t vertex(std::string_view id) const;
  std::optional<std::size_t> edge_between(std::size_t a, std::size_t b) const;

  /// Vertex distance.
  const Rational& distance(std::size_t a, std::size_t b) const { return dist_[a * size() + b]; }
  /// Vertices along the path from a to b, inclusive.
  std::vector<std::size_t> vertex_path(std::size_t a, std::size_t b) const;

  /// Offset 0 and the full length collapse to the endpoints.
  TreePoint point_on_edge(std::size_t edge, const Rational& offset_from_u) const;
  std::string describe(const TreePoint& p) const;

  /// The finite metric space on the given vertices with the tree metric.
  FiniteMetricSpace vertex_space(const std::vector<std::size_t>& keep) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<TreeEdge> edges_;
  std::size_t base_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> depth_;
  std::vector<Rational> dist_;
};

using TreeRef = std::shared_ptr<const WeightedTree>;

Rational tree_distance(const WeightedTree& tree, const TreePoint& p, const TreePoint& q);

/// The point of [x,y] at distance `along` from x (0 <= along <= d(x,y)).
TreePoint point_along(const WeightedTree& tree, const TreePoint& x, const TreePoint& y, const Rational& along);

/// Nearest-point projection of p onto [x,y]. Throws PreconditionError if x == y.
TreePoint retract(const WeightedTree& tree, const TreePoint& x, const TreePoint& y, const TreePoint& p);

/// Vertices and interior points where [p,q] changes edge, plus the midpoint
/// of every traversed edge fragment.
std::vector<TreePoint> segment_samples(const WeightedTree& tree, const TreePoint& p, const TreePoint& q);

struct RetractionCheck {
  bool projections_differ = false;
  bool decomposition_holds = true;  // meaningful when projections differ
  bool constant_on_segment = true;  // meaningful when they coincide
  std::size_t samples = 0;

  bool ok() const { return projections_differ ? decomposition_holds : constant_on_segment; }
};

RetractionCheck retraction_identities_check(const WeightedTree& tree, const TreePoint& x, const TreePoint& y,
                                            const TreePoint& p, const TreePoint& q);

class RTreeSubset {
 public:
  /// Throws InputError unless every full edge has member endpoints and the
  /// base vertex is a member.
  RTreeSubset(TreeRef tree, std::set<std::size_t> members, std::set<std::size_t> full_edges);

  static RTreeSubset whole(TreeRef tree);

  const WeightedTree& tree() const { return *tree_; }
  const TreeRef& tree_ref() const { return tree_; }
  const std::set<std::size_t>& members() const { return members_; }
  const std::set<std::size_t>& full_edges() const { return full_edges_; }
  bool contains(const TreePoint& p) const;

  /// Free-space host: member vertices with the tree metric, same ids.
  const SpaceRef& space() const { return space_; }
  std::size_t space_index(std::size_t vertex) const;
  std::size_t tree_vertex(std::size_t space_index) const { return member_list_.at(space_index); }

 private:
  TreeRef tree_;
  std::set<std::size_t> members_;
  std::set<std::size_t> full_edges_;
  std::vector<std::size_t> member_list_;
  SpaceRef space_;
};

/// [x,y] subset of M, decided edge by edge. Throws if x or y is outside M.
bool segment_in_subset(const RTreeSubset& subset, const TreePoint& x, const TreePoint& y);

/// Pushes every atom of mu (over subset.space()) to its projection on [x,y].
FreeElement linearized_retraction(const RTreeSubset& subset, std::size_t x, std::size_t y, const FreeElement& mu);

struct LProjectionSplit {
  FreeElement head;
  FreeElement tail;
  Rational norm;
  Rational head_norm;
  Rational tail_norm;
  bool additive = false;
};

/// x, y are tree vertices. Throws PreconditionError when x == y or a
/// projected atom would leave the member vertices.
LProjectionSplit l_projection_split(const RTreeSubset& subset, std::size_t x, std::size_t y,
                                    const FreeElement& mu);

// ---------------------------------------------------------------------------
// Convex combinations of molecules

struct WeightedMolecule {
  Rational weight;
  std::size_t x;  // tree vertices
  std::size_t y;

  friend bool operator==(const WeightedMolecule&, const WeightedMolecule&) = default;
};

using MoleculeCombination = std::vector<WeightedMolecule>;

/// Sum of weight * m_xy over subset.space().
FreeElement combination_element(const RTreeSubset& subset, const MoleculeCombination& combination);

/// g(p) = max_i ( f(x_i) - max_j d(x_i, Y_{x_i y_j} p) ) on the members,
/// with Y_{zz} p = z. Requires positive weights summing to 1 and a norming
/// f (norm <= 1, f(mu) = 1); throws PreconditionError otherwise.
LipschitzFunction g_mu_build(const RTreeSubset& subset, const MoleculeCombination& combination,
                             const LipschitzFunction& norming);

struct ProjectionWitness {
  std::size_t i;
  std::size_t j;
  Rational projected_distance;  // d(Y u, Y v) for Y = Y_{x_i y_j}
};

struct GMuPropertyResult {
  bool in_slice = false;
  std::optional<ProjectionWitness> witness;

  bool ok() const { return !in_slice || witness.has_value(); }
};

/// u, v are tree vertices in M. If m_uv lies in S(g, alpha), searches i, j
/// with x_i != y_j and (1 - alpha) d(u,v) < d(Y_{x_i y_j} u, Y_{x_i y_j} v).
GMuPropertyResult g_mu_property_check(const RTreeSubset& subset, const MoleculeCombination& combination,
                                      const LipschitzFunction& g, std::size_t u, std::size_t v,
                                      const Rational& alpha);

/// Splits every m_{x_i y_i} along the projections of all endpoints onto
/// [x_i, y_i] and merges equal molecules. Throws PreconditionError unless
/// every [x_i, y_i] lies in M.
MoleculeCombination recombine(const RTreeSubset& subset, const MoleculeCombination& combination);

/// For j != k: Y_{u_j v_j} maps u_k and v_k to the same endpoint of [u_j, v_j].
bool recombination_property_holds(const WeightedTree& tree, const MoleculeCombination& combination);

struct DaugavetWitness {
  LipschitzFunction g;      // normalized at the base; g - g(x) is the raw clamp
  Rational cap;             // (1 - 4 eps) d(x,y) - (f(y) - f(x))
  LipschitzFunction h;
  Rational g_on_mu;         // must vanish for the conclusion
  Rational lip;             // lip_norm(h)
  Rational h_on_mu;
  Rational h_on_reverse;    // h(m_yx)
  Rational gap;             // h(mu) - h(m_xy)
};

/// Builds h = f + g for a target molecule m_xy (x, y tree vertices in M)
/// with 0 < eps < 1/2. Requires f norming mu and f(y) - f(x) < (1 - 4 eps) d(x,y);
/// in the opposite case f itself already witnesses the distance and
/// PreconditionError is thrown.
DaugavetWitness daugavet_witness_h(const RTreeSubset& subset, const FreeElement& mu, const LipschitzFunction& f,
                                   std::size_t x, std::size_t y, const Rational& eps);

}  // namespace deltakit
