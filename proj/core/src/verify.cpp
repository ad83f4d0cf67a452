#include "deltakit/verify.hpp"

#include <algorithm>
#include <memory>

#include "deltakit/error.hpp"
#include "deltakit/lp.hpp"
#include "deltakit/random.hpp"

namespace deltakit {

namespace {

constexpr std::size_t kMaxCounterexamples = 5;

struct Check {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  Json details = Json::object();
  Json counterexamples = Json::array();

  explicit Check(std::string n) : name(std::move(n)) {}

  void expect(bool ok, const Json& example) {
    ++instances;
    if (ok) return;
    ++failures;
    if (counterexamples.size() < kMaxCounterexamples) counterexamples.push_back(example);
  }

  bool passed() const { return failures == 0 && instances > 0; }

  Json to_json() const {
    Json j;
    j["name"] = name;
    j["passed"] = passed();
    j["instances"] = instances;
    j["failures"] = failures;
    if (!details.empty()) j["details"] = details;
    if (!counterexamples.empty()) j["counterexamples"] = counterexamples;
    return j;
  }
};

Json suite_json(std::string_view name, const VerifyConfig& config, const std::vector<Check>& checks) {
  Json j;
  j["suite"] = name;
  j["seed"] = config.seed;
  j["samples"] = config.samples;
  j["depth"] = config.depth;
  Json list = Json::array();
  bool passed = true;
  for (const auto& c : checks) {
    list.push_back(c.to_json());
    passed = passed && c.passed();
  }
  j["checks"] = std::move(list);
  j["passed"] = passed;
  return j;
}

// Each suite draws from its own stream so that running one suite alone
// reproduces the same instances as running "all".
Rng suite_rng(const VerifyConfig& config, std::uint64_t salt) { return Rng(config.seed * 0x9E3779B97F4A7C15ULL + salt); }

std::vector<std::size_t> distinct_indices(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
  all.resize(k);
  return all;
}

Json ids_json(const FiniteMetricSpace& space, std::initializer_list<std::size_t> points) {
  Json j = Json::array();
  for (auto p : points) j.push_back(space.id(p));
  return j;
}

// ---------------------------------------------------------------------------
// metric

Json metric_suite(const VerifyConfig& config) {
  Rng rng = suite_rng(config, 1);
  Check random("random_spaces_validate");
  Check corrupted("corrupted_tables_rejected");
  Check segments("segment_symmetry");
  Check examples("example_spaces_validate");
  Check landmark("landmark_distances");

  for (std::size_t i = 0; i < config.samples; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.between(1, 8));
    const FiniteMetricSpace space = random_metric_space(rng, n);
    random.expect(validate_metric(space).ok(), space_to_json(space));

    const std::size_t p = rng.below(n);
    const std::size_t q = rng.below(n);
    const auto forward = metric_segment(space, p, q);
    const auto backward = metric_segment(space, q, p);
    const bool ends = std::binary_search(forward.begin(), forward.end(), p) &&
                      std::binary_search(forward.begin(), forward.end(), q);
    segments.expect(forward == backward && ends, ids_json(space, {p, q}));

    if (n < 3) continue;
    const auto t = distinct_indices(rng, n, 3);
    MetricTable stretched = space.to_table();
    const Rational too_long = space.dist(t[0], t[1]) + space.dist(t[1], t[2]) + 1;
    stretched.dist[t[0]][t[2]] = too_long;
    stretched.dist[t[2]][t[0]] = too_long;
    const auto triangle = validate_metric(stretched);
    corrupted.expect(triangle.status == ValidationStatus::axiom_violated && triangle.witness.size() == 3,
                     Json{{"corruption", "triangle"}, {"points", ids_json(space, {t[0], t[1], t[2]})}});

    MetricTable skewed = space.to_table();
    *skewed.dist[t[0]][t[1]] += 1;
    const auto symmetry = validate_metric(skewed);
    corrupted.expect(symmetry.status == ValidationStatus::axiom_violated && symmetry.witness.size() == 2,
                     Json{{"corruption", "symmetry"}, {"points", ids_json(space, {t[0], t[1]})}});

    MetricTable holed = space.to_table();
    holed.dist[t[0]][t[1]].reset();
    corrupted.expect(validate_metric(holed).status == ValidationStatus::malformed,
                     Json{{"corruption", "missing"}, {"points", ids_json(space, {t[0], t[1]})}});
  }

  for (int level = 1; level <= 4; ++level) {
    examples.expect(validate_metric(example_space_a(level)).ok(), Json{{"example", "a"}, {"level", level}});
    examples.expect(validate_metric(example_space_b(level)).ok(), Json{{"example", "b"}, {"level", level}});
  }

  const GridPoint corner{Rational(1), Rational(1, 4)};
  landmark.expect(ladder_distance(landmarks::x(), landmarks::u()) == Rational(1, 2), "d(x,u) = 1/2");
  landmark.expect(ladder_distance(landmarks::u(), landmarks::v()) == 1, "d(u,v) = 1");
  landmark.expect(ladder_distance(landmarks::x(), corner) == Rational(5, 4), "d(x,(1,1/4)) = 5/4");
  landmark.expect(ladder_distance(landmarks::x(), landmarks::y()) == 1, "d(x,y) = 1");

  return suite_json("metric", config, {random, corrupted, segments, examples, landmark});
}

// ---------------------------------------------------------------------------
// freespace

FreeElement random_element(Rng& rng, const SpaceRef& space, std::size_t max_atoms) {
  std::map<std::size_t, Rational> coeffs;
  const std::size_t atoms = static_cast<std::size_t>(rng.between(1, static_cast<long>(max_atoms)));
  for (std::size_t k = 0; k < atoms; ++k) coeffs[rng.below(space->size())] += rng.rational(5, 3);
  return FreeElement(space, coeffs);
}

Json freespace_suite(const VerifyConfig& config) {
  Rng rng = suite_rng(config, 2);
  Check duality("transport_duality");
  Check masses("point_masses_and_molecules");
  Check extension("mcshane_extension");
  Check example_a("example_a_level_3");
  Check example_b("example_b_level_4");

  for (std::size_t i = 0; i < config.samples; ++i) {
    const std::size_t n = static_cast<std::size_t>(rng.between(2, 8));
    const SpaceRef space = share(random_metric_space(rng, n));
    const FreeElement mu = random_element(rng, space, 6);
    const Rational primal = free_norm(mu);
    const Rational dual = lipschitz_dual_value(mu);
    bool certified = true;
    try {
      check_certificate(mu, free_norm_certified(mu));
    } catch (const Error&) {
      certified = false;
    }
    duality.expect(primal == dual && certified,
                   Json{{"space", space_to_json(*space)}, {"element", free_element_to_json(mu)},
                        {"primal", to_string(primal)}, {"dual", to_string(dual)}});

    bool pairs_ok = true;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        if (p == q) continue;
        const FreeElement diff = FreeElement::delta(space, p) - FreeElement::delta(space, q);
        pairs_ok = pairs_ok && free_norm(diff) == space->dist(p, q) && free_norm(molecule(space, p, q)) == 1;
      }
    }
    masses.expect(pairs_ok, space_to_json(*space));

    std::map<std::size_t, Rational> partial;
    for (auto p : distinct_indices(rng, n, static_cast<std::size_t>(rng.between(1, static_cast<long>(n))))) {
      partial[p] = rng.rational(4, 3);
    }
    const Rational constant = lipschitz_constant(*space, partial);
    const LipschitzFunction ext = mcshane_extend(space, partial);
    bool agrees = true;
    const Rational shift = ext(partial.begin()->first) - partial.begin()->second;
    for (const auto& [p, value] : partial) agrees = agrees && ext(p) - value == shift;
    extension.expect(agrees && lip_norm(ext) == constant, space_to_json(*space));
  }

  const Json a = example_a_report(3);
  example_a.expect(report_passed(a), a.at("distance_m_xy_m_uv"));
  example_a.details["distance_m_xy_m_uv"] = a.at("distance_m_xy_m_uv");
  example_a.details["certified_denting_molecules"] = a.at("denting").at("certified");
  const Json b = example_b_report(4, 20, config.seed);
  example_b.expect(report_passed(b), Json{{"level", 4}});
  example_b.details["adjacent_pairs"] = b.at("pairs").size();
  example_b.details["slices"] = b.at("slices").size();

  return suite_json("freespace", config, {duality, masses, extension, example_a, example_b});
}

// ---------------------------------------------------------------------------
// rtree

TreePoint random_tree_point(Rng& rng, const WeightedTree& tree) {
  if (tree.edges().empty() || rng.coin()) return TreePoint::vertex(rng.below(tree.size()));
  const std::size_t e = rng.below(tree.edges().size());
  return tree.point_on_edge(e, tree.edges()[e].length * make_rational(rng.between(1, 7), 8));
}

std::vector<Rational> random_weights(Rng& rng, std::size_t k) {
  std::vector<long> raw(k);
  long total = 0;
  for (auto& w : raw) total += (w = rng.between(1, 6));
  std::vector<Rational> out;
  for (long w : raw) out.push_back(make_rational(w, total));
  return out;
}

struct NormedCombination {
  MoleculeCombination combination;
  FreeElement mu;
  LipschitzFunction norming;
};

// A random 1-Lipschitz function with f(a) - f(b) = d(a,b), and molecules
// drawn from the pairs it norms. Every such combination has norm 1.
NormedCombination normed_combination(Rng& rng, const RTreeSubset& subset) {
  const auto& space = subset.space();
  const auto ends = distinct_indices(rng, space->size(), 2);
  LipschitzFunction f = random_lipschitz(rng, space, {{ends[0], space->dist(ends[0], ends[1])}, {ends[1], Rational(0)}});
  std::vector<std::pair<std::size_t, std::size_t>> normed;
  for (std::size_t p = 0; p < space->size(); ++p) {
    for (std::size_t q = 0; q < space->size(); ++q) {
      if (p != q && f(p) - f(q) == space->dist(p, q)) normed.emplace_back(p, q);
    }
  }
  const auto weights = random_weights(rng, static_cast<std::size_t>(rng.between(1, 4)));
  MoleculeCombination combination;
  for (const auto& w : weights) {
    const auto& [p, q] = normed[rng.below(normed.size())];
    combination.push_back({w, subset.tree_vertex(p), subset.tree_vertex(q)});
  }
  FreeElement mu = combination_element(subset, combination);
  return NormedCombination{std::move(combination), std::move(mu), std::move(f)};
}

Json combination_json(const WeightedTree& tree, const MoleculeCombination& combination) {
  Json j = Json::array();
  for (const auto& m : combination) {
    j.push_back(Json{{"weight", to_string(m.weight)}, {"x", tree.vertices()[m.x]}, {"y", tree.vertices()[m.y]}});
  }
  return j;
}

Json rtree_suite(const VerifyConfig& config) {
  Rng rng = suite_rng(config, 3);
  Check retraction("retraction_identities");
  Check lipschitz("retraction_idempotent_and_1_lipschitz");
  Check split("l_projection_additivity");
  Check gmu("g_mu_property");
  Check recombination("recombination_preserves_element");
  Check projection("recombination_projection_property");
  Check witness("daugavet_witness");
  std::size_t gmu_in_slice = 0;
  std::size_t witness_skipped = 0;
  std::size_t witness_obstructed = 0;

  for (std::size_t i = 0; i < config.samples; ++i) {
    auto tree = std::make_shared<const WeightedTree>(random_tree(rng, static_cast<std::size_t>(rng.between(2, 10))));
    const RTreeSubset whole = RTreeSubset::whole(tree);
    const Json tree_doc = tree_to_json(*tree);

    TreePoint x = random_tree_point(rng, *tree);
    TreePoint y = random_tree_point(rng, *tree);
    while (y == x) y = random_tree_point(rng, *tree);
    const TreePoint p = random_tree_point(rng, *tree);
    const TreePoint q = random_tree_point(rng, *tree);
    const Json where{{"tree", tree_doc},
                     {"x", tree->describe(x)},
                     {"y", tree->describe(y)},
                     {"p", tree->describe(p)},
                     {"q", tree->describe(q)}};
    retraction.expect(retraction_identities_check(*tree, x, y, p, q).ok(), where);
    const TreePoint yp = retract(*tree, x, y, p);
    const TreePoint yq = retract(*tree, x, y, q);
    lipschitz.expect(retract(*tree, x, y, yp) == yp && tree_distance(*tree, yp, yq) <= tree_distance(*tree, p, q), where);

    const auto& space = whole.space();
    const FreeElement mu = random_element(rng, space, 6);
    const auto ends = distinct_indices(rng, tree->size(), 2);
    const LProjectionSplit parts = l_projection_split(whole, ends[0], ends[1], mu);
    split.expect(parts.additive && parts.norm == parts.head_norm + parts.tail_norm &&
                     parts.head == linearized_retraction(whole, ends[0], ends[1], mu),
                 Json{{"tree", tree_doc}, {"element", free_element_to_json(mu)}});

    MoleculeCombination loose;
    const auto weights = random_weights(rng, static_cast<std::size_t>(rng.between(1, 4)));
    for (const auto& w : weights) {
      const auto pair = distinct_indices(rng, tree->size(), 2);
      loose.push_back({w, pair[0], pair[1]});
    }
    const MoleculeCombination merged = recombine(whole, loose);
    recombination.expect(combination_element(whole, merged) == combination_element(whole, loose),
                         Json{{"tree", tree_doc}, {"combination", combination_json(*tree, loose)}});

    const auto normed = normed_combination(rng, whole);
    const Json combo_doc{{"tree", tree_doc}, {"combination", combination_json(*tree, normed.combination)}};
    const MoleculeCombination split_up = recombine(whole, normed.combination);
    projection.expect(combination_element(whole, split_up) == normed.mu && recombination_property_holds(*tree, split_up),
                      combo_doc);

    {
      const LipschitzFunction g = g_mu_build(whole, normed.combination, normed.norming);
      const Rational alpha = make_rational(rng.between(1, 8), 8);
      bool ok = eval_functional(g, normed.mu) == 1 && lip_norm(g) <= 1;
      for (std::size_t u = 0; u < tree->size() && ok; ++u) {
        for (std::size_t v = 0; v < tree->size() && ok; ++v) {
          if (u == v) continue;
          const auto result = g_mu_property_check(whole, normed.combination, g, u, v, alpha);
          if (result.in_slice) ++gmu_in_slice;
          ok = result.ok();
        }
      }
      gmu.expect(ok, combo_doc);
    }

    const auto target = distinct_indices(rng, tree->size(), 2);
    const Rational eps = make_rational(rng.between(1, 7), 32);
    try {
      const DaugavetWitness w = daugavet_witness_h(whole, normed.mu, normed.norming, target[0], target[1], eps);
      if (w.g_on_mu != 0) {
        ++witness_obstructed;
        continue;
      }
      witness.expect(w.lip == 1 && w.gap == 2 - 4 * eps && w.h_on_reverse == 1 - 4 * eps && w.h_on_mu == 1,
                     Json{{"instance", combo_doc},
                          {"x", tree->vertices()[target[0]]},
                          {"y", tree->vertices()[target[1]]},
                          {"eps", to_string(eps)},
                          {"lip", to_string(w.lip)},
                          {"gap", to_string(w.gap)}});
    } catch (const PreconditionError&) {
      ++witness_skipped;
    }
  }
  gmu.details["pairs_in_slice"] = gmu_in_slice;
  witness.details["precondition_not_met"] = witness_skipped;
  witness.details["g_nonzero_on_mu"] = witness_obstructed;
  return suite_json("rtree", config, {retraction, lipschitz, split, gmu, recombination, projection, witness});
}

// ---------------------------------------------------------------------------
// absnorm

PlanePoint circle_point(const Rational& t) {
  const Rational denom = 1 + t * t;
  return {(1 - t * t) / denom, 2 * t / denom};
}

PolyhedralNorm random_polyhedral(Rng& rng) {
  std::set<long> picks;
  const long count = rng.between(0, 4);
  for (long k = 0; k < count; ++k) picks.insert(rng.between(1, 15));
  std::vector<PlanePoint> cone{{Rational(1), Rational(0)}};
  for (long k : picks) cone.push_back(circle_point(make_rational(k, 16)));
  cone.push_back({Rational(0), Rational(1)});
  return PolyhedralNorm(std::move(cone));
}

Json absnorm_suite(const VerifyConfig& config) {
  Rng rng = suite_rng(config, 4);
  Check classical("l1_linf_extreme_and_v_points");
  Check smooth("lp_has_no_v_points");
  Check figure("figure_norm_polyhedral");
  Check transfer("transfer_predicate");
  Check bipolar("bipolarity");
  Check slices("supporting_slices");

  const Rational one(1);
  const Rational zero(0);
  for (const AbsNorm2& norm : {AbsNorm2(LpNorm::finite(one)), AbsNorm2(LpNorm::infinity())}) {
    const auto poly = as_polyhedral(norm);
    const auto ext = extreme_points(*poly);
    const bool l1 = !std::get<LpNorm>(norm).is_infinite();
    std::vector<PlanePoint> expected;
    if (l1) {
      expected = {{one, zero}, {zero, one}, {-one, zero}, {zero, -one}};
    } else {
      expected = {{one, one}, {-one, one}, {-one, -one}, {one, -one}};
    }
    classical.expect(ext == expected, norm_to_json(norm));
    for (const auto& e : ext) {
      const auto w = v_point_witness(norm, e);
      classical.expect(is_v_point(norm, e) && w && witness_is_valid(norm, e, *w), point_json(e));
    }
    // facet interiors are not v-points
    const PlanePoint mid = Rational(1, 2) * (ext[0] + ext[1]);
    classical.expect(!is_v_point(norm, mid), point_json(mid));
  }

  for (const Rational& p : {Rational(3, 2), Rational(2), Rational(3)}) {
    const AbsNorm2 norm = LpNorm::finite(p);
    for (int k = 0; k < 50; ++k) {
      if (p == 2) {
        PlanePoint x = circle_point(rng.rational(8, 8));
        smooth.expect(on_unit_sphere(norm, x) && !is_v_point(norm, x), point_json(x));
      } else {
        PlanePoint d{rng.rational(6, 6), rng.rational(6, 6)};
        if (d.a == 0 && d.b == 0) d.a = 1;
        smooth.expect(!is_v_point_along(norm, d), Json{{"p", to_string(p)}, {"direction", point_json(d)}});
      }
    }
  }

  const PolyhedralNorm alpha = figure_alpha_norm();
  const std::vector<PlanePoint> cone{{one, zero}, {Rational(3, 4), Rational(1, 2)}, {Rational(1, 2), Rational(3, 4)}, {zero, one}};
  const auto alpha_ext = extreme_points(alpha);
  figure.expect(is_polyhedral(AbsNorm2(alpha)) && alpha.cone_vertices() == cone, norm_to_json(alpha));
  figure.details["extreme_points"] = alpha_ext.size();

  for (std::size_t i = 0; i + 1 < cone.size(); ++i) {
    for (int k = 0; k <= 8; ++k) {
      const Rational w = make_rational(k, 8);
      const PlanePoint x = w * cone[i] + (1 - w) * cone[i + 1];
      transfer.expect(transfer_predicate(alpha, x), point_json(x));
    }
  }
  for (int k = 1; k < 40; ++k) {
    const PlanePoint x = circle_point(make_rational(k, 40));
    transfer.expect(!transfer_predicate(LpNorm::finite(Rational(2)), x), point_json(x));
  }

  std::vector<PolyhedralNorm> norms{alpha, *as_polyhedral(LpNorm::finite(one)), *as_polyhedral(LpNorm::infinity())};
  for (std::size_t i = 0; i < config.samples / 4; ++i) norms.push_back(random_polyhedral(rng));
  for (const auto& n : norms) bipolar.expect(dual_norm(dual_norm(n)) == n, norm_to_json(n));
  for (const Rational& p : {Rational(3, 2), Rational(2), Rational(3)}) {
    const AbsNorm2 n = LpNorm::finite(p);
    bipolar.expect(dual_norm(dual_norm(n)) == n, norm_to_json(n));
  }

  std::vector<PlanePoint> targets = alpha_ext;
  for (std::size_t i = 0; i < alpha_ext.size(); ++i) {
    targets.push_back(Rational(1, 2) * (alpha_ext[i] + alpha_ext[(i + 1) % alpha_ext.size()]));
  }
  for (const auto& x : targets) {
    const SupportingSlice s = supporting_slice_construction(alpha, x);
    const SliceVerification v = verify_supporting_slice(alpha, x, s);
    slices.expect(v.ok(), Json{{"point", point_json(x)}, {"width", to_string(s.width)}});
  }
  return suite_json("absnorm", config, {classical, smooth, figure, transfer, bipolar, slices});
}

// ---------------------------------------------------------------------------
// dyadic

TreeSpanElement random_f_span(Rng& rng, std::size_t max_depth) {
  std::map<Node, Rational> coeffs;
  while (coeffs.empty()) {
    const std::size_t depth = static_cast<std::size_t>(rng.between(1, static_cast<long>(max_depth)));
    for (std::size_t d = 1; d <= depth; ++d) {
      for (const auto& t : nodes_at_depth(d)) {
        if (rng.below(3) == 0) continue;
        Rational c = rng.rational(4, 4);
        if (c != 0) coeffs.emplace(t, std::move(c));
      }
    }
  }
  return TreeSpanElement(coeffs, {});
}

TreeSpanElement random_h_sphere(Rng& rng, std::size_t max_depth) {
  std::map<Node, Rational> coeffs;
  while (coeffs.empty()) {
    const std::size_t depth = static_cast<std::size_t>(rng.between(1, static_cast<long>(max_depth)));
    for (std::size_t d = 1; d <= depth; ++d) {
      for (const auto& t : nodes_at_depth(d)) {
        if (rng.coin()) continue;
        Rational c = rng.rational(4, 3);
        if (c != 0) coeffs.emplace(t, std::move(c));
      }
    }
    if (TreeSpanElement({}, coeffs).is_zero()) coeffs.clear();
  }
  TreeSpanElement g({}, coeffs);
  const Rational norm = l1_norm(g);
  if (norm == 0) return random_h_sphere(rng, max_depth);
  g *= 1 / norm;
  return g;
}

Rational expected_separation(const Node& t, const Node& s) {
  const long n = static_cast<long>(t.depth());
  if (s == t) return -pow2(-n);
  if (!t.is_prefix_of(s)) return Rational(0);
  return s.depth() == t.depth() + 1 ? pow2(-n) : pow2(-n - 1);
}

Json dyadic_suite(const VerifyConfig& config) {
  Rng rng = suite_rng(config, 5);
  Check sets("set_measures");
  Check units("unit_norms");
  Check formula("span_norm_formula");
  Check cascade("cascade_inequality");
  Check concentration("concentration_inequality");
  Check martingale("martingale_and_isometry");
  Check separation("separation_values");
  Check exposure("exposure_experiment");
  Check not_relative("not_relative_daugavet_witness");
  Check delta("delta_witness");

  for (long n = 1; n <= 6; ++n) {
    Rational prefix_mass;
    for (long i = 1; i <= n; ++i) prefix_mass += b_set(Node(), i).measure();
    sets.expect(prefix_mass + c_set(Node(), n).measure() == Rational(1, 2), Json{{"row", n}});
    for (std::size_t d = 0; d <= 6; ++d) {
      const auto nodes = nodes_at_depth(d);
      bool ok = true;
      Rational cursor = b_set(Node(), n).lo;
      for (const auto& t : nodes) {
        const DyadicInterval b = b_set(t, n);
        const DyadicInterval c = c_set(t, n);
        ok = ok && b.measure() == pow2(-static_cast<long>(d) - n - 1) && c.measure() == b.measure() && b.lo == cursor;
        cursor = b.hi;
      }
      ok = ok && cursor == b_set(Node(), n).hi;
      sets.expect(ok, Json{{"row", n}, {"depth", d}});
    }
  }

  for (std::size_t d = 1; d <= config.depth; ++d) {
    for (const auto& t : nodes_at_depth(d)) {
      const auto f = TreeSpanElement::f_node(t);
      const auto h = TreeSpanElement::h_node(t);
      units.expect(l1_norm(f) == 1 && l1_norm_by_integration(f) == 1 && f_fn(t).l1_norm() == 1 && l1_norm(h) == 1 &&
                       l1_norm_by_integration(h) == 1,
                   t.bits());
    }
  }

  for (std::size_t i = 0; i < std::max<std::size_t>(config.samples * 5 / 2, 1); ++i) {
    const TreeSpanElement g = random_f_span(rng, 5);
    const Rational closed = span_norm_formula(g);
    formula.expect(closed == l1_norm(g) && closed == l1_norm_by_integration(g), span_element_to_json(g));
  }

  for (std::size_t i = 0; i < config.samples * 5; ++i) {
    const long n = rng.between(1, 8);
    const long m = rng.between(1, n);
    std::vector<Rational> alpha;
    for (long k = 0; k < n; ++k) alpha.push_back(rng.rational(5, 4));
    const auto r = cascade_inequality_check(alpha, m, n);
    cascade.expect(r.holds, Json{{"m", m}, {"n", n}, {"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)}});
  }

  for (std::size_t d = 1; d <= config.depth; ++d) {
    for (const auto& t : nodes_at_depth(d)) {
      const auto r = concentration_check(TreeSpanElement::f_node(t), static_cast<long>(d));
      concentration.expect(r.holds && r.lhs == r.rhs && r.lhs == 1 - pow2(-static_cast<long>(d)), t.bits());
    }
  }
  for (std::size_t i = 0; i < config.samples; ++i) {
    const TreeSpanElement g = random_f_span(rng, 4);
    const long m = rng.between(1, 5);
    concentration.expect(concentration_check(g, m).holds, Json{{"m", m}, {"element", span_element_to_json(g)}});
  }

  for (long level = 1; level <= static_cast<long>(config.depth); ++level) {
    std::map<Node, Rational> a;
    for (const auto& t : nodes_at_depth(static_cast<std::size_t>(level))) a[t] = rng.rational(4, 4);
    const auto r = martingale_and_isometry_check(level, a);
    martingale.expect(r.ok(), Json{{"level", level}, {"norm", to_string(r.norm)}, {"sum", to_string(r.coefficient_sum)}});
  }

  for (std::size_t dt = 1; dt <= 4; ++dt) {
    for (const auto& t : nodes_at_depth(dt)) {
      for (std::size_t ds = 1; ds <= 6; ++ds) {
        for (const auto& s : nodes_at_depth(ds)) {
          const Rational value = separation_functional_value(t, s);
          separation.expect(value == expected_separation(t, s),
                            Json{{"t", t.bits()}, {"s", s.bits()}, {"value", to_string(value)}});
        }
      }
    }
  }

  Rational worst;
  for (const char* bits : {"0", "01", "110"}) {
    for (const Rational& eps : {Rational(1, 2), Rational(1, 4), Rational(1, 8)}) {
      const auto r = exposure_experiment(Node::parse(bits), eps, std::max<std::size_t>(config.samples / 2, 1), rng);
      exposure.expect(r.ok(), Json{{"node", bits}, {"eps", to_string(eps)}, {"violations", r.violations}});
      worst = max_of(worst, r.max_distance / eps);
    }
  }
  exposure.details["max_distance_over_eps"] = exact_json(worst);

  for (int i = 0; i < 20; ++i) {
    const TreeSpanElement g = random_h_sphere(rng, 3);
    const CellFunction functional = CellFunction::of(g).sign();
    const Rational eps = pow2(-rng.between(1, 3));
    const auto w = not_relative_daugavet_witness(g, functional, eps);
    not_relative.expect(w.ok() && w.slice_value > 1 - eps,
                        Json{{"element", span_element_to_json(g)}, {"eps", to_string(eps)}, {"u", w.node.bits()}});
  }

  for (int i = 0; i < 20; ++i) {
    const TreeSpanElement g = random_h_sphere(rng, 3);
    const CellFunction functional = CellFunction::of(g).sign();
    const Rational alpha = make_rational(rng.between(1, 8), 8);
    for (const Rational& eps : {Rational(1, 2), Rational(1, 4), Rational(1, 8)}) {
      const auto w = delta_witness(g, functional, alpha, eps);
      delta.expect(w.ok(alpha, eps), Json{{"element", span_element_to_json(g)}, {"eps", to_string(eps)}});
    }
  }

  return suite_json("dyadic", config,
                    {sets, units, formula, cascade, concentration, martingale, separation, exposure, not_relative, delta});
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"metric", "freespace", "rtree", "absnorm", "dyadic"};
  return names;
}

Json run_suite(std::string_view suite, const VerifyConfig& config) {
  if (config.depth < 1 || config.depth > 8) throw InputError("depth must lie in 1..8");
  if (config.samples < 1 || config.samples > 100000) throw InputError("samples must lie in 1..100000");
  if (suite == "all") {
    Json j;
    j["suite"] = "all";
    j["seed"] = config.seed;
    j["samples"] = config.samples;
    j["depth"] = config.depth;
    Json reports = Json::array();
    bool passed = true;
    for (const auto& name : suite_names()) {
      Json r = run_suite(name, config);
      passed = passed && report_passed(r);
      reports.push_back(std::move(r));
    }
    j["suites"] = std::move(reports);
    j["passed"] = passed;
    return j;
  }
  if (suite == "metric") return metric_suite(config);
  if (suite == "freespace") return freespace_suite(config);
  if (suite == "rtree") return rtree_suite(config);
  if (suite == "absnorm") return absnorm_suite(config);
  if (suite == "dyadic") return dyadic_suite(config);
  throw InputError("unknown suite '" + std::string(suite) + "'");
}

bool report_passed(const Json& report) { return report.contains("passed") && report.at("passed").get<bool>(); }

// ---------------------------------------------------------------------------

Json example_a_report(long level) {
  if (level < 1 || level > 6) throw InputError("example A level must lie in 1..6");
  const SpaceRef space = share(example_space_a(static_cast<int>(level)));
  const std::size_t x = space->index(landmarks::x().id());
  const std::size_t y = space->index(landmarks::y().id());
  const std::size_t u = space->index(landmarks::u().id());
  const std::size_t v = space->index(landmarks::v().id());

  const std::map<std::size_t, Rational> partial{{x, Rational(0)}, {y, Rational(-1)}, {u, Rational(-1, 2)}, {v, Rational(-1, 2)}};
  const LipschitzFunction f = mcshane_extend(space, partial);
  const Slice slice(f, Rational(1));
  const FreeElement m_xy = molecule(space, x, y);
  const FreeElement m_uv = molecule(space, u, v);

  Json j;
  j["command"] = "example-a";
  j["level"] = level;
  j["points"] = space->size();
  const bool valid = validate_metric(*space).ok();
  j["metric_valid"] = valid;

  Json partial_doc = Json::object();
  for (const auto& [p, value] : partial) partial_doc[space->id(p)] = to_string(value);
  const Rational lip = lip_norm(f);
  const Rational on_xy = eval_functional(f, m_xy);
  const Rational on_uv = eval_functional(f, m_uv);
  const bool uv_in_slice = slice.admits(m_uv);
  j["functional"] = Json{{"partial", std::move(partial_doc)},
                         {"lip_norm", exact_json(lip)},
                         {"on_m_xy", exact_json(on_xy)},
                         {"on_m_uv", exact_json(on_uv)},
                         {"slice_width", exact_json(slice.width())},
                         {"m_uv_in_slice", uv_in_slice}};

  const Rational to_uv = free_norm(m_xy - m_uv);
  j["distance_m_xy_m_uv"] = exact_json(to_uv);

  Json table = Json::array();
  std::size_t certified = 0;
  std::size_t in_slice = 0;
  bool in_slice_two = true;
  bool others_two = true;
  for (const auto& [p, q] : certified_denting_pairs(*space)) {
    ++certified;
    const FreeElement m = molecule(space, p, q);
    const Rational distance = free_norm(m_xy - m);
    const bool admitted = slice.admits(m);
    const bool is_uv = p == u && q == v;
    if (admitted) {
      ++in_slice;
      in_slice_two = in_slice_two && distance == 2;
    }
    if (!is_uv) others_two = others_two && distance == 2;
    table.push_back(Json{{"p", space->id(p)}, {"q", space->id(q)}, {"in_slice", admitted}, {"distance", exact_json(distance)}});
  }
  j["denting"] = Json{{"certified", certified},
                      {"in_slice", in_slice},
                      {"all_in_slice_at_distance_two", in_slice_two},
                      {"all_except_m_uv_at_distance_two", others_two},
                      {"table", std::move(table)}};
  j["passed"] = valid && lip == 1 && on_xy == 1 && on_uv == 0 && !uv_in_slice && to_uv < 2 && in_slice_two && others_two;
  return j;
}

Json example_b_report(long level, std::size_t slices, std::uint64_t seed) {
  if (level < 2 || level > 7) throw InputError("example B level must lie in 2..7");
  const SpaceRef space = share(example_space_b(static_cast<int>(level)));
  const std::size_t x = space->index(landmarks::x().id());
  const std::size_t y = space->index(landmarks::y().id());
  const FreeElement m_xy = molecule(space, x, y);

  Json j;
  j["command"] = "example-b";
  j["level"] = level;
  j["seed"] = seed;
  j["points"] = space->size();
  const bool valid = validate_metric(*space).ok();
  j["metric_valid"] = valid;

  struct Pair {
    std::size_t u;
    std::size_t v;
    Rational distance;
  };
  std::vector<Pair> certified;
  Json pairs = Json::array();
  bool pairs_ok = true;
  const auto rows = example_rows(ExampleKind::delta_not_relative, static_cast<int>(level));
  for (long n = 2; n <= level; ++n) {
    auto row = rows.at(static_cast<std::size_t>(n));
    std::sort(row.begin(), row.end(), [](const GridPoint& p, const GridPoint& q) { return p.a < q.a; });
    for (std::size_t k = 0; k + 1 < row.size(); ++k) {
      const std::size_t u = space->index(row[k].id());
      const std::size_t v = space->index(row[k + 1].id());
      const bool cert = denting_molecule_certificate(*space, u, v);
      const Rational distance = free_norm(m_xy - molecule(space, u, v));
      pairs_ok = pairs_ok && cert && distance < 2;
      if (cert) certified.push_back({u, v, distance});
      pairs.push_back(Json{{"row", n}, {"u", space->id(u)}, {"v", space->id(v)}, {"certified", cert}, {"distance", exact_json(distance)}});
    }
  }
  j["pairs"] = std::move(pairs);

  Rng rng(seed);
  const Rational floor = pow2(1 - level);
  Json slice_docs = Json::array();
  bool slices_ok = true;
  for (std::size_t k = 0; k < slices; ++k) {
    const LipschitzFunction f = random_lipschitz(rng, space, {{x, Rational(0)}, {y, Rational(-1)}});
    const Rational width = floor + (1 - floor) * make_rational(rng.between(1, 64), 64);
    const Slice slice(f, width);
    Json doc{{"index", k}, {"width", exact_json(width)}, {"functional_on_m_xy", exact_json(eval_functional(f, m_xy))}};
    bool found = false;
    for (const auto& pair : certified) {
      const FreeElement m = molecule(space, pair.u, pair.v);
      if (!slice.admits(m)) continue;
      doc["pair"] = Json{{"u", space->id(pair.u)}, {"v", space->id(pair.v)}};
      doc["value"] = exact_json(eval_functional(f, m));
      doc["distance"] = exact_json(pair.distance);
      found = pair.distance < 2;
      break;
    }
    doc["found"] = found;
    slices_ok = slices_ok && found && lip_norm(f) <= 1 && eval_functional(f, m_xy) == 1;
    slice_docs.push_back(std::move(doc));
  }
  j["slices"] = std::move(slice_docs);
  j["passed"] = valid && pairs_ok && slices_ok;
  return j;
}

}  // namespace deltakit
