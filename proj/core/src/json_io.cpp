#include "deltakit/json_io.hpp"

#include <map>

#include "deltakit/error.hpp"

namespace deltakit {

namespace {

template <typename F>
auto guarded(const char* what, F&& body) {
  try {
    return body();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  } catch (const PreconditionError& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

std::map<std::string, std::size_t> id_index(const std::vector<std::string>& ids) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], i);
  return out;
}

}  // namespace

Json exact_json(const Rational& q) {
  Json j;
  j["exact"] = to_string(q);
  j["decimal_approx"] = to_decimal(q);
  return j;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.get<long>()));
  if (j.is_object() && j.contains("exact")) return rational_from_json(j.at("exact"));
  throw InputError("expected a rational as \"p/q\" or an integer, got " + j.dump());
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

MetricTable metric_table_from_json(const Json& j) {
  return guarded("metric space", [&] {
    MetricTable table;
    table.base = j.at("base").get<std::string>();
    table.points = j.at("points").get<std::vector<std::string>>();
    for (const auto& row : j.at("distances")) {
      if (!row.is_array()) throw InputError("distance rows must be arrays");
      std::vector<std::optional<Rational>> values;
      for (const auto& entry : row) {
        if (entry.is_null()) {
          values.emplace_back();
        } else {
          values.emplace_back(rational_from_json(entry));
        }
      }
      table.dist.push_back(std::move(values));
    }
    return table;
  });
}

FiniteMetricSpace space_from_json(const Json& j) { return FiniteMetricSpace::from_table(metric_table_from_json(j)); }

Json space_to_json(const FiniteMetricSpace& space) {
  Json j;
  j["base"] = space.id(space.base());
  j["points"] = space.points();
  Json rows = Json::array();
  for (std::size_t p = 0; p < space.size(); ++p) {
    Json row = Json::array();
    for (std::size_t q = 0; q < space.size(); ++q) row.push_back(to_string(space.dist(p, q)));
    rows.push_back(std::move(row));
  }
  j["distances"] = std::move(rows);
  return j;
}

FreeElement free_element_from_json(const SpaceRef& space, const Json& j) {
  return guarded("free element", [&] {
    std::map<std::size_t, Rational> coeffs;
    for (const auto& [id, value] : j.at("coefficients").items()) {
      const auto p = space->find(id);
      if (!p) throw InputError("unknown point '" + id + "'");
      coeffs[*p] += rational_from_json(value);
    }
    return FreeElement(space, coeffs);
  });
}

Json free_element_to_json(const FreeElement& mu) {
  Json coeffs = Json::object();
  for (const auto& [p, c] : mu.coeffs()) coeffs[mu.space().id(p)] = to_string(c);
  return Json{{"coefficients", std::move(coeffs)}};
}

// ---------------------------------------------------------------------------

WeightedTree tree_from_json(const Json& j) {
  return guarded("tree", [&] {
    auto vertices = j.at("vertices").get<std::vector<std::string>>();
    const auto index = id_index(vertices);
    std::vector<TreeEdge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw InputError("edges are [u, v, length] triples");
      const auto u = index.find(e[0].get<std::string>());
      const auto v = index.find(e[1].get<std::string>());
      if (u == index.end() || v == index.end()) throw InputError("edge names an unknown vertex");
      edges.push_back({u->second, v->second, rational_from_json(e[2])});
    }
    return WeightedTree(std::move(vertices), std::move(edges), j.at("base").get<std::string>());
  });
}

Json tree_to_json(const WeightedTree& tree) {
  Json edges = Json::array();
  for (const auto& e : tree.edges()) {
    edges.push_back(Json::array({tree.vertices()[e.u], tree.vertices()[e.v], to_string(e.length)}));
  }
  return Json{{"base", tree.vertices()[tree.base()]}, {"vertices", tree.vertices()}, {"edges", std::move(edges)}};
}

// ---------------------------------------------------------------------------

AbsNorm2 norm_from_json(const Json& j) {
  return guarded("norm", [&]() -> AbsNorm2 {
    if (j.contains("builtin")) {
      const auto name = j.at("builtin").get<std::string>();
      if (name == "figure-alpha") return figure_alpha_norm();
      throw InputError("unknown builtin norm '" + name + "'");
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "polyhedral") {
      std::vector<PlanePoint> cone;
      for (const auto& p : j.at("cone")) {
        if (!p.is_array() || p.size() != 2) throw InputError("cone vertices are [a, b] pairs");
        cone.push_back({rational_from_json(p[0]), rational_from_json(p[1])});
      }
      return PolyhedralNorm(std::move(cone));
    }
    if (type == "lp") {
      const auto& p = j.at("p");
      if (p.is_string() && p.get<std::string>() == "inf") return LpNorm::infinity();
      return LpNorm::finite(rational_from_json(p));
    }
    throw InputError("unknown norm type '" + type + "'");
  });
}

Json point_json(const PlanePoint& p) { return Json::array({to_string(p.a), to_string(p.b)}); }

Json norm_to_json(const AbsNorm2& norm) {
  if (const auto* poly = std::get_if<PolyhedralNorm>(&norm)) {
    Json cone = Json::array();
    for (const auto& p : poly->cone_vertices()) cone.push_back(point_json(p));
    return Json{{"type", "polyhedral"}, {"cone", std::move(cone)}};
  }
  const auto& lp = std::get<LpNorm>(norm);
  return Json{{"type", "lp"}, {"p", lp.is_infinite() ? std::string("inf") : to_string(lp.exponent())}};
}

// ---------------------------------------------------------------------------

TreeSpanElement span_element_from_json(const Json& j) {
  return guarded("span element", [&] {
    auto read = [&](const char* key) {
      std::map<Node, Rational> coeffs;
      if (!j.contains(key)) return coeffs;
      for (const auto& [bits, value] : j.at(key).items()) coeffs[Node::parse(bits)] += rational_from_json(value);
      return coeffs;
    };
    return TreeSpanElement(read("f"), read("h"));
  });
}

Json span_element_to_json(const TreeSpanElement& e) {
  Json f = Json::object();
  Json h = Json::object();
  for (const auto& [t, c] : e.f()) f[t.bits()] = to_string(c);
  for (const auto& [t, c] : e.h()) h[t.bits()] = to_string(c);
  return Json{{"f", std::move(f)}, {"h", std::move(h)}};
}

}  // namespace deltakit
