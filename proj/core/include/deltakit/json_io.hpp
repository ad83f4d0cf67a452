#pragma once

// JSON documents for spaces, trees, norms, span elements and reports.
// Rationals travel as "p/q" strings; reports pair every exact value with an
// approximate decimal rendering.

#include <string_view>

#include <nlohmann/json.hpp>

#include "deltakit/absnorm.hpp"
#include "deltakit/dyadic.hpp"
#include "deltakit/freespace.hpp"
#include "deltakit/metric.hpp"
#include "deltakit/rtree.hpp"

namespace deltakit {

using Json = nlohmann::ordered_json;

/// {"exact": "p/q", "decimal_approx": "..."}
Json exact_json(const Rational& q);
Rational rational_from_json(const Json& j);

/// Parses text; throws InputError on malformed JSON.
Json parse_json(std::string_view text);

/// {"base": id, "points": [ids], "distances": [[p/q, ...], ...]}; the table
/// is validated and InputError carries the validator message.
MetricTable metric_table_from_json(const Json& j);
FiniteMetricSpace space_from_json(const Json& j);
Json space_to_json(const FiniteMetricSpace& space);

/// {"space": ..., "coefficients": {id: p/q}}
FreeElement free_element_from_json(const SpaceRef& space, const Json& j);
Json free_element_to_json(const FreeElement& mu);

/// {"base": id, "vertices": [ids], "edges": [[u, v, length], ...]}
WeightedTree tree_from_json(const Json& j);
Json tree_to_json(const WeightedTree& tree);

/// {"builtin": "figure-alpha"} | {"type": "polyhedral", "cone": [[a, b], ...]}
/// | {"type": "lp", "p": "3/2" | "inf"}
AbsNorm2 norm_from_json(const Json& j);
Json norm_to_json(const AbsNorm2& norm);
Json point_json(const PlanePoint& p);

/// {"f": {bits: p/q}, "h": {bits: p/q}}
TreeSpanElement span_element_from_json(const Json& j);
Json span_element_to_json(const TreeSpanElement& e);

}  // namespace deltakit
