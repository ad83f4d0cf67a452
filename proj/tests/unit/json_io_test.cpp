#include <gtest/gtest.h>

#include "deltakit/error.hpp"
#include "deltakit/json_io.hpp"
#include "test_support.hpp"

namespace deltakit {
namespace {

using testing::load_data;
using testing::q;

TEST(JsonIo, ExactNumbers) {
  const Json j = exact_json(q("-7/4"));
  EXPECT_EQ(j.at("exact"), "-7/4");
  EXPECT_EQ(j.at("decimal_approx"), "-1.75000000000000000000");
  EXPECT_EQ(rational_from_json(j), q("-7/4"));
  EXPECT_EQ(rational_from_json(Json(3)), q("3"));
  EXPECT_THROW(rational_from_json(Json(1.5)), InputError);
}

TEST(JsonIo, SpaceRoundTrip) {
  const FiniteMetricSpace space = space_from_json(load_data("kite.json"));
  const FiniteMetricSpace again = space_from_json(space_to_json(space));
  EXPECT_EQ(again.points(), space.points());
  for (std::size_t p = 0; p < space.size(); ++p) {
    for (std::size_t r = 0; r < space.size(); ++r) EXPECT_EQ(again.dist(p, r), space.dist(p, r));
  }
}

TEST(JsonIo, BrokenSpaceIsAnInputError) {
  EXPECT_THROW(space_from_json(load_data("kite_triangle_broken.json")), InputError);
  EXPECT_THROW(space_from_json(Json{{"base", "a"}}), InputError);
  EXPECT_THROW(parse_json("{\"base\": "), InputError);
}

TEST(JsonIo, FreeElements) {
  const SpaceRef space = share(space_from_json(load_data("kite.json")));
  const Json doc = parse_json(R"({"coefficients": {"b": "1/2", "e": "-1"}})");
  const FreeElement mu = free_element_from_json(space, doc);
  EXPECT_EQ(mu.coeff(space->index("b")), q("1/2"));
  EXPECT_EQ(free_element_from_json(space, free_element_to_json(mu)), mu);
  EXPECT_THROW(free_element_from_json(space, parse_json(R"({"coefficients": {"z": "1"}})")), InputError);
}

TEST(JsonIo, TreesAndNorms) {
  const WeightedTree tree = tree_from_json(load_data("tree.json"));
  EXPECT_EQ(tree.size(), 5u);
  EXPECT_EQ(tree_to_json(tree_from_json(tree_to_json(tree))), tree_to_json(tree));
  EXPECT_EQ(tree_to_json(tree).at("edges")[2][2], "1/2");

  const AbsNorm2 figure = norm_from_json(load_data("figure_norm.json"));
  EXPECT_EQ(std::get<PolyhedralNorm>(figure), figure_alpha_norm());
  EXPECT_EQ(std::get<LpNorm>(norm_from_json(load_data("l3_norm.json"))), LpNorm::finite(q("3")));
  EXPECT_EQ(norm_from_json(norm_to_json(figure)), figure);
  EXPECT_THROW(norm_from_json(parse_json(R"({"type": "lp", "p": "1/3"})")), InputError);
  EXPECT_THROW(norm_from_json(parse_json(R"({"builtin": "other"})")), InputError);
}

TEST(JsonIo, SpanElements) {
  const TreeSpanElement e = span_element_from_json(parse_json(R"({"f": {"01": "1/2"}, "h": {"1": "-1"}})"));
  EXPECT_EQ(e, TreeSpanElement::f_node(Node::parse("01"), q("1/2")) - TreeSpanElement::h_node(Node::parse("1")));
  EXPECT_EQ(span_element_from_json(span_element_to_json(e)), e);
  EXPECT_THROW(span_element_from_json(parse_json(R"({"f": {"": "1"}})")), InputError);
}

}  // namespace
}  // namespace deltakit
