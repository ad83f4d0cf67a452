#include <gtest/gtest.h>

#include <algorithm>

#include "deltakit/error.hpp"
#include "deltakit/json_io.hpp"
#include "deltakit/metric.hpp"
#include "deltakit/random.hpp"
#include "test_support.hpp"

namespace deltakit {
namespace {

using testing::load_data;
using testing::q;

TEST(Metric, KiteFixtureValidates) {
  const MetricTable table = metric_table_from_json(load_data("kite.json"));
  EXPECT_TRUE(validate_metric(table).ok());
  const FiniteMetricSpace space = FiniteMetricSpace::from_table(table);
  EXPECT_EQ(space.size(), 4u);
  EXPECT_EQ(space.id(space.base()), "a");
  EXPECT_EQ(space.dist(space.index("b"), space.index("c")), q("3/2"));
}

TEST(Metric, TriangleViolationNamesATriple) {
  const ValidationReport r = validate_metric(metric_table_from_json(load_data("kite_triangle_broken.json")));
  EXPECT_EQ(r.status, ValidationStatus::axiom_violated);
  ASSERT_EQ(r.witness.size(), 3u);
  const MetricTable table = metric_table_from_json(load_data("kite_triangle_broken.json"));
  const FiniteMetricSpace raw(table.points, table.base, [&] {
    std::vector<Rational> flat;
    for (const auto& row : table.dist) {
      for (const auto& v : row) flat.push_back(*v);
    }
    return flat;
  }());
  const std::size_t p = raw.index(r.witness[0]);
  const std::size_t m = raw.index(r.witness[1]);
  const std::size_t s = raw.index(r.witness[2]);
  EXPECT_GT(raw.dist(p, s), raw.dist(p, m) + raw.dist(m, s));
}

TEST(Metric, MissingEntryIsMalformed) {
  const ValidationReport r = validate_metric(metric_table_from_json(load_data("kite_missing_entry.json")));
  EXPECT_EQ(r.status, ValidationStatus::malformed);
  EXPECT_THROW(space_from_json(load_data("kite_missing_entry.json")), InputError);
}

TEST(Metric, AsymmetryAndZeroDistanceAreViolations) {
  MetricTable t = FiniteMetricSpace::from_table(metric_table_from_json(load_data("kite.json"))).to_table();
  t.dist[0][1] = q("2");
  auto r = validate_metric(t);
  EXPECT_EQ(r.status, ValidationStatus::axiom_violated);
  EXPECT_EQ(r.witness.size(), 2u);

  t = FiniteMetricSpace::from_table(metric_table_from_json(load_data("kite.json"))).to_table();
  t.dist[1][2] = Rational(0);
  t.dist[2][1] = Rational(0);
  EXPECT_EQ(validate_metric(t).status, ValidationStatus::axiom_violated);

  t.dist[1][2] = q("-1");
  t.dist[2][1] = q("-1");
  EXPECT_EQ(validate_metric(t).status, ValidationStatus::malformed);
}

TEST(Metric, UnknownBaseIsMalformed) {
  MetricTable t = metric_table_from_json(load_data("kite.json"));
  t.base = "z";
  EXPECT_EQ(validate_metric(t).status, ValidationStatus::malformed);
}

TEST(Metric, LadderLandmarkDistances) {
  EXPECT_EQ(ladder_distance(landmarks::x(), landmarks::u()), q("1/2"));
  EXPECT_EQ(ladder_distance(landmarks::u(), landmarks::v()), q("1"));
  EXPECT_EQ(ladder_distance(landmarks::x(), GridPoint{q("1"), q("1/4")}), q("5/4"));
  EXPECT_EQ(ladder_distance(landmarks::x(), landmarks::y()), q("1"));
  EXPECT_EQ(ladder_distance(GridPoint{q("1/4"), q("1/4")}, GridPoint{q("3/4"), q("1/8")}), q("9/8"));
}

TEST(Metric, ExampleRowSizes) {
  const auto a = example_rows(ExampleKind::relative_not_daugavet, 3);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].size(), 2u);
  EXPECT_EQ(a[1].size(), 2u);
  EXPECT_EQ(a[2].size(), 5u);
  EXPECT_EQ(a[3].size(), 9u);
  EXPECT_EQ(example_space_a(3).size(), 18u);

  const auto b = example_rows(ExampleKind::delta_not_relative, 4);
  ASSERT_EQ(b.size(), 5u);
  EXPECT_EQ(b[1].size(), 2u);
  EXPECT_EQ(b[4].size(), 9u);
}

TEST(Metric, ExampleSpacesValidateAtEveryLevel) {
  for (int level = 1; level <= 5; ++level) {
    EXPECT_TRUE(validate_metric(example_space_a(level)).ok()) << level;
    EXPECT_TRUE(validate_metric(example_space_b(level)).ok()) << level;
  }
}

TEST(Metric, GridPointIdsRoundTrip) {
  const GridPoint p{q("3/8"), q("1/8")};
  EXPECT_EQ(GridPoint::parse(p.id()), p);
  EXPECT_THROW(GridPoint::parse("3/8"), InputError);
}

TEST(Metric, SegmentOfAdjacentPairIsTheEndpoints) {
  const FiniteMetricSpace space = example_space_a(3);
  const auto seg = metric_segment(space, GridPoint{q("1/4"), q("1/8")}.id(), GridPoint{q("3/8"), q("1/8")}.id());
  EXPECT_EQ(seg.size(), 2u);
  EXPECT_EQ(metric_segment(space, landmarks::x().id(), landmarks::y().id()).size(), 2u);
  const auto vertical = metric_segment(space, landmarks::x().id(), landmarks::u().id());
  EXPECT_EQ(vertical.size(), 4u);  // x, (0,1/8), (0,1/4), u
  EXPECT_TRUE(std::binary_search(vertical.begin(), vertical.end(), space.index(GridPoint{q("0"), q("1/4")}.id())));
}

TEST(MetricProperty, RandomSpacesSatisfyTheAxioms) {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const FiniteMetricSpace space = random_metric_space(rng, static_cast<std::size_t>(rng.between(1, 8)));
    ASSERT_TRUE(validate_metric(space).ok());
    for (std::size_t p = 0; p < space.size(); ++p) {
      for (std::size_t r = 0; r < space.size(); ++r) {
        const auto seg = metric_segment(space, p, r);
        EXPECT_EQ(seg, metric_segment(space, r, p));
        for (auto m : seg) EXPECT_EQ(space.dist(p, m) + space.dist(m, r), space.dist(p, r));
      }
    }
  }
}

TEST(MetricProperty, SubspacesStayMetric) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const FiniteMetricSpace space = random_metric_space(rng, 6);
    std::vector<std::size_t> keep{space.base()};
    for (std::size_t p = 0; p < space.size(); ++p) {
      if (p != space.base() && rng.coin()) keep.push_back(p);
    }
    const FiniteMetricSpace sub = space.subspace(keep);
    EXPECT_TRUE(validate_metric(sub).ok());
    EXPECT_EQ(sub.id(sub.base()), space.id(space.base()));
  }
}

}  // namespace
}  // namespace deltakit
