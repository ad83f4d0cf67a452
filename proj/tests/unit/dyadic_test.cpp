#include <gtest/gtest.h>

#include "deltakit/dyadic.hpp"
#include "deltakit/error.hpp"
#include "test_support.hpp"

namespace deltakit {
namespace {

using testing::q;

Node n(const char* bits) { return Node::parse(bits); }

TreeSpanElement f(const char* bits, const char* c = "1") { return TreeSpanElement::f_node(n(bits), q(c)); }
TreeSpanElement h(const char* bits, const char* c = "1") { return TreeSpanElement::h_node(n(bits), q(c)); }

TEST(Node, ParsingAndOrder) {
  EXPECT_EQ(n("0110").index(), 6u);
  EXPECT_EQ(n("0110").prefix(2), n("01"));
  EXPECT_TRUE(n("01").is_prefix_of(n("0110")));
  EXPECT_FALSE(n("1").is_prefix_of(n("0110")));
  EXPECT_LT(n("1"), n("00"));
  EXPECT_EQ(Node::from_index(5, 3), n("101"));
  EXPECT_THROW(n("012"), InputError);
  EXPECT_EQ(nodes_at_depth(3).size(), 8u);
  EXPECT_EQ(extensions(n("1"), 2), (std::vector<Node>{n("100"), n("101"), n("110"), n("111")}));
}

TEST(DyadicSets, Placement) {
  const DyadicInterval b = b_set(n("01"), 1);
  EXPECT_EQ(b.lo, q("5/16"));
  EXPECT_EQ(b.hi, q("6/16"));
  const DyadicInterval c = c_set(n("1"), 2);
  EXPECT_EQ(c.lo, q("1/2") + q("3/16"));
  EXPECT_EQ(c.measure(), q("1/16"));
  EXPECT_THROW(b_set(n("1"), 0), PreconditionError);
}

TEST(DyadicNorms, UnitVectors) {
  for (const char* t : {"0", "1", "01", "110", "0101"}) {
    EXPECT_EQ(l1_norm(f(t)), 1) << t;
    EXPECT_EQ(l1_norm(h(t)), 1) << t;
    EXPECT_EQ(f_fn(n(t)).l1_norm(), 1) << t;
  }
}

// Oracle: pointwise evaluation on a dyadic grid plus the closed-form tail.
TEST(DyadicNorms, MixedElementsMatchOracle) {
  EXPECT_EQ(l1_norm(f("0") - f("1")), q("2"));
  EXPECT_EQ(l1_norm(f("0") + f("01", "1/2") + f("110", "-3/4")), q("9/4"));
  EXPECT_EQ(l1_norm(h("0") + f("01", "-1/2") + h("11", "1/3")), q("13/12"));
  EXPECT_EQ(l1_norm(h("1", "2") - f("1")), q("2"));
  EXPECT_EQ(l1_norm(h("0") + h("1") - f("00")), q("9/4"));
  EXPECT_EQ(l1_norm(f("01") - f("010")), q("5/4"));
}

TEST(DyadicNorms, IntegrationAgreesWithCells) {
  for (const TreeSpanElement& e :
       {f("0") - f("1"), h("0") + f("01", "-1/2") + h("11", "1/3"), h("0") + h("1") - f("00")}) {
    EXPECT_EQ(l1_norm_by_integration(e), l1_norm(e));
  }
}

TEST(DyadicNorms, ClosedFormForFSpan) {
  EXPECT_EQ(span_norm_formula(f("0") + f("01", "1/2") + f("110", "-3/4")), q("9/4"));
  EXPECT_EQ(span_norm_formula(f("01") - f("010")), q("5/4"));
  EXPECT_THROW(span_norm_formula(h("0")), PreconditionError);
}

TEST(DyadicFunctions, HIsTheLimitOfAveragedF) {
  // the truncated averages converge to h_t from below in norm
  const DyadicStep exact = h_fn_truncated(n("1"), 6);
  Rational previous = 2;
  for (std::size_t m = 0; m <= 4; ++m) {
    const Rational gap = (exact - h_fn_approx(n("1"), m)).l1_norm();
    EXPECT_LT(gap, previous);
    previous = gap;
  }
}

TEST(DyadicFunctions, CellValues) {
  const CellFunction g = CellFunction::of(f("0") + h("1"), 2);
  EXPECT_EQ(g.value(CellKind::b, 1, n("00").index()), q("4"));
  EXPECT_EQ(g.value(CellKind::c, 1, n("01").index()), q("4"));
  EXPECT_EQ(g.value(CellKind::c, 2, n("01").index()), q("0"));
  EXPECT_EQ(g.value(CellKind::b, 5, n("10").index()), q("4"));
  EXPECT_EQ(g.refined(4), CellFunction::of(f("0") + h("1"), 4));
  EXPECT_EQ(g.sup_abs(), q("4"));
}

TEST(DyadicPairing, SignFunctionalNormsElements) {
  for (const TreeSpanElement& e : {f("0") - f("1"), h("0") + f("01", "-1/2") + h("11", "1/3")}) {
    const CellFunction sign = CellFunction::of(e).sign();
    EXPECT_EQ(pair(sign, e), l1_norm(e));
  }
  const CellFunction sign = CellFunction::of(f("01")).sign();
  EXPECT_EQ(pair_f(sign, n("01")), 1);
  EXPECT_EQ(pair_h(sign, n("01")), pair(sign, h("01")));
}

TEST(DyadicInequalities, Cascade) {
  const std::vector<Rational> alpha{q("1"), q("-2"), q("1/2"), q("3")};
  for (long m = 1; m <= 4; ++m) {
    for (long k = m; k <= 4; ++k) EXPECT_TRUE(cascade_inequality_check(alpha, m, k).holds);
  }
  EXPECT_THROW(cascade_inequality_check(alpha, 3, 2), PreconditionError);
}

TEST(DyadicInequalities, ConcentrationIsTightAtUnitVectors) {
  for (const char* t : {"0", "10", "011"}) {
    const auto r = concentration_check(f(t), static_cast<long>(n(t).depth()));
    EXPECT_TRUE(r.holds);
    EXPECT_EQ(r.lhs, r.rhs);
    EXPECT_EQ(r.lhs, 1 - pow2(-static_cast<long>(n(t).depth())));
  }
  EXPECT_TRUE(concentration_check(f("0") - f("1"), 1).holds);
}

TEST(DyadicInequalities, TrivialNormObservation) {
  // ||x|| + ||y|| = ||z|| for z restricted to a region and its complement
  const TreeSpanElement z = f("0") + f("01", "1/2") - h("1");
  const Region rows{{CellKind::b, 1, n("0")}, {CellKind::b, 1, n("1")}, {CellKind::c, 1, n("0")}};
  const Rational inside = restricted_norm(z, rows);
  const Rational outside = l1_norm(z) - inside;
  const Rational total = l1_norm(z);
  for (const Rational& eps : {q("1/8"), q("1/4"), q("1/2"), q("3/4")}) {
    const bool a = inside <= (1 - eps) * total;
    const bool b = outside >= eps * total;
    const bool c = inside <= (1 / eps - 1) * outside;
    EXPECT_EQ(a, b);
    EXPECT_EQ(b, c);
  }
}

TEST(DyadicMartingale, IdentityAndIsometry) {
  for (long level = 1; level <= 4; ++level) {
    std::map<Node, Rational> a;
    long k = 0;
    for (const auto& t : nodes_at_depth(static_cast<std::size_t>(level))) a[t] = make_rational(k++ % 3 - 1, 2);
    const auto r = martingale_and_isometry_check(level, a);
    EXPECT_TRUE(r.ok()) << level;
    EXPECT_EQ(r.norm, r.coefficient_sum);
  }
}

TEST(DyadicSeparation, Values) {
  EXPECT_EQ(separation_functional_value(n("0"), n("0")), q("-1/2"));
  EXPECT_EQ(separation_functional_value(n("0"), n("01")), q("1/2"));
  EXPECT_EQ(separation_functional_value(n("0"), n("010")), q("1/4"));
  EXPECT_EQ(separation_functional_value(n("0"), n("1")), q("0"));
  EXPECT_EQ(separation_functional_value(n("10"), n("100")), q("1/4"));
  EXPECT_EQ(separation_functional_value(n("10"), n("1")), q("0"));
}

TEST(DyadicExposure, SliceMembersAreClose) {
  const Node t = n("01");
  const Rational eps = q("1/4");
  const Rational width = pow2(-2) * eps;
  const TreeSpanElement inside = TreeSpanElement::f_node(t, 1 - width / 2);
  const auto distance = exposure_distance(t, eps, inside);
  ASSERT_TRUE(distance.has_value());
  EXPECT_EQ(*distance, width / 2);
  EXPECT_FALSE(exposure_distance(t, eps, TreeSpanElement::f_node(t, 1 - width)).has_value());
  EXPECT_FALSE(exposure_distance(t, eps, f("01", "-1")).has_value());
  EXPECT_FALSE(exposure_distance(t, eps, f("01", "2")).has_value());
}

TEST(DyadicExposure, ExperimentHasNoViolations) {
  Rng rng(4);
  const ExposureReport r = exposure_experiment(n("10"), q("1/4"), 40, rng);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.samples(), 40u);
  EXPECT_LT(r.max_distance, q("1/2"));
}

TEST(DyadicWitness, NotRelativeDaugavet) {
  const TreeSpanElement g = h("0", "1/2") - h("11", "1/2");
  const CellFunction sign = CellFunction::of(g).sign();
  const auto w = not_relative_daugavet_witness(g, sign, q("1/4"));
  EXPECT_TRUE(w.ok());
  EXPECT_GT(w.slice_value, q("3/4"));
  EXPECT_THROW(not_relative_daugavet_witness(f("0"), sign, q("1/4")), PreconditionError);
}

TEST(DyadicWitness, DeltaWitnessOnAUnitVector) {
  const TreeSpanElement g = h("0");
  const CellFunction sign = CellFunction::of(g).sign();
  const auto w = delta_witness(g, sign, q("1/2"), q("1/4"));
  EXPECT_TRUE(w.ok(q("1/2"), q("1/4")));
  EXPECT_EQ(w.distance, q("7/4"));
  EXPECT_EQ(w.norm, 1);
  for (const Rational& eps : {q("1/2"), q("1/8")}) {
    EXPECT_TRUE(delta_witness(g, sign, q("1/8"), eps).ok(q("1/8"), eps));
  }
}

}  // namespace
}  // namespace deltakit
