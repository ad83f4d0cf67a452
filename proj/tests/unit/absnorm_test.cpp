#include <gtest/gtest.h>

#include "deltakit/absnorm.hpp"
#include "deltakit/error.hpp"
#include "deltakit/json_io.hpp"
#include "test_support.hpp"

namespace deltakit {
namespace {

using testing::load_data;
using testing::q;

PlanePoint pt(const char* a, const char* b) { return {q(a), q(b)}; }

// Oracle: max over facet normals and over the 12 extreme points.
TEST(FigureNorm, ValuesMatchOracle) {
  const PolyhedralNorm n = figure_alpha_norm();
  EXPECT_EQ(n(pt("1", "1")), q("8/5"));
  EXPECT_EQ(n(pt("2", "1")), q("5/2"));
  EXPECT_EQ(n(pt("1", "3")), q("7/2"));
  EXPECT_EQ(n(pt("1/3", "-2")), q("13/6"));

  const PolyhedralNorm dual = dual_norm(n);
  EXPECT_EQ(dual(pt("1", "1")), q("5/4"));
  EXPECT_EQ(dual(pt("2", "1")), q("2"));
  EXPECT_EQ(dual(pt("1", "3")), q("3"));
  EXPECT_EQ(dual(pt("1/3", "-2")), q("2"));
}

TEST(FigureNorm, ConeAndExtremePoints) {
  const PolyhedralNorm n = figure_alpha_norm();
  EXPECT_EQ(n.cone_vertices(),
            (std::vector<PlanePoint>{pt("1", "0"), pt("3/4", "1/2"), pt("1/2", "3/4"), pt("0", "1")}));
  const auto ext = extreme_points(n);
  EXPECT_EQ(ext.size(), 12u);
  for (const auto& e : ext) EXPECT_EQ(n(e), 1);
  EXPECT_EQ(n.edge_normals().size(), 3u);
  EXPECT_EQ(n.edge_normals()[1], pt("4/5", "4/5"));
}

TEST(FigureNorm, EveryExtremePointIsAVPoint) {
  const AbsNorm2 n = figure_alpha_norm();
  for (const auto& e : extreme_points(std::get<PolyhedralNorm>(n))) {
    EXPECT_TRUE(is_v_point(n, e));
    const auto w = v_point_witness(n, e);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(witness_is_valid(n, e, *w));
  }
  EXPECT_FALSE(is_v_point(n, pt("5/8", "5/8")));
}

TEST(FigureNorm, TransferPredicateHoldsOnPositiveSphere) {
  const AbsNorm2 n = figure_alpha_norm();
  EXPECT_TRUE(transfer_predicate(n, pt("1", "0")));
  EXPECT_TRUE(transfer_predicate(n, pt("5/8", "5/8")));
  EXPECT_TRUE(transfer_predicate(n, pt("7/8", "1/4")));
  EXPECT_THROW(transfer_predicate(n, pt("-1", "0")), PreconditionError);
}

TEST(ClassicalNorms, L1AndLInfinity) {
  const AbsNorm2 l1 = LpNorm::finite(q("1"));
  const AbsNorm2 linf = LpNorm::infinity();
  EXPECT_EQ(extreme_points(*as_polyhedral(l1)).size(), 4u);
  EXPECT_EQ(extreme_points(*as_polyhedral(linf)).size(), 4u);
  EXPECT_TRUE(is_v_point(l1, pt("0", "1")));
  EXPECT_TRUE(is_v_point(linf, pt("-1", "1")));
  EXPECT_FALSE(is_v_point(l1, pt("1/2", "1/2")));
  EXPECT_FALSE(is_v_point(linf, pt("1", "0")));
  EXPECT_EQ(*norm_value(l1, pt("3", "-4")), q("7"));
  EXPECT_EQ(*norm_value(linf, pt("3", "-4")), q("4"));
  EXPECT_TRUE(transfer_predicate(l1, pt("1/3", "2/3")));
  EXPECT_TRUE(transfer_predicate(linf, pt("1", "1/3")));
}

TEST(ClassicalNorms, SmoothNormsHaveNoVPoints) {
  const AbsNorm2 l2 = LpNorm::finite(q("2"));
  EXPECT_TRUE(on_unit_sphere(l2, pt("3/5", "4/5")));
  EXPECT_FALSE(is_v_point(l2, pt("3/5", "4/5")));
  EXPECT_FALSE(is_v_point(l2, pt("1", "0")));
  EXPECT_FALSE(transfer_predicate(l2, pt("3/5", "4/5")));
  EXPECT_EQ(*norm_value(l2, pt("5", "12")), q("13"));
  EXPECT_FALSE(norm_value(l2, pt("1", "1")).has_value());
  for (const char* p : {"3/2", "3"}) {
    const AbsNorm2 n = LpNorm::finite(q(p));
    EXPECT_FALSE(is_v_point_along(n, pt("1", "1")));
    EXPECT_FALSE(is_v_point_along(n, pt("2", "-7")));
    EXPECT_FALSE(is_v_point_along(n, pt("0", "1")));
  }
}

TEST(ClassicalNorms, IrrationalComparisonsAreExact) {
  const AbsNorm2 l3 = LpNorm::finite(q("3"));
  // (1 + 1)^(1/3) lies strictly between 1259/1000 and 1260/1000
  EXPECT_GT(norm_cmp(l3, pt("1", "1"), q("1259/1000")), 0);
  EXPECT_LT(norm_cmp(l3, pt("1", "1"), q("1260/1000")), 0);
  EXPECT_EQ(norm_cmp(l3, pt("1", "2"), q("1")), 1);
}

TEST(Duality, LpDualUsesConjugateExponent) {
  EXPECT_EQ(std::get<LpNorm>(dual_norm(AbsNorm2(LpNorm::finite(q("3"))))), LpNorm::finite(q("3/2")));
  EXPECT_EQ(std::get<LpNorm>(dual_norm(AbsNorm2(LpNorm::finite(q("1"))))), LpNorm::infinity());
  EXPECT_EQ(dual_norm(dual_norm(figure_alpha_norm())), figure_alpha_norm());
}

TEST(Duality, FixturePolyhedralNorm) {
  const AbsNorm2 n = norm_from_json(load_data("polyhedral_norm.json"));
  const auto& poly = std::get<PolyhedralNorm>(n);
  EXPECT_EQ(dual_norm(dual_norm(poly)), poly);
  EXPECT_EQ(extreme_points(poly).size(), 8u);
}

TEST(PolyhedralInput, RejectsNonConvexCones) {
  EXPECT_THROW(PolyhedralNorm({pt("1", "0"), pt("1/2", "1/2"), pt("0", "1")}), InputError);
  EXPECT_THROW(PolyhedralNorm({pt("1", "0"), pt("1", "1")}), InputError);
  EXPECT_THROW(LpNorm::finite(q("1/2")), InputError);
}

TEST(SupportingSlices, VertexAndFacetCases) {
  const PolyhedralNorm n = figure_alpha_norm();
  const SupportingSlice at_vertex = supporting_slice_construction(n, pt("3/4", "1/2"));
  EXPECT_TRUE(at_vertex.vertex_case);
  EXPECT_TRUE(verify_supporting_slice(n, pt("3/4", "1/2"), at_vertex).ok());

  const PlanePoint mid = pt("5/8", "5/8");
  const SupportingSlice on_facet = supporting_slice_construction(n, mid);
  EXPECT_FALSE(on_facet.vertex_case);
  EXPECT_EQ(on_facet.functional, pt("4/5", "4/5"));
  EXPECT_TRUE(verify_supporting_slice(n, mid, on_facet).ok());

  EXPECT_THROW(supporting_slice_construction(n, pt("1/2", "1/2")), PreconditionError);
}

TEST(SupportingSlices, AllExtremePointsAndFacetMidpoints) {
  const PolyhedralNorm n = figure_alpha_norm();
  const auto ext = extreme_points(n);
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const PlanePoint mid = q("1/2") * (ext[i] + ext[(i + 1) % ext.size()]);
    for (const PlanePoint& x : {ext[i], mid}) {
      const SupportingSlice s = supporting_slice_construction(n, x);
      EXPECT_GT(s.width, 0);
      EXPECT_TRUE(verify_supporting_slice(n, x, s).ok());
    }
  }
}

}  // namespace
}  // namespace deltakit
