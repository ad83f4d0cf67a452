#include <gtest/gtest.h>

#include "deltakit/error.hpp"
#include "deltakit/freespace.hpp"
#include "deltakit/json_io.hpp"
#include "deltakit/lp.hpp"
#include "deltakit/random.hpp"
#include "test_support.hpp"

namespace deltakit {
namespace {

using testing::load_data;
using testing::q;

class Kite : public ::testing::Test {
 protected:
  SpaceRef space = share(space_from_json(load_data("kite.json")));
  std::size_t a = space->index("a");
  std::size_t b = space->index("b");
  std::size_t c = space->index("c");
  std::size_t e = space->index("e");

  FreeElement element(std::map<std::size_t, Rational> coeffs) const { return FreeElement(space, coeffs); }
};

// Values from tests/support/oracle/frozen_values.py (networkx min-cost flow).
TEST_F(Kite, NormsMatchIndependentOracle) {
  EXPECT_EQ(free_norm(element({{b, q("1")}, {c, q("-1")}, {e, q("1/2")}})), q("7/4"));
  EXPECT_EQ(free_norm(molecule(space, b, c) - molecule(space, a, e)), q("4/3"));
  EXPECT_EQ(free_norm(element({{b, q("1/3")}, {c, q("1/3")}, {e, q("1/3")}})), q("3/2"));
  EXPECT_EQ(free_norm(element({{b, q("2")}, {c, q("-3/4")}, {e, q("-5/4")}})), q("29/8"));
}

TEST_F(Kite, DualLpAgreesWithTransport) {
  const FreeElement mu = element({{b, q("2")}, {c, q("-3/4")}, {e, q("-5/4")}});
  EXPECT_EQ(lipschitz_dual_value(mu), q("29/8"));
  const NormCertificate cert = free_norm_certified(mu);
  EXPECT_EQ(cert.value, q("29/8"));
  EXPECT_NO_THROW(check_certificate(mu, cert));
  EXPECT_LE(lip_norm(cert.dual), 1);
  EXPECT_EQ(eval_functional(cert.dual, mu), cert.value);
}

TEST_F(Kite, TamperedCertificateIsRejected) {
  const FreeElement mu = molecule(space, b, c) - molecule(space, a, e);
  NormCertificate cert = free_norm_certified(mu);
  cert.value += q("1/7");
  EXPECT_THROW(check_certificate(mu, cert), Error);
}

TEST_F(Kite, PointMassesAndMolecules) {
  EXPECT_EQ(free_norm(FreeElement::delta(space, c) - FreeElement::delta(space, e)), q("1"));
  EXPECT_EQ(free_norm(FreeElement::delta(space, e)), q("3/2"));
  EXPECT_EQ(free_norm(molecule(space, c, b)), q("1"));
  EXPECT_THROW(molecule(space, c, c), PreconditionError);
  EXPECT_TRUE(FreeElement::delta(space, a).is_zero());
}

TEST_F(Kite, McShaneExtensionKeepsConstantAndData) {
  const std::map<std::size_t, Rational> partial{{b, q("1")}, {e, q("-1")}};
  EXPECT_EQ(lipschitz_constant(*space, partial), q("1"));
  const LipschitzFunction f = mcshane_extend(space, partial);
  EXPECT_EQ(lip_norm(f), q("1"));
  EXPECT_EQ(f(b) - f(e), q("2"));
  EXPECT_EQ(f(a), 0);
  EXPECT_THROW(mcshane_extend(space, {}), PreconditionError);
}

TEST_F(Kite, SliceAdmission) {
  const LipschitzFunction f = mcshane_extend(space, {{b, q("1")}, {c, q("-1/2")}});
  const Slice slice(f, q("1/4"));
  EXPECT_TRUE(slice.admits(molecule(space, b, c)));
  EXPECT_FALSE(slice.admits(molecule(space, c, b)));
  EXPECT_THROW(Slice(f, q("0")), PreconditionError);
}

TEST(FreeSpaceExamples, ExampleALevelThree) {
  const SpaceRef space = share(example_space_a(3));
  const std::size_t x = space->index(landmarks::x().id());
  const std::size_t y = space->index(landmarks::y().id());
  const std::size_t u = space->index(landmarks::u().id());
  const std::size_t v = space->index(landmarks::v().id());
  const FreeElement m_xy = molecule(space, x, y);
  // oracle: 1 and 34 certified molecules
  EXPECT_EQ(free_norm(m_xy - molecule(space, u, v)), q("1"));
  const auto pairs = certified_denting_pairs(*space);
  EXPECT_EQ(pairs.size(), 34u);

  const LipschitzFunction f =
      mcshane_extend(space, {{x, q("0")}, {y, q("-1")}, {u, q("-1/2")}, {v, q("-1/2")}});
  EXPECT_EQ(lip_norm(f), q("1"));
  EXPECT_EQ(eval_functional(f, m_xy), q("1"));
  EXPECT_EQ(eval_functional(f, molecule(space, u, v)), q("0"));

  const DentingReport report = distance_to_denting_report(m_xy, Slice(f, q("1")));
  EXPECT_FALSE(report.entries.empty());
  EXPECT_TRUE(report.all_at_distance_two);
}

TEST(FreeSpaceExamples, ExampleAFunctionalWithOppositeSignIsAlsoOneLipschitz) {
  const SpaceRef space = share(example_space_a(3));
  const std::size_t x = space->index(landmarks::x().id());
  const std::size_t y = space->index(landmarks::y().id());
  const std::size_t u = space->index(landmarks::u().id());
  const std::size_t v = space->index(landmarks::v().id());
  const LipschitzFunction f =
      mcshane_extend(space, {{x, q("0")}, {y, q("1")}, {u, q("1/2")}, {v, q("1/2")}});
  EXPECT_EQ(lip_norm(f), q("1"));
  EXPECT_EQ(eval_functional(f, molecule(space, x, y)), q("-1"));
}

TEST(FreeSpaceExamples, ExampleBAdjacentDistances) {
  const SpaceRef space = share(example_space_b(4));
  const std::size_t x = space->index(landmarks::x().id());
  const std::size_t y = space->index(landmarks::y().id());
  const FreeElement m_xy = molecule(space, x, y);
  struct Case {
    const char* u;
    const char* v;
    const char* there;
    const char* back;
  };
  // oracle: left to right 2 - 2^(1-n), right to left 2
  for (const Case& c : {Case{"0/1,1/4", "1/2,1/4", "3/2", "2"}, Case{"1/4,1/8", "1/2,1/8", "7/4", "2"},
                        Case{"7/8,1/16", "1/1,1/16", "15/8", "2"}}) {
    const std::size_t u = space->index(c.u);
    const std::size_t v = space->index(c.v);
    EXPECT_TRUE(denting_molecule_certificate(*space, u, v));
    EXPECT_EQ(free_norm(m_xy - molecule(space, u, v)), q(c.there)) << c.u;
    EXPECT_EQ(free_norm(m_xy - molecule(space, v, u)), q(c.back)) << c.u;
  }
}

TEST(FreeSpaceProperty, PrimalEqualsDualOnRandomSpaces) {
  Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    const SpaceRef space = share(random_metric_space(rng, static_cast<std::size_t>(rng.between(2, 7))));
    std::map<std::size_t, Rational> coeffs;
    for (int k = 0; k < 4; ++k) coeffs[rng.below(space->size())] += rng.rational(5, 3);
    const FreeElement mu(space, coeffs);
    EXPECT_EQ(free_norm(mu), lipschitz_dual_value(mu));
  }
}

TEST(FreeSpaceProperty, NormIsASeminormOnRandomElements) {
  Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    const SpaceRef space = share(random_metric_space(rng, 5));
    auto draw = [&] {
      std::map<std::size_t, Rational> coeffs;
      for (int k = 0; k < 3; ++k) coeffs[rng.below(space->size())] += rng.rational(4, 3);
      return FreeElement(space, coeffs);
    };
    const FreeElement mu = draw();
    const FreeElement nu = draw();
    const Rational s = rng.rational(3, 2);
    EXPECT_LE(free_norm(mu + nu), free_norm(mu) + free_norm(nu));
    EXPECT_EQ(free_norm(s * mu), abs_value(s) * free_norm(mu));
  }
}

TEST(FreeSpaceProperty, RandomLipschitzRespectsData) {
  Rng rng(9);
  for (int i = 0; i < 40; ++i) {
    const SpaceRef space = share(random_metric_space(rng, 6));
    const std::map<std::size_t, Rational> fixed{{0, Rational(0)}, {1, space->dist(0, 1)}};
    const LipschitzFunction f = random_lipschitz(rng, space, fixed);
    EXPECT_LE(lip_norm(f), 1);
    EXPECT_EQ(f(1) - f(0), space->dist(0, 1));
  }
}

}  // namespace
}  // namespace deltakit
