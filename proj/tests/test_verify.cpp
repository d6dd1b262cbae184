#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qvi/verify.hpp"

namespace qvi {
namespace {

Point p2(double a, double b) { return Point{{a, b}}; }

const double kL = 1.0 / 64.0;

TEST(CheckA4, ExampleTwoWithinL) {
  const Problem prob = example2_instance();
  const A4Report r = check_a4(prob.constraint_map(), prob.domain(), kL);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.max_ratio, kL + 1e-10);
  EXPECT_GT(r.max_ratio, 0.9 * kL);
  EXPECT_EQ(r.trials, SamplerConfig{}.trials);
}

TEST(CheckA4, ExampleOneExceedsSqrtTwo) {
  const Example1 ex = example1_instance();
  const A4Report r = check_a4(ex.constraint_map, ex.domain, 1.0);
  EXPECT_FALSE(r.holds);
  EXPECT_GE(r.max_ratio, std::sqrt(2.0) - 1e-6);
  const double ratio = (ex.constraint_map.project(r.witness_x, r.witness_z) -
                        ex.constraint_map.project(r.witness_y, r.witness_z)).norm() /
                       (r.witness_x - r.witness_y).norm();
  EXPECT_DOUBLE_EQ(ratio, r.max_ratio);
}

TEST(CheckA4, ConstantMapHasZeroRatio) {
  const MovingSet phi = MovingSet::translated(Box::unit(2), Matrix::Zero(2, 2), 0.0);
  const A4Report r = check_a4(phi, Box::unit(2), 0.0);
  EXPECT_EQ(r.max_ratio, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(CheckA4, DeterministicGivenSeed) {
  const Example1 ex = example1_instance();
  const A4Report a = check_a4(ex.constraint_map, ex.domain, 1.0, {5, 500, 0, 10.0});
  const A4Report b = check_a4(ex.constraint_map, ex.domain, 1.0, {5, 500, 0, 10.0});
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  EXPECT_EQ(a.witness_z, b.witness_z);
}

TEST(CheckHausdorff, ExampleTwo) {
  const Problem prob = example2_instance();
  const HausdorffReport r =
      check_a4_implies_hausdorff(prob.constraint_map(), prob.domain(), kL, {1, 300, 2000, 10.0});
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.max_ratio, kL + 1e-6);
  EXPECT_NEAR(r.max_ratio, kL, 1e-9);
}

TEST(CheckHausdorff, ExampleOneIsOneLipschitzDespiteA4Failure) {
  const Example1 ex = example1_instance();
  const HausdorffReport r =
      check_a4_implies_hausdorff(ex.constraint_map, ex.domain, 1.0, {2, 300, 2000, 10.0});
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.max_ratio, 1.0, 1e-9);
  EXPECT_FALSE(check_a4(ex.constraint_map, ex.domain, 1.0).holds);
}

TEST(CheckHausdorff, CoincidentPointsGiveZero) {
  const Problem prob = example2_instance();
  const Box single(p2(0.5, 0.5), p2(0.5, 0.5));
  const HausdorffReport r =
      check_a4_implies_hausdorff(prob.constraint_map(), single, kL, {1, 20, 500, 10.0});
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.max_ratio, 0.0);
  EXPECT_EQ(r.max_excess, 0.0);
}

TEST(CheckAttouchWets, IdenticalSets) {
  const AttouchWetsReport r = check_attouch_wets(Box::unit(2), Box::unit(2), p2(3, -2));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(CheckAttouchWets, ExampleOneWitness) {
  const Example1 ex = example1_instance();
  const ConvexSet a = ex.constraint_map.at(p2(0, 0));
  const ConvexSet b = ex.constraint_map.at(p2(1, 0));
  const AttouchWetsReport r = check_attouch_wets(a, b, p2(1, 2));
  EXPECT_NEAR(r.lhs, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.rho, std::sqrt(5.0) + 2.0 + std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.localized_hausdorff, 1.0, 1e-9);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.lhs, r.rhs);
}

TEST(CheckAttouchWets, TranslatedBoxesHoldStrictly) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    const Box a = testing::random_box(rng, 2);
    const Point shift = testing::gaussian(rng, 2, 0.3);
    const Box b(a.lower() + shift, a.upper() + shift);
    const AttouchWetsReport r = check_attouch_wets(a, b, testing::gaussian(rng, 2, 3.0));
    EXPECT_TRUE(r.holds) << "trial " << i;
    EXPECT_LT(r.lhs, r.rhs);
  }
}

TEST(CheckOperator, ExampleTwoAndWrongDeclaration) {
  const Problem prob = example2_instance();
  const OperatorReport ok = check_operator(prob.op());
  EXPECT_TRUE(ok.holds);
  const GeneralMap lying(2, [](const Point& x) { return Point(2.0 * x); }, 1.0, 1.0);
  EXPECT_FALSE(check_operator(lying).holds);
}

TEST(Example1Instance, SegmentsMatchDefinition) {
  const Example1 ex = example1_instance();
  const ConvexSet phi0 = ex.constraint_map.at(p2(0, 0));
  const ConvexSet phi1 = ex.constraint_map.at(p2(1, 0));
  const auto& s0 = std::get<Segment>(phi0);
  EXPECT_EQ(s0.a(), p2(0, 0));
  EXPECT_EQ(s0.b(), p2(1, 0));
  const auto& s1 = std::get<Segment>(phi1);
  EXPECT_EQ(s1.a(), p2(0, 1));
  EXPECT_EQ(s1.b(), p2(1, 0));
  for (double x : {0.0, 0.25, 0.6, 1.0})
    EXPECT_TRUE(contains(ex.constraint_map.at(p2(x, 0)), p2(1, 0), 0.0));
  EXPECT_EQ(std::get<Box>(ex.domain).upper(), p2(1, 0));
}

TEST(Example2Instance, KnownSolutionTriple) {
  const Problem prob = example2_instance();
  const double s = 1.0 / 128.0;
  const Point z = p2(s, s);
  const Point x = p2(0.5, 0.5);
  const Point y = z - 4.0 * prob.op()(z);
  EXPECT_LE((y - p2(0.12 * s, 0)).norm(), 1e-15);
  EXPECT_LE(residual(prob, 4.0, z, x), 1e-12);
  // The three solution equations: z = P_Phi(x)(y), z = J(2z - y), x = P_C(z).
  EXPECT_LE((prob.constraint_map().project(x, y) - z).norm(), 1e-12);
  EXPECT_LE((resolvent(prob.op(), 4.0, 2.0 * z - y) - z).norm(), 1e-12);
  EXPECT_LE((project(prob.domain(), z) - x).norm(), 1e-12);
}

TEST(Example2Instance, DeclaredConstantsMatchEstimates) {
  const Problem prob = example2_instance();
  EXPECT_DOUBLE_EQ(prob.op().lipschitz(), 0.25);
  EXPECT_DOUBLE_EQ(prob.op().monotonicity(), 0.22);
  EXPECT_DOUBLE_EQ(prob.constraint_map().lipschitz(), kL);
  const ConstantEstimate e = estimate_constants(prob.op(), {3, 100000, 0, 1.0});
  EXPECT_NEAR(e.lipschitz, 0.25, 1e-6);
  EXPECT_NEAR(e.monotonicity, 0.22, 1e-6);
}

}  // namespace
}  // namespace qvi
