#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qvi/errors.hpp"
#include "qvi/operators.hpp"

namespace qvi {
namespace {

using testing::gaussian;

Point p2(double a, double b) { return Point{{a, b}}; }

AffineMap example2_map() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.22;
  m(1, 1) = 0.25;
  return AffineMap(m, Point::Zero(2), 0.25, 0.22);
}

AffineMap zero_map(Index n) { return AffineMap(Matrix::Zero(n, n), Point::Zero(n), 0.0, 0.0); }

TEST(Evaluate, ExampleTwoMatrix) {
  const MonotoneMap t = example2_map();
  EXPECT_LE((evaluate(t, p2(1, 1)) - p2(0.22, 0.25)).norm(), 1e-15);
  EXPECT_EQ(evaluate(t, p2(0.3, -2)), evaluate(t, p2(0.3, -2)));
  const MonotoneMap id = AffineMap(Matrix::Identity(3, 3), Point::Zero(3));
  const Point x{{1.5, -2, 7}};
  EXPECT_EQ(evaluate(id, x), x);
  EXPECT_THROW(evaluate(t, Point::Zero(3)), DimensionError);
}

TEST(AffineMap, ComputedConstantsMatchEigenOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    Matrix a(3, 3);
    for (Index r = 0; r < 3; ++r) a.row(r) = gaussian(rng, 3).transpose();
    const Matrix s = a * a.transpose() + 0.1 * Matrix::Identity(3, 3);
    const AffineMap t(s, Point::Zero(3));
    const auto range = testing::symmetric_eigen_range(s);
    EXPECT_NEAR(t.lipschitz(), range.max, 1e-10);
    EXPECT_NEAR(t.monotonicity(), range.min, 1e-10);
  }
}

TEST(AffineMap, RejectsOptimisticDeclarations) {
  Matrix m = Matrix::Identity(2, 2);
  EXPECT_THROW(AffineMap(m, Point::Zero(2), 0.5, 0.5), DomainError);
  EXPECT_THROW(AffineMap(m, Point::Zero(2), 1.0, 2.0), DomainError);
  EXPECT_NO_THROW(AffineMap(m, Point::Zero(2), 2.0, 0.5));
  EXPECT_THROW(AffineMap(Matrix::Identity(2, 3), Point::Zero(2)), DimensionError);
}

TEST(Resolvent, ZeroMapIsIdentity) {
  const Point v{{0.4, -1.0, 2.5}};
  for (double xi : {0.1, 1.0, 10.0}) {
    EXPECT_LE((resolvent(zero_map(3), xi, v) - v).norm(), 1e-15);
    EXPECT_LE((reflected_resolvent(zero_map(3), xi, v) - v).norm(), 1e-15);
  }
}

TEST(Resolvent, ExampleTwoStepFour) {
  const MonotoneMap t = example2_map();
  EXPECT_LE((resolvent(t, 4.0, p2(1.88, 2)) - p2(1, 1)).norm(), 1e-14);
  EXPECT_LE((reflected_resolvent(t, 4.0, p2(1.88, 2)) - p2(0.12, 0)).norm(), 1e-14);
}

TEST(Resolvent, SingularSystemRejected) {
  // I + xi M singular for M = -I / xi; constants declared loosely.
  EXPECT_THROW(
      {
        const MonotoneMap t = AffineMap(-Matrix::Identity(2, 2), Point::Zero(2), 1.0, -1.0);
        Resolvent j(t, 1.0);
      },
      DomainError);
}

TEST(Resolvent, GeneralMapMatchesAffine) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    const Index n = 2 + i % 4;
    const Matrix m = testing::random_strongly_monotone(rng, n, 0.3, 2.0, 0.2);
    const Point q = gaussian(rng, n);
    const AffineMap a(m, q);
    const GeneralMap g(n, [m, q](const Point& x) { return Point(m * x + q); }, a.lipschitz(),
                       a.monotonicity());
    const double xi = 0.1 + 2.0 * testing::uniform(rng, 0, 1);
    const Point v = gaussian(rng, n, 3.0);
    EXPECT_LE((resolvent(g, xi, v) - resolvent(a, xi, v)).norm(), 1e-9) << "trial " << i;
  }
}

TEST(Resolvent, GeneralMapNonlinear) {
  // T(x) = x + 0.5 tanh(x) componentwise: mu = 1, L = 1.5.
  const GeneralMap g(2, [](const Point& x) { return Point(x + 0.5 * x.array().tanh().matrix()); },
                     1.5, 1.0);
  const Point v = p2(3.0, -1.0);
  const double xi = 0.7;
  const Point u = resolvent(g, xi, v);
  EXPECT_LE((u + xi * g(u) - v).norm(), 1e-10);
}

TEST(Resolvent, WrongConstantsStopWithConvergenceError) {
  // Declared mu and L are wildly off, so the damped step diverges or stalls.
  const GeneralMap g(1, [](const Point& x) { return Point(-50.0 * x); }, 1.0, 1.0);
  EXPECT_THROW(resolvent(g, 1.0, Point::Ones(1)), ConvergenceError);
}

TEST(ContractionModulus, ExampleTwoConstants) {
  EXPECT_NEAR(contraction_modulus(0.25, 0.22, 4.0), std::sqrt(1.0 - 3.52 / 3.76), 1e-15);
  EXPECT_NEAR(contraction_modulus(0.25, 0.22, 4.0), 0.252646, 1e-6);
}

TEST(ContractionModulus, EqualConstantsAtOptimalStepIsZero) {
  for (double l : {0.1, 1.0, 7.5}) EXPECT_EQ(contraction_modulus(l, l, 1.0 / l), 0.0);
}

TEST(ContractionModulus, OptimalStepMinimizes) {
  const double at_opt = contraction_modulus(0.25, 0.22, 4.0);
  for (double xi : {2.0, 3.0, 5.0, 6.0}) EXPECT_LE(at_opt, contraction_modulus(0.25, 0.22, xi));
}

TEST(ContractionModulus, RejectsInvalidConstants) {
  EXPECT_THROW(contraction_modulus(0.2, 0.25, 1.0), DomainError);
  EXPECT_THROW(contraction_modulus(1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(contraction_modulus(1.0, 0.5, 0.0), DomainError);
}

TEST(OptimalStepsize, Examples) {
  const StepChoice eq = optimal_stepsize(2.0, 2.0);
  EXPECT_EQ(eq.xi, 0.5);
  EXPECT_EQ(eq.modulus, 0.0);
  const StepChoice ex2 = optimal_stepsize(0.25, 0.22);
  EXPECT_DOUBLE_EQ(ex2.xi, 4.0);
  EXPECT_NEAR(ex2.modulus, 0.252646, 1e-6);
}

TEST(OptimalStepsize, AgreesWithGeneralFormula) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const double mu = testing::uniform(rng, 0.01, 5.0);
    const double l = mu * testing::uniform(rng, 1.0, 20.0);
    const StepChoice c = optimal_stepsize(l, mu);
    const double g = l / mu;
    EXPECT_NEAR(c.modulus, contraction_modulus(l, mu, 1.0 / l), 1e-12);
    EXPECT_NEAR(c.modulus, std::sqrt((g - 1) / (g + 1)), 1e-12);
  }
}

TEST(EstimateConstants, ExampleTwo) {
  const ConstantEstimate e = estimate_constants(example2_map(), {7, 100000, 0, 1.0});
  EXPECT_NEAR(e.lipschitz, 0.25, 1e-6);
  EXPECT_NEAR(e.monotonicity, 0.22, 1e-6);
  EXPECT_LE(e.lipschitz, 0.25 + 1e-15);
  EXPECT_GE(e.monotonicity, 0.22 - 1e-15);
}

TEST(EstimateConstants, IdentityAndSymmetricOracle) {
  const ConstantEstimate id = estimate_constants(AffineMap(Matrix::Identity(4, 4), Point::Zero(4)));
  EXPECT_NEAR(id.lipschitz, 1.0, 1e-12);
  EXPECT_NEAR(id.monotonicity, 1.0, 1e-12);

  const Matrix s{{2.0, 0.5}, {0.5, 1.0}};
  const auto range = testing::symmetric_eigen_range(s);
  const ConstantEstimate e = estimate_constants(AffineMap(s, Point::Zero(2)), {9, 50000, 0, 1.0});
  EXPECT_LE(e.lipschitz, range.max + 1e-12);
  EXPECT_GE(e.monotonicity, range.min - 1e-12);
  EXPECT_NEAR(e.lipschitz, range.max, 1e-4);
  EXPECT_NEAR(e.monotonicity, range.min, 1e-4);
}

TEST(EstimateConstants, DeterministicGivenSeed) {
  const MonotoneMap t = example2_map();
  const ConstantEstimate a = estimate_constants(t, {42, 1000, 0, 1.0});
  const ConstantEstimate b = estimate_constants(t, {42, 1000, 0, 1.0});
  EXPECT_EQ(a.lipschitz, b.lipschitz);
  EXPECT_EQ(a.monotonicity, b.monotonicity);
}

// Seeded property tests over random strongly monotone affine maps.

TEST(OperatorProperties, ResolventNonexpansiveAndSolvesDefiningEquation) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 6;
    const AffineMap a(testing::random_strongly_monotone(rng, n, 0.1, 3.0, 0.5), gaussian(rng, n));
    const MonotoneMap t = a;
    const double xi = testing::uniform(rng, 0.05, 4.0 / a.lipschitz());
    const Resolvent j(t, xi);
    const Point u = gaussian(rng, n, 3.0);
    const Point v = gaussian(rng, n, 3.0);
    EXPECT_LE((j(u) - j(v)).norm(), (u - v).norm() + 1e-12);
    const Point ju = j(u);
    EXPECT_LE((ju + xi * t(ju) - u).norm(), 1e-10);
  }
}

TEST(OperatorProperties, ReflectedResolventRespectsModulus) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 6;
    const AffineMap a(testing::random_strongly_monotone(rng, n, 0.1, 3.0, 0.5), Point::Zero(n));
    const double xi = testing::uniform(rng, 0.05, 4.0 / a.lipschitz());
    const Resolvent j(a, xi);
    const double modulus = contraction_modulus(a.lipschitz(), a.monotonicity(), xi);
    const Point u = gaussian(rng, n, 3.0);
    const Point v = gaussian(rng, n, 3.0);
    EXPECT_LE((j.reflect(u) - j.reflect(v)).norm(), modulus * (u - v).norm() + 1e-10);
  }
}

TEST(OperatorProperties, ReflectedFixedPointsAreZerosOfT) {
  // R(v) = v exactly when J(v) = v, i.e. T(J(v)) = 0.
  const Matrix m{{1.0, 0.2}, {-0.2, 0.5}};
  const Point q = p2(0.3, -0.1);
  const AffineMap a(m, q);
  const Point zero = -m.fullPivLu().solve(q);
  const Resolvent j(a, 0.8);
  EXPECT_LE((j.reflect(zero) - zero).norm(), 1e-14);
  EXPECT_LE(a(j(zero)).norm(), 1e-14);
}

}  // namespace
}  // namespace qvi
