#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "ricci_spectra/errors.hpp"
#include "ricci_spectra/geometry.hpp"
#include "ricci_spectra/spectral.hpp"

using namespace ricci;

namespace {

constexpr double kPi = std::numbers::pi;

ConformalMetric torus(int n, const std::function<double(double, double)>& u) {
  const Background bg = Background::flat_torus(n, n);
  return ConformalMetric(bg, ScalarField::sample(bg, u));
}

ConformalMetric sphere(int n, const std::function<double(double)>& u) {
  const Background bg = Background::round_sphere(n);
  return ConformalMetric(bg, ScalarField::sample(bg, [&](double s, double) { return u(s); }));
}

// Lowest eigenvalue of -Lap_g + cR from a dense matrix built column by column
// out of the geometry operators, symmetrized with the quadrature weights.
double dense_lowest(const ConformalMetric& g, double c) {
  const std::size_t n = g.size();
  const ScalarField r = scalar_curvature(g);
  const ScalarField mu = g.conformal_factor();
  const auto w = g.background().weights();
  Eigen::VectorXd sqrt_mass(n);
  for (std::size_t k = 0; k < n; ++k) sqrt_mass[k] = std::sqrt(w[k] * mu[k]);

  Eigen::MatrixXd a(n, n);
  ScalarField e(n);
  for (std::size_t k = 0; k < n; ++k) {
    e[k] = 1.0;
    const ScalarField col = laplacian(g, e);
    for (std::size_t i = 0; i < n; ++i) a(i, k) = -col[i] + (i == k ? c * r[i] : 0.0);
    e[k] = 0.0;
  }
  const Eigen::MatrixXd sym = sqrt_mass.asDiagonal() * a * sqrt_mass.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd symmetric = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double bump(double x, double y) { return 0.15 * std::cos(x) - 0.1 * std::sin(y) + 0.05 * std::cos(x + 2 * y); }

}  // namespace

TEST(Assemble, ConstantVectorQuotients) {
  const Background flat = Background::flat_torus(16, 16);
  EXPECT_NEAR(pencil_quotient(assemble(ConformalMetric(flat), 1.0), ScalarField(flat.size(), 1.0)), 0.0, 1e-14);

  const Background round = Background::round_sphere(64);
  EXPECT_NEAR(pencil_quotient(assemble(ConformalMetric(round), 0.25), ScalarField(round.size(), 1.0)), 0.5, 1e-13);

  const ConformalMetric g = torus(32, [](double x, double) { return 0.1 * std::cos(x); });
  EXPECT_NEAR(pencil_quotient(assemble(g, 0.5), ScalarField(g.size(), 1.0)), 0.0, 1e-8);
}

TEST(Assemble, PencilIsSymmetricWithPositiveMass) {
  const OperatorHandle op = assemble(torus(12, bump), 0.7);
  const Eigen::SparseMatrix<double> diff = op.stiffness - Eigen::SparseMatrix<double>(op.stiffness.transpose());
  EXPECT_EQ(diff.norm(), 0.0);
  EXPECT_GT(op.mass.minCoeff(), 0.0);
  EXPECT_TRUE(assemble(torus(12, bump), 0.2).below_theorem_range());
  EXPECT_FALSE(op.below_theorem_range());
}

TEST(GroundState, RoundSphere) {
  const EigenPair p = ground_state(assemble(sphere(128, [](double) { return 0.0; }), 0.25));
  EXPECT_NEAR(p.lambda, 0.5, 1e-12);
  for (double v : p.f) EXPECT_NEAR(v, 1.0 / std::sqrt(4 * kPi), 1e-10);
  EXPECT_LE(p.residual, 1e-9);
}

TEST(GroundState, FlatTorusAnyCoupling) {
  const Background bg = Background::flat_torus(16, 16);
  for (double c : {0.0, 0.25, 1.0, 3.0}) {
    const EigenPair p = ground_state(assemble(ConformalMetric(bg), c));
    EXPECT_NEAR(p.lambda, 0.0, 1e-12);
    for (double v : p.f) EXPECT_NEAR(v, 1.0 / (2 * kPi), 1e-10);
  }
}

TEST(GroundState, InvariantsOnPerturbedMetrics) {
  for (const ConformalMetric& g : {torus(32, bump), sphere(96, [](double s) { return 0.1 * std::cos(s); })}) {
    for (double c : {0.25, 0.5, 2.0}) {
      const EigenPair p = ground_state(assemble(g, c));
      EXPECT_GT(p.f.min(), 0.0);
      EXPECT_NEAR(integrate(g, p.f * p.f), 1.0, 1e-10);
      EXPECT_LE(p.residual, 1e-9);
      EXPECT_LE(p.lambda, c * average_scalar_curvature(g) + 1e-10);
      EXPECT_NEAR(rayleigh(g, c, p.f), p.lambda, 1e-10);
    }
  }
}

TEST(GroundState, MatchesDenseOracle) {
  for (double c : {0.25, 0.5, 1.0}) {
    const ConformalMetric g = torus(16, [](double x, double) { return 0.2 * std::cos(x); });
    const double dense = dense_lowest(g, c);
    const double sparse = ground_state(assemble(g, c)).lambda;
    EXPECT_NEAR(sparse, dense, 1e-9 * std::max(1.0, std::abs(dense))) << "c = " << c;
  }
  const ConformalMetric s = sphere(200, [](double t) { return 0.1 * std::cos(t) + 0.05 * std::cos(3 * t); });
  EXPECT_NEAR(ground_state(assemble(s, 0.5)).lambda, dense_lowest(s, 0.5), 1e-9);
}

TEST(GroundState, VariationalBound) {
  const ConformalMetric g = torus(32, bump);
  const double c = 0.5;
  const double lambda = ground_state(assemble(g, c)).lambda;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = coef(rng), b = coef(rng), d = coef(rng), e = coef(rng);
    const ScalarField f = ScalarField::sample(g.background(), [&](double x, double y) {
      return 2.0 + a * std::cos(x) + b * std::sin(y) + d * std::cos(2 * x + y) + e * std::sin(x - 3 * y);
    });
    EXPECT_GE(rayleigh(g, c, f), lambda - 1e-10);
  }
}

TEST(GroundState, Deterministic) {
  const OperatorHandle op = assemble(torus(40, bump), 1.0);
  const EigenPair a = ground_state(op);
  const EigenPair b = ground_state(assemble(torus(40, bump), 1.0));
  EXPECT_EQ(std::memcmp(&a.lambda, &b.lambda, sizeof(double)), 0);
  EXPECT_TRUE(a.f == b.f);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(GroundState, ConvergesUnderRefinement) {
  std::vector<double> lambdas;
  for (int n : {16, 32, 64, 128}) lambdas.push_back(ground_state(assemble(torus(n, bump), 0.5)).lambda);
  for (std::size_t k = 0; k + 2 < lambdas.size(); ++k) {
    const double order = std::log2(std::abs(lambdas[k] - lambdas[k + 1]) / std::abs(lambdas[k + 1] - lambdas[k + 2]));
    EXPECT_GE(order, 1.8);
  }
}

TEST(GroundState, IterationCapRaisesNonConvergence) {
  GroundStateOptions opts;
  opts.max_iterations = 1;
  EXPECT_THROW(ground_state(assemble(torus(16, bump), 0.5), opts), NonConvergence);
}

TEST(Rayleigh, ConstantGivesCouplingTimesAverageCurvature) {
  const ConformalMetric g = sphere(64, [](double s) { return 0.1 * std::cos(s); });
  EXPECT_NEAR(rayleigh(g, 0.75, ScalarField(g.size(), 2.0)), 0.75 * average_scalar_curvature(g), 1e-12);
}
