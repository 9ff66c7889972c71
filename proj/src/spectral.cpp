#include "ricci_spectra/spectral.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ricci_spectra/errors.hpp"
#include "ricci_spectra/geometry.hpp"

namespace ricci {

namespace {

using Triplet = Eigen::Triplet<double>;

// Adds a*(e_i - e_j)(e_i - e_j)^T.
void add_edge(std::vector<Triplet>& out, int i, int j, double a) {
  out.emplace_back(i, i, a);
  out.emplace_back(j, j, a);
  out.emplace_back(i, j, -a);
  out.emplace_back(j, i, -a);
}

std::vector<Triplet> background_stiffness(const Background& bg) {
  std::vector<Triplet> entries;
  if (bg.is_sphere()) {
    const auto a = bg.conductances();
    entries.reserve(4 * a.size() + bg.size());
    for (int k = 0; k + 1 < bg.nx(); ++k) add_edge(entries, k, k + 1, a[k]);
    return entries;
  }
  const int nx = bg.nx();
  const int ny = bg.ny();
  const double ax = bg.hy() / bg.hx();
  const double ay = bg.hx() / bg.hy();
  entries.reserve(8 * bg.size() + bg.size());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k = j * nx + i;
      add_edge(entries, k, j * nx + (i + 1) % nx, ax);
      add_edge(entries, k, ((j + 1) % ny) * nx + i, ay);
    }
  }
  return entries;
}

double mass_residual(const OperatorHandle& op, const Eigen::VectorXd& x, double lambda) {
  const Eigen::VectorXd r = op.stiffness * x - lambda * op.mass.cwiseProduct(x);
  return std::sqrt(r.cwiseAbs2().cwiseQuotient(op.mass).sum());
}

}  // namespace

OperatorHandle assemble(const ConformalMetric& g, double c) {
  const auto& bg = g.background();
  const int n = static_cast<int>(g.size());
  const ScalarField r = scalar_curvature(g);
  const auto w = bg.weights();

  OperatorHandle op{g, c, Eigen::SparseMatrix<double>(n, n), Eigen::VectorXd(n)};
  std::vector<Triplet> entries = background_stiffness(bg);
  for (int k = 0; k < n; ++k) {
    const double m = w[k] * std::exp(2.0 * g.u()[k]);
    op.mass[k] = m;
    entries.emplace_back(k, k, c * m * r[k]);
  }
  op.stiffness.setFromTriplets(entries.begin(), entries.end());
  op.stiffness.makeCompressed();
  return op;
}

EigenPair ground_state(const OperatorHandle& op, const GroundStateOptions& options) {
  const int n = static_cast<int>(op.mass.size());
  const ScalarField r = scalar_curvature(op.g);
  const double shift = op.c * r.min() - 1.0;

  Eigen::SparseMatrix<double> shifted = op.stiffness;
  for (int k = 0; k < n; ++k) shifted.coeffRef(k, k) -= shift * op.mass[k];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw NonConvergence("factorization of the shifted pencil failed");

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  x /= std::sqrt(x.dot(op.mass.cwiseProduct(x)));
  double lambda = x.dot(op.stiffness * x);
  double residual = mass_residual(op, x, lambda);

  int it = 0;
  bool converged = false;
  while (it < options.max_iterations) {
    ++it;
    Eigen::VectorXd y = solver.solve(op.mass.cwiseProduct(x));
    x = y / std::sqrt(y.dot(op.mass.cwiseProduct(y)));
    const double next = x.dot(op.stiffness * x);
    residual = mass_residual(op, x, next);
    const double change = std::abs(next - lambda);
    lambda = next;
    if (change <= options.eigenvalue_tolerance * std::max(1.0, std::abs(lambda)) &&
        residual <= options.residual_tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergence("inverse iteration stalled after " + std::to_string(it) +
                         " iterations (residual " + std::to_string(residual) + ")");

  Eigen::Index peak = 0;
  x.cwiseAbs().maxCoeff(&peak);
  if (x[peak] < 0.0) x = -x;
  if (x.minCoeff() <= 0.0) throw NonConvergence("ground state changes sign after the sign fix");

  EigenPair pair;
  pair.lambda = lambda;
  pair.f = ScalarField(std::vector<double>(x.data(), x.data() + n));
  pair.residual = residual;
  pair.iterations = it;
  return pair;
}

double pencil_quotient(const OperatorHandle& op, const ScalarField& f) {
  const Eigen::Map<const Eigen::VectorXd> x(f.data(), static_cast<Eigen::Index>(f.size()));
  return x.dot(op.stiffness * x) / x.dot(op.mass.cwiseProduct(x));
}

double rayleigh(const ConformalMetric& g, double c, const ScalarField& f) {
  const ScalarField lap = laplacian(g, f);
  const ScalarField r = scalar_curvature(g);
  ScalarField integrand(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) integrand[k] = (-lap[k] + c * r[k] * f[k]) * f[k];
  return integrate(g, integrand) / integrate(g, f * f);
}

}  // namespace ricci
