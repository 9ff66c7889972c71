#pragma once

#include <Eigen/SparseCore>

#include "ricci_spectra/grid.hpp"

namespace ricci {

/// Discrete -Lap_g + cR as the symmetric generalized pencil (stiffness, mass).
///
/// stiffness = K0 + c diag(w e^{2u} R), where K0 is the finite-volume
/// background stiffness (conformally invariant in two dimensions), and
/// mass = diag(w e^{2u}). The Rayleigh quotient x^T K x / x^T M x is the
/// quadrature of (|grad f|^2 + c R f^2) dmu / f^2 dmu.
struct OperatorHandle {
  ConformalMetric g;
  double c = 0.0;
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;

  /// Below 1/4 the monotonicity theorems do not apply; accepted but flagged.
  bool below_theorem_range() const noexcept { return c < 0.25; }
};

struct EigenPair {
  double lambda = 0.0;
  ScalarField f;
  /// L2(dmu) norm of (-Lap + cR) f - lambda f, with f mass-normalized.
  double residual = 0.0;
  int iterations = 0;
};

struct GroundStateOptions {
  double eigenvalue_tolerance = 1e-12;
  double residual_tolerance = 1e-9;
  int max_iterations = 500;
};

OperatorHandle assemble(const ConformalMetric& g, double c);

/// Lowest eigenpair of the pencil by shifted inverse iteration, starting from
/// the constant vector with shift c min(R) - 1. The eigenvector is sign-fixed
/// positive and normalized so that integrate(g, f^2) = 1.
///
/// Throws NonConvergence when the tolerances are not met within the
/// iteration cap or when the converged vector is not strictly positive.
EigenPair ground_state(const OperatorHandle& op, const GroundStateOptions& options = {});

/// x^T K x / x^T M x on the assembled pencil.
double pencil_quotient(const OperatorHandle& op, const ScalarField& f);

/// int (-Lap f + c R f) f dmu / int f^2 dmu, evaluated with the geometry
/// operators rather than the assembled matrices.
double rayleigh(const ConformalMetric& g, double c, const ScalarField& f);

}  // namespace ricci
