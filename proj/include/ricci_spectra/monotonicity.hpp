#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ricci_spectra/flow.hpp"
#include "ricci_spectra/grid.hpp"
#include "ricci_spectra/spectral.hpp"

// Derivative formulas for the lowest eigenvalue of -Lap + cR along
// (normalized) Ricci flow, together with the integral identities that link
// them. With f the positive normalized ground state and e^{-phi} = f^2:
//
//   unnormalized:  dlambda/dt = 1/2 int |Rc + Hess phi|^2 e^{-phi}
//                               + (4c-1)/2 int |Rc|^2 e^{-phi}
//   normalized:    dlambda/dt = -(2/n) r lambda + (same two integrals)
//   c = 1/4:       dlambda/dt = (2/n) r (lambda - r/4)
//                               + 1/2 int |Rc + Hess phi - (r/n) g|^2 e^{-phi}
//
// Every function here takes n = 2.

namespace ricci {

struct PotentialField {
  ScalarField phi;
};

/// phi = -2 ln f. Throws NonPositiveEigenfunction unless f > 0.
PotentialField potential(const ScalarField& f);

/// 2 int Rc(grad f, grad f) dmu + int |Rc|^2 f^2 dmu. The c = 1/2 formula,
/// written with f rather than phi.
double rhs_theorem1(const ConformalMetric& g, const ScalarField& f);

double rhs_theorem2(const ConformalMetric& g, double c, const PotentialField& p);

double rhs_theorem3(const ConformalMetric& g, double c, const PotentialField& p, double lambda);

/// Traceless form; only defined for c = 1/4, otherwise throws WrongCoupling.
double rhs_theorem3_traceless(const ConformalMetric& g, double c, const PotentialField& p, double lambda);

/// (4c-1)/2 int |Rc - (r/n) g|^2 e^{-phi} dmu. Reported, never gated on.
double extension_term(const ConformalMetric& g, double c, const PotentialField& p);

/// max |Lap phi + 2cR - |grad phi|^2 / 2 - 2 lambda| over nodes.
double identity_eigen(const ConformalMetric& g, double c, const PotentialField& p, double lambda);

/// int Rc.Hess phi e^{-phi} - int Rc(grad phi, grad phi) e^{-phi} + 1/2 int R Lap e^{-phi}
double identity_ibp14(const ConformalMetric& g, const PotentialField& p);

/// int Rc.Hess phi e^{-phi} + int |Hess phi|^2 e^{-phi} - (2c - 1/2) int R Lap e^{-phi}
double identity_ibp8(const ConformalMetric& g, double c, const PotentialField& p);

/// int |Hess phi|^2 e^{-phi} - 2c int R Lap e^{-phi} + int Rc(grad phi, grad phi) e^{-phi}
double identity_hessian10(const ConformalMetric& g, double c, const PotentialField& p);

/// int |Rc + Hess phi|^2 e^{-phi}, minus (r/n) g inside the norm in
/// normalized mode. Zero on a (normalized) gradient soliton.
double soliton_residual(const ConformalMetric& g, const PotentialField& p, FlowMode mode);

struct TimeValue {
  double t = 0.0;
  double value = 0.0;
};

struct FdSample {
  double t = 0.0;
  double derivative = 0.0;
  /// End samples use second-order one-sided stencils.
  bool one_sided = false;
};

/// Central differences on uniformly spaced samples (at least 3).
std::vector<FdSample> fd_derivative(std::span<const TimeValue> samples);

struct SpaceFormValues {
  double lambda = 0.0;
  double dlambda_dt = 0.0;
  double rhs_thm2 = 0.0;
};

/// Closed form on the shrinking round n-sphere of initial radius a0:
/// R(t) = n(n-1)/(a0^2 - 2(n-1)t), lambda = cR, dlambda/dt = 2cR^2/n.
SpaceFormValues space_form_oracle(int n, double a0, double c, double t);

/// One row of diagnostics at a time sample.
struct MonotonicityReport {
  double t = 0.0;
  double c = 0.0;
  double lambda = 0.0;
  double r_avg = 0.0;
  std::optional<double> fd_dlambda;
  std::optional<double> rhs_thm1;  // c = 1/2 only
  double rhs_thm2 = 0.0;
  double rhs_thm3 = 0.0;
  std::optional<double> rhs_thm3_traceless;  // c = 1/4 only
  double extension_term = 0.0;
  double eigen_identity_residual = 0.0;
  double ibp14_residual = 0.0;
  double ibp8_residual = 0.0;
  double hessian10_residual = 0.0;
  double soliton_residual = 0.0;
  double volume = 0.0;
  double min_conformal_factor = 0.0;
  double eigen_residual = 0.0;
  double max_abs_curvature = 0.0;
  bool below_theorem_range = false;

  /// The formula that predicts dlambda/dt in the given mode.
  double predicted_dlambda(FlowMode mode) const { return mode == FlowMode::Ricci ? rhs_thm2 : rhs_thm3; }
};

bool is_coupling(double c, double target);

/// Everything except fd_dlambda, computed from the given ground state.
MonotonicityReport evaluate(const ConformalMetric& g, double t, double c, FlowMode mode, const EigenPair& pair);

/// Solves for the ground state, then evaluate().
MonotonicityReport evaluate(const FlowState& state, double c, FlowMode mode);

/// Fills fd_dlambda from the lambda column of uniformly spaced reports.
void attach_fd_derivatives(std::span<MonotonicityReport> reports);

}  // namespace ricci
