#pragma once

#include "ricci_spectra/grid.hpp"

// Differential geometry of g = e^{2u} g0 on the two backgrounds.
//
// Every operation is a pure function of its arguments. Stencils are
// second-order centered differences; integrals are quadratures against the
// finite-volume cell areas scaled by e^{2u}, summed serially in node order
// so results do not depend on the thread count.
//
// On the torus, tensor components are (xx, xy, yy). On the sphere they are
// (ss, s-theta, theta-theta) for axisymmetric fields, so the s-theta entry of
// every tensor built here vanishes.

namespace ricci {

/// R = e^{-2u} (R0 - 2 Lap0 u).
ScalarField scalar_curvature(const ConformalMetric& g);

/// g_ij in background coordinates.
SymTensorField metric_tensor(const ConformalMetric& g);

/// R_ij = (R/2) g_ij (two dimensions).
SymTensorField ricci_tensor(const ConformalMetric& g);

/// Lap_g phi = e^{-2u} Lap0 phi.
ScalarField laplacian(const ConformalMetric& g, const ScalarField& phi);

/// |grad phi|^2_g
ScalarField gradient_norm_sq(const ConformalMetric& g, const ScalarField& phi);

/// T^{ij} d_i phi d_j psi with both indices raised by g.
ScalarField gradient_pairing(const ConformalMetric& g, const SymTensorField& t, const ScalarField& phi,
                             const ScalarField& psi);

/// Covariant Hessian, with the Christoffel symbols of e^{2u} g0 taken from
/// the conformal-change formula
///   Gamma^k_ij = Gamma0^k_ij + delta^k_i u_j + delta^k_j u_i - g0_ij grad0 u^k.
SymTensorField hessian(const ConformalMetric& g, const ScalarField& phi);

/// g^{ik} g^{jl} T_ij T_kl
ScalarField tensor_norm_sq(const ConformalMetric& g, const SymTensorField& t);

/// g^{ik} g^{jl} A_ij B_kl
ScalarField tensor_inner(const ConformalMetric& g, const SymTensorField& a, const SymTensorField& b);

/// Integral of phi against dmu = e^{2u} dmu0.
double integrate(const ConformalMetric& g, const ScalarField& phi);

double volume(const ConformalMetric& g);

/// r = (int R dmu) / (int dmu).
double average_scalar_curvature(const ConformalMetric& g);

// Pointwise algebra on fields. Sizes must match.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double a, const ScalarField& b);
SymTensorField operator+(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator-(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator*(double a, const SymTensorField& t);

/// Nodewise exp(-phi).
ScalarField exp_neg(const ScalarField& phi);

}  // namespace ricci
