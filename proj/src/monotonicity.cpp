#include "ricci_spectra/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ricci_spectra/errors.hpp"
#include "ricci_spectra/geometry.hpp"

namespace ricci {

namespace {

constexpr double kDimension = 2.0;

// Fields shared by the formulas at one time sample.
struct WeightedTerms {
  ScalarField weight;  // e^{-phi}
  ScalarField curvature;
  SymTensorField metric;
  SymTensorField ricci;
  SymTensorField hess;
  double r_avg = 0.0;

  WeightedTerms(const ConformalMetric& g, const PotentialField& p)
      : weight(exp_neg(p.phi)),
        curvature(scalar_curvature(g)),
        metric(metric_tensor(g)),
        ricci(ricci_tensor(g)),
        hess(hessian(g, p.phi)),
        r_avg(average_scalar_curvature(g)) {}
};

double weighted(const ConformalMetric& g, const WeightedTerms& w, const ScalarField& integrand) {
  return integrate(g, integrand * w.weight);
}

double ricci_dot_hessian(const ConformalMetric& g, const WeightedTerms& w) {
  return weighted(g, w, tensor_inner(g, w.ricci, w.hess));
}

double ricci_grad_grad(const ConformalMetric& g, const WeightedTerms& w, const PotentialField& p) {
  return weighted(g, w, gradient_pairing(g, w.ricci, p.phi, p.phi));
}

double hessian_norm(const ConformalMetric& g, const WeightedTerms& w) {
  return weighted(g, w, tensor_norm_sq(g, w.hess));
}

// int R Lap(e^{-phi}) dmu
double curvature_laplacian_weight(const ConformalMetric& g, const WeightedTerms& w) {
  return integrate(g, w.curvature * laplacian(g, w.weight));
}

double theorem2(const ConformalMetric& g, double c, const WeightedTerms& w) {
  const double soliton = weighted(g, w, tensor_norm_sq(g, w.ricci + w.hess));
  const double ricci_sq = weighted(g, w, tensor_norm_sq(g, w.ricci));
  return 0.5 * soliton + 0.5 * (4.0 * c - 1.0) * ricci_sq;
}

double theorem3(const ConformalMetric& g, double c, const WeightedTerms& w, double lambda) {
  return -(2.0 * w.r_avg * lambda) / kDimension + theorem2(g, c, w);
}

double traceless(const ConformalMetric& g, const WeightedTerms& w, double lambda) {
  const double r = w.r_avg;
  const SymTensorField shifted = w.ricci + w.hess - (r / kDimension) * w.metric;
  return (2.0 / kDimension) * r * (lambda - r / 4.0) + 0.5 * weighted(g, w, tensor_norm_sq(g, shifted));
}

double extension(const ConformalMetric& g, double c, const WeightedTerms& w) {
  const SymTensorField shifted = w.ricci - (w.r_avg / kDimension) * w.metric;
  return 0.5 * (4.0 * c - 1.0) * weighted(g, w, tensor_norm_sq(g, shifted));
}

double eigen_identity(const ConformalMetric& g, double c, const WeightedTerms& w, const PotentialField& p,
                      double lambda) {
  const ScalarField lap = laplacian(g, p.phi);
  const ScalarField grad_sq = gradient_norm_sq(g, p.phi);
  double worst = 0.0;
  for (std::size_t k = 0; k < lap.size(); ++k)
    worst = std::max(worst, std::abs(lap[k] + 2.0 * c * w.curvature[k] - 0.5 * grad_sq[k] - 2.0 * lambda));
  return worst;
}

double ibp14(const ConformalMetric& g, const WeightedTerms& w, const PotentialField& p) {
  return ricci_dot_hessian(g, w) - ricci_grad_grad(g, w, p) + 0.5 * curvature_laplacian_weight(g, w);
}

double ibp8(const ConformalMetric& g, double c, const WeightedTerms& w) {
  return ricci_dot_hessian(g, w) + hessian_norm(g, w) - (2.0 * c - 0.5) * curvature_laplacian_weight(g, w);
}

double hessian10(const ConformalMetric& g, double c, const WeightedTerms& w, const PotentialField& p) {
  return hessian_norm(g, w) - 2.0 * c * curvature_laplacian_weight(g, w) + ricci_grad_grad(g, w, p);
}

double soliton(const ConformalMetric& g, const WeightedTerms& w, FlowMode mode) {
  SymTensorField t = w.ricci + w.hess;
  if (mode == FlowMode::Normalized) t = t - (w.r_avg / kDimension) * w.metric;
  return weighted(g, w, tensor_norm_sq(g, t));
}

}  // namespace

bool is_coupling(double c, double target) { return std::abs(c - target) <= 1e-12; }

PotentialField potential(const ScalarField& f) {
  ScalarField phi(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!(f[k] > 0.0))
      throw NonPositiveEigenfunction("eigenfunction value " + std::to_string(f[k]) + " at node " +
                                     std::to_string(k) + " is not positive");
    phi[k] = -2.0 * std::log(f[k]);
  }
  return {std::move(phi)};
}

double rhs_theorem1(const ConformalMetric& g, const ScalarField& f) {
  const SymTensorField ricci = ricci_tensor(g);
  return 2.0 * integrate(g, gradient_pairing(g, ricci, f, f)) + integrate(g, tensor_norm_sq(g, ricci) * (f * f));
}

double rhs_theorem2(const ConformalMetric& g, double c, const PotentialField& p) {
  return theorem2(g, c, WeightedTerms(g, p));
}

double rhs_theorem3(const ConformalMetric& g, double c, const PotentialField& p, double lambda) {
  return theorem3(g, c, WeightedTerms(g, p), lambda);
}

double rhs_theorem3_traceless(const ConformalMetric& g, double c, const PotentialField& p, double lambda) {
  if (!is_coupling(c, 0.25))
    throw WrongCoupling("traceless form requires c = 1/4, got c = " + std::to_string(c));
  return traceless(g, WeightedTerms(g, p), lambda);
}

double extension_term(const ConformalMetric& g, double c, const PotentialField& p) {
  return extension(g, c, WeightedTerms(g, p));
}

double identity_eigen(const ConformalMetric& g, double c, const PotentialField& p, double lambda) {
  return eigen_identity(g, c, WeightedTerms(g, p), p, lambda);
}

double identity_ibp14(const ConformalMetric& g, const PotentialField& p) { return ibp14(g, WeightedTerms(g, p), p); }

double identity_ibp8(const ConformalMetric& g, double c, const PotentialField& p) {
  return ibp8(g, c, WeightedTerms(g, p));
}

double identity_hessian10(const ConformalMetric& g, double c, const PotentialField& p) {
  return hessian10(g, c, WeightedTerms(g, p), p);
}

double soliton_residual(const ConformalMetric& g, const PotentialField& p, FlowMode mode) {
  return soliton(g, WeightedTerms(g, p), mode);
}

std::vector<FdSample> fd_derivative(std::span<const TimeValue> samples) {
  const std::size_t n = samples.size();
  if (n < 3) throw std::invalid_argument("finite differences need at least 3 samples");
  const double h = (samples[n - 1].t - samples[0].t) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw std::invalid_argument("sample times must increase");
  for (std::size_t k = 1; k < n; ++k) {
    const double step = samples[k].t - samples[k - 1].t;
    if (std::abs(step - h) > 1e-9 * h) throw std::invalid_argument("sample times are not uniformly spaced");
  }

  std::vector<FdSample> out(n);
  out[0] = {samples[0].t, (-3.0 * samples[0].value + 4.0 * samples[1].value - samples[2].value) / (2.0 * h), true};
  for (std::size_t k = 1; k + 1 < n; ++k)
    out[k] = {samples[k].t, (samples[k + 1].value - samples[k - 1].value) / (2.0 * h), false};
  out[n - 1] = {samples[n - 1].t,
                (3.0 * samples[n - 1].value - 4.0 * samples[n - 2].value + samples[n - 3].value) / (2.0 * h), true};
  return out;
}

SpaceFormValues space_form_oracle(int n, double a0, double c, double t) {
  if (n < 2) throw std::invalid_argument("space form dimension must be at least 2");
  const double radius_sq = a0 * a0 - 2.0 * (n - 1) * t;
  if (!(radius_sq > 0.0)) throw std::domain_error("t is at or past the extinction time");
  const double dim = static_cast<double>(n);
  const double r = dim * (dim - 1.0) / radius_sq;
  const double r_sq_over_n = r * r / dim;
  SpaceFormValues v;
  v.lambda = c * r;
  v.dlambda_dt = 2.0 * c * r * r / dim;
  // Einstein metric, constant phi: |Rc + Hess phi|^2 = |Rc|^2 = R^2/n.
  v.rhs_thm2 = 0.5 * r_sq_over_n + 0.5 * (4.0 * c - 1.0) * r_sq_over_n;
  return v;
}

MonotonicityReport evaluate(const ConformalMetric& g, double t, double c, FlowMode mode, const EigenPair& pair) {
  const PotentialField p = potential(pair.f);
  const WeightedTerms w(g, p);

  MonotonicityReport rep;
  rep.t = t;
  rep.c = c;
  rep.lambda = pair.lambda;
  rep.r_avg = w.r_avg;
  if (is_coupling(c, 0.5)) rep.rhs_thm1 = rhs_theorem1(g, pair.f);
  rep.rhs_thm2 = theorem2(g, c, w);
  rep.rhs_thm3 = theorem3(g, c, w, pair.lambda);
  if (is_coupling(c, 0.25)) rep.rhs_thm3_traceless = traceless(g, w, pair.lambda);
  rep.extension_term = extension(g, c, w);
  rep.eigen_identity_residual = eigen_identity(g, c, w, p, pair.lambda);
  rep.ibp14_residual = ibp14(g, w, p);
  rep.ibp8_residual = ibp8(g, c, w);
  rep.hessian10_residual = hessian10(g, c, w, p);
  rep.soliton_residual = soliton(g, w, mode);
  rep.volume = volume(g);
  rep.min_conformal_factor = g.min_conformal_factor();
  rep.eigen_residual = pair.residual;
  rep.max_abs_curvature = w.curvature.max_abs();
  rep.below_theorem_range = c < 0.25;
  return rep;
}

MonotonicityReport evaluate(const FlowState& state, double c, FlowMode mode) {
  const EigenPair pair = ground_state(assemble(state.g, c));
  return evaluate(state.g, state.t, c, mode, pair);
}

void attach_fd_derivatives(std::span<MonotonicityReport> reports) {
  std::vector<TimeValue> series;
  series.reserve(reports.size());
  for (const auto& r : reports) series.push_back({r.t, r.lambda});
  const auto fd = fd_derivative(series);
  for (std::size_t k = 0; k < reports.size(); ++k) reports[k].fd_dlambda = fd[k].derivative;
}

}  // namespace ricci
