// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. `acceptance 3 7` runs a subset.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ricci_spectra/commands.hpp"
#include "ricci_spectra/geometry.hpp"
#include "ricci_spectra/monotonicity.hpp"
#include "ricci_spectra/scenario.hpp"
#include "ricci_spectra/spectral.hpp"

using namespace ricci;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail_if(Outcome& o, bool bad, const std::string& why) {
  if (bad) {
    o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += why;
  }
}

std::string fmt(const char* f, double v) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Flow once, evaluating every coupling at each sample.
std::vector<std::vector<MonotonicityReport>> flow_reports(const ConformalMetric& g0, FlowMode mode, double t_end,
                                                          double step, const std::vector<double>& couplings,
                                                          ScalarField* final_u = nullptr) {
  std::vector<std::vector<MonotonicityReport>> reps(couplings.size());
  FlowConfig cfg;
  cfg.mode = mode;
  cfg.t_end = t_end;
  cfg.sample_interval = step;
  const FlowTrajectory traj = run(FlowState{0.0, g0}, cfg, [&](const FlowState& s) {
    for (std::size_t i = 0; i < couplings.size(); ++i) reps[i].push_back(evaluate(s, couplings[i], mode));
  });
  for (auto& r : reps) attach_fd_derivatives(r);
  if (final_u) *final_u = traj.final_state.g.u();
  return reps;
}

ConformalMetric round_sphere_metric(int n) { return ConformalMetric(Background::round_sphere(n)); }

// Shared between criteria 1 and 7.
const std::vector<MonotonicityReport>& criterion1_run() {
  static const std::vector<MonotonicityReport> reps =
      flow_reports(round_sphere_metric(512), FlowMode::Ricci, 0.3, 0.02, {0.25})[0];
  return reps;
}

// Shared between criteria 2 and 4: 20 seeded random tori, one flow per seed.
constexpr double kCouplings[] = {0.25, 0.5, 1.0, 2.0};
const std::vector<std::vector<std::vector<MonotonicityReport>>>& torus_suite() {
  static const auto suite = [] {
    std::vector<std::vector<std::vector<MonotonicityReport>>> out;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Scenario s;
      s.model = Model::Torus;
      s.n = s.m = 128;
      s.perturbation = random_perturbation(Model::Torus, seed, 3, 0.2);
      out.push_back(flow_reports(s.initial_metric(), FlowMode::Ricci, 0.5, 0.05,
                                 std::vector<double>(std::begin(kCouplings), std::end(kCouplings))));
    }
    return out;
  }();
  return suite;
}

Outcome criterion1() {
  Outcome o;
  const auto& reps = criterion1_run();
  double lam_err = 0.0, fd_err = 0.0;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    lam_err = std::max(lam_err, rel(reps[k].lambda, 0.5 / (1.0 - 2.0 * reps[k].t)));
    if (k > 0 && k + 1 < reps.size()) fd_err = std::max(fd_err, rel(*reps[k].fd_dlambda, reps[k].rhs_thm2));
  }
  fail_if(o, lam_err > 1e-3, "lambda error");
  fail_if(o, fd_err > 1e-2, "fd vs rhs_thm2");
  o.detail = fmt("max rel lambda err %.3g (<= 1e-3), ", lam_err) + fmt("max rel fd-rhs %.3g (<= 1e-2)", fd_err) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion2() {
  Outcome o;
  double min_rhs = std::numeric_limits<double>::infinity(), worst_drop = 0.0;
  for (const auto& per_seed : torus_suite()) {
    for (const auto& reps : per_seed) {
      double scale = 0.0;
      for (const auto& r : reps) {
        min_rhs = std::min(min_rhs, r.rhs_thm2);
        scale = std::max(scale, std::abs(r.lambda));
      }
      for (std::size_t k = 0; k + 1 < reps.size(); ++k)
        worst_drop = std::max(worst_drop, (reps[k].lambda - reps[k + 1].lambda) / scale);
    }
  }
  fail_if(o, min_rhs < 0.0, "negative rhs_thm2");
  fail_if(o, worst_drop > 1e-8, "lambda decreased");
  o.detail = fmt("min rhs_thm2 %.3g (>= 0), ", min_rhs) + fmt("max relative drop %.3g (<= 1e-8)", worst_drop) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<std::array<double, 4>> res;
  for (int n : {32, 64, 128, 256}) {
    const Background bg = Background::flat_torus(n, n);
    const ConformalMetric g(bg, ScalarField::sample(bg, [](double x, double y) {
                              return 0.2 * std::cos(x) + 0.1 * std::cos(y);
                            }));
    const MonotonicityReport r = evaluate(FlowState{0.0, g}, 0.5, FlowMode::Ricci);
    res.push_back({r.eigen_identity_residual, r.ibp14_residual, r.ibp8_residual, r.hessian10_residual});
  }
  const char* names[] = {"eigen", "ibp14", "ibp8", "hessian10"};
  double worst = std::numeric_limits<double>::infinity();
  for (int d = 0; d < 4; ++d) {
    for (std::size_t k = 0; k + 1 < res.size(); ++k) {
      const double order = observed_order(res[k][d], res[k + 1][d]);
      worst = std::min(worst, order);
      fail_if(o, order < kMinConvergenceOrder, std::string(names[d]) + fmt(" order %.3g", order));
    }
  }
  o.detail = fmt("min observed order %.4g (>= 1.8)", worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion4() {
  Outcome o;
  double worst_half = 0.0, worst_quarter = 0.0;
  for (const auto& per_seed : torus_suite()) {
    const auto& quarter = per_seed[0];
    const auto& half = per_seed[1];
    const double tol_q = measured_identity_tolerance(quarter);
    const double tol_h = measured_identity_tolerance(half);
    for (const auto& r : half) worst_half = std::max(worst_half, std::abs(*r.rhs_thm1 - r.rhs_thm2) / tol_h);
    for (const auto& r : quarter)
      worst_quarter = std::max(worst_quarter, std::abs(r.rhs_thm3 - *r.rhs_thm3_traceless) / tol_q);
  }
  fail_if(o, worst_half > 10.0, "thm1 vs thm2");
  fail_if(o, worst_quarter > 10.0, "thm3 vs traceless");
  o.detail = fmt("max |thm1-thm2|/tol %.3g, ", worst_half) + fmt("max |thm3-traceless|/tol %.3g (<= 10)", worst_quarter) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion5() {
  Outcome o;
  double min_traceless = std::numeric_limits<double>::infinity(), worst_drop = 0.0, worst_gap = 0.0;
  for (std::uint64_t seed = 101; seed <= 103; ++seed) {
    Scenario s;
    s.model = Model::Torus;
    s.n = s.m = 64;
    s.perturbation = random_perturbation(Model::Torus, seed, 3, 0.2);
    ScalarField un, ur;
    const auto norm = flow_reports(s.initial_metric(), FlowMode::Normalized, 0.5, 0.05, {0.25}, &un)[0];
    const auto plain = flow_reports(s.initial_metric(), FlowMode::Ricci, 0.5, 0.05, {0.25}, &ur)[0];
    double scale = 0.0;
    for (const auto& r : norm) {
      min_traceless = std::min(min_traceless, *r.rhs_thm3_traceless);
      scale = std::max(scale, std::abs(r.lambda));
    }
    for (std::size_t k = 0; k + 1 < norm.size(); ++k)
      worst_drop = std::max(worst_drop, (norm[k].lambda - norm[k + 1].lambda) / scale);
    for (std::size_t k = 0; k < norm.size(); ++k) worst_gap = std::max(worst_gap, std::abs(norm[k].lambda - plain[k].lambda));
    for (std::size_t k = 0; k < un.size(); ++k) worst_gap = std::max(worst_gap, std::abs(un[k] - ur[k]));
  }
  fail_if(o, worst_drop > 1e-8, "lambda decreased");
  fail_if(o, min_traceless < 0.0, "negative traceless rhs");
  fail_if(o, worst_gap > 1e-10, "normalized and unnormalized differ");
  o.detail = fmt("max relative drop %.3g (<= 1e-8), ", worst_drop) + fmt("min traceless %.3g (>= 0), ", min_traceless) +
             fmt("max normalized-vs-plain gap %.3g (<= 1e-10); r = 0 boundary case only", worst_gap) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Background bg = Background::round_sphere(512);
  const ConformalMetric g0(bg, ScalarField::sample(bg, [](double s, double) { return 0.1 * std::cos(s); }));
  const auto reps = flow_reports(g0, FlowMode::Normalized, 1.0, 0.05, {0.25})[0];
  const double r0 = reps.front().r_avg;
  double r_drift = 0.0, scale = 0.0, worst_drop = 0.0, worst_bound = -std::numeric_limits<double>::infinity();
  std::vector<double> q;
  for (const auto& r : reps) {
    r_drift = std::max(r_drift, std::abs(r.r_avg - r0) / std::abs(r0));
    q.push_back(std::exp(r.r_avg * r.t) * r.lambda);
    scale = std::max(scale, std::abs(q.back()));
    worst_bound = std::max(worst_bound, (r.lambda - r.c * r.r_avg) / std::max(1.0, std::abs(r.c * r.r_avg)));
  }
  for (std::size_t k = 0; k + 1 < q.size(); ++k) worst_drop = std::max(worst_drop, (q[k] - q[k + 1]) / scale);
  fail_if(o, r_drift > 1e-6, "r not constant");
  fail_if(o, worst_drop > 1e-8, "e^{rt} lambda decreased");
  fail_if(o, worst_bound > 1e-10, "lambda > c r");
  o.detail = fmt("r drift %.3g (<= 1e-6), ", r_drift) + fmt("max relative drop of e^{rt} lambda %.3g (<= 1e-8), ", worst_drop) +
             fmt("max (lambda - c r) rel %.3g (<= 1e-10)", worst_bound) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_identity = 0.0;
  for (int n : {2, 3, 4, 7}) {
    for (double c : {0.25, 0.5, 1.0}) {
      for (int trial = 0; trial < 25; ++trial) {
        const double a0 = 0.5 + 1.5 * unit(rng);
        const double t = 0.999 * unit(rng) * a0 * a0 / (2.0 * (n - 1));
        const SpaceFormValues v = space_form_oracle(n, a0, c, t);
        worst_identity = std::max(worst_identity, std::abs(v.dlambda_dt - v.rhs_thm2) / std::abs(v.dlambda_dt));
      }
    }
  }
  double worst_match = 0.0;
  for (const auto& r : criterion1_run()) {
    const SpaceFormValues v = space_form_oracle(2, 1.0, 0.25, r.t);
    worst_match = std::max({worst_match, rel(r.lambda, v.lambda), rel(r.rhs_thm2, v.rhs_thm2)});
  }
  const double eps = std::numeric_limits<double>::epsilon();
  fail_if(o, worst_identity > 4 * eps, "identity not exact");
  fail_if(o, worst_match > 1e-3, "oracle vs numerical sphere");
  o.detail = fmt("max rel |dlambda/dt - rhs| %.3g (<= 4 eps), ", worst_identity) +
             fmt("oracle vs sphere run %.3g (<= 1e-3)", worst_match) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Background bg = Background::flat_torus(64, 64);
  const ConformalMetric g(bg, ScalarField::sample(bg, [](double x, double) { return 0.2 * std::cos(x); }));
  const OperatorHandle op = assemble(g, 0.5);
  const EigenPair a = ground_state(op);
  const EigenPair b = ground_state(assemble(g, 0.5));

  const Eigen::VectorXd inv_sqrt_mass = op.mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd k = Eigen::MatrixXd(op.stiffness);
  const Eigen::MatrixXd scaled = inv_sqrt_mass.asDiagonal() * k * inv_sqrt_mass.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(scaled, Eigen::EigenvaluesOnly);
  const double lambda_dense = dense.eigenvalues()(0);
  const double err = std::abs(a.lambda - lambda_dense) / std::max(1.0, std::abs(lambda_dense));

  const bool bitwise = std::memcmp(&a.lambda, &b.lambda, sizeof(double)) == 0 && a.f == b.f &&
                       std::memcmp(&a.residual, &b.residual, sizeof(double)) == 0;
  fail_if(o, err > 1e-9, "dense oracle mismatch");
  fail_if(o, !bitwise, "repeated solves differ");
  o.detail = fmt("|lambda - dense| rel %.3g (<= 1e-9), ", err) + std::string("repeat bitwise ") +
             (bitwise ? "identical" : "DIFFERENT") + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  bool all = true;
  for (const auto& [id, fn] : criteria) {
    if (!wanted.empty() && !wanted.contains(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s  %s  [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
