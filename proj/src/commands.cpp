#include "ricci_spectra/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "ricci_spectra/errors.hpp"
#include "ricci_spectra/geometry.hpp"
#include "ricci_spectra/report.hpp"

namespace ricci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Check upper_bound_check(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value <= threshold, std::move(detail)};
}

Check lower_bound_check(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value >= threshold, std::move(detail)};
}

double max_of(const std::vector<MonotonicityReport>& reports, const std::function<double(const MonotonicityReport&)>& fn) {
  double m = -kInf;
  for (const auto& r : reports) m = std::max(m, fn(r));
  return m;
}

// Largest relative drop of a sequence that should be nondecreasing.
double relative_drop(const std::vector<double>& q) {
  double scale = 0.0;
  for (double v : q) scale = std::max(scale, std::abs(v));
  double drop = 0.0;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) drop = std::max(drop, q[k] - q[k + 1]);
  return scale > 0.0 ? drop / scale : drop;
}

// Destination for a JSON summary: --output, else <output_path stem>.<suffix>.json, else none.
std::string json_destination(const Scenario& s, const CommandOptions& options, const std::string& suffix) {
  if (!options.output.empty()) return options.output;
  if (s.output_path.empty()) return {};
  std::filesystem::path p(s.output_path);
  p.replace_extension("." + suffix + ".json");
  return p.string();
}

void write_json(const std::string& json, const std::string& destination, std::ostream& out) {
  if (destination.empty()) {
    out << json << '\n';
    return;
  }
  std::ofstream file(destination);
  if (!file) throw std::runtime_error("cannot write '" + destination + "'");
  file << json << '\n';
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

SimulationResult simulate(const Scenario& s, const RowSink& sink) {
  SimulationResult result;
  const ConformalMetric g0 = s.initial_metric();
  result.gauss_bonnet_error =
      std::abs(integrate(g0, scalar_curvature(g0)) - 4.0 * std::numbers::pi * g0.background().euler_characteristic());

  std::size_t delivered = 0;
  auto deliver = [&](bool final) {
    auto& reps = result.reports;
    if (reps.size() >= 3) attach_fd_derivatives(reps);
    // The last row's derivative changes from one-sided to central once the
    // next sample arrives, so it is held back until then.
    const std::size_t ready = final ? reps.size() : (reps.size() >= 3 ? reps.size() - 1 : 0);
    for (; delivered < ready; ++delivered)
      if (sink) sink(reps[delivered]);
  };

  FlowConfig cfg;
  cfg.mode = s.flow_mode;
  cfg.t_end = s.t_end;
  cfg.dt_safety = s.dt_safety;
  cfg.sample_interval = s.sample_interval();

  try {
    const FlowTrajectory traj = run(FlowState{0.0, g0}, cfg, [&](const FlowState& state) {
      result.reports.push_back(evaluate(state, s.c, s.flow_mode));
      deliver(false);
    });
    result.steps = traj.steps;
    result.max_volume_drift = traj.max_volume_drift;
  } catch (const Extinction& e) {
    result.abort_reason = std::string("extinction: ") + e.what();
  } catch (const NonConvergence& e) {
    result.abort_reason = std::string("non-convergence: ") + e.what();
  } catch (const StepUnderflow& e) {
    result.abort_reason = std::string("step underflow: ") + e.what();
  } catch (const NonPositiveEigenfunction& e) {
    result.abort_reason = std::string("non-positive eigenfunction: ") + e.what();
  }
  deliver(true);
  return result;
}

double measured_identity_tolerance(const std::vector<MonotonicityReport>& reports) {
  double tol = verify_tolerance::kRoundoffFloor;
  for (const auto& r : reports)
    tol = std::max({tol, std::abs(r.ibp14_residual), std::abs(r.ibp8_residual), std::abs(r.hessian10_residual)});
  return tol;
}

std::vector<Check> verify_checks(const Scenario& s, const SimulationResult& result) {
  namespace tol = verify_tolerance;
  std::vector<Check> checks;
  const auto& reps = result.reports;

  checks.push_back(upper_bound_check("completed", result.abort_reason ? 1.0 : 0.0, 0.0,
                                     result.abort_reason.value_or("reached t_end")));

  const double area = s.initial_metric().background().total_area();
  checks.push_back(upper_bound_check("gauss_bonnet", result.gauss_bonnet_error, tol::kGaussBonnet * std::max(1.0, area)));
  if (reps.empty()) return checks;

  checks.push_back(upper_bound_check("eigen_residual", max_of(reps, [](auto& r) { return r.eigen_residual; }),
                                     tol::kEigenResidual));
  checks.push_back(upper_bound_check(
      "lambda_le_cr",
      max_of(reps, [](auto& r) { return (r.lambda - r.c * r.r_avg) / std::max(1.0, std::abs(r.c * r.r_avg)); }),
      tol::kEigenBound));

  const double rhs_scale =
      std::max(tol::kScaleFloor, max_of(reps, [](auto& r) { return std::abs(r.rhs_thm2); }));
  const double identity_tol = measured_identity_tolerance(reps);
  checks.push_back(upper_bound_check("integral_identities", identity_tol / rhs_scale, tol::kIntegralIdentity,
                                     "max |ibp14|,|ibp8|,|hessian10| over max |rhs_thm2|"));
  checks.push_back(upper_bound_check(
      "eigen_identity",
      max_of(reps,
             [](auto& r) {
               const double scale =
                   std::max({2.0 * std::abs(r.lambda), 2.0 * std::abs(r.c) * r.max_abs_curvature, 1e-6});
               return r.eigen_identity_residual / scale;
             }),
      tol::kPointwiseIdentity));

  if (is_coupling(s.c, 0.5))
    checks.push_back(upper_bound_check("thm1_vs_thm2",
                                       max_of(reps, [](auto& r) { return std::abs(*r.rhs_thm1 - r.rhs_thm2); }),
                                       tol::kCrossFormulaFactor * identity_tol));
  if (is_coupling(s.c, 0.25))
    checks.push_back(upper_bound_check(
        "thm3_vs_traceless", max_of(reps, [](auto& r) { return std::abs(r.rhs_thm3 - *r.rhs_thm3_traceless); }),
        tol::kCrossFormulaFactor * identity_tol));

  if (reps.size() >= 3 && reps.back().fd_dlambda) {
    const double pred_scale = std::max(
        tol::kScaleFloor, max_of(reps, [&](auto& r) { return std::abs(r.predicted_dlambda(s.flow_mode)); }));
    double gap = 0.0;
    for (std::size_t k = 1; k + 1 < reps.size(); ++k)
      gap = std::max(gap, std::abs(*reps[k].fd_dlambda - reps[k].predicted_dlambda(s.flow_mode)));
    checks.push_back(upper_bound_check("fd_vs_rhs", gap / pred_scale, tol::kFdVsRhs,
                                       s.flow_mode == FlowMode::Ricci ? "against rhs_thm2" : "against rhs_thm3"));
  }

  if (s.c >= 0.25) {
    std::vector<double> q;
    for (const auto& r : reps) q.push_back(s.flow_mode == FlowMode::Normalized ? std::exp(r.r_avg * r.t) * r.lambda : r.lambda);
    checks.push_back(upper_bound_check("monotonicity", relative_drop(q), tol::kMonotone,
                                       s.flow_mode == FlowMode::Normalized ? "e^{rt} lambda" : "lambda"));
    checks.push_back(
        lower_bound_check("rhs_thm2_nonnegative", -max_of(reps, [](auto& r) { return -r.rhs_thm2; }), 0.0));
    const double r_max = max_of(reps, [](auto& r) { return r.r_avg; });
    if (is_coupling(s.c, 0.25) && s.flow_mode == FlowMode::Normalized && r_max <= tol::kScaleFloor)
      checks.push_back(lower_bound_check(
          "traceless_nonnegative", -max_of(reps, [](auto& r) { return -*r.rhs_thm3_traceless; }), 0.0, "r <= 0"));
  }

  if (s.flow_mode == FlowMode::Normalized)
    checks.push_back(upper_bound_check("volume_drift", result.max_volume_drift, tol::kVolumeDriftPerTime * s.t_end));
  return checks;
}

double observed_order(double coarse, double fine, double floor) {
  coarse = std::abs(coarse);
  fine = std::abs(fine);
  if (coarse <= floor && fine <= floor) return kInf;
  if (fine <= floor) return kInf;
  return std::log2(coarse / fine);
}

bool ConvergenceStudy::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.pass; });
}

ConvergenceStudy converge(const Scenario& base, int levels) {
  if (levels < 3) throw std::invalid_argument("a convergence study needs at least 3 levels");
  if (!is_power_of_two(base.n) || (base.model == Model::Torus && !is_power_of_two(base.m)))
    throw ConfigError("refinement studies need power-of-two grid sizes");

  const double step0 = base.sample_interval();
  const long probe_steps0 = std::max(1L, std::lround(base.t_end / (2.0 * step0)));

  ConvergenceStudy study;
  study.probe_time = static_cast<double>(probe_steps0) * step0;
  std::vector<double> lambda, eigen_id, ibp14, ibp8, hess10, gap;

  for (int level = 0; level < levels; ++level) {
    const int factor = 1 << level;
    const Scenario s = base.refined(factor);
    study.grid_sizes.push_back(s.n);
    const double step = step0 / factor;
    const long centre = probe_steps0 * factor;

    FlowConfig cfg;
    cfg.mode = s.flow_mode;
    cfg.t_end = static_cast<double>(centre + 1) * step;
    cfg.dt_safety = s.dt_safety;
    cfg.sample_interval = step;

    std::optional<MonotonicityReport> before, at, after;
    run(FlowState{0.0, s.initial_metric()}, cfg, [&](const FlowState& state) {
      const long k = std::lround(state.t / step);
      if (k == centre - 1) before = evaluate(state, s.c, s.flow_mode);
      if (k == centre) at = evaluate(state, s.c, s.flow_mode);
      if (k == centre + 1) after = evaluate(state, s.c, s.flow_mode);
    });
    const double fd = (after->lambda - before->lambda) / (2.0 * step);
    lambda.push_back(at->lambda);
    eigen_id.push_back(at->eigen_identity_residual);
    ibp14.push_back(at->ibp14_residual);
    ibp8.push_back(at->ibp8_residual);
    hess10.push_back(at->hessian10_residual);
    gap.push_back(fd - at->predicted_dlambda(s.flow_mode));
  }

  auto make_row = [](std::string name, std::vector<double> values) {
    ConvergenceRow row{std::move(name), std::move(values), {}, true};
    for (std::size_t k = 0; k + 1 < row.values.size(); ++k) {
      row.orders.push_back(observed_order(row.values[k], row.values[k + 1]));
      row.pass = row.pass && row.orders.back() >= kMinConvergenceOrder;
    }
    return row;
  };

  std::vector<double> lambda_steps;
  for (std::size_t k = 0; k + 1 < lambda.size(); ++k) lambda_steps.push_back(lambda[k] - lambda[k + 1]);
  study.rows.push_back(make_row("eigenvalue_increment", lambda_steps));
  study.rows.push_back(make_row("eigen_identity_residual", eigen_id));
  study.rows.push_back(make_row("ibp14_residual", ibp14));
  study.rows.push_back(make_row("ibp8_residual", ibp8));
  study.rows.push_back(make_row("hessian10_residual", hess10));
  study.rows.push_back(make_row("fd_vs_rhs_gap", gap));
  return study;
}

std::string checks_to_json(const std::vector<Check>& checks) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json rec;
    rec["check"] = c.name;
    rec["value"] = std::isfinite(c.value) ? nlohmann::ordered_json(c.value) : nlohmann::ordered_json(nullptr);
    rec["threshold"] = c.threshold;
    rec["pass"] = c.pass;
    records.push_back(std::move(rec));
  }
  return records.dump(2);
}

int cmd_run(const Scenario& s, const CommandOptions& options, std::ostream& out, std::ostream& log) {
  const std::string destination = !options.output.empty() ? options.output : s.output_path;
  std::ofstream file;
  if (!destination.empty()) {
    file.open(destination);
    if (!file) {
      log << "error: cannot write '" << destination << "'\n";
      return kExitConfig;
    }
  }
  std::ostream& csv = destination.empty() ? out : file;
  csv << csv_header() << '\n';
  const SimulationResult result = simulate(s, [&](const MonotonicityReport& r) { csv << csv_row(r) << '\n'; });
  if (result.abort_reason) {
    csv << "# aborted: " << *result.abort_reason << '\n';
    csv.flush();
    log << "aborted: " << *result.abort_reason << '\n';
    return kExitAborted;
  }
  csv.flush();
  if (!options.quiet) {
    log << "run: " << result.reports.size() << " samples, " << result.steps << " steps";
    if (!destination.empty()) log << ", wrote " << destination;
    log << '\n';
    if (s.c < 0.25) log << "note: c < 1/4, monotonicity theorems do not apply\n";
  }
  return kExitOk;
}

int cmd_verify(const Scenario& s, const CommandOptions& options, std::ostream& out, std::ostream& log) {
  const SimulationResult result = simulate(s);
  const auto checks = verify_checks(s, result);
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    if (!options.quiet || !c.pass) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << ": value=" << fmt(c.value) << " threshold=" << fmt(c.threshold);
      if (!c.detail.empty()) out << " (" << c.detail << ")";
      out << '\n';
    }
  }
  if (!options.quiet) {
    if (s.c < 0.25) out << "note: c < 1/4, monotonicity and nonnegativity checks skipped\n";
    if (s.flow_mode == FlowMode::Normalized && s.model == Model::Torus)
      out << "note: r = 0 is the boundary case of r <= 0; r < 0 is not exercised\n";
  }
  try {
    write_json(checks_to_json(checks), json_destination(s, options, "verify"), out);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  out << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_converge(const Scenario& s, int levels, const CommandOptions& options, std::ostream& out, std::ostream& log) {
  ConvergenceStudy study;
  try {
    study = converge(s, levels);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Extinction& e) {
    log << "aborted: " << e.what() << '\n';
    return kExitAborted;
  } catch (const NonConvergence& e) {
    log << "aborted: " << e.what() << '\n';
    return kExitAborted;
  }

  out << "probe time t = " << fmt(study.probe_time) << "\ngrids:";
  for (int n : study.grid_sizes) out << ' ' << n;
  out << '\n';
  std::vector<Check> records;
  for (const auto& row : study.rows) {
    out << (row.pass ? "PASS " : "FAIL ") << row.diagnostic << ": values";
    for (double v : row.values) out << ' ' << fmt(v);
    out << " | orders";
    for (double o : row.orders) out << ' ' << (std::isfinite(o) ? fmt(o) : std::string("exact"));
    out << '\n';
    for (std::size_t k = 0; k < row.orders.size(); ++k) {
      const int offset = row.diagnostic == "eigenvalue_increment" ? 1 : 0;
      records.push_back({"order/" + row.diagnostic + "/N=" + std::to_string(study.grid_sizes[k + offset]) + "->" +
                             std::to_string(study.grid_sizes[k + offset + 1]),
                         row.orders[k], kMinConvergenceOrder, row.orders[k] >= kMinConvergenceOrder, {}});
    }
  }
  try {
    write_json(checks_to_json(records), json_destination(s, options, "converge"), out);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  out << (study.pass() ? "converge: all orders >= 1.8\n" : "converge: FAILED\n");
  return study.pass() ? kExitOk : kExitCheckFailed;
}

int cmd_spaceform(int n, double a0, double c, double t, std::ostream& out) {
  const SpaceFormValues v = space_form_oracle(n, a0, c, t);
  const double gap = std::abs(v.dlambda_dt - v.rhs_thm2);
  const double limit = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(v.dlambda_dt);
  out << "lambda=" << format_value(v.lambda) << " dlambda_dt=" << format_value(v.dlambda_dt)
      << " rhs_thm2=" << format_value(v.rhs_thm2) << '\n';
  out << (gap <= limit ? "PASS" : "FAIL") << " |dlambda_dt - rhs_thm2| = " << format_value(gap) << '\n';
  return gap <= limit ? kExitOk : kExitCheckFailed;
}

}  // namespace ricci
