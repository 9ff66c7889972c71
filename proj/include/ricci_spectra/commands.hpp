#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ricci_spectra/flow.hpp"
#include "ricci_spectra/monotonicity.hpp"
#include "ricci_spectra/scenario.hpp"

namespace ricci {

// Exit codes shared by the CLI commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAborted = 3;

// Thresholds used by `verify`.
namespace verify_tolerance {
inline constexpr double kGaussBonnet = 1e-10;       // relative to the area, absolute floor 1
inline constexpr double kEigenResidual = 1e-9;      // solver residual
inline constexpr double kEigenBound = 1e-10;        // lambda - c r, relative to max(1, |c r|)
inline constexpr double kMonotone = 1e-8;           // drop relative to max |lambda|
inline constexpr double kIntegralIdentity = 1e-2;   // relative to max |rhs_thm2|
inline constexpr double kPointwiseIdentity = 1e-2;  // relative to max(2|lambda|, 2c max|R|)
inline constexpr double kFdVsRhs = 2e-2;            // interior samples, relative to max |rhs|
inline constexpr double kCrossFormulaFactor = 10.0; // times the measured identity tolerance
inline constexpr double kVolumeDriftPerTime = 1e-6;
inline constexpr double kScaleFloor = 1e-12;
/// Floor of the measured identity tolerance; cross-formula gaps on exact
/// solutions are pure round-off.
inline constexpr double kRoundoffFloor = 1e-10;
}  // namespace verify_tolerance

inline constexpr double kMinConvergenceOrder = 1.8;

struct CommandOptions {
  std::string output;
  bool quiet = false;
};

struct SimulationResult {
  std::vector<MonotonicityReport> reports;
  std::size_t steps = 0;
  double max_volume_drift = 0.0;
  /// |int R dmu - 4 pi chi| on the initial metric.
  double gauss_bonnet_error = 0.0;
  std::optional<std::string> abort_reason;
};

using RowSink = std::function<void(const MonotonicityReport&)>;

/// Flows the scenario, solving for the ground state at uniformly spaced
/// samples. Rows are handed to `sink` as soon as their finite-difference
/// derivative is final. Extinction, NonConvergence, StepUnderflow and
/// NonPositiveEigenfunction end the run early and set abort_reason; rows
/// collected so far are still delivered.
SimulationResult simulate(const Scenario& s, const RowSink& sink = {});

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

/// The largest |ibp14|, |ibp8|, |hessian10| over all samples, floored at
/// verify_tolerance::kRoundoffFloor.
double measured_identity_tolerance(const std::vector<MonotonicityReport>& reports);

std::vector<Check> verify_checks(const Scenario& s, const SimulationResult& result);

struct ConvergenceRow {
  std::string diagnostic;
  std::vector<double> values;
  /// orders[k] compares values[k] and values[k+1]; +inf when both vanish.
  std::vector<double> orders;
  bool pass = false;
};

struct ConvergenceStudy {
  std::vector<int> grid_sizes;
  double probe_time = 0.0;
  std::vector<ConvergenceRow> rows;
  bool pass() const;
};

/// log2(|coarse| / |fine|); +inf if both are below `floor`.
double observed_order(double coarse, double fine, double floor = 1e-12);

/// Reruns the scenario on grids N, 2N, ... (levels grids) with the FD sample
/// step halved alongside h, and measures convergence order at a fixed probe
/// time near t_end / 2.
ConvergenceStudy converge(const Scenario& s, int levels);

std::string checks_to_json(const std::vector<Check>& checks);

int cmd_run(const Scenario& s, const CommandOptions& options, std::ostream& out, std::ostream& log);
int cmd_verify(const Scenario& s, const CommandOptions& options, std::ostream& out, std::ostream& log);
int cmd_converge(const Scenario& s, int levels, const CommandOptions& options, std::ostream& out,
                 std::ostream& log);
int cmd_spaceform(int n, double a0, double c, double t, std::ostream& out);

}  // namespace ricci
