#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ricci_spectra/grid.hpp"

namespace ricci {

enum class FlowMode { Ricci, Normalized };

struct FlowState {
  double t = 0.0;
  ConformalMetric g;
};

/// Sampling: if sample_interval > 0 the probe fires at every multiple of it
/// (the step is clipped to land on those times exactly); otherwise it fires
/// every sample_stride accepted steps. t = 0 and t = t_end are always probed.
struct FlowConfig {
  FlowMode mode = FlowMode::Ricci;
  double t_end = 0.0;
  double dt_safety = 0.5;
  int sample_stride = 1;
  double sample_interval = 0.0;
};

/// Abort when min e^{2u} falls below this.
inline constexpr double kExtinctionFloor = 1e-3;
inline constexpr double kMinTimeStep = 1e-12;

/// One classical RK4 step of du/dt = -R/2. Throws Extinction.
FlowState ricci_step(const FlowState& s, double dt);

/// One classical RK4 step of du/dt = (r - R)/2 with r recomputed at every
/// stage. Throws Extinction.
FlowState normalized_step(const FlowState& s, double dt);

FlowState flow_step(const FlowState& s, double dt, FlowMode mode);

/// dt_safety * h_min^2 * min(e^{2u}) / 4
double stable_time_step(const ConformalMetric& g, double dt_safety);

struct FlowTrajectory {
  std::vector<double> sample_times;
  std::size_t steps = 0;
  FlowState final_state;
  /// max over accepted steps of |Vol(t) - Vol(0)| / Vol(0).
  double max_volume_drift = 0.0;
};

using FlowProbe = std::function<void(const FlowState&)>;

/// Integrates from initial.t to cfg.t_end, calling probe at each sample.
/// Propagates Extinction; throws StepUnderflow if the stable step falls
/// below kMinTimeStep.
FlowTrajectory run(const FlowState& initial, const FlowConfig& cfg, const FlowProbe& probe);

}  // namespace ricci
