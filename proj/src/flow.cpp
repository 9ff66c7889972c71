#include "ricci_spectra/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ricci_spectra/errors.hpp"
#include "ricci_spectra/geometry.hpp"
#include "ricci_spectra/kernels.hpp"

namespace ricci {

namespace {

void velocity(const Background& bg, std::span<const double> u, FlowMode mode, std::span<double> out) {
  if (mode == FlowMode::Ricci) {
    kernels::parallel::flow_velocity(bg, u, 0.0, out);
    return;
  }
  // Normalized: r = int R dmu / int dmu at this stage.
  kernels::parallel::scalar_curvature(bg, u, out);
  const auto w = bg.weights();
  double total_curvature = 0.0;
  double vol = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double m = w[k] * std::exp(2.0 * u[k]);
    total_curvature += m * out[k];
    vol += m;
  }
  const double r = total_curvature / vol;
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = 0.5 * (r - out[k]);
}

void check_extinction(const ConformalMetric& g, double t) {
  const double floor_value = g.min_conformal_factor();
  if (!std::isfinite(floor_value) || floor_value < kExtinctionFloor) {
    std::ostringstream msg;
    msg << "conformal factor " << floor_value << " below floor " << kExtinctionFloor << " at t = " << t;
    throw Extinction(msg.str());
  }
}

}  // namespace

FlowState flow_step(const FlowState& s, double dt, FlowMode mode) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto& bg = s.g.background();
  const auto u = s.g.u().span();
  const std::size_t n = u.size();
  ScalarField k1(n), k2(n), k3(n), k4(n), stage(n), next(n);

  velocity(bg, u, mode, k1.span());
  kernels::parallel::axpy(u, 0.5 * dt, k1.span(), stage.span());
  velocity(bg, stage.span(), mode, k2.span());
  kernels::parallel::axpy(u, 0.5 * dt, k2.span(), stage.span());
  velocity(bg, stage.span(), mode, k3.span());
  kernels::parallel::axpy(u, dt, k3.span(), stage.span());
  velocity(bg, stage.span(), mode, k4.span());
  kernels::parallel::rk4_combine(u, dt, k1.span(), k2.span(), k3.span(), k4.span(), next.span());

  FlowState out{s.t + dt, ConformalMetric(bg, std::move(next))};
  check_extinction(out.g, out.t);
  return out;
}

FlowState ricci_step(const FlowState& s, double dt) { return flow_step(s, dt, FlowMode::Ricci); }

FlowState normalized_step(const FlowState& s, double dt) { return flow_step(s, dt, FlowMode::Normalized); }

double stable_time_step(const ConformalMetric& g, double dt_safety) {
  const double h = g.background().min_spacing();
  return dt_safety * h * h * g.min_conformal_factor() / 4.0;
}

FlowTrajectory run(const FlowState& initial, const FlowConfig& cfg, const FlowProbe& probe) {
  if (!(cfg.t_end > initial.t)) throw std::invalid_argument("t_end must exceed the initial time");
  if (!(cfg.dt_safety > 0.0 && cfg.dt_safety <= 1.0)) throw std::invalid_argument("dt_safety must lie in (0, 1]");
  if (cfg.sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
  if (cfg.sample_interval < 0.0) throw std::invalid_argument("sample_interval must be >= 0");

  const double t0 = initial.t;
  const bool by_interval = cfg.sample_interval > 0.0;
  const bool normalized = cfg.mode == FlowMode::Normalized;

  FlowTrajectory traj{{}, 0, initial, 0.0};
  FlowState& state = traj.final_state;
  const double vol0 = normalized ? volume(state.g) : 0.0;

  auto emit = [&] {
    traj.sample_times.push_back(state.t);
    if (probe) probe(state);
  };
  emit();

  long next_sample_index = 1;
  auto next_sample_time = [&] {
    return by_interval ? t0 + static_cast<double>(next_sample_index) * cfg.sample_interval
                       : std::numeric_limits<double>::infinity();
  };
  int steps_since_sample = 0;

  while (state.t < cfg.t_end) {
    double dt = stable_time_step(state.g, cfg.dt_safety);
    if (!(dt >= kMinTimeStep)) {
      std::ostringstream msg;
      msg << "stable time step " << dt << " below " << kMinTimeStep << " at t = " << state.t;
      throw StepUnderflow(msg.str());
    }
    const double target = std::min(cfg.t_end, next_sample_time());
    const bool lands = state.t + dt >= target;
    if (lands) dt = target - state.t;

    state = flow_step(state, dt, cfg.mode);
    ++traj.steps;
    ++steps_since_sample;
    if (lands) state.t = target;
    if (normalized) traj.max_volume_drift = std::max(traj.max_volume_drift, std::abs(volume(state.g) - vol0) / vol0);

    const bool at_end = state.t >= cfg.t_end;
    bool sample = at_end;
    if (by_interval && lands) {
      ++next_sample_index;
      sample = true;
    } else if (!by_interval && steps_since_sample >= cfg.sample_stride) {
      sample = true;
    }
    if (sample) {
      steps_since_sample = 0;
      emit();
    }
  }
  return traj;
}

}  // namespace ricci
