#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ricci_spectra/flow.hpp"
#include "ricci_spectra/grid.hpp"

namespace ricci {

enum class Model { Sphere, Torus };

/// Sphere: amplitude * cos(kx s). Torus: amplitude * cos(kx x + ky y + phase).
struct PerturbationTerm {
  int kx = 0;
  int ky = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// A flow experiment, read from a flat key=value file:
///
///   model          sphere | torus
///   N, M           grid size (M defaults to N, torus only)
///   perturbation   none | random:<terms>:<amplitude> | terms separated by ';'
///                  sphere term: k,amp    torus term: kx,ky,amp[,phase]
///   c              coupling (default 0.25)
///   flow_mode      ricci | normalized (default ricci)
///   t_end          final time (required)
///   dt_safety      CFL safety factor in (0, 1] (default 0.5)
///   fd_sample_step time between samples (default t_end/10)
///   output_path    CSV destination (default: stdout)
///   seed           seed for random perturbations (default 1)
///
/// Lines starting with '#' and blank lines are ignored.
struct Scenario {
  Model model = Model::Torus;
  int n = 0;
  int m = 0;
  std::vector<PerturbationTerm> perturbation;
  double c = 0.25;
  FlowMode flow_mode = FlowMode::Ricci;
  double t_end = 0.0;
  double dt_safety = 0.5;
  double fd_sample_step = 0.0;
  std::string output_path;
  std::uint64_t seed = 1;

  Background background() const;
  ConformalMetric initial_metric() const;
  /// Same scenario on a grid refined by `factor` in every direction.
  Scenario refined(int factor) const;
  /// fd_sample_step adjusted so that it divides t_end into at least 2 steps.
  double sample_interval() const;
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

/// Numerical Recipes 32-bit linear congruential generator:
///   state <- (1664525 * state + 1013904223) mod 2^32
/// uniform() returns state / 2^32 after advancing.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(static_cast<std::uint32_t>(seed ^ (seed >> 32))) {}
  std::uint32_t next() {
    state_ = 1664525u * state_ + 1013904223u;
    return state_;
  }
  double uniform() { return next() / 4294967296.0; }

 private:
  std::uint32_t state_;
};

/// `terms` random modes with total amplitude at most `amplitude`.
///
/// Torus: kx, ky uniform in [-2, 2] excluding (0, 0); phase uniform in
/// [0, 2pi). Sphere: k uniform in {1, 2, 3}, no phase. Each amplitude is
/// (amplitude / terms) * (0.5 + 0.5 U).
std::vector<PerturbationTerm> random_perturbation(Model model, std::uint64_t seed, int terms, double amplitude);

const char* to_string(Model model);
const char* to_string(FlowMode mode);

}  // namespace ricci
