// ricci-spectra: flow a surface metric, track the ground state of -Lap + cR,
// and check the eigenvalue derivative formulas along the way.
//
//   ricci-spectra run <config>
//   ricci-spectra verify <config>
//   ricci-spectra converge <config> --levels k
//   ricci-spectra spaceform --n 2 --a0 1 --c 0.25 --t 0.1
//
// RICCI_SPECTRA_THREADS caps the kernel thread count (0 = sequential).

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ricci_spectra/commands.hpp"
#include "ricci_spectra/errors.hpp"
#include "ricci_spectra/kernels.hpp"
#include "ricci_spectra/scenario.hpp"

namespace {

void apply_thread_env() {
  const char* env = std::getenv("RICCI_SPECTRA_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0) {
    std::cerr << "warning: ignoring RICCI_SPECTRA_THREADS='" << env << "'\n";
    return;
  }
  ricci::kernels::set_thread_count(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ricci flow eigenvalue monotonicity laboratory"};
  app.require_subcommand(1);

  ricci::CommandOptions options;
  app.add_option("--output", options.output, "Output file (CSV for run, JSON for verify/converge)");
  app.add_flag("--quiet", options.quiet, "Print failures and errors only");

  std::string config;
  auto* run = app.add_subcommand("run", "Flow a scenario and write one CSV row per sample");
  run->add_option("config", config, "Scenario file")->required();

  auto* verify = app.add_subcommand("verify", "Run a scenario and check every identity and bound");
  verify->add_option("config", config, "Scenario file")->required();

  int levels = 3;
  auto* converge = app.add_subcommand("converge", "Observed convergence orders under grid refinement");
  converge->add_option("config", config, "Scenario file")->required();
  converge->add_option("--levels", levels, "Number of grids N, 2N, 4N, ...")->check(CLI::Range(3, 8));

  int dim = 2;
  double a0 = 1.0, c = 0.25, t = 0.0;
  auto* spaceform = app.add_subcommand("spaceform", "Closed form on the shrinking round n-sphere");
  spaceform->add_option("--n", dim, "Dimension")->required();
  spaceform->add_option("--a0", a0, "Initial radius")->required();
  spaceform->add_option("--c", c, "Coupling")->required();
  spaceform->add_option("--t", t, "Time")->required();

  for (auto* sub : {run, verify, converge, spaceform}) {
    sub->add_option("--output", options.output, "Output file");
    sub->add_flag("--quiet", options.quiet, "Print failures and errors only");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ricci::kExitOk : ricci::kExitConfig;
  }
  apply_thread_env();

  try {
    if (*spaceform) return ricci::cmd_spaceform(dim, a0, c, t, std::cout);

    ricci::Scenario scenario;
    try {
      scenario = ricci::load_scenario(config);
    } catch (const ricci::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return ricci::kExitConfig;
    }
    if (*run) return ricci::cmd_run(scenario, options, std::cout, std::cerr);
    if (*verify) return ricci::cmd_verify(scenario, options, std::cout, std::cerr);
    return ricci::cmd_converge(scenario, levels, options, std::cout, std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ricci::kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ricci::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return ricci::kExitAborted;
  }
}
