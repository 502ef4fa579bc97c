#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dgsam/harness/config.hpp"
#include "dgsam/quadratic_objective.hpp"

namespace dgsam::harness {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3 };

struct GlobalOptions {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
};

/// Loads the config and applies the --out / --seed overrides.
ExperimentConfig effective_config(const GlobalOptions& options);

int cmd_run(const GlobalOptions& options);
int cmd_perturb_trace(const GlobalOptions& options);
int cmd_sharpness_table(const GlobalOptions& options);
int cmd_cost(const GlobalOptions& options);
int cmd_landscape(const GlobalOptions& options);
int cmd_spectrum(const GlobalOptions& options);
int cmd_verify_theory(const GlobalOptions& options);

/// Runs a subcommand by name and maps exceptions to exit codes:
/// configuration problems give 2, numerical failures give 3. Diagnostics go to `err`.
int dispatch(const std::string& command, const GlobalOptions& options, std::ostream& err);

/// Convex three-domain quadratic ensemble with a shared Hessian and small
/// anchor-gradient heterogeneity; used by the stationarity checks.
QuadraticDomainEnsemble stationarity_ensemble();
ParameterVector stationarity_start();

}  // namespace dgsam::harness
