#include <iostream>

#include <CLI11.hpp>

#include "dgsam/harness/commands.hpp"

int main(int argc, char** argv) {
  using namespace dgsam::harness;

  CLI::App app{"Multi-domain sharpness-aware optimisation toolkit"};
  app.set_version_flag("--version", kToolkitVersion);
  app.require_subcommand(1);

  GlobalOptions options;
  std::string out;
  std::uint64_t seed = 0;
  app.add_option("--config", options.config_path, "Experiment config (JSON)")->configurable(false);
  auto* out_opt = app.add_option("--out", out, "Output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "Single seed (overrides the config seed list)");
  app.add_option("--threads", options.threads, "Worker threads for independent runs")
      ->check(CLI::PositiveNumber);

  const std::pair<const char*, const char*> commands[] = {
      {"run", "Train every optimizer on every seed"},
      {"perturb-trace", "Domain loss increments under total vs sequential perturbation"},
      {"sharpness-table", "Per-domain, mean, total and unseen sharpness at given points"},
      {"cost", "Gradient evaluations and wall time per iteration"},
      {"landscape", "Loss surface on a two-direction plane"},
      {"spectrum", "Hessian eigenvalue density by stochastic Lanczos quadrature"},
      {"verify-theory", "Bound, counterexample and convergence checks"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (*out_opt) options.out = out;
  if (*seed_opt) options.seed = seed;

  const std::string command = app.get_subcommands().front()->get_name();
  return dispatch(command, options, std::cerr);
}
