#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgsam/fake_flat.hpp"
#include "dgsam/finite_support_loss.hpp"
#include "dgsam/mlp_objective.hpp"
#include "dgsam/optimizers.hpp"
#include "dgsam/quadratic_objective.hpp"
#include "dgsam/sharpness.hpp"
#include "dgsam/spectrum.hpp"
#include "dgsam/synthetic_dataset.hpp"

namespace dgsam::harness {

using Json = nlohmann::ordered_json;

/// Where a parameter vector comes from. JSON forms:
///   [0.1, 2.0]                              explicit values
///   "flat_minimum" | "fake_flat_minimum"    refined minima of the fake-flat family
///   "anchor"                                anchor of a quadratic ensemble
///   "initializer"                           the run initializer with the current seed
///   {"manifest": "out/manifest.json", "run": "dgsam_seed0"}   final iterate of a run
/// Any object form may carry a "label".
struct PointSpec {
  enum class Kind { Explicit, FlatMinimum, FakeFlatMinimum, Anchor, Initializer, Checkpoint };
  Kind kind = Kind::Initializer;
  std::vector<double> values;
  std::string manifest;
  std::string run;
  std::string label;
};

struct InitializerSpec {
  enum class Kind { Point, Uniform, Network };
  Kind kind = Kind::Uniform;
  std::vector<double> values;
  double low = -4.0;
  double high = 4.0;
};

struct FiniteSupportDomainSpec {
  PointwiseLoss loss = PointwiseLoss::Linear;
  std::vector<std::vector<double>> points;
  std::vector<double> labels;
  std::vector<double> probabilities;
  double box_lower = -1.0;
  double box_upper = 1.0;
  std::optional<LossBounds> declared;
};

struct MlpSpec {
  MlpArchitecture architecture;
  SyntheticDatasetParams dataset;
  std::vector<std::size_t> held_out;
  /// Optional CSV (domain,x1,x2,label) replacing the generated dataset.
  std::string dataset_csv;
};

struct ProblemSpec {
  enum class Family { FakeFlat, Quadratic, Mlp, FiniteSupport };
  Family family = Family::FakeFlat;
  FakeFlatParams fake_flat;
  QuadraticDomainEnsemble quadratic;
  MlpSpec mlp;
  std::vector<FiniteSupportDomainSpec> finite_support;
};

struct OptimizerSpec {
  OptimizerConfig config;
  double grad_norm_tolerance = 0.0;
};

struct PerturbTraceSpec {
  double rho = 0.05;
  PointSpec point{PointSpec::Kind::FakeFlatMinimum, {}, {}, {}, {}};
  /// Number of full sweeps over the domains.
  std::size_t sweeps = 1;
};

struct SharpnessTableSpec {
  std::vector<PointSpec> points;
};

struct CostSpec {
  std::size_t warmup = 20;
  std::size_t timed = 200;
};

struct LandscapeSpec {
  PointSpec center{PointSpec::Kind::Initializer, {}, {}, {}, {}};
  /// "random" or "axis" (first two coordinate axes), or explicit dir1/dir2.
  std::string directions = "random";
  std::vector<double> dir1;
  std::vector<double> dir2;
  double half_width = 1.0;
  std::size_t resolution = 41;
};

struct SpectrumSpec {
  PointSpec point{PointSpec::Kind::Initializer, {}, {}, {}, {}};
  /// -1 analyses L_s, otherwise the given domain.
  int domain = -1;
  SpectrumConfig lanczos;
  std::size_t hutchinson_probes = 64;
};

struct VerifyTheorySpec {
  std::size_t theorem1_instances = 200;
  std::vector<double> violation_thetas{0.1, 0.5, 1.0};
  std::vector<double> prop1_rhos{0.001, 0.005, 0.01, 0.05};
  std::vector<double> stationarity_epsilons{0.1, 0.01};
  std::uint64_t stationarity_cap = 100000;
};

struct ExperimentConfig {
  ProblemSpec problem;
  InitializerSpec initializer;
  std::vector<OptimizerSpec> optimizers;
  std::vector<std::uint64_t> seeds{0};
  std::size_t trajectory_stride = 1;
  /// When false the trajectory wall_ms column is written as 0 so repeated
  /// runs are byte-identical; timings still go to the manifest.
  bool record_wall_clock = false;
  SharpnessEstimatorConfig sharpness;
  PerturbTraceSpec perturb_trace;
  SharpnessTableSpec sharpness_table;
  CostSpec cost;
  LandscapeSpec landscape;
  SpectrumSpec spectrum;
  VerifyTheorySpec verify_theory;
  std::string output_dir = "out";
};

/// Strict parsing: unknown keys, wrong types and out-of-range values raise ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);
Json to_json(const ExperimentConfig& config);

/// A problem instance plus the family-specific objects points may refer to.
struct BuiltProblem {
  std::shared_ptr<MultiDomainProblem> problem;
  std::optional<FakeFlatLandscape> landscape;
  std::optional<QuadraticDomainEnsemble> ensemble;
  std::optional<MlpArchitecture> architecture;
};

BuiltProblem build_problem(const ProblemSpec& spec);

ParameterVector initial_point(const ExperimentConfig& config, const BuiltProblem& built,
                              std::uint64_t seed);
ParameterVector resolve_point(const PointSpec& spec, const ExperimentConfig& config,
                              const BuiltProblem& built, std::uint64_t seed);
std::string describe(const PointSpec& spec);

}  // namespace dgsam::harness
