#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dgsam/objective.hpp"
#include "dgsam/problem.hpp"
#include "dgsam/synthetic_dataset.hpp"

namespace dgsam {

/// Fully connected tanh network with a softmax cross-entropy head.
/// Parameters are flattened layer by layer as W (row-major, out x in) then b.
struct MlpArchitecture {
  std::vector<std::size_t> layer_sizes{2, 16, 16, 2};

  void validate() const;
  std::size_t parameter_count() const;
  /// Scaled-normal (Glorot) weights, zero biases.
  ParameterVector initialize(std::uint64_t seed) const;
};

/// Mean cross-entropy of the network over a subset of one domain's points.
/// Gradients come from backpropagation and Hessian-vector products from the
/// forward-over-reverse (R-operator) pass, both exact.
class MlpObjective final : public DomainObjective {
 public:
  MlpObjective(MlpArchitecture arch, std::shared_ptr<const DomainData> data);
  MlpObjective(MlpArchitecture arch, std::shared_ptr<const DomainData> data,
               std::vector<std::size_t> indices);

  std::string name() const override { return "mlp"; }
  std::size_t dimension() const override { return arch_.parameter_count(); }
  double loss(const ParameterVector& theta) const override;
  ParameterVector gradient(const ParameterVector& theta) const override;
  bool has_analytic_hvp() const override { return true; }
  ParameterVector hessian_vector_product(const ParameterVector& theta,
                                         const ParameterVector& v) const override;
  std::size_t sample_count() const override { return indices_.size(); }
  MinibatchObjective sample_minibatch(SeededRng& rng, std::size_t batch_size) const override;

  const MlpArchitecture& architecture() const { return arch_; }
  const std::vector<std::size_t>& indices() const { return indices_; }

  /// Class probabilities for every sample in the subset (rows sum to 1).
  std::vector<std::vector<double>> predict_proba(const ParameterVector& theta) const;
  double accuracy(const ParameterVector& theta) const;

 private:
  MlpArchitecture arch_;
  std::shared_ptr<const DomainData> data_;
  std::vector<std::size_t> indices_;
};

/// One MlpObjective per dataset domain; domains listed in `held_out` become
/// the problem's unseen domains.
MultiDomainProblem make_mlp_problem(const SyntheticDomainDataset& dataset,
                                    const MlpArchitecture& arch,
                                    const std::vector<std::size_t>& held_out = {});

}  // namespace dgsam
