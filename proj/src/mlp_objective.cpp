#include "dgsam/mlp_objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "dgsam/errors.hpp"

namespace dgsam {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Layer {
  Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> W;
  Eigen::Map<const VectorXd> b;
};

/// Views over a flat parameter vector. Weights are stored row-major, which
/// is the transpose of Eigen's default, hence the stride trick.
std::vector<Layer> unpack(const MlpArchitecture& arch, const ParameterVector& theta) {
  std::vector<Layer> layers;
  const double* p = theta.data().data();
  for (std::size_t l = 0; l + 1 < arch.layer_sizes.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(arch.layer_sizes[l]);
    const auto out = static_cast<Eigen::Index>(arch.layer_sizes[l + 1]);
    // Row-major out x in == column-major in x out, transposed on use.
    layers.push_back({Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>>(p, in, out,
                                                                         Eigen::OuterStride<>(in)),
                      Eigen::Map<const VectorXd>(p + in * out, out)});
    p += in * out + out;
  }
  return layers;
}

struct Forward {
  std::vector<VectorXd> activations;  // a_0 = input, a_L = logits
  VectorXd probs;
};

Forward forward(const std::vector<Layer>& layers, const LabeledPoint& pt) {
  Forward f;
  f.activations.emplace_back(VectorXd(2));
  f.activations[0] << pt.x1, pt.x2;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    VectorXd z = layers[l].W.transpose() * f.activations.back() + layers[l].b;
    if (l + 1 < layers.size()) z = z.array().tanh();
    f.activations.push_back(std::move(z));
  }
  const VectorXd& logits = f.activations.back();
  const double mx = logits.maxCoeff();
  VectorXd e = (logits.array() - mx).exp();
  f.probs = e / e.sum();
  return f;
}

double cross_entropy(const VectorXd& logits, int label) {
  const double mx = logits.maxCoeff();
  const double lse = mx + std::log((logits.array() - mx).exp().sum());
  return lse - logits(label);
}

/// Accumulates dL/dtheta (and, when `v` is given, the R-operator
/// directional derivative of it) for one sample into `grad` / `hv`.
void backprop(const std::vector<Layer>& layers, const std::vector<Layer>* dir,
              const LabeledPoint& pt, double weight, double* grad, double* hv) {
  const Forward f = forward(layers, pt);
  const std::size_t depth = layers.size();
  const auto& a = f.activations;

  // R-forward pass: Ra_l = d a_l / d t along the direction.
  std::vector<VectorXd> ra;
  if (dir) {
    ra.push_back(VectorXd::Zero(a[0].size()));
    for (std::size_t l = 0; l < depth; ++l) {
      VectorXd rz = (*dir)[l].W.transpose() * a[l] + layers[l].W.transpose() * ra[l] + (*dir)[l].b;
      if (l + 1 < depth) rz = rz.cwiseProduct((1.0 - a[l + 1].array().square()).matrix());
      ra.push_back(std::move(rz));
    }
  }

  VectorXd delta = f.probs;
  delta(pt.label) -= 1.0;
  delta *= weight;
  VectorXd rdelta;
  if (dir) {
    const VectorXd& rz = ra[depth];
    rdelta = weight * (f.probs.cwiseProduct(rz) - f.probs * f.probs.dot(rz));
  }

  // Offsets of each layer inside the flat vector.
  std::vector<std::size_t> offset(depth);
  std::size_t off = 0;
  for (std::size_t l = 0; l < depth; ++l) {
    offset[l] = off;
    off += static_cast<std::size_t>(layers[l].W.size() + layers[l].b.size());
  }

  for (std::size_t l = depth; l-- > 0;) {
    const auto in = layers[l].W.rows();
    const auto out = layers[l].W.cols();
    // grad W (row-major out x in) = delta a_{l}'
    Eigen::Map<MatrixXd, 0, Eigen::OuterStride<>> gW(grad + offset[l], in, out,
                                                     Eigen::OuterStride<>(in));
    Eigen::Map<VectorXd> gb(grad + offset[l] + in * out, out);
    gW.noalias() += a[l] * delta.transpose();
    gb += delta;
    if (dir) {
      Eigen::Map<MatrixXd, 0, Eigen::OuterStride<>> hW(hv + offset[l], in, out,
                                                       Eigen::OuterStride<>(in));
      Eigen::Map<VectorXd> hb(hv + offset[l] + in * out, out);
      hW.noalias() += a[l] * rdelta.transpose() + ra[l] * delta.transpose();
      hb += rdelta;
    }
    if (l == 0) break;
    const VectorXd dA = layers[l].W * delta;
    const VectorXd slope = (1.0 - a[l].array().square()).matrix();
    VectorXd next = slope.cwiseProduct(dA);
    if (dir) {
      const VectorXd rdA = (*dir)[l].W * delta + layers[l].W * rdelta;
      rdelta = slope.cwiseProduct(rdA) - 2.0 * a[l].cwiseProduct(ra[l]).cwiseProduct(dA);
    }
    delta = std::move(next);
  }
}

}  // namespace

void MlpArchitecture::validate() const {
  if (layer_sizes.size() < 2) throw ConfigError("mlp: need at least input and output layers");
  if (layer_sizes.front() != 2) throw ConfigError("mlp: input layer must have size 2");
  if (layer_sizes.back() != 2) throw ConfigError("mlp: output layer must have size 2");
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw ConfigError("mlp: empty layer");
  }
}

std::size_t MlpArchitecture::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    n += layer_sizes[l] * layer_sizes[l + 1] + layer_sizes[l + 1];
  }
  return n;
}

ParameterVector MlpArchitecture::initialize(std::uint64_t seed) const {
  validate();
  SeededRng rng(seed);
  std::vector<double> theta;
  theta.reserve(parameter_count());
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const double scale =
        std::sqrt(2.0 / static_cast<double>(layer_sizes[l] + layer_sizes[l + 1]));
    for (std::size_t k = 0; k < layer_sizes[l] * layer_sizes[l + 1]; ++k) {
      theta.push_back(scale * rng.normal());
    }
    theta.insert(theta.end(), layer_sizes[l + 1], 0.0);
  }
  return ParameterVector(std::move(theta));
}

MlpObjective::MlpObjective(MlpArchitecture arch, std::shared_ptr<const DomainData> data)
    : arch_(std::move(arch)), data_(std::move(data)) {
  arch_.validate();
  if (!data_ || data_->points.empty()) throw ConfigError("MlpObjective: empty domain data");
  indices_.resize(data_->points.size());
  std::iota(indices_.begin(), indices_.end(), std::size_t{0});
}

MlpObjective::MlpObjective(MlpArchitecture arch, std::shared_ptr<const DomainData> data,
                           std::vector<std::size_t> indices)
    : arch_(std::move(arch)), data_(std::move(data)), indices_(std::move(indices)) {
  arch_.validate();
  if (!data_ || indices_.empty()) throw ConfigError("MlpObjective: empty sample subset");
  for (std::size_t i : indices_) {
    if (i >= data_->points.size()) throw ConfigError("MlpObjective: sample index out of range");
  }
}

double MlpObjective::loss(const ParameterVector& theta) const {
  require_dimension(theta);
  const auto layers = unpack(arch_, theta);
  double sum = 0.0;
  for (std::size_t i : indices_) {
    const auto& pt = data_->points[i];
    sum += cross_entropy(forward(layers, pt).activations.back(), pt.label);
  }
  return sum / static_cast<double>(indices_.size());
}

ParameterVector MlpObjective::gradient(const ParameterVector& theta) const {
  require_dimension(theta);
  const auto layers = unpack(arch_, theta);
  std::vector<double> grad(theta.size(), 0.0);
  const double w = 1.0 / static_cast<double>(indices_.size());
  for (std::size_t i : indices_) backprop(layers, nullptr, data_->points[i], w, grad.data(), nullptr);
  return ParameterVector(std::move(grad));
}

ParameterVector MlpObjective::hessian_vector_product(const ParameterVector& theta,
                                                     const ParameterVector& v) const {
  require_dimension(theta);
  require_same_dimension(theta, v, "MlpObjective::hessian_vector_product");
  const auto layers = unpack(arch_, theta);
  const auto dir = unpack(arch_, v);
  std::vector<double> grad(theta.size(), 0.0);
  std::vector<double> hv(theta.size(), 0.0);
  const double w = 1.0 / static_cast<double>(indices_.size());
  for (std::size_t i : indices_) {
    backprop(layers, &dir, data_->points[i], w, grad.data(), hv.data());
  }
  return ParameterVector(std::move(hv));
}

MinibatchObjective MlpObjective::sample_minibatch(SeededRng& rng, std::size_t batch_size) const {
  if (batch_size == 0) throw ConfigError("mlp: batch_size must be >= 1");
  if (batch_size > indices_.size()) {
    throw ConfigError("mlp: batch_size " + std::to_string(batch_size) + " exceeds domain size " +
                      std::to_string(indices_.size()));
  }
  std::vector<std::size_t> picks = rng.sample_without_replacement(indices_.size(), batch_size);
  std::vector<std::size_t> chosen;
  chosen.reserve(batch_size);
  for (std::size_t k : picks) chosen.push_back(indices_[k]);
  auto batch = std::make_shared<MlpObjective>(arch_, data_, chosen);
  return MinibatchObjective{std::move(batch), false, std::move(chosen)};
}

std::vector<std::vector<double>> MlpObjective::predict_proba(const ParameterVector& theta) const {
  require_dimension(theta);
  const auto layers = unpack(arch_, theta);
  std::vector<std::vector<double>> out;
  out.reserve(indices_.size());
  for (std::size_t i : indices_) {
    const VectorXd p = forward(layers, data_->points[i]).probs;
    out.emplace_back(p.data(), p.data() + p.size());
  }
  return out;
}

double MlpObjective::accuracy(const ParameterVector& theta) const {
  const auto probs = predict_proba(theta);
  std::size_t correct = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const int pred = probs[k][1] > probs[k][0] ? 1 : 0;
    if (pred == data_->points[indices_[k]].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(probs.size());
}

MultiDomainProblem make_mlp_problem(const SyntheticDomainDataset& dataset,
                                    const MlpArchitecture& arch,
                                    const std::vector<std::size_t>& held_out) {
  std::vector<ObjectivePtr> train;
  std::vector<ObjectivePtr> unseen;
  for (std::size_t i = 0; i < dataset.domain_count(); ++i) {
    auto obj = std::make_shared<MlpObjective>(arch, std::make_shared<DomainData>(dataset.domain(i)));
    if (std::find(held_out.begin(), held_out.end(), i) != held_out.end()) {
      unseen.push_back(std::move(obj));
    } else {
      train.push_back(std::move(obj));
    }
  }
  if (train.empty()) throw ConfigError("mlp problem: every domain is held out");
  return MultiDomainProblem(std::move(train), std::move(unseen));
}

}  // namespace dgsam
