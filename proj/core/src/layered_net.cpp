#include "lerl/layered_net.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "lerl/errors.hpp"

namespace lerl {
namespace {

template <typename Derived>
bool bitwise_equal(const Eigen::DenseBase<Derived>& a, const Eigen::DenseBase<Derived>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double x = a(i, j);
      const double y = b(i, j);
      if (std::memcmp(&x, &y, sizeof(double)) != 0) return false;
    }
  }
  return true;
}

}  // namespace

bool DenseLayer::identical(const DenseLayer& other) const noexcept {
  return bitwise_equal(weights, other.weights) && bitwise_equal(bias, other.bias);
}

LayeredNet::LayeredNet(std::vector<DenseLayer> layers, std::size_t partition_index)
    : layers_(std::move(layers)), partition_index_(partition_index) {
  if (layers_.size() < 2) throw UsageError("LayeredNet needs at least two layers");
  if (partition_index_ < 1 || partition_index_ >= layers_.size()) {
    throw UsageError("partition index " + std::to_string(partition_index_) +
                     " outside [1, " + std::to_string(layers_.size() - 1) + "]");
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& layer = layers_[i];
    if (layer.rows() == 0 || layer.cols() == 0 ||
        static_cast<std::size_t>(layer.bias.size()) != layer.rows()) {
      throw UsageError("layer " + std::to_string(i) + " has an invalid shape");
    }
    if (i > 0 && layers_[i - 1].rows() != layer.cols()) {
      throw UsageError("layer " + std::to_string(i) + " input width does not match layer " +
                       std::to_string(i - 1) + " output width");
    }
  }
}

LayeredNet LayeredNet::initialize(std::span<const std::size_t> sizes, std::size_t partition_index,
                                  std::mt19937_64& rng) {
  if (sizes.size() < 3) throw UsageError("need input, at least one hidden, and output width");
  std::vector<DenseLayer> layers;
  layers.reserve(sizes.size() - 1);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const auto fan_in = sizes[i];
    const auto fan_out = sizes[i + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = dist(rng);
    }
    layers.push_back(std::move(layer));
  }
  return LayeredNet(std::move(layers), partition_index);
}

Eigen::VectorXd LayeredNet::forward(std::span<const double> observation) const {
  if (observation.size() != input_dim()) {
    throw UsageError("observation has length " + std::to_string(observation.size()) +
                     ", network expects " + std::to_string(input_dim()));
  }
  Eigen::VectorXd activation =
      Eigen::Map<const Eigen::VectorXd>(observation.data(), static_cast<Eigen::Index>(observation.size()));
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::VectorXd z = layers_[i].weights * activation + layers_[i].bias;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
    activation = std::move(z);
  }
  return activation;
}

Eigen::MatrixXd LayeredNet::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (static_cast<std::size_t>(inputs.rows()) != input_dim()) {
    throw UsageError("batch rows do not match network input width");
  }
  Eigen::MatrixXd activation = inputs;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = layers_[i].weights * activation;
    z.colwise() += layers_[i].bias;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
    activation = std::move(z);
  }
  return activation;
}

std::size_t LayeredNet::input_dim() const noexcept {
  return layers_.empty() ? 0 : layers_.front().cols();
}

std::size_t LayeredNet::output_dim() const noexcept {
  return layers_.empty() ? 0 : layers_.back().rows();
}

std::size_t LayeredNet::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.parameter_count();
  return n;
}

bool LayeredNet::same_architecture(const LayeredNet& other) const noexcept {
  if (layers_.size() != other.layers_.size() || partition_index_ != other.partition_index_) {
    return false;
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!layers_[i].same_shape(other.layers_[i])) return false;
  }
  return true;
}

bool LayeredNet::identical(const LayeredNet& other) const noexcept {
  if (!same_architecture(other)) return false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!layers_[i].identical(other.layers_[i])) return false;
  }
  return true;
}

bool LayeredNet::all_finite() const noexcept {
  for (const auto& layer : layers_) {
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

NetGradient NetGradient::zeros_like(const LayeredNet& net) {
  NetGradient grad;
  grad.layers.reserve(net.layer_count());
  for (const auto& layer : net.layers()) {
    grad.layers.push_back({Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                           Eigen::VectorXd::Zero(layer.bias.size())});
  }
  return grad;
}

void apply_gradient(LayeredNet& net, const NetGradient& grad, double learning_rate) {
  if (grad.layers.size() != net.layer_count()) throw UsageError("gradient/network layer mismatch");
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    auto& layer = net.layer(i);
    if (!layer.same_shape(grad.layers[i])) throw UsageError("gradient/network shape mismatch");
    layer.weights -= learning_rate * grad.layers[i].weights;
    layer.bias -= learning_rate * grad.layers[i].bias;
  }
}

}  // namespace lerl
