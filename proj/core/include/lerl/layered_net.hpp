#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lerl {

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out

  std::size_t rows() const noexcept { return static_cast<std::size_t>(weights.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(weights.cols()); }
  std::size_t parameter_count() const noexcept { return rows() * cols() + rows(); }

  bool same_shape(const DenseLayer& other) const noexcept {
    return rows() == other.rows() && cols() == other.cols();
  }
  /// Bitwise equality of every weight and bias.
  bool identical(const DenseLayer& other) const noexcept;
};

/// Dense MLP with rectifier hidden units and a linear output layer.
///
/// Layers [0, partition_index) form the perception block and
/// [partition_index, layer_count) the thinking block. Crossover exchanges
/// whole blocks, so every network in one population must agree on shapes
/// and on the partition index.
class LayeredNet {
 public:
  LayeredNet() = default;
  /// Throws UsageError if shapes do not chain or the partition is outside [1, layers-1].
  LayeredNet(std::vector<DenseLayer> layers, std::size_t partition_index);

  /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  /// `sizes` lists input, hidden..., output widths.
  static LayeredNet initialize(std::span<const std::size_t> sizes, std::size_t partition_index,
                               std::mt19937_64& rng);

  /// Q-values for a single observation. Throws UsageError on dimension mismatch.
  Eigen::VectorXd forward(std::span<const double> observation) const;
  /// Batched forward; each column of `inputs` is one observation.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  std::size_t layer_count() const noexcept { return layers_.size(); }
  std::size_t partition_index() const noexcept { return partition_index_; }
  std::size_t input_dim() const noexcept;
  std::size_t output_dim() const noexcept;
  std::size_t parameter_count() const noexcept;

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }
  const DenseLayer& layer(std::size_t i) const { return layers_.at(i); }
  DenseLayer& layer(std::size_t i) { return layers_.at(i); }

  std::span<const DenseLayer> perception() const noexcept {
    return std::span(layers_).first(partition_index_);
  }
  std::span<const DenseLayer> thinking() const noexcept {
    return std::span(layers_).subspan(partition_index_);
  }

  /// Same layer shapes and partition index.
  bool same_architecture(const LayeredNet& other) const noexcept;
  /// Same architecture and bitwise-identical parameters.
  bool identical(const LayeredNet& other) const noexcept;
  bool all_finite() const noexcept;

 private:
  std::vector<DenseLayer> layers_;
  std::size_t partition_index_ = 1;
};

/// Gradient with the same shapes as the network it belongs to.
struct NetGradient {
  std::vector<DenseLayer> layers;

  static NetGradient zeros_like(const LayeredNet& net);
};

/// Plain gradient descent: net <- net - learning_rate * grad.
void apply_gradient(LayeredNet& net, const NetGradient& grad, double learning_rate);

}  // namespace lerl
