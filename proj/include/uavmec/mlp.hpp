#pragma once

#include <array>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace uavmec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class OutputActivation { kLinear, kTanh };

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

/// Fully connected net with two ReLU hidden layers. Inputs and outputs are
/// column-major batches: one sample per column.
class Mlp {
 public:
  static constexpr int kLayers = 3;

  struct Tape {
    Matrix input;
    std::array<Matrix, kLayers> pre;   // pre-activations
    std::array<Matrix, kLayers> post;  // activations (post[2] is the output)
  };

  struct Gradients {
    std::array<DenseLayer, kLayers> layers;
    double squared_norm() const;
  };

  Mlp() = default;
  Mlp(int input_dim, int hidden_dim, int output_dim, OutputActivation activation,
      std::mt19937_64& rng);
  /// All weights and biases zero.
  static Mlp zeros(int input_dim, int hidden_dim, int output_dim, OutputActivation activation);

  int input_dim() const { return static_cast<int>(layers_[0].weight.cols()); }
  int output_dim() const { return static_cast<int>(layers_[kLayers - 1].weight.rows()); }
  int hidden_dim() const { return static_cast<int>(layers_[0].weight.rows()); }
  OutputActivation activation() const { return activation_; }

  Matrix forward(const Matrix& input) const;
  Matrix forward(const Matrix& input, Tape& tape) const;

  /// Reverse-mode gradients of sum(upstream .* output) w.r.t. the parameters.
  /// When `input_grad` is non-null it receives the gradient w.r.t. the input.
  Gradients backward(const Tape& tape, const Matrix& upstream, Matrix* input_grad = nullptr) const;

  /// params += scale * grads
  void apply(const Gradients& grads, double scale);
  /// params <- tau * online + (1 - tau) * params
  void blend_from(const Mlp& online, double tau);

  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& values);
  bool all_finite() const;

  std::array<DenseLayer, kLayers>& layers() { return layers_; }
  const std::array<DenseLayer, kLayers>& layers() const { return layers_; }

 private:
  void check_input(const Matrix& input) const;

  std::array<DenseLayer, kLayers> layers_;
  OutputActivation activation_ = OutputActivation::kLinear;
};

}  // namespace uavmec
