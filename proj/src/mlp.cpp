#include "uavmec/mlp.hpp"

#include <cmath>
#include <string>

#include "uavmec/error.hpp"

namespace uavmec {
namespace {

// Output-layer init range, keeps initial actions and values near zero.
constexpr double kFinalInit = 3e-3;

DenseLayer make_layer(int in, int out, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  DenseLayer l{Matrix(out, in), Vector(out)};
  for (Eigen::Index j = 0; j < l.weight.cols(); ++j)
    for (Eigen::Index i = 0; i < l.weight.rows(); ++i) l.weight(i, j) = u(rng);
  for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = u(rng);
  return l;
}

template <typename Layers, typename Fn>
void for_each_block(Layers& layers, Fn&& fn) {
  for (auto& l : layers) {
    fn(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    fn(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
}

}  // namespace

double Mlp::Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& l : layers) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return s;
}

Mlp::Mlp(int input_dim, int hidden_dim, int output_dim, OutputActivation activation,
         std::mt19937_64& rng)
    : activation_(activation) {
  layers_[0] = make_layer(input_dim, hidden_dim, 1.0 / std::sqrt(input_dim), rng);
  layers_[1] = make_layer(hidden_dim, hidden_dim, 1.0 / std::sqrt(hidden_dim), rng);
  layers_[2] = make_layer(hidden_dim, output_dim, kFinalInit, rng);
}

Mlp Mlp::zeros(int input_dim, int hidden_dim, int output_dim, OutputActivation activation) {
  Mlp net;
  net.activation_ = activation;
  net.layers_[0] = {Matrix::Zero(hidden_dim, input_dim), Vector::Zero(hidden_dim)};
  net.layers_[1] = {Matrix::Zero(hidden_dim, hidden_dim), Vector::Zero(hidden_dim)};
  net.layers_[2] = {Matrix::Zero(output_dim, hidden_dim), Vector::Zero(output_dim)};
  return net;
}

void Mlp::check_input(const Matrix& input) const {
  if (input.rows() != input_dim())
    throw Error(ErrorCode::kShape, "mlp input has " + std::to_string(input.rows()) +
                                       " rows, expected " + std::to_string(input_dim()));
}

Matrix Mlp::forward(const Matrix& input) const {
  Tape tape;
  return forward(input, tape);
}

Matrix Mlp::forward(const Matrix& input, Tape& tape) const {
  check_input(input);
  tape.input = input;
  const Matrix* x = &tape.input;
  for (int k = 0; k < kLayers; ++k) {
    tape.pre[k].noalias() = layers_[k].weight * (*x);
    tape.pre[k].colwise() += layers_[k].bias;
    if (k < kLayers - 1) {
      tape.post[k] = tape.pre[k].cwiseMax(0.0);
    } else if (activation_ == OutputActivation::kTanh) {
      tape.post[k] = tape.pre[k].array().tanh().matrix();
    } else {
      tape.post[k] = tape.pre[k];
    }
    x = &tape.post[k];
  }
  return tape.post[kLayers - 1];
}

Mlp::Gradients Mlp::backward(const Tape& tape, const Matrix& upstream, Matrix* input_grad) const {
  const Matrix& out = tape.post[kLayers - 1];
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols())
    throw Error(ErrorCode::kShape, "mlp upstream gradient shape mismatch");

  Gradients g;
  Matrix delta = upstream;
  if (activation_ == OutputActivation::kTanh)
    delta.array() *= (1.0 - out.array().square());

  for (int k = kLayers - 1; k >= 0; --k) {
    const Matrix& x = (k == 0) ? tape.input : tape.post[k - 1];
    g.layers[k].weight.noalias() = delta * x.transpose();
    g.layers[k].bias = delta.rowwise().sum();
    if (k > 0) {
      Matrix back = layers_[k].weight.transpose() * delta;
      delta = (tape.pre[k - 1].array() > 0.0).select(back, 0.0);
    } else if (input_grad != nullptr) {
      *input_grad = layers_[0].weight.transpose() * delta;
    }
  }
  return g;
}

void Mlp::apply(const Gradients& grads, double scale) {
  for (int k = 0; k < kLayers; ++k) {
    layers_[k].weight += scale * grads.layers[k].weight;
    layers_[k].bias += scale * grads.layers[k].bias;
  }
}

void Mlp::blend_from(const Mlp& online, double tau) {
  for (int k = 0; k < kLayers; ++k) {
    layers_[k].weight = tau * online.layers_[k].weight + (1.0 - tau) * layers_[k].weight;
    layers_[k].bias = tau * online.layers_[k].bias + (1.0 - tau) * layers_[k].bias;
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<double> Mlp::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for_each_block(layers_, [&](const double* p, std::size_t n) { out.insert(out.end(), p, p + n); });
  return out;
}

void Mlp::unflatten(const std::vector<double>& values) {
  if (values.size() != parameter_count())
    throw Error(ErrorCode::kShape, "mlp parameter vector has the wrong length");
  std::size_t offset = 0;
  for_each_block(layers_, [&](double* p, std::size_t n) {
    std::copy(values.begin() + offset, values.begin() + offset + n, p);
    offset += n;
  });
}

bool Mlp::all_finite() const {
  for (const auto& l : layers_)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

}  // namespace uavmec
