/*
 * Copyright 2026 The Pricelens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pricelens/models/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pricelens {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw ValidationError("unknown activation: " + std::string(name));
}

namespace {

void activate(Matrix& z, Activation a) {
  switch (a) {
    case Activation::relu: z = z.cwiseMax(0.0); break;
    case Activation::tanh: z = z.array().tanh(); break;
    case Activation::sigmoid: z = (1.0 + (-z.array()).exp()).inverse(); break;
  }
}

// Derivative expressed through the activated output h.
Matrix activation_derivative(const Matrix& h, Activation a) {
  switch (a) {
    case Activation::relu: return (h.array() > 0.0).cast<double>();
    case Activation::tanh: return 1.0 - h.array().square();
    case Activation::sigmoid: return h.array() * (1.0 - h.array());
  }
  return h;
}

void softmax_rows(Matrix& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - m).exp();
    z.row(i) /= z.row(i).sum();
  }
}

Matrix affine(const Matrix& in, const Matrix& w, const Vector& b) {
  Matrix z = in * w.transpose();
  z.rowwise() += b.transpose();
  return z;
}

// Activations of every layer, input first.
std::vector<Matrix> forward_all(const MlpNetwork& net, const Matrix& x) {
  std::vector<Matrix> acts;
  acts.reserve(net.weights.size() + 1);
  acts.push_back(x);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    Matrix z = affine(acts.back(), net.weights[l], net.biases[l]);
    if (l + 1 < net.weights.size()) {
      activate(z, net.activation);
    } else if (net.softmax_output) {
      softmax_rows(z);
    }
    acts.push_back(std::move(z));
  }
  return acts;
}

}  // namespace

Matrix MlpNetwork::forward(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != inputs()) {
    throw ValidationError("mlp: feature count mismatch");
  }
  return forward_all(*this, x).back();
}

MlpGradient mlp_gradient(const MlpNetwork& net, const Matrix& x, const Matrix& targets) {
  const auto acts = forward_all(net, x);
  const Matrix& out = acts.back();
  if (targets.rows() != out.rows() || targets.cols() != out.cols()) {
    throw ValidationError("mlp: target shape mismatch");
  }
  const double n = static_cast<double>(x.rows());
  MlpGradient g;
  if (net.softmax_output) {
    g.loss = -(targets.array() * out.array().max(1e-300).log()).sum() / n;
  } else {
    g.loss = 0.5 * (out - targets).squaredNorm() / n;
  }
  // Both heads share delta = (output - target) / n at the pre-activation.
  Matrix delta = (out - targets) / n;
  const std::size_t layers = net.weights.size();
  g.weights.resize(layers);
  g.biases.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta.transpose() * acts[l];
    g.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = (delta * net.weights[l]).cwiseProduct(activation_derivative(acts[l], net.activation));
    }
  }
  return g;
}

MlpNetwork init_mlp(std::size_t inputs, const std::vector<std::size_t>& hidden,
                    std::size_t outputs, Activation activation, bool softmax_output,
                    std::uint64_t seed) {
  if (hidden.empty()) throw ValidationError("mlp: at least one hidden layer is required");
  MlpNetwork net;
  net.activation = activation;
  net.softmax_output = softmax_output;
  Rng rng(seed);
  std::size_t in = inputs;
  std::vector<std::size_t> sizes = hidden;
  sizes.push_back(outputs);
  for (std::size_t out : sizes) {
    if (out == 0) throw ValidationError("mlp: layer sizes must be positive");
    // Glorot uniform.
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    Matrix w(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = (2.0 * uniform01(rng) - 1.0) * limit;
    net.weights.push_back(std::move(w));
    net.biases.push_back(Vector::Zero(static_cast<Eigen::Index>(out)));
    in = out;
  }
  return net;
}

Matrix MlpModel::scores(const Matrix& x) const {
  Matrix out = net_.forward(scaler_.apply(x));
  if (task_ == Task::regression) out = (out.array() * y_scale_ + y_mean_).matrix();
  return out;
}

MlpModel fit_mlp(const Matrix& x, const Vector& y, Task task, std::size_t classes,
                 const MlpConfig& config, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (n == 0 || y.size() != x.rows()) throw ValidationError("mlp: target length mismatch");
  auto scaler = Standardizer::fit(x);
  const Matrix z = scaler.apply(x);
  double y_mean = 0.0, y_scale = 1.0;
  Matrix targets;
  if (task == Task::classification) {
    if (classes < 2) throw ValidationError("mlp: need at least 2 classes");
    targets = Matrix::Zero(x.rows(), static_cast<Eigen::Index>(classes));
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const auto c = static_cast<Eigen::Index>(y(i));
      if (c < 0 || c >= targets.cols()) throw ValidationError("mlp: class label out of range");
      targets(i, c) = 1.0;
    }
  } else {
    y_mean = y.mean();
    const double sd = std::sqrt((y.array() - y_mean).square().mean());
    if (sd > 0) y_scale = sd;
    targets = ((y.array() - y_mean) / y_scale).matrix();
  }
  MlpNetwork net = init_mlp(static_cast<std::size_t>(x.cols()), config.hidden,
                            static_cast<std::size_t>(targets.cols()), config.activation,
                            task == Task::classification, mix_seed(seed, 0));
  Rng rng(mix_seed(seed, 1));
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, std::min(config.batch_size, n));
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      const std::vector<Eigen::Index> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                          order.begin() + static_cast<std::ptrdiff_t>(end));
      const Matrix xb = z(idx, Eigen::all);
      const Matrix tb = targets(idx, Eigen::all);
      const auto g = mlp_gradient(net, xb, tb);
      if (!std::isfinite(g.loss)) {
        throw RuntimeFailure("mlp: loss is not finite at epoch " + std::to_string(epoch) +
                             " (learning_rate=" + std::to_string(config.learning_rate) +
                             "); lower the learning rate");
      }
      for (std::size_t l = 0; l < net.weights.size(); ++l) {
        net.weights[l] -= config.learning_rate * (g.weights[l] + config.l2 * net.weights[l]);
        net.biases[l] -= config.learning_rate * g.biases[l];
      }
    }
  }
  return MlpModel(task, std::move(scaler), std::move(net), y_mean, y_scale);
}

}  // namespace pricelens
