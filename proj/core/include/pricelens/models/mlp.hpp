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

#ifndef PRICELENS_MODELS_MLP_HPP_
#define PRICELENS_MODELS_MLP_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "pricelens/models/base.hpp"
#include "pricelens/models/standardize.hpp"

namespace pricelens {

enum class Activation { relu, tanh, sigmoid };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

struct MlpConfig {
  std::vector<std::size_t> hidden = {32};
  Activation activation = Activation::relu;
  double learning_rate = 0.01;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double l2 = 1e-4;
};

// Fully connected network. Hidden layers apply the activation; the output
// layer is linear (regression) or softmax (classification).
struct MlpNetwork {
  std::vector<Matrix> weights;  // layer l: out x in
  std::vector<Vector> biases;
  Activation activation = Activation::relu;
  bool softmax_output = false;

  std::size_t inputs() const { return static_cast<std::size_t>(weights.front().cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(weights.back().rows()); }
  // n x outputs; probabilities when softmax_output.
  Matrix forward(const Matrix& x) const;
};

// Mean loss over the rows of x and its gradient. Regression uses half the
// squared error against targets (n x 1); classification uses cross-entropy
// against one-hot targets (n x classes).
struct MlpGradient {
  double loss = 0.0;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

MlpGradient mlp_gradient(const MlpNetwork& net, const Matrix& x, const Matrix& targets);

MlpNetwork init_mlp(std::size_t inputs, const std::vector<std::size_t>& hidden,
                    std::size_t outputs, Activation activation, bool softmax_output,
                    std::uint64_t seed);

class MlpModel : public Model {
 public:
  MlpModel(Task task, Standardizer scaler, MlpNetwork net, double y_mean, double y_scale)
      : task_(task), scaler_(std::move(scaler)), net_(std::move(net)),
        y_mean_(y_mean), y_scale_(y_scale) {}

  Family family() const override { return Family::mlp; }
  Task task() const override { return task_; }
  std::size_t outputs() const override { return net_.outputs(); }
  Matrix scores(const Matrix& x) const override;

  const Standardizer& scaler() const { return scaler_; }
  const MlpNetwork& network() const { return net_; }
  double y_mean() const { return y_mean_; }
  double y_scale() const { return y_scale_; }

 private:
  Task task_;
  Standardizer scaler_;
  MlpNetwork net_;
  double y_mean_;
  double y_scale_;
};

// Mini-batch gradient descent. Classification targets are class ids in
// [0, classes); regression targets are z-scored internally. Throws
// RuntimeFailure if the loss stops being finite.
MlpModel fit_mlp(const Matrix& x, const Vector& y, Task task, std::size_t classes,
                 const MlpConfig& config, std::uint64_t seed);

}  // namespace pricelens

#endif  // PRICELENS_MODELS_MLP_HPP_
