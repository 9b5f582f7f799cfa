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

#include <gtest/gtest.h>

#include <cmath>

#include "pricelens/models/mlp.hpp"
#include "support.hpp"

namespace pricelens {
namespace {

TEST(Mlp, LearnsXor) {
  Matrix x(4, 2);
  x << 0, 0, 0, 1, 1, 0, 1, 1;
  const Vector y = (Vector(4) << 0, 1, 1, 0).finished();
  MlpConfig cfg;
  cfg.hidden = {4};
  cfg.activation = Activation::tanh;
  cfg.learning_rate = 0.5;
  cfg.epochs = 5000;
  cfg.batch_size = 4;
  cfg.l2 = 0.0;
  const auto m = fit_mlp(x, y, Task::classification, 2, cfg, 1);
  EXPECT_EQ(m.predict(x), y);
}

TEST(Mlp, SoftmaxRowsSumToOne) {
  Rng rng(2);
  const auto net = init_mlp(5, {7, 3}, 4, Activation::relu, true, 3);
  const Matrix p = net.forward(testing::random_matrix(rng, 50, 5, -10, 10));
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-9);
    EXPECT_GE(p.row(r).minCoeff(), 0.0);
  }
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(1e-6, std::abs(a) + std::abs(b));
}

void check_gradient(bool softmax, Activation activation, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t outputs = softmax ? 3 : 1;
  auto net = init_mlp(4, {5, 3}, outputs, activation, softmax, seed);
  const Matrix x = testing::random_matrix(rng, 6, 4);
  Matrix targets = Matrix::Zero(6, static_cast<Eigen::Index>(outputs));
  for (Eigen::Index i = 0; i < 6; ++i) {
    if (softmax) targets(i, static_cast<Eigen::Index>(uniform_index(rng, outputs))) = 1.0;
    else targets(i, 0) = testing::gaussian(rng);
  }
  const auto g = mlp_gradient(net, x, targets);
  const double h = 1e-6;
  double worst = 0.0;
  // 50 randomly chosen parameters across all layers.
  for (int probe = 0; probe < 50; ++probe) {
    const std::size_t layer = uniform_index(rng, net.weights.size());
    const bool bias = uniform01(rng) < 0.3;
    double* param;
    double analytic;
    if (bias) {
      const auto i = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(net.biases[layer].size())));
      param = &net.biases[layer](i);
      analytic = g.biases[layer](i);
    } else {
      const auto r = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(net.weights[layer].rows())));
      const auto c = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::size_t>(net.weights[layer].cols())));
      param = &net.weights[layer](r, c);
      analytic = g.weights[layer](r, c);
    }
    const double keep = *param;
    *param = keep + h;
    const double up = mlp_gradient(net, x, targets).loss;
    *param = keep - h;
    const double down = mlp_gradient(net, x, targets).loss;
    *param = keep;
    worst = std::max(worst, relative_error((up - down) / (2 * h), analytic));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  check_gradient(false, Activation::tanh, 1);
  check_gradient(true, Activation::tanh, 2);
  check_gradient(true, Activation::sigmoid, 3);
  check_gradient(false, Activation::sigmoid, 4);
}

TEST(Mlp, RegressionIsDeterministicAndReducesError) {
  Rng rng(5);
  const Matrix x = testing::random_matrix(rng, 80, 3);
  Vector y(80);
  for (Eigen::Index i = 0; i < 80; ++i) y(i) = std::sin(2 * x(i, 0)) + x(i, 1) * x(i, 2) + 10.0;
  MlpConfig cfg;
  cfg.epochs = 300;
  const auto a = fit_mlp(x, y, Task::regression, 0, cfg, 9);
  const auto b = fit_mlp(x, y, Task::regression, 0, cfg, 9);
  EXPECT_EQ(a.predict(x), b.predict(x));
  const double mse = (a.predict(x) - y).squaredNorm() / 80;
  const double baseline = (y.array() - y.mean()).square().mean();
  EXPECT_LT(mse, 0.5 * baseline);
}

TEST(Mlp, RequiresAHiddenLayer) {
  MlpConfig cfg;
  cfg.hidden = {};
  EXPECT_THROW(fit_mlp(Matrix::Ones(4, 1), Vector::Ones(4), Task::regression, 0, cfg, 1),
               ValidationError);
}

TEST(Mlp, ActivationNames) {
  EXPECT_EQ(activation_from_string("tanh"), Activation::tanh);
  EXPECT_EQ(to_string(Activation::relu), "relu");
  EXPECT_THROW(activation_from_string("gelu"), ValidationError);
}

}  // namespace
}  // namespace pricelens
