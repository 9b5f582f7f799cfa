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

#ifndef PRICELENS_MODELS_LINEAR_HPP_
#define PRICELENS_MODELS_LINEAR_HPP_

#include <cstdint>

#include "pricelens/models/base.hpp"

namespace pricelens {

struct LinearConfig {
  double ridge = 1e-3;  // regression penalty on ||w||^2
  // Logistic regression (binary members of the one-vs-rest ensemble).
  double learning_rate = 0.1;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double l2 = 1e-3;
};

// y = w.x + b. Weights live in the original feature scale; the fit itself
// runs on standardized columns.
class LinearRegression : public Model {
 public:
  LinearRegression(Vector weights, double intercept, bool rank_deficient)
      : weights_(std::move(weights)), intercept_(intercept), rank_deficient_(rank_deficient) {}

  Family family() const override { return Family::linear; }
  Task task() const override { return Task::regression; }
  std::size_t outputs() const override { return 1; }
  Matrix scores(const Matrix& x) const override;

  const Vector& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  // Set when ridge == 0 and the design was rank deficient, in which case the
  // minimum-norm least-squares solution was returned.
  bool rank_deficient() const { return rank_deficient_; }

 private:
  Vector weights_;
  double intercept_;
  bool rank_deficient_;
};

// Minimises ||y - Xw - b||^2 + ridge ||w||^2 with an unpenalised intercept.
LinearRegression fit_linear(const Matrix& x, const Vector& y, double ridge);

// p(y=1|x) = sigmoid(w.x + b), weights in the original feature scale.
class LogisticRegression : public BinaryClassifier {
 public:
  LogisticRegression(Vector weights, double intercept)
      : weights_(std::move(weights)), intercept_(intercept) {}

  Vector decision(const Matrix& x) const override { return predict_proba(x); }
  Vector predict_proba(const Matrix& x) const;
  Vector margin(const Matrix& x) const;

  const Vector& weights() const { return weights_; }
  double intercept() const { return intercept_; }

 private:
  Vector weights_;
  double intercept_;
};

// Cross-entropy plus (l2/2)||w||^2, minimised by mini-batch gradient descent
// on standardized columns. y holds 0/1 labels; both must be present.
LogisticRegression fit_logistic(const Matrix& x, const Vector& y, const LinearConfig& config,
                                std::uint64_t seed);

double sigmoid(double z);

}  // namespace pricelens

#endif  // PRICELENS_MODELS_LINEAR_HPP_
