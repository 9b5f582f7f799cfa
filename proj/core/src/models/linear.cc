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

#include "pricelens/models/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pricelens/models/standardize.hpp"

namespace pricelens {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Matrix LinearRegression::scores(const Matrix& x) const {
  if (x.cols() != weights_.size()) throw ValidationError("linear: feature count mismatch");
  Matrix out(x.rows(), 1);
  out.col(0) = (x * weights_).array() + intercept_;
  return out;
}

LinearRegression fit_linear(const Matrix& x, const Vector& y, double ridge) {
  if (x.rows() < 2) throw ValidationError("linear: need at least 2 rows");
  if (y.size() != x.rows()) throw ValidationError("linear: target length mismatch");
  if (ridge < 0) throw ValidationError("linear: ridge must be >= 0");
  const auto s = Standardizer::fit(x);
  const Matrix z = s.apply(x);
  const double y_mean = y.mean();
  const Vector yc = y.array() - y_mean;
  Vector w;
  bool deficient = false;
  if (ridge > 0) {
    Eigen::MatrixXd a = z.transpose() * z;
    a.diagonal().array() += ridge;
    w = a.ldlt().solve(z.transpose() * yc);
  } else {
    Eigen::MatrixXd zc = z;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(zc);
    deficient = cod.rank() < zc.cols();
    w = cod.solve(yc);
  }
  Vector raw = w.array() / s.scale.array();
  const double b = y_mean - raw.dot(s.mean);
  return LinearRegression(std::move(raw), b, deficient);
}

Vector LogisticRegression::margin(const Matrix& x) const {
  if (x.cols() != weights_.size()) throw ValidationError("logistic: feature count mismatch");
  return (x * weights_).array() + intercept_;
}

Vector LogisticRegression::predict_proba(const Matrix& x) const {
  return margin(x).unaryExpr([](double v) { return sigmoid(v); });
}

LogisticRegression fit_logistic(const Matrix& x, const Vector& y, const LinearConfig& config,
                                std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (y.size() != x.rows()) throw ValidationError("logistic: target length mismatch");
  bool has0 = false, has1 = false;
  for (double v : y) {
    if (v == 0.0) has0 = true;
    else if (v == 1.0) has1 = true;
    else throw ValidationError("logistic: labels must be 0 or 1");
  }
  if (!has0 || !has1) throw ValidationError("logistic: both classes must be present");
  const auto s = Standardizer::fit(x);
  const Matrix z = s.apply(x);
  Vector w = Vector::Zero(x.cols());
  double b = 0.0;
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, std::min(config.batch_size, n));
  Vector grad(x.cols());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      grad.setZero();
      double gb = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const auto i = static_cast<Eigen::Index>(order[k]);
        const double err = sigmoid(z.row(i).dot(w) + b) - y(i);
        grad += err * z.row(i).transpose();
        gb += err;
      }
      const double m = static_cast<double>(end - start);
      w -= config.learning_rate * (grad / m + config.l2 * w);
      b -= config.learning_rate * gb / m;
    }
  }
  Vector raw = w.array() / s.scale.array();
  return LogisticRegression(std::move(raw), b - raw.dot(s.mean));
}

}  // namespace pricelens
