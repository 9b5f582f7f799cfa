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

#include "pricelens/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "pricelens/models/base.hpp"

namespace pricelens {

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::sizes() const {
  std::vector<std::size_t> s(k, 0);
  for (auto f : fold_of) ++s[f];
  return s;
}

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("kfold: k must be at least 2");
  if (n < k) {
    throw ValidationError("kfold: " + std::to_string(n) + " rows cannot fill " +
                          std::to_string(k) + " folds");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  shuffle(perm, rng);
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.fold_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) plan.fold_of[perm[i]] = i % k;
  return plan;
}

namespace {

void check_lengths(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ValidationError("metrics: length mismatch");
  if (a.size() == 0) throw ValidationError("metrics: empty input");
}

}  // namespace

double mape(const Vector& y, const Vector& predicted) {
  check_lengths(y, predicted);
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) == 0.0) {
      throw ValidationError("metrics: MAPE is undefined, target " + std::to_string(i) + " is 0");
    }
    s += std::abs(y(i) - predicted(i)) / std::abs(y(i));
  }
  return s / static_cast<double>(y.size());
}

RegressionMetrics regression_metrics(const Vector& y, const Vector& predicted) {
  check_lengths(y, predicted);
  RegressionMetrics m;
  m.mse = (y - predicted).squaredNorm() / static_cast<double>(y.size());
  m.rmse = std::sqrt(m.mse);
  if ((y.array() != 0.0).all()) m.mape = mape(y, predicted);
  const double ss_tot = (y.array() - y.mean()).square().sum();
  m.r2 = ss_tot > 0 ? 1.0 - (y - predicted).squaredNorm() / ss_tot : 0.0;
  return m;
}

double binary_auc(const Vector& positive, const Vector& scores) {
  check_lengths(positive, scores);
  const auto n = static_cast<std::size_t>(scores.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) < scores(static_cast<Eigen::Index>(b));
  });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores(static_cast<Eigen::Index>(order[j + 1])) ==
                            scores(static_cast<Eigen::Index>(order[i]))) {
      ++j;
    }
    const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = mid;
    i = j + 1;
  }
  double pos = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (positive(static_cast<Eigen::Index>(i)) != 0.0) {
      pos += 1.0;
      rank_sum += rank[i];
    }
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) throw ValidationError("auc: needs both positive and negative rows");
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

ClassificationMetrics classification_metrics(const Vector& y, const Matrix& scores,
                                             const Vector& predicted) {
  check_lengths(y, predicted);
  if (scores.rows() != y.size()) throw ValidationError("metrics: score rows do not match labels");
  const auto classes = scores.cols();
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) < 0 || y(i) >= static_cast<double>(classes)) {
      throw ValidationError("metrics: label " + std::to_string(y(i)) + " has no score column");
    }
  }
  ClassificationMetrics m;
  m.accuracy = (y.array() == predicted.array()).cast<double>().mean();

  std::set<long> present, labels;
  for (double v : y) present.insert(static_cast<long>(v));
  labels = present;
  for (double v : predicted) labels.insert(static_cast<long>(v));

  if (present.size() >= 2) {
    double total = 0.0;
    for (long c : present) {
      const Vector pos = (y.array() == static_cast<double>(c)).cast<double>();
      total += binary_auc(pos, scores.col(c));
    }
    m.auc = total / static_cast<double>(present.size());
  }

  double f1_sum = 0.0;
  for (long c : labels) {
    double tp = 0, fp = 0, fn = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const bool truth = y(i) == static_cast<double>(c);
      const bool guess = predicted(i) == static_cast<double>(c);
      tp += truth && guess;
      fp += !truth && guess;
      fn += truth && !guess;
    }
    const double denom = 2 * tp + fp + fn;
    f1_sum += denom > 0 ? 2 * tp / denom : 0.0;
  }
  m.f1 = f1_sum / static_cast<double>(labels.size());
  return m;
}

const std::vector<std::string>& metric_names(Task task) {
  static const std::vector<std::string> reg = {"MSE", "RMSE", "MAPE"};
  static const std::vector<std::string> cls = {"Accuracy", "AUC", "F1-Score"};
  return task == Task::regression ? reg : cls;
}

bool lower_is_better(Task task) { return task == Task::regression; }

std::vector<double> metric_values(const RegressionMetrics& m) {
  return {m.mse, m.rmse, m.mape.value_or(std::numeric_limits<double>::quiet_NaN())};
}

std::vector<double> metric_values(const ClassificationMetrics& m) {
  return {m.accuracy, m.auc.value_or(std::numeric_limits<double>::quiet_NaN()), m.f1};
}

}  // namespace pricelens
