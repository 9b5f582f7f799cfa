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

// Cross-validation folds and evaluation metrics.

#ifndef PRICELENS_EVAL_HPP_
#define PRICELENS_EVAL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pricelens/common.hpp"

namespace pricelens {

struct FoldPlan {
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::vector<std::size_t> fold_of;  // per row

  std::vector<std::size_t> train_rows(std::size_t fold) const;
  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> sizes() const;
};

// Seeded shuffle, then row at shuffled position i goes to fold i mod k.
FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

struct RegressionMetrics {
  double mse = 0.0;
  double rmse = 0.0;
  std::optional<double> mape;  // absent when a target is zero
  double r2 = 0.0;
};

// Mean absolute percentage error; throws ValidationError on a zero target.
double mape(const Vector& y, const Vector& predicted);
RegressionMetrics regression_metrics(const Vector& y, const Vector& predicted);

struct ClassificationMetrics {
  double accuracy = 0.0;
  std::optional<double> auc;  // absent when fewer than two classes are present
  double f1 = 0.0;
};

// One-vs-rest AUC of one score column with midrank credit for ties.
double binary_auc(const Vector& positive, const Vector& scores);

// scores has one column per class. AUC is averaged over classes present in
// y; F1 is averaged over the union of classes in y and the predictions, and a
// class with no predicted or no true rows contributes 0.
ClassificationMetrics classification_metrics(const Vector& y, const Matrix& scores,
                                             const Vector& predicted);

const std::vector<std::string>& metric_names(Task task);
// Error metrics rank ascending, score metrics descending.
bool lower_is_better(Task task);
// Metric values in metric_names order; undefined metrics become NaN.
std::vector<double> metric_values(const RegressionMetrics& m);
std::vector<double> metric_values(const ClassificationMetrics& m);

}  // namespace pricelens

#endif  // PRICELENS_EVAL_HPP_
