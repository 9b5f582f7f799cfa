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

#ifndef PRICELENS_MODELS_BASE_HPP_
#define PRICELENS_MODELS_BASE_HPP_

#include <string_view>
#include <vector>

#include "pricelens/common.hpp"

namespace pricelens {

enum class Family { linear, mlp, cart, svm, forest, gbt };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);
const std::vector<Family>& all_families();
// Column label in report tables: LR, ANN, DT, SVR/SVM, RF, XGBoost.
std::string_view display_name(Family family, Task task);

// A fitted predictor. Regressors emit one column of predictions; classifiers
// emit one score column per class.
class Model {
 public:
  virtual ~Model() = default;
  virtual Family family() const = 0;
  virtual Task task() const = 0;
  virtual std::size_t outputs() const = 0;
  virtual Matrix scores(const Matrix& x) const = 0;

  // Regression values, or the argmax class with ties going to the lower class.
  Vector predict(const Matrix& x) const;
};

// A two-class scorer: larger decision values mean "positive".
class BinaryClassifier {
 public:
  virtual ~BinaryClassifier() = default;
  virtual Vector decision(const Matrix& x) const = 0;
};

// Index of the largest entry; the lowest index wins ties.
std::size_t argmax(std::span<const double> values);
Vector argmax_rows(const Matrix& scores);

}  // namespace pricelens

#endif  // PRICELENS_MODELS_BASE_HPP_
