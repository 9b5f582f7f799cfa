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

#ifndef PRICELENS_MODELS_GBT_HPP_
#define PRICELENS_MODELS_GBT_HPP_

#include <optional>
#include <vector>

#include "pricelens/models/tree.hpp"

namespace pricelens {

struct GbtConfig {
  std::size_t rounds = 100;
  double learning_rate = 0.1;
  double lambda = 1.0;
  double gamma = 0.0;
  std::size_t max_depth = 4;
  std::size_t min_leaf = 1;
  // Defaults to the target mean (squared loss) or the log-odds of the
  // positive rate (logistic loss).
  std::optional<double> base_score;
};

enum class BoostLoss { squared, logistic };

// F(x) = base_score + learning_rate * sum of leaf weights.
struct BoostedTrees {
  std::vector<Tree> trees;  // unscaled leaf weights
  double base_score = 0.0;
  double learning_rate = 0.1;

  Vector raw(const Matrix& x) const;
};

// Second-order boosting: g = F - y, h = 1 for squared loss; g = p - y,
// h = p(1 - p) for logistic loss with y in {0, 1}.
BoostedTrees fit_boosted_trees(const Matrix& x, const Vector& y, BoostLoss loss,
                               const GbtConfig& config);

class GbtRegressor : public Model {
 public:
  explicit GbtRegressor(BoostedTrees ensemble) : ensemble_(std::move(ensemble)) {}

  Family family() const override { return Family::gbt; }
  Task task() const override { return Task::regression; }
  std::size_t outputs() const override { return 1; }
  Matrix scores(const Matrix& x) const override { return ensemble_.raw(x); }

  const BoostedTrees& ensemble() const { return ensemble_; }

 private:
  BoostedTrees ensemble_;
};

// Logistic-loss member of a one-vs-rest ensemble. Its decision value is the
// raw log-odds margin, which is what tree attributions explain.
class GbtBinary : public BinaryClassifier {
 public:
  explicit GbtBinary(BoostedTrees ensemble) : ensemble_(std::move(ensemble)) {}

  Vector decision(const Matrix& x) const override { return ensemble_.raw(x); }
  const BoostedTrees& ensemble() const { return ensemble_; }

 private:
  BoostedTrees ensemble_;
};

}  // namespace pricelens

#endif  // PRICELENS_MODELS_GBT_HPP_
