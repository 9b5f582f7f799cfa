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

#include "pricelens/models/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pricelens/models/linear.hpp"

namespace pricelens {

Vector BoostedTrees::raw(const Matrix& x) const {
  Matrix out = Matrix::Constant(x.rows(), 1, base_score);
  for (const auto& t : trees) accumulate_tree(t, x, learning_rate, out);
  return out.col(0);
}

BoostedTrees fit_boosted_trees(const Matrix& x, const Vector& y, BoostLoss loss,
                               const GbtConfig& config) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (n == 0 || y.size() != x.rows()) throw ValidationError("gbt: target length mismatch");
  if (config.rounds < 1) throw ValidationError("gbt: rounds must be at least 1");
  BoostedTrees model;
  model.learning_rate = config.learning_rate;
  if (config.base_score) {
    model.base_score = *config.base_score;
  } else if (loss == BoostLoss::squared) {
    model.base_score = y.mean();
  } else {
    const double rate = std::clamp(y.mean(), 1e-6, 1.0 - 1e-6);
    model.base_score = std::log(rate / (1.0 - rate));
  }
  std::vector<std::size_t> rows(n), features(static_cast<std::size_t>(x.cols()));
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(features.begin(), features.end(), 0);
  const Presort presort(x, rows, features);
  GrowthParams p;
  p.criterion = SplitCriterion::second_order;
  p.max_depth = config.max_depth;
  p.min_leaf = config.min_leaf;
  p.lambda = config.lambda;
  p.gamma = config.gamma;

  Matrix f = Matrix::Constant(x.rows(), 1, model.base_score);
  Matrix g(x.rows(), 1);
  Vector h(x.rows());
  model.trees.reserve(config.rounds);
  for (std::size_t round = 0; round < config.rounds; ++round) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (loss == BoostLoss::squared) {
        g(i, 0) = f(i, 0) - y(i);
        h(i) = 1.0;
      } else {
        const double prob = sigmoid(f(i, 0));
        g(i, 0) = prob - y(i);
        h(i) = prob * (1.0 - prob);
      }
    }
    Tree tree = grow_tree(presort, g, h, p);
    accumulate_tree(tree, x, model.learning_rate, f);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace pricelens
