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

#include "pricelens/models/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pricelens {

std::vector<std::size_t> bootstrap_sample(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::size_t> rows(m);
  for (auto& r : rows) r = uniform_index(rng, n);
  return rows;
}

Matrix ForestModel::scores(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), static_cast<Eigen::Index>(outputs()));
  const double scale = 1.0 / static_cast<double>(trees_.size());
  for (const auto& t : trees_) accumulate_tree(t, x, scale, out);
  return out;
}

ForestModel fit_forest(const Matrix& x, const Vector& y, Task task, std::size_t classes,
                       const ForestConfig& config, std::uint64_t seed, int threads,
                       const BootstrapSampler& sampler) {
  if (config.trees < 1) throw ValidationError("forest: trees must be at least 1");
  const auto n = static_cast<std::size_t>(x.rows());
  const auto k_all = static_cast<std::size_t>(x.cols());
  if (y.size() != x.rows()) throw ValidationError("forest: target length mismatch");
  const std::size_t m = config.sample_size.value_or(n);
  if (m == 0 || m > n) throw ValidationError("forest: sample_size must be in [1, n]");
  std::size_t k = k_all;
  if (config.max_features) {
    k = *config.max_features;
  } else if (task == Task::classification) {
    k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(k_all))));
  } else {
    k = k_all / 3;
  }
  k = std::max<std::size_t>(1, k);
  if (k > k_all) throw ValidationError("forest: max_features exceeds the feature count");
  const Matrix channels_all = target_channels(y, task, classes);

  GrowthParams p;
  p.criterion = task == Task::regression ? SplitCriterion::mse : SplitCriterion::gini;
  p.max_depth = config.max_depth;
  p.min_leaf = config.min_leaf;

  std::vector<Tree> trees(config.trees);
  parallel_for(config.trees, threads, [&](std::size_t t) {
    Rng rng(mix_seed(seed, t));
    const auto rows = sampler(rng, n, m);
    std::vector<std::size_t> features(k_all);
    std::iota(features.begin(), features.end(), 0);
    if (k < k_all) {
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(rng, k_all - i);
        std::swap(features[i], features[j]);
      }
      features.resize(k);
    }
    const Presort presort(x, rows, features);
    Matrix channels(static_cast<Eigen::Index>(rows.size()), channels_all.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      channels.row(static_cast<Eigen::Index>(i)) =
          channels_all.row(static_cast<Eigen::Index>(rows[i]));
    }
    Tree tree = grow_tree(presort, channels, Vector::Ones(static_cast<Eigen::Index>(rows.size())), p);
    if (task == Task::classification) {
      for (Eigen::Index node = 0; node < tree.values.rows(); ++node) {
        const auto winner = static_cast<Eigen::Index>(argmax(row_span(tree.values, node)));
        tree.values.row(node).setZero();
        tree.values(node, winner) = 1.0;
      }
    }
    trees[t] = std::move(tree);
  });
  return ForestModel(task, std::move(trees));
}

}  // namespace pricelens
