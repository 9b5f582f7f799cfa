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

#ifndef PRICELENS_MODELS_FOREST_HPP_
#define PRICELENS_MODELS_FOREST_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pricelens/models/tree.hpp"

namespace pricelens {

struct ForestConfig {
  std::size_t trees = 100;
  std::optional<std::size_t> sample_size;   // m, defaults to n
  std::optional<std::size_t> max_features;  // k, defaults to sqrt(K) / K/3
  std::size_t max_depth = 12;
  std::size_t min_leaf = 1;
};

// Draws the m row indices of one tree's training sample from n rows.
using BootstrapSampler = std::function<std::vector<std::size_t>(Rng& rng, std::size_t n,
                                                                std::size_t m)>;

// Uniform sampling with replacement.
std::vector<std::size_t> bootstrap_sample(Rng& rng, std::size_t n, std::size_t m);

// Regression averages tree outputs. Classification trees store a one-hot leaf
// for their majority class, so scores are vote fractions and predict() is
// the majority vote with the lower class winning ties.
class ForestModel : public Model {
 public:
  ForestModel(Task task, std::vector<Tree> trees) : task_(task), trees_(std::move(trees)) {}

  Family family() const override { return Family::forest; }
  Task task() const override { return task_; }
  std::size_t outputs() const override { return trees_.front().outputs(); }
  Matrix scores(const Matrix& x) const override;

  const std::vector<Tree>& trees() const { return trees_; }

 private:
  Task task_;
  std::vector<Tree> trees_;
};

// Each tree draws its sample and feature subset from an RNG seeded by
// mix_seed(seed, tree index), so results do not depend on `threads`.
ForestModel fit_forest(const Matrix& x, const Vector& y, Task task, std::size_t classes,
                       const ForestConfig& config, std::uint64_t seed, int threads = 1,
                       const BootstrapSampler& sampler = bootstrap_sample);

}  // namespace pricelens

#endif  // PRICELENS_MODELS_FOREST_HPP_
