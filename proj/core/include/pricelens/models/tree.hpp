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

// Binary regression/classification trees and the exact greedy grower shared
// by CART, random forests and gradient boosting.

#ifndef PRICELENS_MODELS_TREE_HPP_
#define PRICELENS_MODELS_TREE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "pricelens/models/base.hpp"

namespace pricelens {

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double cover = 0.0;  // training samples reaching the node
};

struct Tree {
  std::vector<TreeNode> nodes;  // root first
  Matrix values;                // nodes x outputs

  std::size_t outputs() const { return static_cast<std::size_t>(values.cols()); }
  bool is_leaf(std::size_t node) const { return nodes[node].left < 0; }
  std::size_t leaf_of(std::span<const double> x) const;
  std::span<const double> value_at(std::size_t node) const {
    return row_span(values, static_cast<Eigen::Index>(node));
  }
  std::size_t depth() const;
  std::size_t leaf_count() const;
};

enum class SplitCriterion { mse, gini, second_order };

struct GrowthParams {
  SplitCriterion criterion = SplitCriterion::mse;
  std::size_t max_depth = 8;
  std::size_t min_leaf = 1;
  double lambda = 0.0;  // second order only
  double gamma = 0.0;   // second order only
};

// Feature columns of the sampled rows and, per feature, the sample positions
// sorted by value. Built once and reused across boosting rounds.
struct Presort {
  Presort(const Matrix& x, std::span<const std::size_t> rows,
          std::span<const std::size_t> features);

  std::size_t samples = 0;
  std::vector<std::size_t> features;          // ascending
  std::vector<std::vector<double>> column;    // per feature, indexed by sample
  std::vector<std::vector<std::uint32_t>> order;
};

// Grows one tree. channels holds per-sample statistics (targets for mse,
// one-hot classes for gini, gradients for second order) and weights the
// matching denominators (1, or hessians). Splits maximise the summed
// S^2 / (W + lambda) score decrease; candidates are midpoints between
// consecutive distinct values; ties go to the lower feature index, then the
// lower threshold. Leaves hold S / W (mse, gini) or -G / (H + lambda).
Tree grow_tree(const Presort& presort, const Matrix& channels, const Vector& weights,
               const GrowthParams& params);

// Targets as channels: a single column for regression, one-hot for classes.
Matrix target_channels(const Vector& y, Task task, std::size_t classes);

struct TreeConfig {
  std::size_t max_depth = 8;
  std::size_t min_leaf = 2;
};

// A single CART tree. Classification leaves hold class proportions, so
// scores are proportions and predict() is the majority class.
class CartModel : public Model {
 public:
  CartModel(Task task, Tree tree) : task_(task), tree_(std::move(tree)) {}

  Family family() const override { return Family::cart; }
  Task task() const override { return task_; }
  std::size_t outputs() const override { return tree_.outputs(); }
  Matrix scores(const Matrix& x) const override;

  const Tree& tree() const { return tree_; }

 private:
  Task task_;
  Tree tree_;
};

CartModel fit_cart(const Matrix& x, const Vector& y, Task task, std::size_t classes,
                   const TreeConfig& config);

// Sum over rows of the leaf values reached, written into out (n x outputs).
void accumulate_tree(const Tree& tree, const Matrix& x, double scale, Matrix& out);

}  // namespace pricelens

#endif  // PRICELENS_MODELS_TREE_HPP_
