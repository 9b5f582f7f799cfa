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

// Shapley-value attributions (exact path-dependent TreeSHAP for tree models,
// Kernel SHAP otherwise), global importance and embedding keyword profiles.

#ifndef PRICELENS_EXPLAIN_HPP_
#define PRICELENS_EXPLAIN_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pricelens/models/model.hpp"
#include "pricelens/skipgram.hpp"

namespace pricelens {

// base_value + sum(values) equals the explained model output.
struct Attribution {
  double base_value = 0.0;
  Vector values;
};

// Cover-weighted mean leaf value of one output.
double expected_value(const Tree& tree, std::size_t output);

// Adds scale * phi of one tree output at x into phi.
void tree_shap(const Tree& tree, std::span<const double> x, std::size_t output, double scale,
               Vector& phi);

bool is_tree_model(const Model& model);

// One attribution per model output (class scores for classifiers). Explains
// regression predictions, CART class proportions, forest vote fractions and
// boosted-tree margins. Throws ValidationError for non-tree models.
std::vector<Attribution> tree_shap(const Model& model, std::span<const double> x);

struct KernelShapConfig {
  std::size_t coalitions = 2048;
  std::uint64_t seed = 1;
};

// Weighted least squares over coalitions under the Shapley kernel with the
// efficiency constraint imposed exactly. Absent features take background
// values and predictions are averaged over the background rows. All
// coalitions are enumerated when they fit in the budget; otherwise sizes are
// drawn from the kernel distribution in complementary pairs.
std::vector<Attribution> kernel_shap(const Model& model, std::span<const double> x,
                                     const Matrix& background, const KernelShapConfig& config);

struct FeatureImportance {
  std::string feature;
  std::size_t column = 0;
  double mean_abs = 0.0;
};

struct GlobalExplanation {
  std::vector<FeatureImportance> ranking;  // descending mean |phi|
  std::vector<std::vector<Attribution>> rows;  // [row][output]
  std::vector<std::string> names;

  std::string ranking_csv() const;
  // feature,row,output,shap,value with the sample's feature values, for the
  // `top` highest-ranked features (0 = all).
  std::string beeswarm_csv(const Matrix& x, std::size_t top = 0) const;
};

// TreeSHAP for tree models, Kernel SHAP against `background` otherwise.
// Multi-output importances are summed across outputs. Ties keep column order.
GlobalExplanation global_importance(const Model& model, const Matrix& x,
                                    const std::vector<std::string>& names,
                                    const Matrix& background, const KernelShapConfig& config,
                                    int threads = 1);

struct KeywordProfile {
  std::size_t dimension = 0;
  std::vector<std::pair<std::string, double>> top;     // highest first
  std::vector<std::pair<std::string, double>> bottom;  // lowest first

  std::string to_text() const;
};

// Terms ranked by their input-vector component on `dimension`; ties are
// broken lexicographically. k is clamped to the vocabulary size.
KeywordProfile embedding_keywords(const EmbeddingTable& table, std::size_t dimension,
                                  std::size_t k = 15);

}  // namespace pricelens

#endif  // PRICELENS_EXPLAIN_HPP_
