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

// Cross-validated experiments: representation x model grids in the layout of
// the published comparison tables, and feature-count curves under mRMR.

#ifndef PRICELENS_GRID_HPP_
#define PRICELENS_GRID_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pricelens/corpus.hpp"
#include "pricelens/eval.hpp"
#include "pricelens/featsel.hpp"
#include "pricelens/features.hpp"
#include "pricelens/models/model.hpp"

namespace pricelens {

struct ExperimentConfig {
  TargetSpec target;
  std::vector<Representation> representations = all_representations();
  std::vector<ModelSpec> models;
  RepresentationConfig representation;
  std::size_t folds = 5;
  std::uint64_t seed = 1;
  // When set, each training fold keeps its top-m mRMR columns.
  std::optional<std::size_t> select_features;
  std::size_t mrmr_bins = kDefaultBins;
  int threads = 1;
  // Optional document vectors (one row per product) for the cluster-topic
  // representation instead of pooled skip-gram vectors.
  std::shared_ptr<const Matrix> document_vectors;
};

// Stage seeds derived from the master seed.
std::uint64_t fold_plan_seed(std::uint64_t seed);
std::uint64_t representation_seed(std::uint64_t seed, Representation r, std::size_t fold);
std::uint64_t model_seed(std::uint64_t seed, Family f, std::size_t fold);

std::size_t class_count(const TargetSpec& target);

struct FoldData {
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  FeatureMatrix train;
  FeatureMatrix test;
  Vector y_train;
  Vector y_test;
  std::optional<SelectionTrace> trace;
};

// Fits the representation on the training rows only, transforms the held-out
// rows, appends structured columns and applies mRMR when configured.
FoldData featurize_fold(std::span<const DataProduct> products, std::span<const TokenList> docs,
                        const Vector& targets, Representation rep, const ExperimentConfig& config,
                        const FoldPlan& plan, std::size_t fold);

struct CellResult {
  std::vector<std::vector<double>> fold_metrics;  // [fold][metric]
  std::vector<double> mean;                       // [metric], NaN when undefined
  Vector predictions;                             // out-of-fold, per product
  Matrix scores;                                  // out-of-fold class scores
  std::string error;                              // non-empty if the cell failed

  bool ok() const { return error.empty(); }
};

// Trains and evaluates one model spec on prepared folds.
CellResult evaluate_folds(std::span<const FoldData> folds, const ModelSpec& spec, Task task,
                          std::size_t classes, std::uint64_t seed, std::size_t rows);

struct ExperimentReport {
  Task task = Task::regression;
  std::size_t folds = 0;
  bool log_targets = true;
  std::vector<std::string> metrics;
  std::vector<Representation> representations;
  std::vector<Family> families;
  std::vector<std::vector<CellResult>> cells;  // [representation][family]
  std::vector<std::vector<double>> row_mean;   // [metric][representation]
  std::vector<std::vector<int>> rank;          // [metric][representation], 1 = best

  // Aligned text in the methods x models layout with a block per metric.
  std::string to_text() const;
  // Metric,Method,<families...>,ME|MR,Rank
  std::string to_csv() const;
};

// Computes row means over successful cells and ranks (ties to the earlier row).
void finalize_report(ExperimentReport& report);

ExperimentReport run_grid(std::span<const DataProduct> products, const ExperimentConfig& config);

struct CurvePoint {
  std::size_t m = 0;
  std::vector<double> metrics;
};

struct FeatureCurve {
  Task task = Task::regression;
  Representation representation = Representation::bow;
  Family family = Family::gbt;
  std::vector<std::string> metrics;
  std::vector<CurvePoint> points;

  std::string to_csv() const;
};

// For each m, trains on the training fold's top-m mRMR columns (kept in
// their original column order) and reports the cross-validated metrics.
FeatureCurve feature_curve(std::span<const DataProduct> products, Representation rep,
                           const ModelSpec& spec, std::span<const std::size_t> m_values,
                           const ExperimentConfig& config);

}  // namespace pricelens

#endif  // PRICELENS_GRID_HPP_
