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

// Run configuration for the command-line pipeline, read from a JSON file.
//
// Top-level keys: seed (required), data, output_dir, target, representations,
// models, cv, mrmr, curve, explain, annotation. Relative paths resolve
// against the directory of the config file.

#ifndef PRICELENS_CONFIG_HPP_
#define PRICELENS_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pricelens/annotate.hpp"
#include "pricelens/corpus.hpp"
#include "pricelens/features.hpp"
#include "pricelens/grid.hpp"
#include "pricelens/models/model.hpp"

namespace pricelens {

struct CurveSettings {
  Representation representation = Representation::word2vec;
  Family family = Family::gbt;
  std::vector<std::size_t> m = {5, 10, 20, 40, 60, 80, 100};
};

struct ExplainSettings {
  Representation representation = Representation::word2vec;
  Family family = Family::gbt;
  std::size_t sample = 200;      // rows explained
  std::size_t background = 50;   // rows averaged by Kernel SHAP
  std::size_t coalitions = 2048;
  std::size_t top_features = 20;
  std::size_t keywords = 15;
};

struct RunConfig {
  std::string data_path;
  DataFormat data_format = DataFormat::csv;
  std::string output_dir = "pricelens-out";
  std::uint64_t seed = 0;

  std::vector<Task> tasks = {Task::regression, Task::classification};
  bool log_transform = true;
  std::vector<double> tier_cutpoints;

  std::vector<Representation> representations = all_representations();
  RepresentationConfig representation;
  std::string document_vectors;  // optional CSV for the cluster-topic path

  std::vector<ModelSpec> models;  // one per family, in configured order
  ModelSpec model_defaults;       // hyperparameter blocks shared by every family

  std::size_t folds = 5;
  std::optional<std::size_t> select_features;
  std::size_t mrmr_bins = kDefaultBins;

  CurveSettings curve;
  ExplainSettings explain;
  EndpointConfig annotation;

  TargetSpec target(Task task) const;
  ExperimentConfig experiment(Task task, int threads) const;
  // The hyperparameters used for `family`, whether or not it is in the grid.
  ModelSpec model(Family family) const;
};

// Errors are ValidationErrors citing the offending field path, for example
// "config: models.families[2]: unknown value 'catboost'".
RunConfig parse_run_config(std::string_view json_text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

// Canonical JSON with every default filled in. Hashing this gives the config
// hash recorded in stage manifests.
std::string canonical_config(const RunConfig& config);
std::string config_hash(const RunConfig& config);

}  // namespace pricelens

#endif  // PRICELENS_CONFIG_HPP_
