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

// Family dispatch, the persisted model envelope and model files.

#ifndef PRICELENS_MODELS_MODEL_HPP_
#define PRICELENS_MODELS_MODEL_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pricelens/feature_matrix.hpp"
#include "pricelens/models/base.hpp"
#include "pricelens/models/forest.hpp"
#include "pricelens/models/gbt.hpp"
#include "pricelens/models/linear.hpp"
#include "pricelens/models/mlp.hpp"
#include "pricelens/models/ovr.hpp"
#include "pricelens/models/svm.hpp"
#include "pricelens/models/tree.hpp"

namespace pricelens {

inline constexpr std::string_view kModelFormat = "pricelens-model";
inline constexpr int kModelFormatVersion = 1;

// Hyperparameters of every family; `family` picks which block applies.
struct ModelSpec {
  Family family = Family::gbt;
  LinearConfig linear;
  MlpConfig mlp;
  TreeConfig cart;
  SvmConfig svm;
  ForestConfig forest;
  GbtConfig gbt;
};

struct TrainedModel {
  ModelSpec spec;
  Task task = Task::regression;
  std::size_t classes = 0;               // 0 for regression
  std::vector<std::string> manifest;     // training feature columns, in order
  std::uint64_t seed = 0;
  std::shared_ptr<const Model> model;

  Family family() const { return spec.family; }
  // Throws if the columns differ from the manifest.
  void check_manifest(const std::vector<std::string>& names) const;
  Matrix scores(const FeatureMatrix& x) const;
  Vector predict(const FeatureMatrix& x) const;
};

// Classification uses one-vs-rest binary members for every family except the
// MLP (softmax head), CART and forests (multiclass leaves).
TrainedModel fit_model(const ModelSpec& spec, const FeatureMatrix& x, const Vector& y, Task task,
                       std::size_t classes, std::uint64_t seed, int threads = 1);

std::string serialize_model(const TrainedModel& model);
// Throws ParseError on malformed content or an unsupported format version.
TrainedModel deserialize_model(std::string_view text);

void save_model(const TrainedModel& model, const std::string& path);
// expected_task, when set, rejects a model trained for the other task.
TrainedModel load_model(const std::string& path, std::optional<Task> expected_task = std::nullopt);

}  // namespace pricelens

#endif  // PRICELENS_MODELS_MODEL_HPP_
