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

// Artifact-directory pipeline behind the command-line tool. Each stage reads
// the outputs of earlier stages, writes its own outputs and a manifest
// (config hash, input hashes, output hashes, versions) under manifests/.
// A stage whose manifest still matches is skipped as up to date.
//
// Layout under the output directory:
//   products.jsonl, stats.csv                      ingest
//   annotated.jsonl                                annotate
//   features/<rep>.csv, features/targets.csv,
//   features/vocabulary.csv, features/embeddings.txt featurize
//   selection/<task>_<rep>.csv                     select
//   models/<task>_<family>.json                    train
//   reports/<task>_grid.{txt,csv}                  evaluate
//   explain/<task>_{importance,beeswarm}.csv,
//   explain/<task>_keywords.txt                    explain
//   curves/<task>_mrmr.csv                         curve
//   report/...                                     report

#ifndef PRICELENS_PIPELINE_HPP_
#define PRICELENS_PIPELINE_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pricelens/config.hpp"

namespace pricelens {

inline constexpr std::string_view kPricelensVersion = "1.0.0";

struct StageManifest {
  std::string stage;
  std::string config_hash;
  std::map<std::string, std::string> inputs;   // artifact -> sha256
  std::map<std::string, std::string> outputs;  // artifact -> sha256
  std::map<std::string, std::string> versions;

  std::string to_json() const;
  static StageManifest from_json(std::string_view text);
};

struct StageOutcome {
  std::string stage;
  bool up_to_date = false;
  std::vector<std::string> outputs;  // relative to the output directory
};

class Pipeline {
 public:
  Pipeline(RunConfig config, int threads);

  static const std::vector<std::string>& stage_names();

  StageOutcome run(std::string_view stage);
  // Every stage in order.
  std::vector<StageOutcome> run_all();

  StageOutcome ingest();
  StageOutcome annotate();
  StageOutcome featurize();
  StageOutcome select();
  StageOutcome train();
  StageOutcome evaluate();
  StageOutcome explain();
  StageOutcome curve();
  StageOutcome report();

  const RunConfig& config() const { return config_; }
  std::string path(std::string_view artifact) const;

 private:
  using Outputs = std::map<std::string, std::string>;  // artifact -> contents
  template <typename Body>
  StageOutcome run_stage(const std::string& stage, const std::vector<std::string>& inputs,
                         Body body);
  std::string input_hash(const std::string& artifact) const;
  std::vector<DataProduct> annotated_products() const;
  FeatureMatrix features(Representation rep) const;

  RunConfig config_;
  int threads_;
  std::string hash_;
};

}  // namespace pricelens

#endif  // PRICELENS_PIPELINE_HPP_
