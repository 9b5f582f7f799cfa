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

#include <gtest/gtest.h>

#include <filesystem>

#include "pricelens/pipeline.hpp"
#include "support.hpp"

namespace pricelens {
namespace {

RunConfig small_config(const std::filesystem::path& out, std::uint64_t seed = 1) {
  auto c = parse_run_config(R"({
    "seed": 1,
    "data": {"path": "synthetic60.csv"},
    "representations": {"use": ["tfidf", "lda"], "lda": {"topics": 4, "iterations": 40}},
    "models": {"families": ["linear", "gbt"], "gbt": {"rounds": 20}},
    "curve": {"representation": "lda", "family": "gbt", "m": [2, 6]},
    "explain": {"representation": "lda", "family": "gbt", "sample": 20, "background": 10}
  })", PRICELENS_DATA_DIR);
  c.seed = seed;
  c.output_dir = out.string();
  return c;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(Pipeline, MissingUpstreamNamesTheCommand) {
  const auto dir = testing::scratch_dir("pipeline-missing");
  Pipeline p(small_config(dir), 1);
  EXPECT_NE(message_of([&] { p.featurize(); }).find("pricelens annotate"), std::string::npos);
  EXPECT_NE(message_of([&] { p.annotate(); }).find("pricelens ingest"), std::string::npos);
  EXPECT_NE(message_of([&] { p.report(); }).find("pricelens evaluate"), std::string::npos);
  EXPECT_THROW(p.run("nonsense"), ValidationError);
}

TEST(Pipeline, RerunIsUpToDate) {
  const auto dir = testing::scratch_dir("pipeline-rerun");
  Pipeline p(small_config(dir), 1);
  const auto first = p.run_all();
  for (const auto& o : first) EXPECT_FALSE(o.up_to_date) << o.stage;
  const auto grid = read_file(p.path("reports/regression_grid.csv"));
  EXPECT_NE(grid.find("Rank"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(p.path("report/summary.txt")));
  EXPECT_TRUE(std::filesystem::exists(p.path("manifests/evaluate.json")));

  Pipeline again(small_config(dir), 2);
  for (const auto& o : again.run_all()) EXPECT_TRUE(o.up_to_date) << o.stage;
  EXPECT_EQ(read_file(p.path("reports/regression_grid.csv")), grid);

  // Touching an output invalidates its stage.
  write_file_atomic(p.path("reports/regression_grid.csv"), "tampered");
  EXPECT_FALSE(again.evaluate().up_to_date);
  EXPECT_EQ(read_file(p.path("reports/regression_grid.csv")), grid);
}

TEST(Pipeline, ReportRefusesMixedConfigurations) {
  const auto dir = testing::scratch_dir("pipeline-mixed");
  Pipeline a(small_config(dir, 1), 1);
  for (const char* stage : {"ingest", "annotate", "featurize", "evaluate"}) a.run(stage);
  EXPECT_NO_THROW(a.report());
  Pipeline b(small_config(dir, 2), 1);
  const auto msg = message_of([&] { b.report(); });
  EXPECT_NE(msg.find("different"), std::string::npos) << msg;
}

TEST(Pipeline, ManifestRoundTrip) {
  StageManifest m;
  m.stage = "train";
  m.config_hash = "abc";
  m.inputs = {{"features/lda.csv", "01"}};
  m.outputs = {{"models/regression_gbt.json", "02"}};
  m.versions = {{"pricelens", std::string(kPricelensVersion)}};
  const auto back = StageManifest::from_json(m.to_json());
  EXPECT_EQ(back.stage, m.stage);
  EXPECT_EQ(back.inputs, m.inputs);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(back.versions, m.versions);
  EXPECT_THROW(StageManifest::from_json("[]"), ParseError);
}

}  // namespace
}  // namespace pricelens
