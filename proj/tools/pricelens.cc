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

// pricelens: command-line front end for the pricing pipeline.
//
// Exit codes: 0 success, 1 invalid input or configuration, 2 runtime failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pricelens/config.hpp"
#include "pricelens/pipeline.hpp"
#include "pricelens/synthetic.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Options {
  std::string config;
  std::string output_dir;
  int threads = 0;
  std::string log_level = "info";
};

pricelens::Pipeline make_pipeline(const Options& opt) {
  auto config = pricelens::load_run_config(opt.config);
  if (!opt.output_dir.empty()) config.output_dir = opt.output_dir;
  const int threads = opt.threads > 0 ? opt.threads : pricelens::default_threads();
  return pricelens::Pipeline(std::move(config), threads);
}

void print(const pricelens::StageOutcome& outcome) {
  std::cout << outcome.stage << (outcome.up_to_date ? " up-to-date" : " done") << "\n";
  for (const auto& artifact : outcome.outputs) std::cout << "  " << artifact << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-product price modelling: text features, mRMR, six learners, SHAP"};
  app.set_version_flag("--version", std::string(pricelens::kPricelensVersion));
  app.require_subcommand(1);

  Options opt;
  app.add_option("--threads", opt.threads, "Worker threads (0 = all cores); never changes results")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--log-level", opt.log_level, "trace, debug, info, warn, error or off");

  std::string stage_to_run;
  auto add_stage = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opt.config, "Run configuration (JSON)")->required();
    sub->add_option("-o,--output-dir", opt.output_dir, "Override output_dir from the config");
    sub->callback([&stage_to_run, name] { stage_to_run = name; });
    return sub;
  };
  add_stage("ingest", "Load listings and write products.jsonl and descriptive statistics");
  add_stage("annotate", "Fill refund levels and industry scores (LLM endpoint or offline rules)");
  add_stage("featurize", "Fit every representation on the full corpus and write feature tables");
  add_stage("select", "Run mRMR on the feature tables");
  add_stage("train", "Train each model family on the explained representation");
  add_stage("evaluate", "Cross-validate the representation x model grid");
  add_stage("explain", "SHAP importance, beeswarm data and embedding keyword profiles");
  add_stage("curve", "Metric curve over the number of mRMR-selected features");
  add_stage("report", "Assemble tables and plot data from the stage outputs");
  add_stage("run", "Run every stage in order");

  pricelens::SyntheticConfig synth;
  std::string synth_out;
  std::string synth_format;
  bool unannotated = false;
  auto* synth_cmd = app.add_subcommand("synth", "Write synthetic listings with planted price structure");
  synth_cmd->add_option("-o,--out", synth_out, "Output file (.csv or .jsonl)")->required();
  synth_cmd->add_option("--format", synth_format, "csv or jsonl (default: from extension)");
  synth_cmd->add_option("-n,--products", synth.products, "Number of listings")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--topics", synth.topics, "Planted topics (1-8)")
      ->check(CLI::Range(std::size_t{1}, pricelens::kMaxSyntheticTopics));
  synth_cmd->add_option("--noise", synth.noise_sd, "Noise sd on ln(price)")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_flag("--unannotated", unannotated,
                      "Leave refund levels and industry scores for `annotate`");
  synth_cmd->callback([&] { stage_to_run = "synth"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    pricelens::set_log_level(opt.log_level);
    if (stage_to_run == "synth") {
      synth.annotated = !unannotated;
      const auto corpus = pricelens::generate_synthetic(synth);
      const auto format = synth_format.empty() ? pricelens::data_format_from_path(synth_out)
                                               : pricelens::data_format_from_string(synth_format);
      pricelens::save_products(corpus.products, synth_out, format);
      std::cout << "wrote " << corpus.products.size() << " listings to " << synth_out << "\n";
      return 0;
    }
    auto pipeline = make_pipeline(opt);
    if (stage_to_run == "run") {
      for (const auto& outcome : pipeline.run_all()) print(outcome);
    } else {
      print(pipeline.run(stage_to_run));
    }
    return 0;
  } catch (const pricelens::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
