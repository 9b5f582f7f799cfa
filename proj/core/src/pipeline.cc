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

#include "pricelens/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "json.hpp"
#include "pricelens/annotate.hpp"
#include "pricelens/csv.hpp"
#include "pricelens/explain.hpp"
#include "pricelens/text.hpp"

namespace fs = std::filesystem;

namespace pricelens {

namespace {

// Inputs that live outside the output directory.
constexpr std::string_view kDataInput = "data";
constexpr std::string_view kVectorsInput = "document_vectors";

std::string task_name(Task t) { return std::string(to_string(t)); }

// Which stage produces an artifact, for "run X first" errors.
std::string producer_of(const std::string& artifact) {
  if (artifact == "products.jsonl" || artifact == "stats.csv") return "ingest";
  if (artifact == "annotated.jsonl") return "annotate";
  const auto dir = artifact.substr(0, artifact.find('/'));
  if (dir == "features") return "featurize";
  if (dir == "selection") return "select";
  if (dir == "models") return "train";
  if (dir == "reports") return "evaluate";
  if (dir == "explain") return "explain";
  if (dir == "curves") return "curve";
  return "ingest";
}

std::vector<std::size_t> selected_ids(const std::string& trace_csv) {
  const auto rows = csv::parse(trace_csv);
  std::vector<std::size_t> ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) throw ParseError("selection trace: malformed row " + std::to_string(r));
    ids.push_back(static_cast<std::size_t>(std::stoull(rows[r][1])));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::shared_ptr<const Matrix> document_vectors(const RunConfig& config) {
  if (config.document_vectors.empty()) return nullptr;
  return std::make_shared<const Matrix>(
      load_document_vectors_csv(read_file(config.document_vectors)));
}

}  // namespace

std::string StageManifest::to_json() const {
  nlohmann::json j;
  j["stage"] = stage;
  j["config_hash"] = config_hash;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["versions"] = versions;
  return j.dump(2) + "\n";
}

StageManifest StageManifest::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    StageManifest m;
    m.stage = j.at("stage").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    m.versions = j.at("versions").get<std::map<std::string, std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
}

Pipeline::Pipeline(RunConfig config, int threads)
    : config_(std::move(config)), threads_(threads), hash_(config_hash(config_)) {}

const std::vector<std::string>& Pipeline::stage_names() {
  static const std::vector<std::string> names = {"ingest", "annotate", "featurize",
                                                 "select", "train",    "evaluate",
                                                 "explain", "curve",   "report"};
  return names;
}

StageOutcome Pipeline::run(std::string_view stage) {
  if (stage == "ingest") return ingest();
  if (stage == "annotate") return annotate();
  if (stage == "featurize") return featurize();
  if (stage == "select") return select();
  if (stage == "train") return train();
  if (stage == "evaluate") return evaluate();
  if (stage == "explain") return explain();
  if (stage == "curve") return curve();
  if (stage == "report") return report();
  throw ValidationError("unknown stage: " + std::string(stage));
}

std::vector<StageOutcome> Pipeline::run_all() {
  std::vector<StageOutcome> out;
  for (const auto& s : stage_names()) {
    if (s == "select" && !config_.select_features) continue;
    out.push_back(run(s));
  }
  return out;
}

std::string Pipeline::path(std::string_view artifact) const {
  return (fs::path(config_.output_dir) / fs::path(artifact)).string();
}

std::string Pipeline::input_hash(const std::string& artifact) const {
  if (artifact == kDataInput) {
    if (config_.data_path.empty()) throw ValidationError("config: data.path is required for ingest");
    if (!fs::exists(config_.data_path)) {
      throw ValidationError("data file not found: " + config_.data_path);
    }
    return sha256_file(config_.data_path);
  }
  if (artifact == kVectorsInput) {
    if (!fs::exists(config_.document_vectors)) {
      throw ValidationError("document vectors not found: " + config_.document_vectors);
    }
    return sha256_file(config_.document_vectors);
  }
  const auto p = path(artifact);
  if (!fs::exists(p)) {
    throw ValidationError("missing " + artifact + " in " + config_.output_dir + "; run `pricelens " +
                          producer_of(artifact) + "` first");
  }
  return sha256_file(p);
}

template <typename Body>
StageOutcome Pipeline::run_stage(const std::string& stage, const std::vector<std::string>& inputs,
                                 Body body) {
  StageManifest m;
  m.stage = stage;
  m.config_hash = hash_;
  for (const auto& in : inputs) m.inputs[in] = input_hash(in);
  m.versions = {{"pricelens", std::string(kPricelensVersion)},
                {"model_format", std::to_string(kModelFormatVersion)},
                {"stopwords", std::string(kStopwordListVersion)}};

  const auto manifest_path = path("manifests/" + stage + ".json");
  StageOutcome outcome;
  outcome.stage = stage;
  if (fs::exists(manifest_path)) {
    try {
      const auto old = StageManifest::from_json(read_file(manifest_path));
      bool fresh = old.config_hash == m.config_hash && old.inputs == m.inputs &&
                   old.versions == m.versions;
      for (const auto& [artifact, digest] : old.outputs) {
        if (!fresh) break;
        const auto p = path(artifact);
        fresh = fs::exists(p) && sha256_file(p) == digest;
      }
      if (fresh) {
        log_info(stage + ": up-to-date");
        outcome.up_to_date = true;
        for (const auto& [artifact, digest] : old.outputs) outcome.outputs.push_back(artifact);
        return outcome;
      }
    } catch (const ParseError&) {
      log_warning(stage + ": ignoring unreadable manifest " + manifest_path);
    }
  }

  Outputs outputs = body();
  for (const auto& [artifact, contents] : outputs) {
    const auto p = path(artifact);
    fs::create_directories(fs::path(p).parent_path());
    write_file_atomic(p, contents);
    m.outputs[artifact] = sha256_hex(contents);
    outcome.outputs.push_back(artifact);
  }
  fs::create_directories(fs::path(manifest_path).parent_path());
  write_file_atomic(manifest_path, m.to_json());
  log_info(stage + ": wrote " + std::to_string(outputs.size()) + " artifact(s)");
  return outcome;
}

std::vector<DataProduct> Pipeline::annotated_products() const {
  return parse_products_jsonl(read_file(path("annotated.jsonl")));
}

FeatureMatrix Pipeline::features(Representation rep) const {
  return feature_matrix_from_csv(read_file(path("features/" + std::string(to_string(rep)) + ".csv")));
}

StageOutcome Pipeline::ingest() {
  return run_stage("ingest", {std::string(kDataInput)}, [&] {
    const auto products = load_products(config_.data_path, config_.data_format);
    if (products.empty()) throw ValidationError("ingest: " + config_.data_path + " has no products");
    Outputs out;
    out["products.jsonl"] = serialize_products_jsonl(products);
    if (products.size() >= 2) out["stats.csv"] = stats_to_csv(describe(products));
    return out;
  });
}

StageOutcome Pipeline::annotate() {
  return run_stage("annotate", {"products.jsonl"}, [&] {
    auto products = parse_products_jsonl(read_file(path("products.jsonl")));
    annotate_products(products, config_.annotation);
    for (const auto& p : products) validate(p);
    return Outputs{{"annotated.jsonl", serialize_products_jsonl(products)}};
  });
}

StageOutcome Pipeline::featurize() {
  std::vector<std::string> inputs = {"annotated.jsonl"};
  if (!config_.document_vectors.empty()) inputs.push_back(std::string(kVectorsInput));
  return run_stage("featurize", inputs, [&] {
    const auto products = annotated_products();
    const auto docs = tokenize_products(products);
    const auto vectors = document_vectors(config_);
    std::vector<Representation> reps = config_.representations;
    for (Representation r : {config_.explain.representation, config_.curve.representation}) {
      if (std::find(reps.begin(), reps.end(), r) == reps.end()) reps.push_back(r);
    }
    std::vector<std::optional<FittedRepresentation>> fitted(reps.size());
    parallel_for(reps.size(), threads_, [&](std::size_t i) {
      fitted[i] = fit_representation(reps[i], docs, config_.representation,
                                     representation_seed(config_.seed, reps[i], config_.folds),
                                     vectors.get());
    });
    Outputs out;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const auto combined = combine_features(fitted[i]->training_features(), products,
                                             config_.representation.include_structured);
      out["features/" + std::string(to_string(reps[i])) + ".csv"] = to_csv(combined);
      if (i == 0) out["features/vocabulary.csv"] = fitted[i]->vocabulary().to_csv();
      if (const auto* table = fitted[i]->embeddings()) {
        out["features/embeddings.txt"] = table->to_text();
      }
    }
    std::string targets = "id";
    std::vector<Vector> columns;
    for (Task t : config_.tasks) {
      targets += "," + task_name(t);
      columns.push_back(make_targets(products, config_.target(t)));
    }
    targets += "\n";
    for (std::size_t r = 0; r < products.size(); ++r) {
      std::vector<std::string> row = {products[r].id};
      for (const auto& c : columns) row.push_back(csv::format_double(c(static_cast<Eigen::Index>(r))));
      targets += csv::format_row(row);
    }
    out["features/targets.csv"] = targets;
    return out;
  });
}

namespace {

Vector target_column(const std::string& csv_text, Task task) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty()) throw ParseError("targets.csv: missing header");
  const auto& header = rows[0];
  const auto it = std::find(header.begin(), header.end(), std::string(to_string(task)));
  if (it == header.end()) {
    throw ValidationError("targets.csv has no " + std::string(to_string(task)) +
                          " column; rerun `pricelens featurize`");
  }
  const auto col = static_cast<std::size_t>(it - header.begin());
  Vector y(static_cast<Eigen::Index>(rows.size() - 1));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    y(static_cast<Eigen::Index>(r - 1)) = std::stod(rows[r].at(col));
  }
  return y;
}

}  // namespace

StageOutcome Pipeline::select() {
  std::vector<std::string> inputs = {"features/targets.csv"};
  for (auto r : config_.representations) {
    inputs.push_back("features/" + std::string(to_string(r)) + ".csv");
  }
  return run_stage("select", inputs, [&] {
    Outputs out;
    const auto targets = read_file(path("features/targets.csv"));
    for (Task t : config_.tasks) {
      const auto y = target_column(targets, t);
      const auto labels = discretize_target(y, t);
      for (auto r : config_.representations) {
        const auto x = features(r);
        const std::size_t m =
            config_.select_features.value_or(static_cast<std::size_t>(x.cols()));
        const auto trace = mrmr_select(x, labels, m, {config_.mrmr_bins, threads_});
        out["selection/" + task_name(t) + "_" + std::string(to_string(r)) + ".csv"] =
            trace.to_csv();
      }
    }
    return out;
  });
}

StageOutcome Pipeline::train() {
  const auto rep = std::string(to_string(config_.explain.representation));
  std::vector<std::string> inputs = {"features/targets.csv", "features/" + rep + ".csv"};
  if (config_.select_features) {
    if (std::find(config_.representations.begin(), config_.representations.end(),
                  config_.explain.representation) == config_.representations.end()) {
      throw ValidationError("config: explain.representation must be listed in "
                            "representations.use when mrmr.select is set");
    }
    for (Task t : config_.tasks) inputs.push_back("selection/" + task_name(t) + "_" + rep + ".csv");
  }
  std::vector<ModelSpec> specs = config_.models;
  if (std::none_of(specs.begin(), specs.end(),
                   [&](const ModelSpec& s) { return s.family == config_.explain.family; })) {
    specs.push_back(config_.model(config_.explain.family));
  }
  return run_stage("train", inputs, [&] {
    Outputs out;
    const auto all = features(config_.explain.representation);
    const auto targets = read_file(path("features/targets.csv"));
    for (Task t : config_.tasks) {
      const auto y = target_column(targets, t);
      FeatureMatrix x = all;
      if (config_.select_features) {
        const auto ids =
            selected_ids(read_file(path("selection/" + task_name(t) + "_" + rep + ".csv")));
        x = all.select_columns(ids);
      }
      const std::size_t classes = class_count(config_.target(t));
      std::vector<std::string> blobs(specs.size());
      // Families train one after another; each fit uses the worker budget.
      for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto model = fit_model(specs[i], x, y, t, classes,
                                     model_seed(config_.seed, specs[i].family, config_.folds),
                                     threads_);
        blobs[i] = serialize_model(model);
      }
      for (std::size_t i = 0; i < specs.size(); ++i) {
        out["models/" + task_name(t) + "_" + std::string(to_string(specs[i].family)) + ".json"] =
            blobs[i];
      }
    }
    return out;
  });
}

StageOutcome Pipeline::evaluate() {
  std::vector<std::string> inputs = {"annotated.jsonl"};
  if (!config_.document_vectors.empty()) inputs.push_back(std::string(kVectorsInput));
  return run_stage("evaluate", inputs, [&] {
    const auto products = annotated_products();
    const auto vectors = document_vectors(config_);
    Outputs out;
    for (Task t : config_.tasks) {
      auto exp = config_.experiment(t, threads_);
      exp.document_vectors = vectors;
      const auto report = run_grid(products, exp);
      out["reports/" + task_name(t) + "_grid.txt"] = report.to_text();
      out["reports/" + task_name(t) + "_grid.csv"] = report.to_csv();
    }
    return out;
  });
}

StageOutcome Pipeline::explain() {
  const auto& ex = config_.explain;
  const auto rep = std::string(to_string(ex.representation));
  const auto family = std::string(to_string(ex.family));
  std::vector<std::string> inputs = {"features/" + rep + ".csv"};
  for (Task t : config_.tasks) inputs.push_back("models/" + task_name(t) + "_" + family + ".json");
  if (ex.representation == Representation::word2vec) inputs.push_back("features/embeddings.txt");
  return run_stage("explain", inputs, [&] {
    Outputs out;
    const auto all = features(ex.representation);
    const auto n = static_cast<std::size_t>(all.rows());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(config_.seed, 0x300));
    shuffle(order, rng);
    std::vector<std::size_t> sample(order.begin(), order.begin() + std::min(ex.sample, n));
    std::vector<std::size_t> background(order.begin(),
                                        order.begin() + std::min(ex.background, n));
    std::sort(sample.begin(), sample.end());
    std::sort(background.begin(), background.end());
    std::optional<EmbeddingTable> table;
    if (ex.representation == Representation::word2vec) {
      table = EmbeddingTable::from_text(read_file(path("features/embeddings.txt")));
    }
    for (Task t : config_.tasks) {
      const auto model =
          load_model(path("models/" + task_name(t) + "_" + family + ".json"), t);
      std::vector<std::size_t> columns;
      for (const auto& name : model.manifest) {
        const auto it = std::find(all.names.begin(), all.names.end(), name);
        if (it == all.names.end()) {
          throw ValidationError("explain: model column '" + name +
                                "' is missing from the features; rerun `pricelens train`");
        }
        columns.push_back(static_cast<std::size_t>(it - all.names.begin()));
      }
      const auto x = all.select_columns(columns);
      const auto xs = x.select_rows(sample);
      const auto bg = x.select_rows(background);
      KernelShapConfig shap;
      shap.coalitions = ex.coalitions;
      shap.seed = mix_seed(config_.seed, 0x301);
      const auto g = global_importance(*model.model, xs.values, xs.names, bg.values, shap, threads_);
      const auto prefix = "explain/" + task_name(t);
      out[prefix + "_importance.csv"] = g.ranking_csv();
      out[prefix + "_beeswarm.csv"] = g.beeswarm_csv(xs.values, ex.top_features);
      if (table) {
        std::string text;
        const std::size_t top = std::min(ex.top_features, g.ranking.size());
        for (std::size_t k = 0; k < top; ++k) {
          const auto& name = g.ranking[k].feature;
          if (!name.starts_with("embedding_")) continue;
          const auto dim = static_cast<std::size_t>(std::stoull(name.substr(10)));
          if (!text.empty()) text += "\n";
          text += embedding_keywords(*table, dim, ex.keywords).to_text();
        }
        out[prefix + "_keywords.txt"] = text;
      }
    }
    return out;
  });
}

StageOutcome Pipeline::curve() {
  std::vector<std::string> inputs = {"annotated.jsonl"};
  if (!config_.document_vectors.empty()) inputs.push_back(std::string(kVectorsInput));
  return run_stage("curve", inputs, [&] {
    const auto products = annotated_products();
    const auto vectors = document_vectors(config_);
    Outputs out;
    for (Task t : config_.tasks) {
      auto exp = config_.experiment(t, threads_);
      exp.document_vectors = vectors;
      const auto c = feature_curve(products, config_.curve.representation,
                                   config_.model(config_.curve.family), config_.curve.m, exp);
      out["curves/" + task_name(t) + "_mrmr.csv"] = c.to_csv();
    }
    return out;
  });
}

StageOutcome Pipeline::report() {
  // Every upstream manifest must come from the current configuration.
  auto check = [&](const std::string& stage, bool required) {
    const auto p = path("manifests/" + stage + ".json");
    if (!fs::exists(p)) {
      if (required) {
        throw ValidationError("missing manifests/" + stage + ".json; run `pricelens " + stage +
                              "` first");
      }
      return false;
    }
    const auto m = StageManifest::from_json(read_file(p));
    if (m.config_hash != hash_) {
      throw ValidationError("report: " + stage + " artifacts were produced with a different "
                            "configuration; rerun `pricelens " + stage + "`");
    }
    return true;
  };
  check("ingest", false);
  check("evaluate", true);
  const bool has_curve = check("curve", false);
  const bool has_explain = check("explain", false);

  std::vector<std::string> inputs;
  for (Task t : config_.tasks) {
    inputs.push_back("reports/" + task_name(t) + "_grid.txt");
    inputs.push_back("reports/" + task_name(t) + "_grid.csv");
    if (has_curve) inputs.push_back("curves/" + task_name(t) + "_mrmr.csv");
    if (has_explain) {
      inputs.push_back("explain/" + task_name(t) + "_importance.csv");
      inputs.push_back("explain/" + task_name(t) + "_beeswarm.csv");
    }
  }
  const bool has_stats = fs::exists(path("stats.csv"));
  if (has_stats) inputs.push_back("stats.csv");

  return run_stage("report", inputs, [&] {
    Outputs out;
    std::string summary = "pricelens report\n";
    summary += "config " + hash_ + "\n";
    summary += "seed " + std::to_string(config_.seed) + ", " + std::to_string(config_.folds) +
               "-fold cross-validation\n";
    if (config_.log_transform) {
      summary += "regression metrics are computed on ln(price)\n";
    }
    for (Task t : config_.tasks) {
      const auto name = task_name(t);
      summary += "\n" + read_file(path("reports/" + name + "_grid.txt"));
      out["report/" + name + "_table.csv"] = read_file(path("reports/" + name + "_grid.csv"));
      if (has_curve) {
        out["report/" + name + "_mrmr_curve.csv"] = read_file(path("curves/" + name + "_mrmr.csv"));
      }
      if (has_explain) {
        const auto ranking = read_file(path("explain/" + name + "_importance.csv"));
        out["report/" + name + "_importance.csv"] = ranking;
        out["report/" + name + "_shap_beeswarm.csv"] =
            read_file(path("explain/" + name + "_beeswarm.csv"));
        const auto rows = csv::parse(ranking);
        summary += "\nTop features by mean |SHAP| (" +
                   std::string(display_name(config_.explain.family, t)) + ", " +
                   std::string(display_name(config_.explain.representation)) + ")\n";
        for (std::size_t r = 1; r < rows.size() && r <= 10; ++r) {
          char value[32];
          std::snprintf(value, sizeof value, "%.4f", std::stod(rows[r][2]));
          summary += "  " + rows[r][0] + ". " + rows[r][1] + "  " + value + "\n";
        }
      }
    }
    if (has_stats) out["report/descriptive_stats.csv"] = read_file(path("stats.csv"));
    out["report/summary.txt"] = summary;
    return out;
  });
}

}  // namespace pricelens
