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

#include "pricelens/config.hpp"

#include <algorithm>
#include <filesystem>

#include "json_io.hpp"

namespace pricelens {

using json_io::Json;
using json_io::read;
using json_io::reject_unknown;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError("config: " + path + ": " + message);
}

template <typename E, typename F>
E parse_enum(const Json& j, const std::string& path, F from_string) {
  if (!j.is_string()) fail(path, "expected a string");
  const auto name = j.get<std::string>();
  try {
    return from_string(name);
  } catch (const ValidationError&) {
    fail(path, "unknown value '" + name + "'");
  }
}

template <typename E, typename F>
std::vector<E> parse_enum_list(const Json& j, const std::string& path, F from_string) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list");
  std::vector<E> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const E value = parse_enum<E>(j[i], path + "[" + std::to_string(i) + "]", from_string);
    if (std::find(out.begin(), out.end(), value) != out.end()) {
      fail(path + "[" + std::to_string(i) + "]", "duplicate entry");
    }
    out.push_back(value);
  }
  return out;
}

const Json* section(const Json& root, const char* key) {
  const auto it = root.find(key);
  if (it == root.end()) return nullptr;
  if (!it->is_object()) fail(key, "expected an object");
  return &*it;
}

void need_positive(std::size_t value, const std::string& path) {
  if (value == 0) fail(path, "must be positive");
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

// Unsigned fields reject negative JSON numbers, which nlohmann would wrap.
void check_unsigned(const Json& j, std::initializer_list<const char*> keys,
                    const std::string& path) {
  for (const char* key : keys) {
    const auto it = j.find(key);
    if (it != j.end() && it->is_number() && !it->is_number_unsigned()) {
      fail(path + "." + key, "must be a non-negative integer");
    }
  }
}

}  // namespace

TargetSpec RunConfig::target(Task task) const {
  TargetSpec t;
  t.kind = task;
  t.log_transform = log_transform;
  t.tier_cutpoints = tier_cutpoints;
  return t;
}

ExperimentConfig RunConfig::experiment(Task task, int threads) const {
  ExperimentConfig e;
  e.target = target(task);
  e.representations = representations;
  e.models = models;
  e.representation = representation;
  e.folds = folds;
  e.seed = seed;
  e.select_features = select_features;
  e.mrmr_bins = mrmr_bins;
  e.threads = threads;
  return e;
}

ModelSpec RunConfig::model(Family family) const {
  ModelSpec spec = model_defaults;
  spec.family = family;
  return spec;
}

RunConfig parse_run_config(std::string_view json_text, const std::string& base_dir) {
  Json root = Json::parse(json_text, nullptr, false);
  if (root.is_discarded()) throw ParseError("config: not valid JSON");
  if (!root.is_object()) throw ValidationError("config: top level must be an object");
  reject_unknown(root,
                 {"seed", "data", "output_dir", "target", "representations", "models", "cv",
                  "mrmr", "curve", "explain", "annotation"},
                 "");

  RunConfig c;
  if (!root.contains("seed")) fail("seed", "is required");
  if (!root["seed"].is_number_unsigned()) fail("seed", "must be a non-negative integer");
  c.seed = root["seed"].get<std::uint64_t>();

  if (const Json* d = section(root, "data")) {
    reject_unknown(*d, {"path", "format"}, "data");
    read(*d, "path", c.data_path, "data");
    if (c.data_path.empty()) fail("data.path", "must not be empty");
    c.data_format = data_format_from_path(c.data_path);
    if (d->contains("format")) {
      c.data_format = parse_enum<DataFormat>((*d)["format"], "data.format", data_format_from_string);
    }
    c.data_path = resolve(base_dir, c.data_path);
  }
  read(root, "output_dir", c.output_dir, "");
  if (c.output_dir.empty()) fail("output_dir", "must not be empty");
  c.output_dir = resolve(base_dir, c.output_dir);

  if (const Json* t = section(root, "target")) {
    reject_unknown(*t, {"tasks", "log_transform", "tier_cutpoints"}, "target");
    if (t->contains("tasks")) {
      c.tasks = parse_enum_list<Task>((*t)["tasks"], "target.tasks", task_from_string);
    }
    read(*t, "log_transform", c.log_transform, "target");
    read(*t, "tier_cutpoints", c.tier_cutpoints, "target");
    if (!c.tier_cutpoints.empty()) {
      if (c.tier_cutpoints.size() != kTierCount - 1) {
        fail("target.tier_cutpoints", "needs exactly 4 values");
      }
      for (std::size_t i = 1; i < c.tier_cutpoints.size(); ++i) {
        if (!(c.tier_cutpoints[i] > c.tier_cutpoints[i - 1])) {
          fail("target.tier_cutpoints[" + std::to_string(i) + "]", "must be strictly ascending");
        }
      }
    }
  }

  if (const Json* r = section(root, "representations")) {
    const std::string p = "representations";
    reject_unknown(*r, {"use", "max_terms", "include_structured", "skipgram", "lda",
                        "lda_inference_iterations", "cluster", "document_vectors"},
                   p);
    if (r->contains("use")) {
      c.representations =
          parse_enum_list<Representation>((*r)["use"], p + ".use", representation_from_string);
    }
    check_unsigned(*r, {"max_terms", "lda_inference_iterations"}, p);
    auto& rc = c.representation;
    read(*r, "max_terms", rc.max_terms, p);
    read(*r, "include_structured", rc.include_structured, p);
    read(*r, "lda_inference_iterations", rc.lda_inference_iterations, p);
    read(*r, "document_vectors", c.document_vectors, p);
    c.document_vectors = resolve(base_dir, c.document_vectors);
    need_positive(rc.max_terms, p + ".max_terms");
    if (auto it = r->find("skipgram"); it != r->end()) {
      const std::string q = p + ".skipgram";
      reject_unknown(*it, {"dimension", "window", "epochs", "learning_rate", "negatives"}, q);
      check_unsigned(*it, {"dimension", "window", "epochs", "negatives"}, q);
      read(*it, "dimension", rc.skipgram.dimension, q);
      read(*it, "window", rc.skipgram.window, q);
      read(*it, "epochs", rc.skipgram.epochs, q);
      read(*it, "learning_rate", rc.skipgram.learning_rate, q);
      read(*it, "negatives", rc.skipgram.negatives, q);
      need_positive(rc.skipgram.dimension, q + ".dimension");
      need_positive(rc.skipgram.window, q + ".window");
      need_positive(rc.skipgram.epochs, q + ".epochs");
      if (!(rc.skipgram.learning_rate > 0)) fail(q + ".learning_rate", "must be positive");
    }
    if (auto it = r->find("lda"); it != r->end()) {
      const std::string q = p + ".lda";
      reject_unknown(*it, {"topics", "alpha", "beta", "iterations"}, q);
      check_unsigned(*it, {"topics", "iterations"}, q);
      read(*it, "topics", rc.lda.topics, q);
      if (it->contains("alpha") && !(*it)["alpha"].is_null()) {
        double a = 0;
        read(*it, "alpha", a, q);
        if (!(a > 0)) fail(q + ".alpha", "must be positive");
        rc.lda.alpha = a;
      }
      read(*it, "beta", rc.lda.beta, q);
      read(*it, "iterations", rc.lda.iterations, q);
      need_positive(rc.lda.topics, q + ".topics");
      if (!(rc.lda.beta > 0)) fail(q + ".beta", "must be positive");
    }
    if (auto it = r->find("cluster"); it != r->end()) {
      const std::string q = p + ".cluster";
      reject_unknown(*it, {"reduce_dims", "clusters", "min_cluster_size", "outlier_quantile",
                           "max_iterations"},
                     q);
      check_unsigned(*it, {"reduce_dims", "clusters", "min_cluster_size", "max_iterations"}, q);
      read(*it, "reduce_dims", rc.cluster.reduce_dims, q);
      read(*it, "clusters", rc.cluster.clusters, q);
      read(*it, "min_cluster_size", rc.cluster.min_cluster_size, q);
      read(*it, "outlier_quantile", rc.cluster.outlier_quantile, q);
      read(*it, "max_iterations", rc.cluster.max_iterations, q);
      need_positive(rc.cluster.reduce_dims, q + ".reduce_dims");
      need_positive(rc.cluster.clusters, q + ".clusters");
      if (!(rc.cluster.outlier_quantile > 0 && rc.cluster.outlier_quantile <= 1)) {
        fail(q + ".outlier_quantile", "must be in (0,1]");
      }
    }
  }

  std::vector<Family> families = all_families();
  const Json* m = section(root, "models");
  if (m) {
    reject_unknown(*m, {"families", "linear", "mlp", "cart", "svm", "forest", "gbt"}, "models");
    if (m->contains("families")) {
      families = parse_enum_list<Family>((*m)["families"], "models.families", family_from_string);
    }
  }
  if (m) json_io::apply_spec_json(*m, c.model_defaults, "models");
  for (Family f : families) c.models.push_back(c.model(f));

  if (const Json* cv = section(root, "cv")) {
    reject_unknown(*cv, {"folds"}, "cv");
    check_unsigned(*cv, {"folds"}, "cv");
    read(*cv, "folds", c.folds, "cv");
    if (c.folds < 2) fail("cv.folds", "must be at least 2");
  }

  if (const Json* s = section(root, "mrmr")) {
    reject_unknown(*s, {"select", "bins"}, "mrmr");
    check_unsigned(*s, {"select", "bins"}, "mrmr");
    if (s->contains("select") && !(*s)["select"].is_null()) {
      std::size_t k = 0;
      read(*s, "select", k, "mrmr");
      need_positive(k, "mrmr.select");
      c.select_features = k;
    }
    read(*s, "bins", c.mrmr_bins, "mrmr");
    if (c.mrmr_bins < 2) fail("mrmr.bins", "must be at least 2");
  }

  if (const Json* cu = section(root, "curve")) {
    reject_unknown(*cu, {"representation", "family", "m"}, "curve");
    if (cu->contains("representation")) {
      c.curve.representation = parse_enum<Representation>(
          (*cu)["representation"], "curve.representation", representation_from_string);
    }
    if (cu->contains("family")) {
      c.curve.family = parse_enum<Family>((*cu)["family"], "curve.family", family_from_string);
    }
    if (cu->contains("m")) {
      const Json& list = (*cu)["m"];
      if (!list.is_array() || list.empty()) fail("curve.m", "expected a non-empty list");
      c.curve.m.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string q = "curve.m[" + std::to_string(i) + "]";
        if (!list[i].is_number_unsigned() || list[i].get<std::size_t>() == 0) {
          fail(q, "must be a positive integer");
        }
        const auto v = list[i].get<std::size_t>();
        if (!c.curve.m.empty() && v <= c.curve.m.back()) fail(q, "must be strictly ascending");
        c.curve.m.push_back(v);
      }
    }
  }

  if (const Json* e = section(root, "explain")) {
    const std::string p = "explain";
    reject_unknown(*e, {"representation", "family", "sample", "background", "coalitions",
                        "top_features", "keywords"},
                   p);
    if (e->contains("representation")) {
      c.explain.representation = parse_enum<Representation>(
          (*e)["representation"], p + ".representation", representation_from_string);
    }
    if (e->contains("family")) {
      c.explain.family = parse_enum<Family>((*e)["family"], p + ".family", family_from_string);
    }
    check_unsigned(*e, {"sample", "background", "coalitions", "top_features", "keywords"}, p);
    read(*e, "sample", c.explain.sample, p);
    read(*e, "background", c.explain.background, p);
    read(*e, "coalitions", c.explain.coalitions, p);
    read(*e, "top_features", c.explain.top_features, p);
    read(*e, "keywords", c.explain.keywords, p);
    need_positive(c.explain.sample, p + ".sample");
    need_positive(c.explain.background, p + ".background");
    need_positive(c.explain.keywords, p + ".keywords");
  }

  if (const Json* a = section(root, "annotation")) {
    const std::string p = "annotation";
    reject_unknown(*a, {"url", "model", "api_key_env", "timeout_seconds", "retries", "backoff_ms",
                        "cache_dir", "batch_size"},
                   p);
    auto& ep = c.annotation;
    check_unsigned(*a, {"batch_size"}, p);
    read(*a, "url", ep.url, p);
    read(*a, "model", ep.model, p);
    read(*a, "api_key_env", ep.api_key_env, p);
    read(*a, "timeout_seconds", ep.timeout_seconds, p);
    read(*a, "retries", ep.retries, p);
    read(*a, "backoff_ms", ep.backoff_ms, p);
    read(*a, "cache_dir", ep.cache_dir, p);
    read(*a, "batch_size", ep.batch_size, p);
    ep.cache_dir = resolve(base_dir, ep.cache_dir);
    if (!(ep.timeout_seconds > 0)) fail(p + ".timeout_seconds", "must be positive");
    if (ep.retries < 0) fail(p + ".retries", "must be >= 0");
    if (ep.backoff_ms < 0) fail(p + ".backoff_ms", "must be >= 0");
    need_positive(ep.batch_size, p + ".batch_size");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ValidationError("config file not found: " + path);
  const auto base = std::filesystem::path(path).parent_path().string();
  return parse_run_config(read_file(path), base.empty() ? "." : base);
}

std::string canonical_config(const RunConfig& c) {
  Json j;
  j["seed"] = c.seed;
  // Input files are hashed by content as stage inputs, so their paths are left
  // out: the same data reached through a different path is the same run.
  j["data"] = {{"format", c.data_format == DataFormat::csv ? "csv" : "jsonl"}};
  Json tasks = Json::array();
  for (Task t : c.tasks) tasks.push_back(std::string(to_string(t)));
  j["target"] = {{"tasks", tasks},
                 {"log_transform", c.log_transform},
                 {"tier_cutpoints", c.tier_cutpoints}};
  Json reps = Json::array();
  for (auto r : c.representations) reps.push_back(std::string(to_string(r)));
  const auto& rc = c.representation;
  j["representations"] = {
      {"use", reps},
      {"max_terms", rc.max_terms},
      {"include_structured", rc.include_structured},
      {"lda_inference_iterations", rc.lda_inference_iterations},
      {"document_vectors", !c.document_vectors.empty()},
      {"skipgram",
       {{"dimension", rc.skipgram.dimension},
        {"window", rc.skipgram.window},
        {"epochs", rc.skipgram.epochs},
        {"learning_rate", rc.skipgram.learning_rate},
        {"negatives", rc.skipgram.negatives}}},
      {"lda",
       {{"topics", rc.lda.topics},
        {"alpha", rc.lda.effective_alpha()},
        {"beta", rc.lda.beta},
        {"iterations", rc.lda.iterations}}},
      {"cluster",
       {{"reduce_dims", rc.cluster.reduce_dims},
        {"clusters", rc.cluster.clusters},
        {"min_cluster_size", rc.cluster.min_cluster_size},
        {"outlier_quantile", rc.cluster.outlier_quantile},
        {"max_iterations", rc.cluster.max_iterations}}}};
  Json models = Json::array();
  for (const auto& m : c.models) models.push_back(json_io::spec_to_json(m));
  j["models"] = models;
  j["cv"] = {{"folds", c.folds}};
  j["mrmr"] = {{"select", c.select_features ? Json(*c.select_features) : Json(nullptr)},
               {"bins", c.mrmr_bins}};
  j["curve"] = {{"representation", std::string(to_string(c.curve.representation))},
                {"family", std::string(to_string(c.curve.family))},
                {"m", c.curve.m},
                {"model", json_io::spec_to_json(c.model(c.curve.family))}};
  j["explain"] = {{"representation", std::string(to_string(c.explain.representation))},
                  {"family", std::string(to_string(c.explain.family))},
                  {"sample", c.explain.sample},
                  {"background", c.explain.background},
                  {"coalitions", c.explain.coalitions},
                  {"top_features", c.explain.top_features},
                  {"keywords", c.explain.keywords},
                  {"model", json_io::spec_to_json(c.model(c.explain.family))}};
  // Endpoint details other than the model do not change annotation results
  // once cached, so only the model name and URL are part of the identity.
  j["annotation"] = {{"url", c.annotation.url}, {"model", c.annotation.model}};
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) { return sha256_hex(canonical_config(config)); }

}  // namespace pricelens
