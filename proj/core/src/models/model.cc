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

#include "pricelens/models/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "../json_io.hpp"

namespace pricelens {

using json_io::Json;

std::string_view to_string(Family family) {
  switch (family) {
    case Family::linear: return "linear";
    case Family::mlp: return "mlp";
    case Family::cart: return "cart";
    case Family::svm: return "svm";
    case Family::forest: return "forest";
    case Family::gbt: return "gbt";
  }
  return "unknown";
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> all = {Family::linear, Family::mlp,    Family::cart,
                                          Family::svm,    Family::forest, Family::gbt};
  return all;
}

Family family_from_string(std::string_view name) {
  for (auto f : all_families()) {
    if (to_string(f) == name) return f;
  }
  throw ValidationError("unknown model family: " + std::string(name));
}

std::string_view display_name(Family family, Task task) {
  switch (family) {
    case Family::linear: return "LR";
    case Family::mlp: return "ANN";
    case Family::cart: return "DT";
    case Family::svm: return task == Task::regression ? "SVR" : "SVM";
    case Family::forest: return "RF";
    case Family::gbt: return "XGBoost";
  }
  return "unknown";
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Vector argmax_rows(const Matrix& scores) {
  Vector out(scores.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    out(i) = static_cast<double>(argmax(row_span(scores, i)));
  }
  return out;
}

Vector Model::predict(const Matrix& x) const {
  const Matrix s = scores(x);
  if (task() == Task::regression) return s.col(0);
  return argmax_rows(s);
}

void TrainedModel::check_manifest(const std::vector<std::string>& names) const {
  if (names == manifest) return;
  std::string detail;
  if (names.size() != manifest.size()) {
    detail = "expected " + std::to_string(manifest.size()) + " columns, got " +
             std::to_string(names.size());
  } else {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] != manifest[i]) {
        detail = "column " + std::to_string(i) + " is '" + names[i] + "', expected '" +
                 manifest[i] + "'";
        break;
      }
    }
  }
  throw ValidationError("model: feature columns do not match the training manifest (" + detail +
                        ")");
}

Matrix TrainedModel::scores(const FeatureMatrix& x) const {
  check_manifest(x.names);
  return model->scores(x.values);
}

Vector TrainedModel::predict(const FeatureMatrix& x) const {
  check_manifest(x.names);
  return model->predict(x.values);
}

TrainedModel fit_model(const ModelSpec& spec, const FeatureMatrix& x, const Vector& y, Task task,
                       std::size_t classes, std::uint64_t seed, int threads) {
  x.check_shape();
  if (x.rows() != y.size()) throw ValidationError("fit: target length does not match rows");
  if (task == Task::classification && classes < 2) {
    throw ValidationError("fit: classification needs at least 2 classes");
  }
  TrainedModel out;
  out.spec = spec;
  out.task = task;
  out.classes = task == Task::classification ? classes : 0;
  out.manifest = x.names;
  out.seed = seed;
  const Matrix& X = x.values;
  const bool cls = task == Task::classification;
  switch (spec.family) {
    case Family::linear:
      if (!cls) {
        out.model = std::make_shared<LinearRegression>(fit_linear(X, y, spec.linear.ridge));
      } else {
        out.model = std::make_shared<OvrModel>(one_vs_rest(
            Family::linear,
            [&](const Matrix& xm, const Vector& y01, std::size_t k) {
              return std::make_shared<LogisticRegression>(
                  fit_logistic(xm, y01, spec.linear, mix_seed(seed, k)));
            },
            X, y, classes, threads));
      }
      break;
    case Family::mlp:
      out.model = std::make_shared<MlpModel>(fit_mlp(X, y, task, classes, spec.mlp, seed));
      break;
    case Family::cart:
      out.model = std::make_shared<CartModel>(fit_cart(X, y, task, classes, spec.cart));
      break;
    case Family::svm:
      if (!cls) {
        out.model = std::make_shared<SvrModel>(fit_svr(X, y, spec.svm));
      } else {
        out.model = std::make_shared<OvrModel>(one_vs_rest(
            Family::svm,
            [&](const Matrix& xm, const Vector& y01, std::size_t) {
              return std::make_shared<SvcModel>(fit_svc(xm, 2.0 * y01.array() - 1.0, spec.svm));
            },
            X, y, classes, threads));
      }
      break;
    case Family::forest:
      out.model = std::make_shared<ForestModel>(
          fit_forest(X, y, task, classes, spec.forest, seed, threads));
      break;
    case Family::gbt:
      if (!cls) {
        out.model = std::make_shared<GbtRegressor>(
            fit_boosted_trees(X, y, BoostLoss::squared, spec.gbt));
      } else {
        out.model = std::make_shared<OvrModel>(one_vs_rest(
            Family::gbt,
            [&](const Matrix& xm, const Vector& y01, std::size_t) {
              return std::make_shared<GbtBinary>(
                  fit_boosted_trees(xm, y01, BoostLoss::logistic, spec.gbt));
            },
            X, y, classes, threads));
      }
      break;
  }
  return out;
}

namespace {

Json tree_json(const Tree& t) {
  Json feature = Json::array(), threshold = Json::array(), left = Json::array(),
       right = Json::array(), cover = Json::array();
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    cover.push_back(n.cover);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"cover", cover},         {"values", json_io::to_json(t.values)}};
}

Tree tree_from_json(const Json& j) {
  Tree t;
  const auto& f = j.at("feature");
  const std::size_t n = f.size();
  if (j.at("threshold").size() != n || j.at("left").size() != n || j.at("right").size() != n ||
      j.at("cover").size() != n) {
    throw ParseError("model: tree arrays have inconsistent lengths");
  }
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = t.nodes[i];
    node.feature = f[i].get<int>();
    node.threshold = j["threshold"][i].get<double>();
    node.left = j["left"][i].get<int>();
    node.right = j["right"][i].get<int>();
    node.cover = j["cover"][i].get<double>();
    const bool leaf = node.left < 0;
    if (!leaf && (node.left <= static_cast<int>(i) || node.right <= static_cast<int>(i) ||
                  node.left >= static_cast<int>(n) || node.right >= static_cast<int>(n) ||
                  node.feature < 0)) {
      throw ParseError("model: tree node " + std::to_string(i) + " has invalid children");
    }
  }
  t.values = json_io::matrix_from_json(j.at("values"), "values");
  if (static_cast<std::size_t>(t.values.rows()) != n) {
    throw ParseError("model: tree values do not match the node count");
  }
  return t;
}

Json trees_json(const std::vector<Tree>& trees) {
  Json arr = Json::array();
  for (const auto& t : trees) arr.push_back(tree_json(t));
  return arr;
}

std::vector<Tree> trees_from_json(const Json& j) {
  std::vector<Tree> out;
  for (const auto& t : j) out.push_back(tree_from_json(t));
  if (out.empty()) throw ParseError("model: empty tree ensemble");
  return out;
}

Json boosted_json(const BoostedTrees& b) {
  return {{"base_score", b.base_score},
          {"learning_rate", b.learning_rate},
          {"trees", trees_json(b.trees)}};
}

BoostedTrees boosted_from_json(const Json& j) {
  BoostedTrees b;
  b.base_score = j.at("base_score").get<double>();
  b.learning_rate = j.at("learning_rate").get<double>();
  b.trees = trees_from_json(j.at("trees"));
  return b;
}

Json scaler_json(const Standardizer& s) {
  return {{"mean", json_io::to_json(s.mean)}, {"scale", json_io::to_json(s.scale)}};
}

Standardizer scaler_from_json(const Json& j) {
  Standardizer s;
  s.mean = json_io::vector_from_json(j.at("mean"), "mean");
  s.scale = json_io::vector_from_json(j.at("scale"), "scale");
  return s;
}

Json expansion_json(const KernelExpansion& f) {
  return {{"scaler", scaler_json(f.scaler)},
          {"kernel", to_string(f.kernel.kind)},
          {"gamma", f.kernel.gamma},
          {"support", json_io::to_json(f.support)},
          {"coef", json_io::to_json(f.coef)},
          {"bias", f.bias}};
}

KernelExpansion expansion_from_json(const Json& j) {
  KernelExpansion f;
  f.scaler = scaler_from_json(j.at("scaler"));
  f.kernel.kind = kernel_from_string(j.at("kernel").get<std::string>());
  f.kernel.gamma = j.at("gamma").get<double>();
  f.support = json_io::matrix_from_json(j.at("support"), "support");
  f.coef = json_io::vector_from_json(j.at("coef"), "coef");
  f.bias = j.at("bias").get<double>();
  if (f.support.rows() != f.coef.size()) throw ParseError("model: support/coef size mismatch");
  if (f.support.rows() == 0) f.support.resize(0, f.scaler.mean.size());
  return f;
}

Json member_json(const BinaryClassifier& m) {
  if (auto* c = dynamic_cast<const ConstantClassifier*>(&m)) {
    return {{"kind", "constant"}, {"score", c->score()}};
  }
  if (auto* l = dynamic_cast<const LogisticRegression*>(&m)) {
    return {{"kind", "logistic"},
            {"weights", json_io::to_json(l->weights())},
            {"intercept", l->intercept()}};
  }
  if (auto* s = dynamic_cast<const SvcModel*>(&m)) {
    return {{"kind", "svc"}, {"expansion", expansion_json(s->expansion())}};
  }
  if (auto* g = dynamic_cast<const GbtBinary*>(&m)) {
    return {{"kind", "gbt"}, {"ensemble", boosted_json(g->ensemble())}};
  }
  throw Error("model: unsupported one-vs-rest member type");
}

std::shared_ptr<const BinaryClassifier> member_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return std::make_shared<ConstantClassifier>(j.at("score").get<double>());
  if (kind == "logistic") {
    return std::make_shared<LogisticRegression>(
        json_io::vector_from_json(j.at("weights"), "weights"), j.at("intercept").get<double>());
  }
  if (kind == "svc") return std::make_shared<SvcModel>(expansion_from_json(j.at("expansion")));
  if (kind == "gbt") return std::make_shared<GbtBinary>(boosted_from_json(j.at("ensemble")));
  throw ParseError("model: unknown member kind '" + kind + "'");
}

Json params_json(const Model& m) {
  if (auto* o = dynamic_cast<const OvrModel*>(&m)) {
    Json members = Json::array();
    for (const auto& mem : o->members()) members.push_back(member_json(*mem));
    return {{"members", members}};
  }
  if (auto* l = dynamic_cast<const LinearRegression*>(&m)) {
    return {{"weights", json_io::to_json(l->weights())},
            {"intercept", l->intercept()},
            {"rank_deficient", l->rank_deficient()}};
  }
  if (auto* p = dynamic_cast<const MlpModel*>(&m)) {
    Json layers = Json::array();
    const auto& net = p->network();
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      layers.push_back({{"weights", json_io::to_json(net.weights[l])},
                        {"bias", json_io::to_json(net.biases[l])}});
    }
    return {{"scaler", scaler_json(p->scaler())},
            {"activation", to_string(net.activation)},
            {"softmax", net.softmax_output},
            {"layers", layers},
            {"y_mean", p->y_mean()},
            {"y_scale", p->y_scale()}};
  }
  if (auto* c = dynamic_cast<const CartModel*>(&m)) return {{"tree", tree_json(c->tree())}};
  if (auto* f = dynamic_cast<const ForestModel*>(&m)) return {{"trees", trees_json(f->trees())}};
  if (auto* g = dynamic_cast<const GbtRegressor*>(&m)) {
    return {{"ensemble", boosted_json(g->ensemble())}};
  }
  if (auto* s = dynamic_cast<const SvrModel*>(&m)) {
    return {{"expansion", expansion_json(s->expansion())}};
  }
  throw Error("model: unsupported model type");
}

std::shared_ptr<const Model> model_from_json(Family family, Task task, const Json& p) {
  const bool cls = task == Task::classification;
  const bool ovr = cls && (family == Family::linear || family == Family::svm || family == Family::gbt);
  if (ovr) {
    std::vector<std::shared_ptr<const BinaryClassifier>> members;
    for (const auto& m : p.at("members")) members.push_back(member_from_json(m));
    if (members.size() < 2) throw ParseError("model: one-vs-rest needs at least 2 members");
    return std::make_shared<OvrModel>(family, std::move(members));
  }
  switch (family) {
    case Family::linear:
      return std::make_shared<LinearRegression>(json_io::vector_from_json(p.at("weights"), "weights"),
                                                p.at("intercept").get<double>(),
                                                p.at("rank_deficient").get<bool>());
    case Family::mlp: {
      MlpNetwork net;
      net.activation = activation_from_string(p.at("activation").get<std::string>());
      net.softmax_output = p.at("softmax").get<bool>();
      for (const auto& l : p.at("layers")) {
        net.weights.push_back(json_io::matrix_from_json(l.at("weights"), "weights"));
        net.biases.push_back(json_io::vector_from_json(l.at("bias"), "bias"));
      }
      if (net.weights.empty()) throw ParseError("model: mlp has no layers");
      return std::make_shared<MlpModel>(task, scaler_from_json(p.at("scaler")), std::move(net),
                                        p.at("y_mean").get<double>(), p.at("y_scale").get<double>());
    }
    case Family::cart:
      return std::make_shared<CartModel>(task, tree_from_json(p.at("tree")));
    case Family::forest:
      return std::make_shared<ForestModel>(task, trees_from_json(p.at("trees")));
    case Family::gbt:
      return std::make_shared<GbtRegressor>(boosted_from_json(p.at("ensemble")));
    case Family::svm:
      return std::make_shared<SvrModel>(expansion_from_json(p.at("expansion")));
  }
  throw ParseError("model: unknown family");
}

}  // namespace

std::string serialize_model(const TrainedModel& m) {
  Json j;
  j["format"] = kModelFormat;
  j["format_version"] = kModelFormatVersion;
  j["family"] = to_string(m.family());
  j["task"] = to_string(m.task);
  j["classes"] = m.classes;
  j["hyperparameters"] = json_io::spec_to_json(m.spec);
  j["manifest"] = m.manifest;
  j["seed"] = m.seed;
  j["params"] = params_json(*m.model);
  return j.dump(1) + "\n";
}

TrainedModel deserialize_model(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", std::string()) != kModelFormat) {
      throw ParseError("model: not a pricelens model file");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ParseError("model: unsupported format_version " + std::to_string(version) +
                       " (this build reads " + std::to_string(kModelFormatVersion) + ")");
    }
    TrainedModel m;
    m.spec = json_io::spec_from_json(j.at("hyperparameters"), "hyperparameters");
    const Family family = family_from_string(j.at("family").get<std::string>());
    if (family != m.spec.family) throw ParseError("model: family does not match hyperparameters");
    m.task = task_from_string(j.at("task").get<std::string>());
    m.classes = j.at("classes").get<std::size_t>();
    m.manifest = j.at("manifest").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.model = model_from_json(family, m.task, j.at("params"));
    if (m.task == Task::classification && m.model->outputs() != m.classes) {
      throw ParseError("model: class count does not match the parameters");
    }
    return m;
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(std::string("model: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: malformed content: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  write_file_atomic(path, serialize_model(model));
}

TrainedModel load_model(const std::string& path, std::optional<Task> expected_task) {
  auto m = deserialize_model(read_file(path));
  if (expected_task && *expected_task != m.task) {
    throw ValidationError("model: " + path + " was trained for " + std::string(to_string(m.task)) +
                          " but the pipeline expects " + std::string(to_string(*expected_task)));
  }
  return m;
}

}  // namespace pricelens
