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

#include "json_io.hpp"

#include <algorithm>
#include <optional>

namespace pricelens::json_io {

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(path + ": ragged row " + std::to_string(i));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ParseError(path + ": non-numeric entry in row " + std::to_string(i));
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(path + ": non-numeric entry " + std::to_string(i));
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& path) {
  if (!j.is_object()) throw ValidationError("config: " + path + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("config: unknown field " + path + "." + key);
    }
  }
}

namespace {

template <typename T>
void read_optional(const Json& j, std::string_view key, std::optional<T>& out,
                   const std::string& path) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) return;
  if (it->is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(j, key, value, path);
  out = value;
}

template <typename T>
void put_optional(Json& j, std::string_view key, const std::optional<T>& v) {
  if (v) j[std::string(key)] = *v;
}

}  // namespace

Json spec_to_json(const ModelSpec& s) {
  Json j;
  j["family"] = to_string(s.family);
  j["linear"] = {{"ridge", s.linear.ridge},
                 {"learning_rate", s.linear.learning_rate},
                 {"epochs", s.linear.epochs},
                 {"batch_size", s.linear.batch_size},
                 {"l2", s.linear.l2}};
  j["mlp"] = {{"hidden", s.mlp.hidden},
              {"activation", to_string(s.mlp.activation)},
              {"learning_rate", s.mlp.learning_rate},
              {"epochs", s.mlp.epochs},
              {"batch_size", s.mlp.batch_size},
              {"l2", s.mlp.l2}};
  j["cart"] = {{"max_depth", s.cart.max_depth}, {"min_leaf", s.cart.min_leaf}};
  j["svm"] = {{"c", s.svm.c},
              {"epsilon", s.svm.epsilon},
              {"kernel", to_string(s.svm.kernel)},
              {"tol", s.svm.tol},
              {"max_iterations", s.svm.max_iterations}};
  put_optional(j["svm"], "gamma", s.svm.gamma);
  j["forest"] = {{"trees", s.forest.trees},
                 {"max_depth", s.forest.max_depth},
                 {"min_leaf", s.forest.min_leaf}};
  put_optional(j["forest"], "sample_size", s.forest.sample_size);
  put_optional(j["forest"], "max_features", s.forest.max_features);
  j["gbt"] = {{"rounds", s.gbt.rounds},
              {"learning_rate", s.gbt.learning_rate},
              {"lambda", s.gbt.lambda},
              {"gamma", s.gbt.gamma},
              {"max_depth", s.gbt.max_depth},
              {"min_leaf", s.gbt.min_leaf}};
  put_optional(j["gbt"], "base_score", s.gbt.base_score);
  return j;
}

void apply_spec_json(const Json& j, ModelSpec& s, const std::string& path) {
  if (auto it = j.find("linear"); it != j.end()) {
    const std::string p = path + ".linear";
    reject_unknown(*it, {"ridge", "learning_rate", "epochs", "batch_size", "l2"}, p);
    read(*it, "ridge", s.linear.ridge, p);
    read(*it, "learning_rate", s.linear.learning_rate, p);
    read(*it, "epochs", s.linear.epochs, p);
    read(*it, "batch_size", s.linear.batch_size, p);
    read(*it, "l2", s.linear.l2, p);
    if (s.linear.ridge < 0) throw ValidationError("config: " + p + ".ridge must be >= 0");
  }
  if (auto it = j.find("mlp"); it != j.end()) {
    const std::string p = path + ".mlp";
    reject_unknown(*it, {"hidden", "activation", "learning_rate", "epochs", "batch_size", "l2"}, p);
    read(*it, "hidden", s.mlp.hidden, p);
    std::string act(to_string(s.mlp.activation));
    read(*it, "activation", act, p);
    try {
      s.mlp.activation = activation_from_string(act);
    } catch (const ValidationError&) {
      throw ValidationError("config: " + p + ".activation: unknown value '" + act + "'");
    }
    read(*it, "learning_rate", s.mlp.learning_rate, p);
    read(*it, "epochs", s.mlp.epochs, p);
    read(*it, "batch_size", s.mlp.batch_size, p);
    read(*it, "l2", s.mlp.l2, p);
    if (s.mlp.hidden.empty()) throw ValidationError("config: " + p + ".hidden must not be empty");
  }
  if (auto it = j.find("cart"); it != j.end()) {
    const std::string p = path + ".cart";
    reject_unknown(*it, {"max_depth", "min_leaf"}, p);
    read(*it, "max_depth", s.cart.max_depth, p);
    read(*it, "min_leaf", s.cart.min_leaf, p);
  }
  if (auto it = j.find("svm"); it != j.end()) {
    const std::string p = path + ".svm";
    reject_unknown(*it, {"c", "epsilon", "kernel", "gamma", "tol", "max_iterations"}, p);
    read(*it, "c", s.svm.c, p);
    read(*it, "epsilon", s.svm.epsilon, p);
    std::string kernel(to_string(s.svm.kernel));
    read(*it, "kernel", kernel, p);
    try {
      s.svm.kernel = kernel_from_string(kernel);
    } catch (const ValidationError&) {
      throw ValidationError("config: " + p + ".kernel: unknown value '" + kernel + "'");
    }
    read_optional(*it, "gamma", s.svm.gamma, p);
    read(*it, "tol", s.svm.tol, p);
    read(*it, "max_iterations", s.svm.max_iterations, p);
    if (s.svm.c <= 0) throw ValidationError("config: " + p + ".c must be positive");
  }
  if (auto it = j.find("forest"); it != j.end()) {
    const std::string p = path + ".forest";
    reject_unknown(*it, {"trees", "sample_size", "max_features", "max_depth", "min_leaf"}, p);
    read(*it, "trees", s.forest.trees, p);
    read_optional(*it, "sample_size", s.forest.sample_size, p);
    read_optional(*it, "max_features", s.forest.max_features, p);
    read(*it, "max_depth", s.forest.max_depth, p);
    read(*it, "min_leaf", s.forest.min_leaf, p);
    if (s.forest.trees < 1) throw ValidationError("config: " + p + ".trees must be >= 1");
  }
  if (auto it = j.find("gbt"); it != j.end()) {
    const std::string p = path + ".gbt";
    reject_unknown(*it,
                   {"rounds", "learning_rate", "lambda", "gamma", "max_depth", "min_leaf",
                    "base_score"},
                   p);
    read(*it, "rounds", s.gbt.rounds, p);
    read(*it, "learning_rate", s.gbt.learning_rate, p);
    read(*it, "lambda", s.gbt.lambda, p);
    read(*it, "gamma", s.gbt.gamma, p);
    read(*it, "max_depth", s.gbt.max_depth, p);
    read(*it, "min_leaf", s.gbt.min_leaf, p);
    read_optional(*it, "base_score", s.gbt.base_score, p);
    if (s.gbt.rounds < 1) throw ValidationError("config: " + p + ".rounds must be >= 1");
  }
}

ModelSpec spec_from_json(const Json& j, const std::string& path) {
  reject_unknown(j, {"family", "linear", "mlp", "cart", "svm", "forest", "gbt"}, path);
  ModelSpec s;
  std::string family;
  read(j, "family", family, path);
  try {
    s.family = family_from_string(family);
  } catch (const ValidationError&) {
    throw ValidationError("config: " + path + ".family: unknown value '" + family + "'");
  }
  apply_spec_json(j, s, path);
  return s;
}

}  // namespace pricelens::json_io
