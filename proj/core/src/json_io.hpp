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

// JSON helpers shared by model files and run configs. Private to the library.

#ifndef PRICELENS_SRC_JSON_IO_HPP_
#define PRICELENS_SRC_JSON_IO_HPP_

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pricelens/common.hpp"
#include "pricelens/models/model.hpp"

namespace pricelens::json_io {

using Json = nlohmann::json;

Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Matrix matrix_from_json(const Json& j, const std::string& path);
Vector vector_from_json(const Json& j, const std::string& path);

// Throws ValidationError naming path.key when `j` has a key not in `allowed`.
void reject_unknown(const Json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& path);

// Reads j[key] into out when present; type errors cite path.key.
template <typename T>
void read(const Json& j, std::string_view key, T& out, const std::string& path) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("config: " + path + "." + std::string(key) + " has the wrong type");
  }
}

Json spec_to_json(const ModelSpec& spec);
// Missing fields keep their defaults. Family must be present.
ModelSpec spec_from_json(const Json& j, const std::string& path);
// Applies only the fields present in j on top of `base`.
void apply_spec_json(const Json& j, ModelSpec& base, const std::string& path);

}  // namespace pricelens::json_io

#endif  // PRICELENS_SRC_JSON_IO_HPP_
