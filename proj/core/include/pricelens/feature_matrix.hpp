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

#ifndef PRICELENS_FEATURE_MATRIX_HPP_
#define PRICELENS_FEATURE_MATRIX_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pricelens/common.hpp"

namespace pricelens {

// Which featurizer produced a column.
enum class Provenance { bow, tfidf, embedding, lda, bertopic, structured };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view name);

// Dense row-per-product matrix with named, provenance-tagged columns.
struct FeatureMatrix {
  Matrix values;
  std::vector<std::string> names;
  std::vector<Provenance> provenance;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  // Throws if names/provenance do not match the matrix width.
  void check_shape() const;

  FeatureMatrix select_columns(std::span<const std::size_t> columns) const;
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
};

FeatureMatrix hconcat(const FeatureMatrix& left, const FeatureMatrix& right);

// CSV with a header of column names; provenance goes in a second header row
// prefixed by "#provenance".
std::string to_csv(const FeatureMatrix& m);
FeatureMatrix feature_matrix_from_csv(std::string_view text);

}  // namespace pricelens

#endif  // PRICELENS_FEATURE_MATRIX_HPP_
