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

#include "pricelens/feature_matrix.hpp"

#include <charconv>

#include "pricelens/csv.hpp"

namespace pricelens {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::bow: return "bow";
    case Provenance::tfidf: return "tfidf";
    case Provenance::embedding: return "embedding";
    case Provenance::lda: return "lda";
    case Provenance::bertopic: return "bertopic";
    case Provenance::structured: return "structured";
  }
  return "unknown";
}

Provenance provenance_from_string(std::string_view name) {
  for (auto p : {Provenance::bow, Provenance::tfidf, Provenance::embedding, Provenance::lda,
                 Provenance::bertopic, Provenance::structured}) {
    if (to_string(p) == name) return p;
  }
  throw ParseError("unknown provenance tag: " + std::string(name));
}

void FeatureMatrix::check_shape() const {
  if (names.size() != static_cast<std::size_t>(values.cols()) ||
      provenance.size() != names.size()) {
    throw ValidationError("feature matrix: column metadata does not match width");
  }
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> columns) const {
  FeatureMatrix out;
  out.values.resize(values.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] >= names.size()) throw ValidationError("feature matrix: column out of range");
    out.values.col(static_cast<Eigen::Index>(c)) =
        values.col(static_cast<Eigen::Index>(columns[c]));
    out.names.push_back(names[columns[c]]);
    out.provenance.push_back(provenance[columns[c]]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out;
  out.names = names;
  out.provenance = provenance;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.values.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

FeatureMatrix hconcat(const FeatureMatrix& left, const FeatureMatrix& right) {
  if (left.cols() == 0) return right;
  if (right.cols() == 0) return left;
  if (left.rows() != right.rows()) throw ValidationError("hconcat: row counts differ");
  FeatureMatrix out;
  out.values.resize(left.rows(), left.cols() + right.cols());
  out.values << left.values, right.values;
  out.names = left.names;
  out.names.insert(out.names.end(), right.names.begin(), right.names.end());
  out.provenance = left.provenance;
  out.provenance.insert(out.provenance.end(), right.provenance.begin(), right.provenance.end());
  return out;
}

std::string to_csv(const FeatureMatrix& m) {
  m.check_shape();
  std::string out = csv::format_row(m.names);
  csv::Row prov;
  for (std::size_t c = 0; c < m.provenance.size(); ++c) {
    prov.push_back((c == 0 ? "#provenance:" : "") + std::string(to_string(m.provenance[c])));
  }
  if (!prov.empty()) out += csv::format_row(prov);
  csv::Row row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row[static_cast<std::size_t>(j)] = csv::format_double(m.values(i, j));
    }
    out += csv::format_row(row);
  }
  return out;
}

FeatureMatrix feature_matrix_from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("feature csv: missing header");
  FeatureMatrix m;
  m.names = rows[0];
  std::size_t first_data = 1;
  if (rows.size() > 1 && !rows[1].empty() && rows[1][0].starts_with("#provenance:")) {
    for (std::size_t c = 0; c < rows[1].size(); ++c) {
      std::string_view tag = rows[1][c];
      if (c == 0) tag.remove_prefix(std::string_view("#provenance:").size());
      m.provenance.push_back(provenance_from_string(tag));
    }
    first_data = 2;
  } else {
    m.provenance.assign(m.names.size(), Provenance::embedding);
  }
  m.values.resize(static_cast<Eigen::Index>(rows.size() - first_data),
                  static_cast<Eigen::Index>(m.names.size()));
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    if (rows[r].size() != m.names.size()) {
      throw ParseError("feature csv: row " + std::to_string(r - first_data) + " has " +
                       std::to_string(rows[r].size()) + " fields");
    }
    for (std::size_t c = 0; c < m.names.size(); ++c) {
      const auto& cell = rows[r][c];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("feature csv: row " + std::to_string(r - first_data) +
                         ": non-numeric value \"" + cell + "\"");
      }
      m.values(static_cast<Eigen::Index>(r - first_data), static_cast<Eigen::Index>(c)) = v;
    }
  }
  m.check_shape();
  return m;
}

}  // namespace pricelens
