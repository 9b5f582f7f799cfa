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

// Small helpers shared by the test binaries.

#ifndef PRICELENS_TESTS_SUPPORT_HPP_
#define PRICELENS_TESTS_SUPPORT_HPP_

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "pricelens/common.hpp"
#include "pricelens/corpus.hpp"

namespace pricelens::testing {

inline std::string fixture(const std::string& relative) {
  return std::string(PRICELENS_FIXTURE_DIR) + "/" + relative;
}

inline std::string data_file(const std::string& relative) {
  return std::string(PRICELENS_DATA_DIR) + "/" + relative;
}

// A fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pricelens-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * uniform01(rng);
  }
  return m;
}

inline double gaussian(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline DataProduct annotated_product(std::string id, std::string text, double price) {
  DataProduct p;
  p.id = std::move(id);
  p.name = std::move(text);
  p.price = price;
  p.refund_policy = 1;
  IndustryScores s{};
  s[0] = 1.0;
  p.industry_scores = s;
  return p;
}

}  // namespace pricelens::testing

#endif  // PRICELENS_TESTS_SUPPORT_HPP_
