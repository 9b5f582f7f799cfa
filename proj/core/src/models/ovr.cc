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

#include "pricelens/models/ovr.hpp"

#include <string>

namespace pricelens {

Matrix OvrModel::scores(const Matrix& x) const {
  Matrix out(x.rows(), static_cast<Eigen::Index>(members_.size()));
  for (std::size_t k = 0; k < members_.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = members_[k]->decision(x);
  }
  return out;
}

OvrModel one_vs_rest(Family family, const BinaryFit& fit, const Matrix& x, const Vector& y,
                     std::size_t classes, int threads) {
  if (y.size() != x.rows()) throw ValidationError("one-vs-rest: target length mismatch");
  std::vector<std::size_t> counts(classes, 0);
  for (double v : y) {
    const auto c = static_cast<std::size_t>(v);
    if (v < 0 || c >= classes) throw ValidationError("one-vs-rest: class label out of range");
    ++counts[c];
  }
  std::size_t present = 0;
  for (auto c : counts) present += c > 0 ? 1 : 0;
  if (present < 2) throw ValidationError("one-vs-rest: need at least two classes present");
  std::vector<std::shared_ptr<const BinaryClassifier>> members(classes);
  parallel_for(classes, threads, [&](std::size_t k) {
    if (counts[k] == 0) {
      members[k] = std::make_shared<ConstantClassifier>(kAbsentClassScore);
      return;
    }
    Vector y01 = (y.array() == static_cast<double>(k)).cast<double>();
    members[k] = fit(x, y01, k);
  });
  for (std::size_t k = 0; k < classes; ++k) {
    if (counts[k] == 0) {
      log_warning("one-vs-rest: class " + std::to_string(k) +
                  " has no training rows; its member always scores lowest");
    }
  }
  return OvrModel(family, std::move(members));
}

}  // namespace pricelens
