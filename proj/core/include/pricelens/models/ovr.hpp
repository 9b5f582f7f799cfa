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

#ifndef PRICELENS_MODELS_OVR_HPP_
#define PRICELENS_MODELS_OVR_HPP_

#include <functional>
#include <memory>
#include <vector>

#include "pricelens/models/base.hpp"

namespace pricelens {

// Stands in for a class that had no training rows.
class ConstantClassifier : public BinaryClassifier {
 public:
  explicit ConstantClassifier(double score) : score_(score) {}
  Vector decision(const Matrix& x) const override { return Vector::Constant(x.rows(), score_); }
  double score() const { return score_; }

 private:
  double score_;
};

inline constexpr double kAbsentClassScore = -1e9;

// One binary member per class; class k is scored by member k.
class OvrModel : public Model {
 public:
  OvrModel(Family family, std::vector<std::shared_ptr<const BinaryClassifier>> members)
      : family_(family), members_(std::move(members)) {}

  Family family() const override { return family_; }
  Task task() const override { return Task::classification; }
  std::size_t outputs() const override { return members_.size(); }
  Matrix scores(const Matrix& x) const override;

  const std::vector<std::shared_ptr<const BinaryClassifier>>& members() const { return members_; }

 private:
  Family family_;
  std::vector<std::shared_ptr<const BinaryClassifier>> members_;
};

// Fits one member on 0/1 targets for class k.
using BinaryFit = std::function<std::shared_ptr<const BinaryClassifier>(
    const Matrix& x, const Vector& y01, std::size_t k)>;

// Members for classes absent from y become ConstantClassifier members (with a
// warning). Needs at least two classes present.
OvrModel one_vs_rest(Family family, const BinaryFit& fit, const Matrix& x, const Vector& y,
                     std::size_t classes, int threads = 1);

}  // namespace pricelens

#endif  // PRICELENS_MODELS_OVR_HPP_
