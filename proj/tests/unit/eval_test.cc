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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "pricelens/eval.hpp"
#include "pricelens/models/base.hpp"
#include "support.hpp"

namespace pricelens {
namespace {

TEST(KFold, PartitionsRows) {
  const auto plan = kfold_split(10, 5, 3);
  EXPECT_EQ(plan.sizes(), (std::vector<std::size_t>{2, 2, 2, 2, 2}));
  std::set<std::size_t> seen;
  for (std::size_t f = 0; f < 5; ++f) {
    const auto test = plan.test_rows(f);
    const auto train = plan.train_rows(f);
    EXPECT_EQ(test.size() + train.size(), 10u);
    for (auto r : test) {
      EXPECT_TRUE(seen.insert(r).second);
      EXPECT_EQ(std::count(train.begin(), train.end(), r), 0);
    }
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(KFold, RemainderAndDeterminism) {
  auto sizes = kfold_split(11, 5, 1).sizes();
  std::sort(sizes.rbegin(), sizes.rend());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 2, 2, 2, 2}));
  EXPECT_EQ(kfold_split(37, 5, 9).fold_of, kfold_split(37, 5, 9).fold_of);
  EXPECT_NE(kfold_split(37, 5, 9).fold_of, kfold_split(37, 5, 10).fold_of);
  EXPECT_THROW(kfold_split(4, 5, 1), ValidationError);
}

TEST(KFold, SizesDifferByAtMostOne) {
  for (std::size_t n = 5; n < 60; n += 7) {
    for (std::size_t k = 2; k <= 5; ++k) {
      const auto s = kfold_split(n, k, n * k).sizes();
      EXPECT_LE(*std::max_element(s.begin(), s.end()) - *std::min_element(s.begin(), s.end()), 1u);
    }
  }
}

TEST(RegressionMetrics, HandExample) {
  const Vector y = (Vector(2) << 100, 200).finished();
  const Vector p = (Vector(2) << 110, 180).finished();
  const auto m = regression_metrics(y, p);
  EXPECT_DOUBLE_EQ(m.mse, 250.0);
  EXPECT_NEAR(m.rmse, 15.8114, 1e-4);
  ASSERT_TRUE(m.mape.has_value());
  EXPECT_NEAR(*m.mape, 0.1, 1e-15);
}

TEST(RegressionMetrics, IdentityAndZeroTargets) {
  const Vector y = (Vector(3) << 1, 2, 3).finished();
  const auto m = regression_metrics(y, y);
  EXPECT_EQ(m.mse, 0.0);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_EQ(*m.mape, 0.0);
  EXPECT_EQ(m.r2, 1.0);

  const Vector z = (Vector(3) << 0, 2, 3).finished();
  const auto zm = regression_metrics(z, y);
  EXPECT_FALSE(zm.mape.has_value());
  EXPECT_NEAR(zm.mse, 1.0 / 3.0, 1e-15);
  EXPECT_THROW(mape(z, y), ValidationError);
  EXPECT_TRUE(std::isnan(metric_values(zm)[2]));
}

TEST(RegressionMetrics, RmseSquaredIsMse) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = testing::random_matrix(rng, 30, 2, 1, 5);
    const auto m = regression_metrics(a.col(0), a.col(1));
    EXPECT_GE(m.mse, 0.0);
    EXPECT_NEAR(m.rmse * m.rmse, m.mse, 1e-12);
  }
}

TEST(Auc, HandExample) {
  const Vector pos = (Vector(4) << 0, 0, 1, 1).finished();
  const Vector s = (Vector(4) << 0.1, 0.4, 0.35, 0.8).finished();
  EXPECT_DOUBLE_EQ(binary_auc(pos, s), 0.75);
}

double brute_auc(const Vector& pos, const Vector& s) {
  double credit = 0, pairs = 0;
  for (Eigen::Index i = 0; i < pos.size(); ++i) {
    for (Eigen::Index j = 0; j < pos.size(); ++j) {
      if (pos(i) != 1 || pos(j) != 0) continue;
      pairs += 1;
      credit += s(i) > s(j) ? 1.0 : (s(i) == s(j) ? 0.5 : 0.0);
    }
  }
  return credit / pairs;
}

TEST(Auc, MatchesPairCountingWithTies) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(uniform_index(rng, 199));
    const std::size_t classes = 2 + uniform_index(rng, 4);
    Vector y(n);
    Matrix scores(n, static_cast<Eigen::Index>(classes));
    for (Eigen::Index i = 0; i < n; ++i) {
      y(i) = static_cast<double>(uniform_index(rng, classes));
      for (Eigen::Index c = 0; c < scores.cols(); ++c) scores(i, c) = std::round(uniform01(rng) * 8) / 8;
    }
    y(0) = 0;
    y(1) = 1;
    const auto m = classification_metrics(y, scores, argmax_rows(scores));
    double macro = 0;
    int present = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      const Vector pos = (y.array() == static_cast<double>(c)).cast<double>();
      if (pos.sum() == 0) continue;
      const double b = brute_auc(pos, scores.col(static_cast<Eigen::Index>(c)));
      EXPECT_NEAR(binary_auc(pos, scores.col(static_cast<Eigen::Index>(c))), b, 1e-12);
      macro += b;
      ++present;
    }
    ASSERT_TRUE(m.auc.has_value());
    EXPECT_NEAR(*m.auc, macro / present, 1e-12);
    EXPECT_GE(m.accuracy, 0.0);
    EXPECT_LE(m.accuracy, 1.0);
    EXPECT_GE(m.f1, 0.0);
    EXPECT_LE(m.f1, 1.0);
  }
}

TEST(ClassificationMetrics, PerfectPredictions) {
  const Vector y = (Vector(4) << 0, 1, 2, 1).finished();
  Matrix scores = Matrix::Zero(4, 3);
  for (Eigen::Index i = 0; i < 4; ++i) scores(i, static_cast<Eigen::Index>(y(i))) = 1;
  const auto m = classification_metrics(y, scores, y);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(*m.auc, 1.0);
  EXPECT_EQ(m.f1, 1.0);
}

TEST(ClassificationMetrics, F1HandExample) {
  // Class 1: one true positive, one false positive, one false negative.
  const Vector y = (Vector(4) << 1, 0, 1, 0).finished();
  const Vector pred = (Vector(4) << 1, 1, 0, 0).finished();
  const auto m = classification_metrics(y, Matrix::Zero(4, 2), pred);
  // Class 0 has the mirrored counts, so both per-class F1 values are 0.5.
  EXPECT_DOUBLE_EQ(m.f1, 0.5);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
}

TEST(ClassificationMetrics, ClassNeverPredictedContributesZero) {
  const Vector y = (Vector(4) << 0, 0, 1, 1).finished();
  const Vector pred = Vector::Zero(4);
  const auto m = classification_metrics(y, Matrix::Zero(4, 2), pred);
  // Class 0: P = 0.5, R = 1 -> 2/3. Class 1: 0.
  EXPECT_NEAR(m.f1, (2.0 / 3.0) / 2.0, 1e-15);
}

TEST(ClassificationMetrics, ShapeMismatchIsAnError) {
  const Vector y = (Vector(3) << 0, 1, 2).finished();
  EXPECT_THROW(classification_metrics(y, Matrix::Zero(2, 3), y), ValidationError);
  EXPECT_THROW(classification_metrics(y, Matrix::Zero(3, 2), y), ValidationError);
}

TEST(Metrics, NamesAndDirection) {
  EXPECT_EQ(metric_names(Task::regression).size(), 3u);
  EXPECT_EQ(metric_names(Task::classification).size(), 3u);
  EXPECT_TRUE(lower_is_better(Task::regression));
  EXPECT_FALSE(lower_is_better(Task::classification));
}

}  // namespace
}  // namespace pricelens
