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

#include <cmath>

#include "pricelens/models/linear.hpp"
#include "support.hpp"

namespace pricelens {
namespace {

TEST(LinearRegression, RecoversExactLine) {
  Matrix x(6, 1);
  x << -2, -1, 0, 1, 2, 5;
  const Vector y = (2.0 * x.col(0)).array() + 1.0;
  const auto m = fit_linear(x, y, 0.0);
  EXPECT_NEAR(m.weights()(0), 2.0, 1e-8);
  EXPECT_NEAR(m.intercept(), 1.0, 1e-8);
  EXPECT_FALSE(m.rank_deficient());
  EXPECT_LT((m.predict(x) - y).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(LinearRegression, MatchesNormalEquations) {
  Rng rng(3);
  const Matrix x = testing::random_matrix(rng, 40, 3, -2, 5);
  Vector y(40);
  for (Eigen::Index i = 0; i < 40; ++i) y(i) = x(i, 0) - 3 * x(i, 2) + testing::gaussian(rng);
  const auto m = fit_linear(x, y, 0.0);
  Matrix design(40, 4);
  design << x, Vector::Ones(40);
  const Vector beta = (design.transpose() * design).ldlt().solve(design.transpose() * y);
  EXPECT_LT((m.weights() - beta.head(3)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(m.intercept(), beta(3), 1e-8);
}

TEST(LinearRegression, ConstantTarget) {
  Rng rng(4);
  const Matrix x = testing::random_matrix(rng, 10, 2);
  const auto m = fit_linear(x, Vector::Constant(10, 4.5), 0.0);
  EXPECT_LT(m.weights().cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(m.intercept(), 4.5, 1e-10);
}

TEST(LinearRegression, DuplicatedColumnsShareWeight) {
  Rng rng(5);
  Matrix x(30, 2);
  x.col(0) = testing::random_matrix(rng, 30, 1);
  x.col(1) = x.col(0);
  const Vector y = 3.0 * x.col(0);
  const auto ridge = fit_linear(x, y, 0.1);
  EXPECT_NEAR(ridge.weights()(0), ridge.weights()(1), 1e-10);

  const auto minimum_norm = fit_linear(x, y, 0.0);
  EXPECT_TRUE(minimum_norm.rank_deficient());
  EXPECT_NEAR(minimum_norm.weights()(0), 1.5, 1e-8);
  EXPECT_NEAR(minimum_norm.weights()(1), 1.5, 1e-8);
}

TEST(LinearRegression, RejectsTooFewRows) {
  EXPECT_THROW(fit_linear(Matrix::Ones(1, 1), Vector::Ones(1), 0.0), ValidationError);
}

TEST(Logistic, SeparableDataIsFitExactly) {
  Matrix x(20, 1);
  Vector y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = i < 10 ? -1.0 - 0.1 * i : 1.0 + 0.1 * i;
    y(i) = i < 10 ? 0.0 : 1.0;
  }
  LinearConfig cfg;
  cfg.l2 = 1e-2;
  const auto m = fit_logistic(x, y, cfg, 1);
  const Vector p = m.predict_proba(x);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(p(i) > 0.5, y(i) == 1.0);
  EXPECT_NEAR(m.predict_proba(Matrix::Zero(1, 1))(0), sigmoid(m.intercept()), 1e-15);
}

TEST(Logistic, MirrorPairsGiveZeroIntercept) {
  Rng rng(7);
  Matrix x(40, 2);
  Vector y(40);
  for (int i = 0; i < 20; ++i) {
    const double a = uniform01(rng) + 0.2, b = uniform01(rng) - 0.5;
    x.row(2 * i) << a, b;
    x.row(2 * i + 1) << -a, -b;
    y(2 * i) = 1;
    y(2 * i + 1) = 0;
  }
  const auto m = fit_logistic(x, y, {}, 3);
  EXPECT_NEAR(m.intercept(), 0.0, 0.05);
}

TEST(Logistic, SingleClassIsAnError) {
  EXPECT_THROW(fit_logistic(Matrix::Ones(4, 1), Vector::Ones(4), {}, 1), ValidationError);
}

TEST(Logistic, DeterministicGivenSeed) {
  Rng rng(9);
  const Matrix x = testing::random_matrix(rng, 50, 3);
  Vector y(50);
  for (Eigen::Index i = 0; i < 50; ++i) y(i) = x(i, 0) + 0.3 * x(i, 1) > 0 ? 1 : 0;
  const auto a = fit_logistic(x, y, {}, 11);
  const auto b = fit_logistic(x, y, {}, 11);
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.intercept(), b.intercept());
}

}  // namespace
}  // namespace pricelens
