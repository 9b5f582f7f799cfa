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

#include "pricelens/models/tree.hpp"
#include "support.hpp"

namespace pricelens {
namespace {

TEST(Cart, PureLabelsGiveSingleLeaf) {
  Rng rng(1);
  const Matrix x = testing::random_matrix(rng, 20, 3);
  const auto reg = fit_cart(x, Vector::Constant(20, 2.5), Task::regression, 0, {});
  EXPECT_EQ(reg.tree().nodes.size(), 1u);
  EXPECT_TRUE((reg.predict(x).array() == 2.5).all());

  const auto cls = fit_cart(x, Vector::Constant(20, 3), Task::classification, 5, {});
  EXPECT_EQ(cls.tree().nodes.size(), 1u);
  EXPECT_TRUE((cls.predict(x).array() == 3).all());
}

TEST(Cart, StepFunctionSplitsAtMidpoint) {
  Matrix x(5, 1);
  x << 0.1, 0.3, 0.4, 0.7, 0.9;
  const Vector y = (Vector(5) << 0, 0, 0, 1, 1).finished();
  TreeConfig cfg;
  cfg.min_leaf = 1;
  for (Task task : {Task::regression, Task::classification}) {
    const auto m = fit_cart(x, y, task, task == Task::classification ? 2 : 0, cfg);
    const auto& root = m.tree().nodes[0];
    EXPECT_EQ(root.feature, 0);
    EXPECT_DOUBLE_EQ(root.threshold, 0.55);
    EXPECT_EQ(m.predict(x), y);
  }
}

TEST(Cart, BalancedBinaryRootHasGiniHalf) {
  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  const Vector y = (Vector(4) << 0, 1, 0, 1).finished();
  TreeConfig cfg;
  cfg.max_depth = 0;
  const auto m = fit_cart(x, y, Task::classification, 2, cfg);
  const auto p = m.tree().value_at(0);
  EXPECT_DOUBLE_EQ(1.0 - p[0] * p[0] - p[1] * p[1], 0.5);
  EXPECT_EQ(m.predict(x.topRows(1))(0), 0.0);  // tie goes to the lower class
}

TEST(Cart, TiesPreferLowerFeatureIndex) {
  Matrix x(4, 2);
  x << 0, 0, 0, 0, 1, 1, 1, 1;
  const Vector y = (Vector(4) << 0, 0, 1, 1).finished();
  TreeConfig cfg;
  cfg.min_leaf = 1;
  const auto m = fit_cart(x, y, Task::regression, 0, cfg);
  EXPECT_EQ(m.tree().nodes[0].feature, 0);
  EXPECT_DOUBLE_EQ(m.tree().nodes[0].threshold, 0.5);
}

TEST(Cart, TrainingErrorNonIncreasingInDepth) {
  Rng rng(2);
  const Matrix x = testing::random_matrix(rng, 120, 4);
  Vector y(120), labels(120);
  for (Eigen::Index i = 0; i < 120; ++i) {
    y(i) = x(i, 0) * x(i, 1) + 0.3 * testing::gaussian(rng);
    labels(i) = static_cast<double>(uniform_index(rng, 3));
  }
  double prev_mse = 1e300, prev_err = 1e300;
  for (std::size_t depth = 0; depth <= 10; ++depth) {
    TreeConfig cfg;
    cfg.max_depth = depth;
    cfg.min_leaf = 1;
    const auto reg = fit_cart(x, y, Task::regression, 0, cfg);
    const double mse = (reg.predict(x) - y).squaredNorm();
    EXPECT_LE(mse, prev_mse + 1e-9);
    prev_mse = mse;
    EXPECT_LE(reg.tree().depth(), depth);

    const auto cls = fit_cart(x, labels, Task::classification, 3, cfg);
    const double err = (cls.predict(x).array() != labels.array()).count();
    EXPECT_LE(err, prev_err);
    prev_err = err;
  }
}

TEST(Cart, CoversCountSamples) {
  Rng rng(3);
  const Matrix x = testing::random_matrix(rng, 50, 2);
  Vector y(50);
  for (Eigen::Index i = 0; i < 50; ++i) y(i) = x(i, 0) > 0 ? 1.0 : -1.0;
  const auto m = fit_cart(x, y, Task::regression, 0, {});
  const auto& nodes = m.tree().nodes;
  EXPECT_EQ(nodes[0].cover, 50.0);
  for (const auto& node : nodes) {
    if (node.left < 0) continue;
    EXPECT_EQ(node.cover, nodes[static_cast<std::size_t>(node.left)].cover +
                              nodes[static_cast<std::size_t>(node.right)].cover);
  }
}

TEST(Cart, RejectsBadInput) {
  TreeConfig cfg;
  cfg.min_leaf = 5;
  EXPECT_THROW(fit_cart(Matrix::Ones(3, 1), Vector::Ones(3), Task::regression, 0, cfg),
               ValidationError);
  EXPECT_THROW(fit_cart(Matrix::Ones(3, 1), Vector::Constant(3, 4), Task::classification, 2, {}),
               ValidationError);
}

}  // namespace
}  // namespace pricelens
