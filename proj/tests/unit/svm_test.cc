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

#include "pricelens/models/svm.hpp"
#include "support.hpp"

namespace pricelens {
namespace {

TEST(Svc, TwoPointAnalyticSolution) {
  Matrix x(2, 1);
  x << -1, 1;
  const Vector y = (Vector(2) << -1, 1).finished();
  SvmConfig cfg;
  cfg.kernel = KernelKind::linear;
  cfg.c = 1e6;
  const auto m = fit_svc(x, y, cfg, false);
  const auto& f = m.expansion();
  EXPECT_NEAR(f.bias, 0.0, 1e-6);
  // w = sum coef_i x_i.
  const double w = (f.coef.transpose() * f.support).value();
  EXPECT_NEAR(w, 1.0, 1e-6);
  EXPECT_NEAR(2.0 / std::abs(w), 2.0, 1e-6);
  EXPECT_EQ(f.support.rows(), 2);
  Matrix probe(3, 1);
  probe << -1, 0, 1;
  const Vector d = m.decision(probe);
  EXPECT_NEAR(d(0), -1.0, 1e-6);
  EXPECT_NEAR(d(1), 0.0, 1e-6);
  EXPECT_NEAR(d(2), 1.0, 1e-6);
}

TEST(Kernel, RbfSelfSimilarityIsOne) {
  Rng rng(1);
  const Kernel k{KernelKind::rbf, 0.37};
  for (int i = 0; i < 20; ++i) {
    const Matrix v = testing::random_matrix(rng, 1, 5, -50, 50);
    EXPECT_EQ(k(row_span(v, 0), row_span(v, 0)), 1.0);
  }
}

double dual_objective(const Matrix& q, const Vector& a) { return 0.5 * a.dot(q * a) - a.sum(); }

struct Problem {
  SmoProblem smo;
  Matrix q;
};

Problem ten_point_problem(std::uint64_t seed) {
  Rng rng(seed);
  const Matrix x = testing::random_matrix(rng, 10, 2);
  Problem p;
  p.smo.kernel.resize(10, 10);
  const Kernel k{KernelKind::rbf, 0.8};
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (Eigen::Index j = 0; j < 10; ++j) p.smo.kernel(i, j) = k(row_span(x, i), row_span(x, j));
  }
  p.smo.y.resize(10);
  for (Eigen::Index i = 0; i < 10; ++i) {
    p.smo.index.push_back(static_cast<std::size_t>(i));
    p.smo.y(i) = (x(i, 0) + 0.4 * x(i, 1) + 0.3 * testing::gaussian(rng)) > 0 ? 1 : -1;
  }
  p.smo.y(0) = 1;
  p.smo.y(1) = -1;
  p.smo.p = Vector::Constant(10, -1.0);
  p.smo.c = 2.0;
  p.smo.tol = 1e-6;
  p.q = p.smo.y.asDiagonal() * p.smo.kernel * p.smo.y.asDiagonal();
  return p;
}

TEST(Smo, BeatsRandomFeasiblePoints) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto p = ten_point_problem(seed);
    const auto sol = solve_smo(p.smo);
    ASSERT_TRUE(sol.converged);
    const double best = dual_objective(p.q, sol.alpha);
    Rng rng(seed + 100);
    for (int trial = 0; trial < 1000; ++trial) {
      Vector a(10);
      for (Eigen::Index i = 0; i < 10; ++i) a(i) = p.smo.c * uniform01(rng);
      // Scale the heavier side down so that y'a = 0.
      double pos = 0, neg = 0;
      for (Eigen::Index i = 0; i < 10; ++i) (p.smo.y(i) > 0 ? pos : neg) += a(i);
      for (Eigen::Index i = 0; i < 10; ++i) {
        if (p.smo.y(i) > 0 && pos > neg) a(i) *= neg / pos;
        if (p.smo.y(i) < 0 && neg > pos) a(i) *= pos / neg;
      }
      ASSERT_NEAR(a.dot(p.smo.y), 0.0, 1e-9);
      EXPECT_LE(best, dual_objective(p.q, a) + 1e-9);
    }
  }
}

TEST(Smo, SatisfiesKkt) {
  for (std::uint64_t seed : {4, 5, 6, 7}) {
    const auto p = ten_point_problem(seed);
    const auto sol = solve_smo(p.smo);
    ASSERT_TRUE(sol.converged);
    EXPECT_NEAR(sol.alpha.dot(p.smo.y), 0.0, 1e-10);
    const double tol = 1e-3;
    for (Eigen::Index i = 0; i < 10; ++i) {
      double f = -sol.rho;
      for (Eigen::Index j = 0; j < 10; ++j) f += p.smo.y(j) * sol.alpha(j) * p.smo.kernel(i, j);
      const double margin = p.smo.y(i) * f;
      const double a = sol.alpha(i);
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, p.smo.c);
      if (a == 0.0) EXPECT_GE(margin, 1 - tol);
      else if (a < p.smo.c) EXPECT_NEAR(margin, 1.0, tol);
      else EXPECT_LE(margin, 1 + tol);
    }
  }
}

TEST(Svr, LineInsideTheTube) {
  Matrix x(15, 1);
  Vector y(15);
  for (Eigen::Index i = 0; i < 15; ++i) {
    x(i, 0) = -1.0 + 0.15 * static_cast<double>(i);
    y(i) = 2 * x(i, 0) + 1;
  }
  SvmConfig cfg;
  cfg.kernel = KernelKind::linear;
  cfg.c = 10;
  cfg.epsilon = 0.1;
  cfg.tol = 1e-6;
  const auto m = fit_svr(x, y, cfg, false);
  const Vector pred = m.predict(x);
  double loss = 0;
  for (Eigen::Index i = 0; i < 15; ++i) loss += epsilon_insensitive_loss(pred(i) - y(i), cfg.epsilon);
  EXPECT_LT(loss, 1e-5);
}

TEST(Svr, NoisyDataWithinTube) {
  Rng rng(8);
  Matrix x(40, 1);
  Vector y(40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    x(i, 0) = uniform01(rng) * 4 - 2;
    y(i) = std::sin(x(i, 0)) + 0.1 * (uniform01(rng) - 0.5);
  }
  SvmConfig cfg;
  cfg.c = 100;
  cfg.epsilon = 0.1;
  cfg.gamma = 1.0;
  const auto m = fit_svr(x, y, cfg);
  const Vector pred = m.predict(x);
  EXPECT_LE((pred - y).cwiseAbs().maxCoeff(), cfg.epsilon + 1e-2);
}

TEST(Svr, EpsilonInsensitiveLoss) {
  EXPECT_EQ(epsilon_insensitive_loss(1.25, 0.25), 1.0);
  EXPECT_EQ(epsilon_insensitive_loss(-1.25, 0.25), 1.0);
  EXPECT_EQ(epsilon_insensitive_loss(0.2, 0.25), 0.0);
}

TEST(Svm, RejectsBadParameters) {
  Matrix x(2, 1);
  x << -1, 1;
  const Vector y = (Vector(2) << -1, 1).finished();
  SvmConfig cfg;
  cfg.c = 0;
  EXPECT_THROW(fit_svc(x, y, cfg), ValidationError);
  EXPECT_THROW(fit_svr(x, y, cfg), ValidationError);
  EXPECT_THROW(fit_svc(x, Vector::Ones(2), {}), ValidationError);
}

}  // namespace
}  // namespace pricelens
