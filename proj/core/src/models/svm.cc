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

#include "pricelens/models/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pricelens {

std::string_view to_string(KernelKind k) {
  return k == KernelKind::linear ? "linear" : "rbf";
}

KernelKind kernel_from_string(std::string_view name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "rbf") return KernelKind::rbf;
  throw ValidationError("unknown kernel: " + std::string(name));
}

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  if (kind == KernelKind::linear) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return std::exp(-gamma * d);
}

double epsilon_insensitive_loss(double residual, double epsilon) {
  return std::max(0.0, std::abs(residual) - epsilon);
}

SmoSolution solve_smo(const SmoProblem& pr) {
  const std::size_t l = pr.y.size();
  if (pr.c <= 0) throw ValidationError("svm: C must be positive");
  const auto& idx = pr.index;
  auto q = [&](std::size_t i, std::size_t j) {
    return pr.y(static_cast<Eigen::Index>(i)) * pr.y(static_cast<Eigen::Index>(j)) *
           pr.kernel(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
  };
  SmoSolution sol;
  sol.alpha = Vector::Zero(static_cast<Eigen::Index>(l));
  Vector& a = sol.alpha;
  Vector g = pr.p;
  Vector qd(static_cast<Eigen::Index>(l));
  for (std::size_t i = 0; i < l; ++i) qd(static_cast<Eigen::Index>(i)) = q(i, i);
  const double c = pr.c;
  constexpr double kTau = 1e-12;
  auto y = [&](std::size_t i) { return pr.y(static_cast<Eigen::Index>(i)); };
  auto al = [&](std::size_t i) -> double& { return a(static_cast<Eigen::Index>(i)); };
  auto gr = [&](std::size_t i) -> double& { return g(static_cast<Eigen::Index>(i)); };
  auto in_up = [&](std::size_t t) { return (y(t) > 0 && al(t) < c) || (y(t) < 0 && al(t) > 0); };
  auto in_low = [&](std::size_t t) { return (y(t) > 0 && al(t) > 0) || (y(t) < 0 && al(t) < c); };

  std::vector<double> qi(l), qj(l);
  while (sol.iterations < pr.max_iterations) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (in_up(t) && -y(t) * gr(t) > gmax) {
        gmax = -y(t) * gr(t);
        i = t;
      }
    }
    if (i == l) {
      sol.converged = true;
      break;
    }
    for (std::size_t t = 0; t < l; ++t) qi[t] = q(i, t);
    double gmax2 = -std::numeric_limits<double>::infinity();
    double obj_min = std::numeric_limits<double>::infinity();
    std::size_t j = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (!in_low(t)) continue;
      gmax2 = std::max(gmax2, y(t) * gr(t));
      const double b = gmax + y(t) * gr(t);
      if (b > 0) {
        // qi holds signed Q entries; the curvature along the pair direction
        // is K_ii + K_tt - 2 K_it.
        double quad = qd(static_cast<Eigen::Index>(i)) + qd(static_cast<Eigen::Index>(t)) -
               2.0 * y(i) * y(t) * qi[t];
        if (quad <= 0) quad = kTau;
        const double obj = -(b * b) / quad;
        if (obj < obj_min) {
          obj_min = obj;
          j = t;
        }
      }
    }
    if (gmax + gmax2 < pr.tol || j == l) {
      sol.converged = true;
      break;
    }
    ++sol.iterations;
    for (std::size_t t = 0; t < l; ++t) qj[t] = q(j, t);
    const double old_i = al(i), old_j = al(j);
    const double qii = qd(static_cast<Eigen::Index>(i)), qjj = qd(static_cast<Eigen::Index>(j));
    if (y(i) != y(j)) {
      double quad = qii + qjj + 2.0 * qi[j];
      if (quad <= 0) quad = kTau;
      const double delta = (-gr(i) - gr(j)) / quad;
      const double diff = al(i) - al(j);
      al(i) += delta;
      al(j) += delta;
      if (diff > 0) {
        if (al(j) < 0) { al(j) = 0; al(i) = diff; }
      } else {
        if (al(i) < 0) { al(i) = 0; al(j) = -diff; }
      }
      if (diff > 0) {
        if (al(i) > c) { al(i) = c; al(j) = c - diff; }
      } else {
        if (al(j) > c) { al(j) = c; al(i) = c + diff; }
      }
    } else {
      double quad = qii + qjj - 2.0 * qi[j];
      if (quad <= 0) quad = kTau;
      const double delta = (gr(i) - gr(j)) / quad;
      const double sum = al(i) + al(j);
      al(i) -= delta;
      al(j) += delta;
      if (sum > c) {
        if (al(i) > c) { al(i) = c; al(j) = sum - c; }
      } else {
        if (al(j) < 0) { al(j) = 0; al(i) = sum; }
      }
      if (sum > c) {
        if (al(j) > c) { al(j) = c; al(i) = sum - c; }
      } else {
        if (al(i) < 0) { al(i) = 0; al(j) = sum; }
      }
    }
    const double di = al(i) - old_i, dj = al(j) - old_j;
    for (std::size_t t = 0; t < l; ++t) gr(t) += qi[t] * di + qj[t] * dj;
  }
  if (!sol.converged) log_warning("svm: SMO hit the iteration limit before reaching tol");

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < l; ++t) {
    const double yg = y(t) * gr(t);
    if (al(t) >= c) {
      if (y(t) < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (al(t) <= 0) {
      if (y(t) > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  sol.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  sol.gradient = std::move(g);
  return sol;
}

Vector KernelExpansion::evaluate(const Matrix& x) const {
  const Matrix z = scaler.apply(x);
  Vector out(x.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    double s = bias;
    for (Eigen::Index k = 0; k < support.rows(); ++k) {
      s += coef(k) * kernel(row_span(support, k), row_span(z, i));
    }
    out(i) = s;
  }
  return out;
}

namespace {

Standardizer make_scaler(const Matrix& x, bool standardize) {
  if (standardize) return Standardizer::fit(x);
  Standardizer s;
  s.mean = Vector::Zero(x.cols());
  s.scale = Vector::Ones(x.cols());
  return s;
}

Kernel make_kernel(const SvmConfig& config, std::size_t features) {
  Kernel k;
  k.kind = config.kernel;
  k.gamma = config.gamma.value_or(1.0 / static_cast<double>(std::max<std::size_t>(1, features)));
  if (k.gamma <= 0) throw ValidationError("svm: gamma must be positive");
  return k;
}

Matrix gram(const Matrix& z, const Kernel& k) {
  Matrix out(z.rows(), z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      out(i, j) = out(j, i) = k(row_span(z, i), row_span(z, j));
    }
  }
  return out;
}

KernelExpansion finish(Standardizer scaler, Kernel kernel, const Matrix& z, const Vector& coef,
                       double rho) {
  KernelExpansion f;
  f.scaler = std::move(scaler);
  f.kernel = kernel;
  f.bias = -rho;
  std::vector<Eigen::Index> sv;
  for (Eigen::Index i = 0; i < coef.size(); ++i) {
    if (coef(i) != 0.0) sv.push_back(i);
  }
  f.support = z(sv, Eigen::all);
  f.coef = coef(sv);
  return f;
}

}  // namespace

SvcModel fit_svc(const Matrix& x, const Vector& y, const SvmConfig& config, bool standardize) {
  if (y.size() != x.rows()) throw ValidationError("svm: target length mismatch");
  if (config.c <= 0) throw ValidationError("svm: C must be positive");
  bool pos = false, neg = false;
  for (double v : y) {
    if (v == 1.0) pos = true;
    else if (v == -1.0) neg = true;
    else throw ValidationError("svm: labels must be -1 or +1");
  }
  if (!pos || !neg) throw ValidationError("svm: both classes must be present");
  auto scaler = make_scaler(x, standardize);
  const Matrix z = scaler.apply(x);
  const Kernel kernel = make_kernel(config, static_cast<std::size_t>(x.cols()));
  SmoProblem pr;
  pr.kernel = gram(z, kernel);
  pr.index.resize(static_cast<std::size_t>(x.rows()));
  for (std::size_t i = 0; i < pr.index.size(); ++i) pr.index[i] = i;
  pr.y = y;
  pr.p = Vector::Constant(x.rows(), -1.0);
  pr.c = config.c;
  pr.tol = config.tol;
  pr.max_iterations = config.max_iterations;
  const auto sol = solve_smo(pr);
  const Vector coef = sol.alpha.cwiseProduct(y);
  return SvcModel(finish(std::move(scaler), kernel, z, coef, sol.rho));
}

SvrModel fit_svr(const Matrix& x, const Vector& y, const SvmConfig& config, bool standardize) {
  if (y.size() != x.rows()) throw ValidationError("svr: target length mismatch");
  if (config.c <= 0) throw ValidationError("svr: C must be positive");
  if (config.epsilon < 0) throw ValidationError("svr: epsilon must be >= 0");
  auto scaler = make_scaler(x, standardize);
  const Matrix z = scaler.apply(x);
  const Kernel kernel = make_kernel(config, static_cast<std::size_t>(x.cols()));
  const auto n = x.rows();
  SmoProblem pr;
  pr.kernel = gram(z, kernel);
  pr.index.resize(static_cast<std::size_t>(2 * n));
  pr.y.resize(2 * n);
  pr.p.resize(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    pr.index[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    pr.index[static_cast<std::size_t>(i + n)] = static_cast<std::size_t>(i);
    pr.y(i) = 1.0;
    pr.y(i + n) = -1.0;
    pr.p(i) = config.epsilon - y(i);
    pr.p(i + n) = config.epsilon + y(i);
  }
  pr.c = config.c;
  pr.tol = config.tol;
  pr.max_iterations = config.max_iterations;
  const auto sol = solve_smo(pr);
  const Vector coef = sol.alpha.head(n) - sol.alpha.tail(n);
  return SvrModel(finish(std::move(scaler), kernel, z, coef, sol.rho));
}

}  // namespace pricelens
