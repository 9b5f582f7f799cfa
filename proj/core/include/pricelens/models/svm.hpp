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

// Support vector classification and regression solved in the dual by
// sequential minimal optimization.

#ifndef PRICELENS_MODELS_SVM_HPP_
#define PRICELENS_MODELS_SVM_HPP_

#include <optional>
#include <span>
#include <string_view>

#include "pricelens/models/base.hpp"
#include "pricelens/models/standardize.hpp"

namespace pricelens {

enum class KernelKind { linear, rbf };

std::string_view to_string(KernelKind k);
KernelKind kernel_from_string(std::string_view name);

struct Kernel {
  KernelKind kind = KernelKind::rbf;
  double gamma = 1.0;  // rbf: exp(-gamma ||a - b||^2)

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

struct SvmConfig {
  double c = 1.0;
  double epsilon = 0.1;  // regression tube half-width
  KernelKind kernel = KernelKind::rbf;
  std::optional<double> gamma;  // defaults to 1 / feature count
  double tol = 1e-3;
  std::size_t max_iterations = 1000000;
};

// min 0.5 a'Qa + p'a  s.t.  y'a = 0, 0 <= a <= C, with Q_ij = y_i y_j K_ij
// (K indexed through `index`). Working-set pairs use second-order selection.
struct SmoProblem {
  Matrix kernel;                  // base kernel matrix
  std::vector<std::size_t> index;  // variable -> kernel row
  Vector y;                        // +1 / -1 per variable
  Vector p;                        // linear term per variable
  double c = 1.0;
  double tol = 1e-3;
  std::size_t max_iterations = 1000000;
};

struct SmoSolution {
  Vector alpha;
  double rho = 0.0;  // decision = sum_i y_i alpha_i K(x_i, x) - rho
  Vector gradient;
  std::size_t iterations = 0;
  bool converged = false;
};

SmoSolution solve_smo(const SmoProblem& problem);

double epsilon_insensitive_loss(double residual, double epsilon);

// Kernel expansion f(x) = sum_i coef_i K(sv_i, x) + bias on standardized input.
struct KernelExpansion {
  Standardizer scaler;
  Kernel kernel;
  Matrix support;  // support vectors in standardized space
  Vector coef;
  double bias = 0.0;

  Vector evaluate(const Matrix& x) const;
};

// Binary classifier; y holds -1 / +1 labels. Decision values are signed
// distances in the kernel-induced feature space (unnormalised).
class SvcModel : public BinaryClassifier {
 public:
  explicit SvcModel(KernelExpansion f) : f_(std::move(f)) {}
  Vector decision(const Matrix& x) const override { return f_.evaluate(x); }
  const KernelExpansion& expansion() const { return f_; }

 private:
  KernelExpansion f_;
};

class SvrModel : public Model {
 public:
  explicit SvrModel(KernelExpansion f) : f_(std::move(f)) {}
  Family family() const override { return Family::svm; }
  Task task() const override { return Task::regression; }
  std::size_t outputs() const override { return 1; }
  Matrix scores(const Matrix& x) const override { return f_.evaluate(x); }
  const KernelExpansion& expansion() const { return f_; }

 private:
  KernelExpansion f_;
};

// standardize=false keeps raw features (used by small analytic fixtures).
SvcModel fit_svc(const Matrix& x, const Vector& y, const SvmConfig& config,
                 bool standardize = true);
SvrModel fit_svr(const Matrix& x, const Vector& y, const SvmConfig& config,
                 bool standardize = true);

}  // namespace pricelens

#endif  // PRICELENS_MODELS_SVM_HPP_
