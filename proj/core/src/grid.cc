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

#include "pricelens/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "pricelens/csv.hpp"

namespace pricelens {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fixed4(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

double nan_mean(std::span<const double> values) {
  double s = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (!std::isnan(v)) {
      s += v;
      ++n;
    }
  }
  return n > 0 ? s / static_cast<double>(n) : kNaN;
}

std::vector<double> evaluate(Task task, const Vector& y, const Matrix& scores) {
  if (task == Task::regression) return metric_values(regression_metrics(y, scores.col(0)));
  return metric_values(classification_metrics(y, scores, argmax_rows(scores)));
}

}  // namespace

std::uint64_t fold_plan_seed(std::uint64_t seed) { return mix_seed(seed, 0); }

std::uint64_t representation_seed(std::uint64_t seed, Representation r, std::size_t fold) {
  return mix_seed(mix_seed(seed, 0x100 + static_cast<std::uint64_t>(r)), fold);
}

std::uint64_t model_seed(std::uint64_t seed, Family f, std::size_t fold) {
  return mix_seed(mix_seed(seed, 0x200 + static_cast<std::uint64_t>(f)), fold);
}

std::size_t class_count(const TargetSpec& target) {
  return target.kind == Task::classification ? kTierCount : 0;
}

FoldData featurize_fold(std::span<const DataProduct> products, std::span<const TokenList> docs,
                        const Vector& targets, Representation rep, const ExperimentConfig& config,
                        const FoldPlan& plan, std::size_t fold) {
  FoldData d;
  d.train_rows = plan.train_rows(fold);
  d.test_rows = plan.test_rows(fold);
  auto gather_docs = [&](const std::vector<std::size_t>& rows) {
    std::vector<TokenList> out;
    out.reserve(rows.size());
    for (auto r : rows) out.push_back(docs[r]);
    return out;
  };
  auto gather_products = [&](const std::vector<std::size_t>& rows) {
    std::vector<DataProduct> out;
    out.reserve(rows.size());
    for (auto r : rows) out.push_back(products[r]);
    return out;
  };
  const auto train_docs = gather_docs(d.train_rows);
  const auto test_docs = gather_docs(d.test_rows);
  std::optional<Matrix> train_vec, test_vec;
  if (config.document_vectors && rep == Representation::bertopic) {
    const Matrix& all = *config.document_vectors;
    if (static_cast<std::size_t>(all.rows()) != products.size()) {
      throw ValidationError("document vectors: expected " + std::to_string(products.size()) +
                            " rows, got " + std::to_string(all.rows()));
    }
    const std::vector<Eigen::Index> tr(d.train_rows.begin(), d.train_rows.end());
    const std::vector<Eigen::Index> te(d.test_rows.begin(), d.test_rows.end());
    train_vec = all(tr, Eigen::all);
    test_vec = all(te, Eigen::all);
  }
  const auto fitted = fit_representation(rep, train_docs, config.representation,
                                         representation_seed(config.seed, rep, fold),
                                         train_vec ? &*train_vec : nullptr);
  const auto train_products = gather_products(d.train_rows);
  const auto test_products = gather_products(d.test_rows);
  const bool structured = config.representation.include_structured;
  d.train = combine_features(fitted.training_features(), train_products, structured);
  d.test = combine_features(fitted.transform(test_docs, test_vec ? &*test_vec : nullptr),
                            test_products, structured);
  d.y_train.resize(static_cast<Eigen::Index>(d.train_rows.size()));
  d.y_test.resize(static_cast<Eigen::Index>(d.test_rows.size()));
  for (std::size_t i = 0; i < d.train_rows.size(); ++i) {
    d.y_train(static_cast<Eigen::Index>(i)) = targets(static_cast<Eigen::Index>(d.train_rows[i]));
  }
  for (std::size_t i = 0; i < d.test_rows.size(); ++i) {
    d.y_test(static_cast<Eigen::Index>(i)) = targets(static_cast<Eigen::Index>(d.test_rows[i]));
  }
  if (config.select_features) {
    MrmrConfig mc;
    mc.bins = config.mrmr_bins;
    d.trace = mrmr_select(d.train, discretize_target(d.y_train, config.target.kind),
                          *config.select_features, mc);
    auto cols = d.trace->selected();
    std::sort(cols.begin(), cols.end());
    d.train = d.train.select_columns(cols);
    d.test = d.test.select_columns(cols);
  }
  return d;
}

CellResult evaluate_folds(std::span<const FoldData> folds, const ModelSpec& spec, Task task,
                          std::size_t classes, std::uint64_t seed, std::size_t rows) {
  CellResult cell;
  const std::size_t outputs = task == Task::classification ? classes : 1;
  cell.predictions = Vector::Constant(static_cast<Eigen::Index>(rows), kNaN);
  cell.scores = Matrix::Constant(static_cast<Eigen::Index>(rows),
                                 static_cast<Eigen::Index>(outputs), kNaN);
  const std::size_t n_metrics = metric_names(task).size();
  try {
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto& d = folds[f];
      const auto model = fit_model(spec, d.train, d.y_train, task, classes,
                                   model_seed(seed, spec.family, f), 1);
      const Matrix s = model.scores(d.test);
      cell.fold_metrics.push_back(evaluate(task, d.y_test, s));
      const Vector p = model.model->predict(d.test.values);
      for (std::size_t i = 0; i < d.test_rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(d.test_rows[i]);
        cell.predictions(r) = p(static_cast<Eigen::Index>(i));
        cell.scores.row(r) = s.row(static_cast<Eigen::Index>(i));
      }
    }
    cell.mean.assign(n_metrics, 0.0);
    for (std::size_t m = 0; m < n_metrics; ++m) {
      std::vector<double> col;
      for (const auto& fm : cell.fold_metrics) col.push_back(fm[m]);
      // A metric undefined on any fold is undefined for the cell.
      double s = 0.0;
      for (double v : col) s += v;
      cell.mean[m] = s / static_cast<double>(col.size());
    }
  } catch (const std::exception& e) {
    cell.error = e.what();
    cell.mean.assign(n_metrics, kNaN);
  }
  return cell;
}

void finalize_report(ExperimentReport& r) {
  const std::size_t n_rep = r.representations.size();
  r.row_mean.assign(r.metrics.size(), std::vector<double>(n_rep, kNaN));
  r.rank.assign(r.metrics.size(), std::vector<int>(n_rep, 0));
  const bool ascending = lower_is_better(r.task);
  for (std::size_t m = 0; m < r.metrics.size(); ++m) {
    for (std::size_t i = 0; i < n_rep; ++i) {
      std::vector<double> row;
      for (const auto& cell : r.cells[i]) row.push_back(cell.mean[m]);
      r.row_mean[m][i] = nan_mean(row);
    }
    std::vector<std::size_t> order(n_rep);
    std::iota(order.begin(), order.end(), 0);
    const auto& v = r.row_mean[m];
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (std::isnan(v[a]) || std::isnan(v[b])) return !std::isnan(v[a]) && std::isnan(v[b]);
      return ascending ? v[a] < v[b] : v[a] > v[b];
    });
    for (std::size_t k = 0; k < n_rep; ++k) r.rank[m][order[k]] = static_cast<int>(k + 1);
  }
}

std::string ExperimentReport::to_text() const {
  const std::string mean_label = task == Task::regression ? "ME" : "MR";
  std::string out;
  out += task == Task::regression ? "Regression results" : "Classification results";
  out += " (" + std::to_string(folds) + "-fold cross-validation";
  if (task == Task::regression) out += log_targets ? "; targets ln(price)" : "; targets price";
  out += ")\n";
  constexpr std::size_t kFirst = 10, kCol = 9;
  std::string header = pad("Method", kFirst);
  for (auto f : families) header += pad(std::string(display_name(f, task)), kCol);
  header += pad(mean_label, kCol) + "Rank";
  const std::string rule(header.size(), '-');
  out += rule + "\n" + header + "\n" + rule + "\n";
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    out += pad("", kFirst) + metrics[m] + "\n";
    for (std::size_t i = 0; i < representations.size(); ++i) {
      std::string line = pad(std::string(display_name(representations[i])), kFirst);
      for (const auto& cell : cells[i]) line += pad(fixed4(cell.mean[m]), kCol);
      line += pad(fixed4(row_mean[m][i]), kCol) + std::to_string(rank[m][i]);
      out += line + "\n";
    }
    out += rule + "\n";
  }
  bool any_error = false;
  for (std::size_t i = 0; i < representations.size(); ++i) {
    for (std::size_t f = 0; f < families.size(); ++f) {
      const auto& cell = cells[i][f];
      if (cell.ok()) continue;
      if (!any_error) out += "Failed cells:\n";
      any_error = true;
      out += "  " + std::string(display_name(representations[i])) + " x " +
             std::string(display_name(families[f], task)) + ": " + cell.error + "\n";
    }
  }
  return out;
}

std::string ExperimentReport::to_csv() const {
  csv::Row header = {"Metric", "Method"};
  for (auto f : families) header.emplace_back(display_name(f, task));
  header.push_back(task == Task::regression ? "ME" : "MR");
  header.push_back("Rank");
  std::string out = csv::format_row(header);
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    for (std::size_t i = 0; i < representations.size(); ++i) {
      csv::Row row = {metrics[m], std::string(display_name(representations[i]))};
      for (const auto& cell : cells[i]) row.push_back(fixed4(cell.mean[m]));
      row.push_back(fixed4(row_mean[m][i]));
      row.push_back(std::to_string(rank[m][i]));
      out += csv::format_row(row);
    }
  }
  return out;
}

ExperimentReport run_grid(std::span<const DataProduct> products, const ExperimentConfig& config) {
  if (config.representations.empty() || config.models.empty()) {
    throw ValidationError("grid: representations and models must be non-empty");
  }
  const Task task = config.target.kind;
  const std::size_t classes = class_count(config.target);
  const Vector targets = make_targets(products, config.target);
  const auto docs = tokenize_products(products);
  const auto plan = kfold_split(products.size(), config.folds, fold_plan_seed(config.seed));

  const std::size_t n_rep = config.representations.size();
  const std::size_t n_fold = config.folds;
  std::vector<std::vector<FoldData>> data(n_rep, std::vector<FoldData>(n_fold));
  std::vector<std::string> rep_error(n_rep);
  std::vector<std::string> unit_error(n_rep * n_fold);
  parallel_for(n_rep * n_fold, config.threads, [&](std::size_t u) {
    const std::size_t r = u / n_fold, f = u % n_fold;
    try {
      data[r][f] = featurize_fold(products, docs, targets, config.representations[r], config,
                                  plan, f);
    } catch (const std::exception& e) {
      unit_error[u] = e.what();
    }
  });
  for (std::size_t u = 0; u < unit_error.size(); ++u) {
    if (!unit_error[u].empty() && rep_error[u / n_fold].empty()) {
      rep_error[u / n_fold] = "featurization failed: " + unit_error[u];
    }
  }

  ExperimentReport report;
  report.task = task;
  report.folds = n_fold;
  report.log_targets = config.target.log_transform;
  report.metrics = metric_names(task);
  report.representations = config.representations;
  for (const auto& s : config.models) report.families.push_back(s.family);
  const std::size_t n_fam = config.models.size();
  report.cells.assign(n_rep, std::vector<CellResult>(n_fam));
  parallel_for(n_rep * n_fam, config.threads, [&](std::size_t u) {
    const std::size_t r = u / n_fam, m = u % n_fam;
    auto& cell = report.cells[r][m];
    if (!rep_error[r].empty()) {
      cell.error = rep_error[r];
      cell.mean.assign(report.metrics.size(), kNaN);
      return;
    }
    cell = evaluate_folds(data[r], config.models[m], task, classes, config.seed, products.size());
  });
  finalize_report(report);
  return report;
}

std::string FeatureCurve::to_csv() const {
  csv::Row header = {"m"};
  for (const auto& m : metrics) header.push_back(m);
  std::string out = csv::format_row(header);
  for (const auto& p : points) {
    csv::Row row = {std::to_string(p.m)};
    for (double v : p.metrics) row.push_back(fixed4(v));
    out += csv::format_row(row);
  }
  return out;
}

FeatureCurve feature_curve(std::span<const DataProduct> products, Representation rep,
                           const ModelSpec& spec, std::span<const std::size_t> m_values,
                           const ExperimentConfig& config) {
  if (m_values.empty()) throw ValidationError("curve: m values must be non-empty");
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] == 0) throw ValidationError("curve: m values must be positive");
    if (i > 0 && m_values[i] <= m_values[i - 1]) {
      throw ValidationError("curve: m values must be strictly ascending");
    }
  }
  const Task task = config.target.kind;
  const std::size_t classes = class_count(config.target);
  const Vector targets = make_targets(products, config.target);
  const auto docs = tokenize_products(products);
  const auto plan = kfold_split(products.size(), config.folds, fold_plan_seed(config.seed));
  ExperimentConfig base = config;
  base.select_features.reset();

  std::vector<FoldData> full(config.folds);
  std::vector<SelectionTrace> traces(config.folds);
  const std::size_t max_m = m_values.back();
  parallel_for(config.folds, config.threads, [&](std::size_t f) {
    full[f] = featurize_fold(products, docs, targets, rep, base, plan, f);
    MrmrConfig mc;
    mc.bins = config.mrmr_bins;
    const std::size_t m = std::min<std::size_t>(max_m, static_cast<std::size_t>(full[f].train.cols()));
    traces[f] = mrmr_select(full[f].train, discretize_target(full[f].y_train, task), m, mc);
  });
  const auto available = static_cast<std::size_t>(full.front().train.cols());
  if (max_m > available) {
    log_warning("curve: m values above " + std::to_string(available) +
                " are clamped to the feature count");
  }

  FeatureCurve curve;
  curve.task = task;
  curve.representation = rep;
  curve.family = spec.family;
  curve.metrics = metric_names(task);
  std::vector<std::size_t> ms;
  for (auto m : m_values) {
    const auto clamped = std::min(m, available);
    if (ms.empty() || ms.back() != clamped) ms.push_back(clamped);
  }
  curve.points.resize(ms.size());
  parallel_for(ms.size(), config.threads, [&](std::size_t p) {
    std::vector<FoldData> folds(config.folds);
    for (std::size_t f = 0; f < config.folds; ++f) {
      auto ids = traces[f].selected();
      ids.resize(std::min(ids.size(), ms[p]));
      std::sort(ids.begin(), ids.end());
      folds[f].train_rows = full[f].train_rows;
      folds[f].test_rows = full[f].test_rows;
      folds[f].train = full[f].train.select_columns(ids);
      folds[f].test = full[f].test.select_columns(ids);
      folds[f].y_train = full[f].y_train;
      folds[f].y_test = full[f].y_test;
    }
    const auto cell = evaluate_folds(folds, spec, task, classes, config.seed, products.size());
    if (!cell.ok()) throw RuntimeFailure("curve: m=" + std::to_string(ms[p]) + ": " + cell.error);
    curve.points[p] = {ms[p], cell.mean};
  });
  return curve;
}

}  // namespace pricelens
