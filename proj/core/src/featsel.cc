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

#include "pricelens/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "pricelens/csv.hpp"

namespace pricelens {

DiscretizedColumn discretize(std::span<const double> column, std::size_t bins) {
  if (bins == 0) throw ValidationError("discretize: bins must be positive");
  const std::size_t n = column.size();
  DiscretizedColumn out;
  out.labels.assign(n, 0);
  if (n == 0) {
    out.bins = 0;
    return out;
  }
  for (double v : column) {
    if (!std::isfinite(v)) throw ValidationError("discretize: column has non-finite values");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
  std::size_t raw_bin = 0;
  int label = -1;
  std::size_t last_raw = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = column[order[i]];
    if (i == 0 || v != column[order[i - 1]]) {
      raw_bin = i * bins / n;
      if (raw_bin != last_raw) {
        ++label;
        last_raw = raw_bin;
        out.edges.push_back(v);
      }
    }
    out.labels[order[i]] = label;
  }
  out.bins = static_cast<std::size_t>(label + 1);
  return out;
}

namespace {

std::vector<double> joint_counts(const DiscretizedColumn& u, const DiscretizedColumn& v) {
  std::vector<double> joint(u.bins * v.bins, 0.0);
  for (std::size_t i = 0; i < u.labels.size(); ++i) {
    joint[static_cast<std::size_t>(u.labels[i]) * v.bins + static_cast<std::size_t>(v.labels[i])] += 1.0;
  }
  return joint;
}

}  // namespace

double mutual_information(const DiscretizedColumn& u, const DiscretizedColumn& v) {
  if (u.labels.size() != v.labels.size()) {
    throw ValidationError("mutual_information: columns have different lengths (" +
                          std::to_string(u.labels.size()) + " vs " +
                          std::to_string(v.labels.size()) + ")");
  }
  const std::size_t n = u.labels.size();
  if (n == 0) return 0.0;
  const auto joint = joint_counts(u, v);
  std::vector<double> pu(u.bins, 0.0), pv(v.bins, 0.0);
  for (std::size_t a = 0; a < u.bins; ++a) {
    for (std::size_t b = 0; b < v.bins; ++b) {
      pu[a] += joint[a * v.bins + b];
      pv[b] += joint[a * v.bins + b];
    }
  }
  const double dn = static_cast<double>(n);
  double mi = 0.0;
  for (std::size_t a = 0; a < u.bins; ++a) {
    for (std::size_t b = 0; b < v.bins; ++b) {
      const double c = joint[a * v.bins + b];
      if (c == 0.0) continue;
      mi += (c / dn) * std::log(c * dn / (pu[a] * pv[b]));
    }
  }
  return mi;
}

double entropy(const DiscretizedColumn& u) {
  std::vector<double> counts(u.bins, 0.0);
  for (int l : u.labels) counts[static_cast<std::size_t>(l)] += 1.0;
  const double n = static_cast<double>(u.labels.size());
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

DiscretizedColumn discretize_target(const Vector& target, Task task) {
  std::span<const double> values(target.data(), static_cast<std::size_t>(target.size()));
  if (task == Task::regression) return discretize(values, kDefaultBins);
  // Categorical: one bin per distinct label, in label order.
  std::map<double, int> ids;
  for (double v : values) ids.emplace(v, 0);
  DiscretizedColumn out;
  int next = 0;
  for (auto& [value, id] : ids) {
    id = next++;
    out.edges.push_back(value);
  }
  out.bins = ids.size();
  out.labels.reserve(values.size());
  for (double v : values) out.labels.push_back(ids.at(v));
  return out;
}

std::vector<std::size_t> SelectionTrace::selected() const {
  std::vector<std::size_t> ids;
  ids.reserve(steps.size());
  for (const auto& s : steps) ids.push_back(s.feature);
  return ids;
}

std::string SelectionTrace::to_csv() const {
  std::string out = "step,feature,name,relevance,redundancy,score\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    out += csv::format_row({std::to_string(i + 1), std::to_string(s.feature),
                            i < names.size() ? names[i] : std::string(),
                            csv::format_double(s.relevance), csv::format_double(s.redundancy),
                            csv::format_double(s.score)});
  }
  return out;
}

SelectionTrace mrmr_select(const FeatureMatrix& features, const DiscretizedColumn& target,
                           std::size_t m, const MrmrConfig& config) {
  features.check_shape();
  if (m == 0) throw ValidationError("mrmr: m must be at least 1");
  const auto k = static_cast<std::size_t>(features.cols());
  const auto n = static_cast<std::size_t>(features.rows());
  if (target.labels.size() != n) throw ValidationError("mrmr: target length does not match rows");
  if (m > k) {
    log_warning("mrmr: requested " + std::to_string(m) + " features but only " +
                std::to_string(k) + " exist; selecting all");
    m = k;
  }
  std::vector<DiscretizedColumn> columns(k);
  std::vector<double> relevance(k);
  parallel_for(k, config.threads, [&](std::size_t j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = features.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    columns[j] = discretize(col, config.bins);
    relevance[j] = mutual_information(columns[j], target);
  });

  SelectionTrace trace;
  std::vector<bool> taken(k, false);
  std::vector<double> redundancy_sum(k, 0.0);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t best = k;
    double best_score = -std::numeric_limits<double>::infinity();
    double best_red = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (taken[j]) continue;
      const double red = step == 0 ? 0.0 : redundancy_sum[j] / static_cast<double>(step);
      const double score = relevance[j] - red;
      if (best == k || score > best_score) {
        best = j;
        best_score = score;
        best_red = red;
      }
    }
    taken[best] = true;
    trace.steps.push_back({best, relevance[best], best_red, best_score});
    trace.names.push_back(features.names[best]);
    if (step + 1 < m) {
      parallel_for(k, config.threads, [&](std::size_t j) {
        if (!taken[j]) redundancy_sum[j] += mutual_information(columns[j], columns[best]);
      });
    }
  }
  return trace;
}

}  // namespace pricelens
