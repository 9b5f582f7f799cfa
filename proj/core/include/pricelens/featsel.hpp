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

// Maximum-relevance minimum-redundancy feature selection using plug-in mutual
// information over equal-frequency discretized columns.

#ifndef PRICELENS_FEATSEL_HPP_
#define PRICELENS_FEATSEL_HPP_

#include <span>
#include <string>
#include <vector>

#include "pricelens/common.hpp"
#include "pricelens/feature_matrix.hpp"

namespace pricelens {

inline constexpr std::size_t kDefaultBins = 10;

struct DiscretizedColumn {
  std::vector<int> labels;   // in [0, bins)
  std::size_t bins = 0;
  std::vector<double> edges;  // smallest value of each bin, ascending
};

// Equal-frequency binning by sorted position: the value at sorted position i
// would go to bin floor(i * B / n); tied values all take the bin of their
// first occurrence, and the used bins are relabelled 0, 1, ...
DiscretizedColumn discretize(std::span<const double> column, std::size_t bins = kDefaultBins);

// Plug-in estimate in nats. Throws on a length mismatch.
double mutual_information(const DiscretizedColumn& u, const DiscretizedColumn& v);

double entropy(const DiscretizedColumn& u);

// Classification targets keep their labels as categories; regression targets
// are binned into kDefaultBins equal-frequency bins.
DiscretizedColumn discretize_target(const Vector& target, Task task);

struct SelectionStep {
  std::size_t feature = 0;
  double relevance = 0.0;
  double redundancy = 0.0;
  double score = 0.0;
};

struct SelectionTrace {
  std::vector<SelectionStep> steps;
  std::vector<std::string> names;  // column names of the selected features

  std::vector<std::size_t> selected() const;
  std::string to_csv() const;
};

struct MrmrConfig {
  std::size_t bins = kDefaultBins;
  int threads = 1;
};

// Greedy incremental search: at step m pick the unselected column maximising
// I(u_j, c) - (1/(m-1)) sum_i I(u_j, u_i) over the already-selected u_i.
// Ties go to the lower column index. m larger than the column count selects
// everything with a warning.
SelectionTrace mrmr_select(const FeatureMatrix& features, const DiscretizedColumn& target,
                           std::size_t m, const MrmrConfig& config = {});

}  // namespace pricelens

#endif  // PRICELENS_FEATSEL_HPP_
