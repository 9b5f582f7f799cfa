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

// Cluster-based topics over document vectors: principal-component reduction,
// k-means clustering with an outlier rule, class-based TF-IDF keywords and
// softmax cluster memberships.

#ifndef PRICELENS_CLUSTER_TOPICS_HPP_
#define PRICELENS_CLUSTER_TOPICS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pricelens/common.hpp"
#include "pricelens/text.hpp"

namespace pricelens {

struct ClusterConfig {
  std::size_t reduce_dims = 5;
  std::size_t clusters = 8;
  // Clusters with fewer members are dissolved into outliers.
  std::size_t min_cluster_size = 1;
  // Documents farther from their centroid than this quantile of all
  // assignment distances are labelled -1. 1.0 disables the rule.
  double outlier_quantile = 1.0;
  std::size_t max_iterations = 300;
  std::uint64_t seed = 1;
};

struct PrincipalComponents {
  Vector mean;        // D
  Matrix components;  // r x D, orthonormal rows, descending variance

  Matrix project(const Matrix& x) const;
};

// Centered PCA. Each component is sign-normalised so its largest-magnitude
// loading is positive.
PrincipalComponents fit_pca(const Matrix& x, std::size_t dims);

struct KMeansResult {
  Matrix centroids;           // k x r
  std::vector<int> labels;    // per row
  std::vector<double> distances;
};

// k-means++ seeding then Lloyd iterations; ties assign to the lower index.
KMeansResult kmeans(const Matrix& x, std::size_t k, std::size_t max_iterations,
                    std::uint64_t seed);

// X_{t,c} = tf_{t,c} * ln(1 + A / tf_t); A is the mean token count per
// cluster-merged document. counts is clusters x terms.
Matrix class_tfidf(const Matrix& counts);

struct ClusterTopics {
  PrincipalComponents reducer;
  Matrix centroids;                  // clusters x r
  std::vector<int> labels;           // training documents, -1 = outlier
  Matrix keyword_weights;            // clusters x |V|, class TF-IDF
  Matrix memberships;                // training documents x clusters
  double outlier_threshold = 0.0;    // +inf when the rule is disabled

  std::size_t cluster_count() const { return static_cast<std::size_t>(centroids.rows()); }

  // Softmax of negative Euclidean distances to every centroid.
  Matrix membership(const Matrix& doc_vectors) const;
  std::vector<int> assign(const Matrix& doc_vectors) const;
};

// doc_vectors rows align with corpus entries (token lists feed the keyword
// weights). Throws if clusters > number of documents.
ClusterTopics cluster_topics(const Matrix& doc_vectors, std::span<const TokenList> corpus,
                             const Vocabulary& vocab, const ClusterConfig& config);

// The n highest-weighted terms of a cluster, ties lexicographic.
std::vector<std::pair<std::string, double>> top_keywords(const ClusterTopics& topics,
                                                          const Vocabulary& vocab,
                                                          std::size_t cluster, std::size_t n);

}  // namespace pricelens

#endif  // PRICELENS_CLUSTER_TOPICS_HPP_
