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

#include "pricelens/cluster_topics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pricelens {

Matrix PrincipalComponents::project(const Matrix& x) const {
  Matrix centered = x.rowwise() - mean.transpose();
  return centered * components.transpose();
}

PrincipalComponents fit_pca(const Matrix& x, std::size_t dims) {
  if (x.rows() == 0) throw ValidationError("fit_pca: no rows");
  PrincipalComponents pca;
  pca.mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - pca.mean.transpose();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / std::max<double>(1.0, static_cast<double>(x.rows() - 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw RuntimeFailure("fit_pca: eigendecomposition failed");
  const Eigen::Index D = x.cols();
  const Eigen::Index r = std::min<Eigen::Index>(static_cast<Eigen::Index>(dims), D);
  pca.components.resize(r, D);
  for (Eigen::Index i = 0; i < r; ++i) {
    // Eigen sorts eigenvalues ascending.
    Vector v = solver.eigenvectors().col(D - 1 - i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    pca.components.row(i) = v.transpose();
  }
  return pca;
}

namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

int nearest(const Matrix& x, Eigen::Index i, const Matrix& centroids, double* dist) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(x, i, centroids, c);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist) *dist = std::sqrt(best_d);
  return best;
}

}  // namespace

KMeansResult kmeans(const Matrix& x, std::size_t k, std::size_t max_iterations,
                    std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (k == 0) throw ValidationError("kmeans: k must be >= 1");
  if (k > n) {
    throw ValidationError("kmeans: n_clusters (" + std::to_string(k) +
                          ") exceeds number of documents (" + std::to_string(n) + ")");
  }
  Rng rng(mix_seed(seed, 0));
  KMeansResult r;
  r.centroids.resize(static_cast<Eigen::Index>(k), x.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = uniform_index(rng, n);
  r.centroids.row(0) = x.row(static_cast<Eigen::Index>(first));
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x, static_cast<Eigen::Index>(i), r.centroids,
                                               static_cast<Eigen::Index>(c - 1)));
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double u = uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = uniform_index(rng, n);
    }
    r.centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
  }

  r.labels.assign(n, -1);
  r.distances.assign(n, 0.0);
  for (std::size_t iter = 0; iter < std::max<std::size_t>(1, max_iterations); ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int label = nearest(x, static_cast<Eigen::Index>(i), r.centroids, &r.distances[i]);
      changed |= label != r.labels[i];
      r.labels[i] = label;
    }
    if (!changed && iter > 0) break;
    Matrix sums = Matrix::Zero(r.centroids.rows(), r.centroids.cols());
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(r.labels[i]) += x.row(static_cast<Eigen::Index>(i));
      ++sizes[static_cast<std::size_t>(r.labels[i])];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) {
        r.centroids.row(static_cast<Eigen::Index>(c)) =
            sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(sizes[c]);
      } else {
        // Re-seed an empty cluster at the point farthest from its centroid.
        const auto far = static_cast<Eigen::Index>(
            std::max_element(r.distances.begin(), r.distances.end()) - r.distances.begin());
        r.centroids.row(static_cast<Eigen::Index>(c)) = x.row(far);
        r.distances[static_cast<std::size_t>(far)] = 0.0;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    r.labels[i] = nearest(x, static_cast<Eigen::Index>(i), r.centroids, &r.distances[i]);
  }
  return r;
}

Matrix class_tfidf(const Matrix& counts) {
  const Eigen::Index C = counts.rows();
  Matrix x = Matrix::Zero(C, counts.cols());
  if (C == 0) return x;
  const double average_words = counts.sum() / static_cast<double>(C);
  const Eigen::RowVectorXd term_totals = counts.colwise().sum();
  for (Eigen::Index c = 0; c < C; ++c) {
    for (Eigen::Index t = 0; t < counts.cols(); ++t) {
      if (term_totals[t] == 0.0) continue;
      x(c, t) = counts(c, t) * std::log(1.0 + average_words / term_totals[t]);
    }
  }
  return x;
}

Matrix ClusterTopics::membership(const Matrix& doc_vectors) const {
  const Matrix reduced = reducer.project(doc_vectors);
  const Eigen::Index C = centroids.rows();
  Matrix p(reduced.rows(), C);
  for (Eigen::Index i = 0; i < reduced.rows(); ++i) {
    double min_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < C; ++c) {
      p(i, c) = std::sqrt(squared_distance(reduced, i, centroids, c));
      min_d = std::min(min_d, p(i, c));
    }
    double total = 0.0;
    for (Eigen::Index c = 0; c < C; ++c) {
      p(i, c) = std::exp(-(p(i, c) - min_d));
      total += p(i, c);
    }
    p.row(i) /= total;
  }
  return p;
}

std::vector<int> ClusterTopics::assign(const Matrix& doc_vectors) const {
  const Matrix reduced = reducer.project(doc_vectors);
  std::vector<int> labels(static_cast<std::size_t>(reduced.rows()));
  for (Eigen::Index i = 0; i < reduced.rows(); ++i) {
    double d = 0.0;
    labels[static_cast<std::size_t>(i)] = nearest(reduced, i, centroids, &d);
    if (d > outlier_threshold) labels[static_cast<std::size_t>(i)] = -1;
  }
  return labels;
}

ClusterTopics cluster_topics(const Matrix& doc_vectors, std::span<const TokenList> corpus,
                             const Vocabulary& vocab, const ClusterConfig& config) {
  const auto n = static_cast<std::size_t>(doc_vectors.rows());
  if (n == 0) throw ValidationError("cluster_topics: no document vectors");
  if (corpus.size() != n) throw ValidationError("cluster_topics: corpus and vectors differ in length");
  if (config.clusters > n) {
    throw ValidationError("cluster_topics: n_clusters (" + std::to_string(config.clusters) +
                          ") exceeds number of documents (" + std::to_string(n) + ")");
  }
  ClusterTopics topics;
  topics.reducer = fit_pca(doc_vectors, config.reduce_dims);
  const Matrix reduced = topics.reducer.project(doc_vectors);
  auto km = kmeans(reduced, config.clusters, config.max_iterations, config.seed);

  // Dissolve undersized clusters; keep cluster ids contiguous.
  std::vector<std::size_t> sizes(config.clusters, 0);
  for (int label : km.labels) ++sizes[static_cast<std::size_t>(label)];
  std::vector<int> remap(config.clusters, -1);
  std::vector<Eigen::Index> kept;
  for (std::size_t c = 0; c < config.clusters; ++c) {
    if (sizes[c] >= std::max<std::size_t>(1, config.min_cluster_size)) {
      remap[c] = static_cast<int>(kept.size());
      kept.push_back(static_cast<Eigen::Index>(c));
    }
  }
  if (kept.empty()) throw ValidationError("cluster_topics: every cluster is below min_cluster_size");
  topics.centroids.resize(static_cast<Eigen::Index>(kept.size()), km.centroids.cols());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    topics.centroids.row(static_cast<Eigen::Index>(c)) = km.centroids.row(kept[c]);
  }
  topics.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) topics.labels[i] = remap[static_cast<std::size_t>(km.labels[i])];

  topics.outlier_threshold = std::numeric_limits<double>::infinity();
  if (config.outlier_quantile < 1.0) {
    std::vector<double> sorted = km.distances;
    std::sort(sorted.begin(), sorted.end());
    const double q = std::clamp(config.outlier_quantile, 0.0, 1.0);
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    topics.outlier_threshold = sorted[std::max<std::size_t>(rank, 1) - 1];
    for (std::size_t i = 0; i < n; ++i) {
      if (km.distances[i] > topics.outlier_threshold) topics.labels[i] = -1;
    }
  }

  Matrix counts = Matrix::Zero(topics.centroids.rows(), static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (topics.labels[i] < 0) continue;
    for (auto id : to_ids(corpus[i], vocab)) {
      counts(topics.labels[i], static_cast<Eigen::Index>(id)) += 1.0;
    }
  }
  topics.keyword_weights = class_tfidf(counts);
  topics.memberships = topics.membership(doc_vectors);
  return topics;
}

std::vector<std::pair<std::string, double>> top_keywords(const ClusterTopics& topics,
                                                          const Vocabulary& vocab,
                                                          std::size_t cluster, std::size_t n) {
  if (cluster >= topics.cluster_count()) throw ValidationError("top_keywords: no such cluster");
  std::vector<std::size_t> order(vocab.size());
  std::iota(order.begin(), order.end(), 0);
  const auto row = static_cast<Eigen::Index>(cluster);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double wa = topics.keyword_weights(row, static_cast<Eigen::Index>(a));
    const double wb = topics.keyword_weights(row, static_cast<Eigen::Index>(b));
    if (wa != wb) return wa > wb;
    return vocab.terms()[a] < vocab.terms()[b];
  });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < std::min(n, order.size()); ++i) {
    out.emplace_back(vocab.terms()[order[i]],
                     topics.keyword_weights(row, static_cast<Eigen::Index>(order[i])));
  }
  return out;
}

}  // namespace pricelens
