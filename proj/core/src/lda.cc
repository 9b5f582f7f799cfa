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

#include "pricelens/lda.hpp"

#include <algorithm>
#include <string>

namespace pricelens {
namespace {

std::size_t sample_index(std::span<const double> weights, double total, Rng& rng) {
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return k;
  }
  return weights.size() - 1;
}

}  // namespace

TopicModel train_lda(std::span<const TokenList> corpus, const Vocabulary& vocab,
                     const LdaConfig& config) {
  const std::size_t K = config.topics;
  const std::size_t V = vocab.size();
  if (K == 0) throw ValidationError("train_lda: topics must be >= 1");
  if (corpus.empty()) throw ValidationError("train_lda: empty corpus");
  if (K > V) {
    throw ValidationError("train_lda: topics (" + std::to_string(K) +
                          ") exceeds vocabulary size (" + std::to_string(V) + ")");
  }
  const double alpha = config.effective_alpha();
  const double beta = config.beta;
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ValidationError("train_lda: priors must be positive");

  TopicModel m;
  m.topics = K;
  m.alpha = alpha;
  m.beta = beta;
  m.seed = config.seed;
  m.iterations = config.iterations;

  std::vector<std::vector<std::size_t>> words;
  words.reserve(corpus.size());
  for (const auto& doc : corpus) words.push_back(to_ids(doc, vocab));

  const std::size_t N = words.size();
  m.doc_topic_counts.assign(N, std::vector<std::size_t>(K, 0));
  m.topic_word_counts.assign(K, std::vector<std::size_t>(V, 0));
  m.topic_totals.assign(K, 0);
  m.assignments.resize(N);

  Rng rng(mix_seed(config.seed, 0));
  for (std::size_t d = 0; d < N; ++d) {
    m.assignments[d].resize(words[d].size());
    for (std::size_t n = 0; n < words[d].size(); ++n) {
      const std::size_t k = uniform_index(rng, K);
      m.assignments[d][n] = k;
      ++m.doc_topic_counts[d][k];
      ++m.topic_word_counts[k][words[d][n]];
      ++m.topic_totals[k];
    }
  }

  const double v_beta = static_cast<double>(V) * beta;
  std::vector<double> weights(K);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    for (std::size_t d = 0; d < N; ++d) {
      auto& z = m.assignments[d];
      auto& nd = m.doc_topic_counts[d];
      for (std::size_t n = 0; n < words[d].size(); ++n) {
        const std::size_t w = words[d][n];
        const std::size_t old = z[n];
        --nd[old];
        --m.topic_word_counts[old][w];
        --m.topic_totals[old];
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          weights[k] = (static_cast<double>(nd[k]) + alpha) *
                       (static_cast<double>(m.topic_word_counts[k][w]) + beta) /
                       (static_cast<double>(m.topic_totals[k]) + v_beta);
          total += weights[k];
        }
        const std::size_t k = sample_index(weights, total, rng);
        z[n] = k;
        ++nd[k];
        ++m.topic_word_counts[k][w];
        ++m.topic_totals[k];
      }
    }
  }

  m.topic_word.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(V));
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = static_cast<double>(m.topic_totals[k]) + v_beta;
    for (std::size_t w = 0; w < V; ++w) {
      m.topic_word(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(w)) =
          (static_cast<double>(m.topic_word_counts[k][w]) + beta) / denom;
    }
  }
  const double k_alpha = static_cast<double>(K) * alpha;
  m.doc_topic.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(K));
  for (std::size_t d = 0; d < N; ++d) {
    const double denom = static_cast<double>(words[d].size()) + k_alpha;
    for (std::size_t k = 0; k < K; ++k) {
      m.doc_topic(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)) =
          (static_cast<double>(m.doc_topic_counts[d][k]) + alpha) / denom;
    }
  }
  return m;
}

Matrix infer_doc_topics(const TopicModel& model, std::span<const TokenList> corpus,
                        const Vocabulary& vocab, std::size_t iterations, std::uint64_t seed) {
  const std::size_t K = model.topics;
  if (static_cast<std::size_t>(model.topic_word.cols()) != vocab.size()) {
    throw ValidationError("infer_doc_topics: vocabulary does not match the topic model");
  }
  Matrix theta(static_cast<Eigen::Index>(corpus.size()), static_cast<Eigen::Index>(K));
  std::vector<double> weights(K);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    // Per-document stream keeps results independent of batch composition.
    Rng rng(mix_seed(seed, d));
    const auto words = to_ids(corpus[d], vocab);
    std::vector<std::size_t> z(words.size());
    std::vector<std::size_t> nd(K, 0);
    for (std::size_t n = 0; n < words.size(); ++n) {
      z[n] = uniform_index(rng, K);
      ++nd[z[n]];
    }
    for (std::size_t it = 0; it < iterations; ++it) {
      for (std::size_t n = 0; n < words.size(); ++n) {
        --nd[z[n]];
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          weights[k] = (static_cast<double>(nd[k]) + model.alpha) *
                       model.topic_word(static_cast<Eigen::Index>(k),
                                        static_cast<Eigen::Index>(words[n]));
          total += weights[k];
        }
        z[n] = sample_index(weights, total, rng);
        ++nd[z[n]];
      }
    }
    const double denom = static_cast<double>(words.size()) + static_cast<double>(K) * model.alpha;
    for (std::size_t k = 0; k < K; ++k) {
      theta(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)) =
          (static_cast<double>(nd[k]) + model.alpha) / denom;
    }
  }
  return theta;
}

std::size_t dominant_topic(std::span<const double> distribution) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < distribution.size(); ++k) {
    if (distribution[k] > distribution[best]) best = k;
  }
  return best;
}

FeatureMatrix topic_features(const Matrix& distributions, Provenance provenance,
                             std::string_view prefix, bool with_topic_id) {
  FeatureMatrix m;
  const Eigen::Index K = distributions.cols();
  m.values.resize(distributions.rows(), K + (with_topic_id ? 1 : 0));
  m.values.leftCols(K) = distributions;
  for (Eigen::Index k = 0; k < K; ++k) {
    m.names.push_back(std::string(prefix) + "_" + std::to_string(k));
    m.provenance.push_back(provenance);
  }
  if (with_topic_id) {
    for (Eigen::Index i = 0; i < distributions.rows(); ++i) {
      m.values(i, K) = static_cast<double>(dominant_topic(row_span(distributions, i)));
    }
    m.names.push_back(std::string(prefix) + "_id");
    m.provenance.push_back(provenance);
  }
  return m;
}

}  // namespace pricelens
