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

#ifndef PRICELENS_LDA_HPP_
#define PRICELENS_LDA_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pricelens/common.hpp"
#include "pricelens/feature_matrix.hpp"
#include "pricelens/text.hpp"

namespace pricelens {

struct LdaConfig {
  std::size_t topics = 10;
  std::optional<double> alpha;  // defaults to 50 / topics
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;

  double effective_alpha() const { return alpha.value_or(50.0 / static_cast<double>(topics)); }
};

// Latent Dirichlet allocation fitted by collapsed Gibbs sampling.
struct TopicModel {
  std::size_t topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;

  Matrix topic_word;  // K x V, rows sum to 1
  Matrix doc_topic;   // N x K, rows sum to 1

  // Final sampler state.
  std::vector<std::vector<std::size_t>> assignments;  // z per in-vocabulary token
  std::vector<std::vector<std::size_t>> doc_topic_counts;
  std::vector<std::vector<std::size_t>> topic_word_counts;
  std::vector<std::size_t> topic_totals;
};

// Throws if topics == 0, topics > |vocab| or the corpus is empty.
TopicModel train_lda(std::span<const TokenList> corpus, const Vocabulary& vocab,
                     const LdaConfig& config);

// Document-topic proportions for unseen documents, sampling z with the
// topic-word matrix held fixed.
Matrix infer_doc_topics(const TopicModel& model, std::span<const TokenList> corpus,
                        const Vocabulary& vocab, std::size_t iterations, std::uint64_t seed);

// Argmax with the lower topic index winning ties.
std::size_t dominant_topic(std::span<const double> distribution);

// One "<prefix>_<k>" probability column per topic, optionally followed by a
// "<prefix>_id" column holding the dominant topic.
FeatureMatrix topic_features(const Matrix& distributions, Provenance provenance,
                             std::string_view prefix, bool with_topic_id);

}  // namespace pricelens

#endif  // PRICELENS_LDA_HPP_
