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

// The five text representations behind one fit/transform interface, combined
// with the structured product attributes.

#ifndef PRICELENS_FEATURES_HPP_
#define PRICELENS_FEATURES_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pricelens/cluster_topics.hpp"
#include "pricelens/corpus.hpp"
#include "pricelens/feature_matrix.hpp"
#include "pricelens/lda.hpp"
#include "pricelens/skipgram.hpp"
#include "pricelens/text.hpp"

namespace pricelens {

enum class Representation { bow, tfidf, word2vec, lda, bertopic };

std::string_view to_string(Representation r);
// Short name used in report tables (BOW, TFIDF, Word2vec, LDA, BERTopic).
std::string_view display_name(Representation r);
Representation representation_from_string(std::string_view name);
const std::vector<Representation>& all_representations();

struct RepresentationConfig {
  std::size_t max_terms = kDefaultMaxTerms;
  SkipGramConfig skipgram;
  LdaConfig lda;
  std::size_t lda_inference_iterations = 50;
  ClusterConfig cluster;
  bool include_structured = true;
};

// A representation fitted on training documents only.
class FittedRepresentation {
 public:
  Representation kind() const { return kind_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const EmbeddingTable* embeddings() const { return embeddings_ ? &*embeddings_ : nullptr; }
  const TopicModel* topic_model() const { return lda_ ? &*lda_ : nullptr; }
  const ClusterTopics* cluster_topics() const { return clusters_ ? &*clusters_ : nullptr; }

  // Text features of unseen documents. external_vectors, when given, replaces
  // the pooled word embeddings as the document vectors of the cluster path.
  FeatureMatrix transform(std::span<const TokenList> docs,
                          const Matrix* external_vectors = nullptr) const;

  // Text features of the training documents as produced during fitting.
  const FeatureMatrix& training_features() const { return training_features_; }

 private:
  friend FittedRepresentation fit_representation(Representation, std::span<const TokenList>,
                                                 const RepresentationConfig&, std::uint64_t,
                                                 const Matrix*);
  Representation kind_ = Representation::bow;
  RepresentationConfig config_;
  std::uint64_t seed_ = 0;
  Vocabulary vocab_;
  std::optional<EmbeddingTable> embeddings_;
  std::optional<TopicModel> lda_;
  std::optional<ClusterTopics> clusters_;
  FeatureMatrix training_features_;
};

FittedRepresentation fit_representation(Representation kind, std::span<const TokenList> train_docs,
                                        const RepresentationConfig& config, std::uint64_t seed,
                                        const Matrix* external_vectors = nullptr);

std::vector<TokenList> tokenize_products(std::span<const DataProduct> products);

// The 21 structured columns, provenance "structured".
FeatureMatrix structured_features(std::span<const DataProduct> products);

// Text features (from `text`) followed by structured columns when configured.
FeatureMatrix combine_features(const FeatureMatrix& text, std::span<const DataProduct> products,
                               bool include_structured);

}  // namespace pricelens

#endif  // PRICELENS_FEATURES_HPP_
