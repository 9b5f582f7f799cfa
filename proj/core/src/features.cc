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

#include "pricelens/features.hpp"

namespace pricelens {

std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::bow: return "bow";
    case Representation::tfidf: return "tfidf";
    case Representation::word2vec: return "word2vec";
    case Representation::lda: return "lda";
    case Representation::bertopic: return "bertopic";
  }
  return "unknown";
}

std::string_view display_name(Representation r) {
  switch (r) {
    case Representation::bow: return "BOW";
    case Representation::tfidf: return "TFIDF";
    case Representation::word2vec: return "Word2vec";
    case Representation::lda: return "LDA";
    case Representation::bertopic: return "BERTopic";
  }
  return "unknown";
}

const std::vector<Representation>& all_representations() {
  static const std::vector<Representation> all = {Representation::bow, Representation::tfidf,
                                                  Representation::word2vec, Representation::lda,
                                                  Representation::bertopic};
  return all;
}

Representation representation_from_string(std::string_view name) {
  for (auto r : all_representations()) {
    if (to_string(r) == name) return r;
  }
  throw ValidationError("unknown representation: " + std::string(name));
}

namespace {

Matrix pooled_vectors(std::span<const TokenList> docs, const EmbeddingTable& table) {
  return embedding_features(docs, table).values;
}

}  // namespace

FittedRepresentation fit_representation(Representation kind, std::span<const TokenList> train_docs,
                                        const RepresentationConfig& config, std::uint64_t seed,
                                        const Matrix* external_vectors) {
  FittedRepresentation rep;
  rep.kind_ = kind;
  rep.config_ = config;
  rep.seed_ = seed;
  rep.vocab_ = build_vocabulary(train_docs, config.max_terms);
  switch (kind) {
    case Representation::bow:
      rep.training_features_ = bow(train_docs, rep.vocab_);
      break;
    case Representation::tfidf:
      rep.training_features_ = tfidf(train_docs, rep.vocab_);
      break;
    case Representation::word2vec: {
      SkipGramConfig sg = config.skipgram;
      sg.seed = mix_seed(seed, 1);
      rep.embeddings_ = train_skipgram(train_docs, rep.vocab_, sg);
      rep.training_features_ = embedding_features(train_docs, *rep.embeddings_);
      break;
    }
    case Representation::lda: {
      LdaConfig lda = config.lda;
      lda.seed = mix_seed(seed, 2);
      lda.topics = std::min(lda.topics, rep.vocab_.size());
      rep.lda_ = train_lda(train_docs, rep.vocab_, lda);
      rep.training_features_ = topic_features(rep.lda_->doc_topic, Provenance::lda, "lda_topic", false);
      break;
    }
    case Representation::bertopic: {
      Matrix vectors;
      if (external_vectors) {
        if (external_vectors->rows() != static_cast<Eigen::Index>(train_docs.size())) {
          throw ValidationError("document vectors: row count does not match the corpus");
        }
        vectors = *external_vectors;
      } else {
        SkipGramConfig sg = config.skipgram;
        sg.seed = mix_seed(seed, 1);
        rep.embeddings_ = train_skipgram(train_docs, rep.vocab_, sg);
        vectors = pooled_vectors(train_docs, *rep.embeddings_);
      }
      ClusterConfig cc = config.cluster;
      cc.seed = mix_seed(seed, 3);
      cc.clusters = std::min(cc.clusters, train_docs.size());
      rep.clusters_ = cluster_topics(vectors, train_docs, rep.vocab_, cc);
      rep.training_features_ =
          topic_features(rep.clusters_->memberships, Provenance::bertopic, "bertopic_topic", true);
      break;
    }
  }
  return rep;
}

FeatureMatrix FittedRepresentation::transform(std::span<const TokenList> docs,
                                              const Matrix* external_vectors) const {
  switch (kind_) {
    case Representation::bow:
      return bow(docs, vocab_);
    case Representation::tfidf:
      return tfidf(docs, vocab_);
    case Representation::word2vec:
      return embedding_features(docs, *embeddings_);
    case Representation::lda:
      return topic_features(
          infer_doc_topics(*lda_, docs, vocab_, config_.lda_inference_iterations,
                           mix_seed(seed_, 4)),
          Provenance::lda, "lda_topic", false);
    case Representation::bertopic: {
      Matrix vectors;
      if (external_vectors) {
        vectors = *external_vectors;
      } else if (embeddings_) {
        vectors = pooled_vectors(docs, *embeddings_);
      } else {
        throw ValidationError("bertopic: fitted on external document vectors; supply them");
      }
      return topic_features(clusters_->membership(vectors), Provenance::bertopic,
                            "bertopic_topic", true);
    }
  }
  throw ValidationError("unknown representation");
}

std::vector<TokenList> tokenize_products(std::span<const DataProduct> products) {
  std::vector<TokenList> docs;
  docs.reserve(products.size());
  for (const auto& p : products) docs.push_back(tokenize(compose_text(p)));
  return docs;
}

FeatureMatrix structured_features(std::span<const DataProduct> products) {
  FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(products.size()),
                  static_cast<Eigen::Index>(kStructuredColumns));
  for (std::size_t i = 0; i < products.size(); ++i) {
    const auto row = encode_structured(products[i]);
    for (std::size_t j = 0; j < kStructuredColumns; ++j) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  m.names = structured_column_names();
  m.provenance.assign(kStructuredColumns, Provenance::structured);
  return m;
}

FeatureMatrix combine_features(const FeatureMatrix& text, std::span<const DataProduct> products,
                               bool include_structured) {
  if (!include_structured) return text;
  return hconcat(text, structured_features(products));
}

}  // namespace pricelens
