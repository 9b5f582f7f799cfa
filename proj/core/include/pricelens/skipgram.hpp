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

// Skip-gram word embeddings trained with negative sampling, and average
// pooling of word vectors into document vectors.

#ifndef PRICELENS_SKIPGRAM_HPP_
#define PRICELENS_SKIPGRAM_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pricelens/common.hpp"
#include "pricelens/feature_matrix.hpp"
#include "pricelens/text.hpp"

namespace pricelens {

struct SkipGramConfig {
  std::size_t dimension = 100;
  std::size_t window = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of this value
  std::size_t negatives = 5;
  std::uint64_t seed = 1;
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> terms, Matrix input, Matrix output,
                 SkipGramConfig config);

  std::size_t size() const { return terms_.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(input_.cols()); }
  const std::vector<std::string>& terms() const { return terms_; }
  const Matrix& input_vectors() const { return input_; }
  const Matrix& output_vectors() const { return output_; }
  const SkipGramConfig& config() const { return config_; }

  // Mean skip-gram loss per (center, context) pair for each epoch.
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }
  void set_epoch_losses(std::vector<double> losses) { epoch_losses_ = std::move(losses); }

  std::optional<std::size_t> index_of(std::string_view term) const;
  std::span<const double> input_vector(std::size_t id) const { return row_span(input_, static_cast<Eigen::Index>(id)); }

  // "# pricelens-embeddings v1" header, a config line, then one
  // "term v_1 ... v_d" line per term for input vectors and, after an
  // "#output" marker, the same for output vectors.
  std::string to_text() const;
  static EmbeddingTable from_text(std::string_view text);

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  Matrix input_;
  Matrix output_;
  SkipGramConfig config_;
  std::vector<double> epoch_losses_;
};

// Loss of one (center, context) pair with k negatives:
//   -log s(u_o . v) - sum_k log s(-u_k . v)
// and its gradient with respect to every vector involved.
struct NegativeSamplingGradient {
  double loss = 0.0;
  Vector center;                  // dL/dv
  Vector context;                 // dL/du_o
  std::vector<Vector> negatives;  // dL/du_k
};

NegativeSamplingGradient negative_sampling_gradient(
    std::span<const double> center, std::span<const double> context,
    std::span<const std::span<const double>> negatives);

// Trains on the in-vocabulary token stream of each document; windows never
// cross document boundaries. Deterministic given config.seed.
EmbeddingTable train_skipgram(std::span<const TokenList> corpus, const Vocabulary& vocab,
                              const SkipGramConfig& config);

// Mean of the input vectors of in-vocabulary tokens; zero vector when none.
Vector doc_embedding(const TokenList& doc, const EmbeddingTable& table);

// One "embedding_<k>" column per dimension.
FeatureMatrix embedding_features(std::span<const TokenList> corpus, const EmbeddingTable& table);

// Document vectors for the pluggable clustering path: CSV with one row per
// document and one numeric column per dimension.
Matrix load_document_vectors_csv(std::string_view text);

}  // namespace pricelens

#endif  // PRICELENS_SKIPGRAM_HPP_
