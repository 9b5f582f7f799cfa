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

// Tokenization, vocabulary construction and the count-based text
// representations (bag of words, TF-IDF).

#ifndef PRICELENS_TEXT_HPP_
#define PRICELENS_TEXT_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pricelens/common.hpp"
#include "pricelens/feature_matrix.hpp"

namespace pricelens {

using TokenList = std::vector<std::string>;

// Identifier of the bundled stopword list. Bump when the list changes.
inline constexpr std::string_view kStopwordListVersion = "en-v1";

bool is_stopword(std::string_view token);
std::span<const std::string_view> stopwords();

// Lowercases, splits on anything that is not an ASCII letter, drops tokens
// shorter than two characters and stopwords.
TokenList tokenize(std::string_view text);

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
             std::vector<std::size_t> term_freq, std::size_t total_docs);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
  // Corpus-wide occurrence counts, the ranking key.
  const std::vector<std::size_t>& term_freq() const { return term_freq_; }
  std::size_t total_docs() const { return total_docs_; }

  std::optional<std::size_t> index_of(std::string_view term) const;

  // term,doc_freq CSV (plus term_freq and a total_docs trailer row).
  std::string to_csv() const;
  static Vocabulary from_csv(std::string_view text);

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::vector<std::size_t> term_freq_;
  std::size_t total_docs_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kDefaultMaxTerms = 500;

// Top `max_terms` terms by corpus frequency, ties broken lexicographically.
Vocabulary build_vocabulary(std::span<const TokenList> corpus,
                            std::size_t max_terms = kDefaultMaxTerms);

// Maps tokens to vocabulary ids, dropping out-of-vocabulary tokens.
std::vector<std::size_t> to_ids(const TokenList& doc, const Vocabulary& vocab);

// Raw term counts; out-of-vocabulary tokens are ignored.
FeatureMatrix bow(std::span<const TokenList> corpus, const Vocabulary& vocab);

// idf_j = ln(N / (1 + df_j)) using the vocabulary's document statistics.
// Values are negative for terms present in every document; they are kept.
std::vector<double> inverse_document_frequency(const Vocabulary& vocab);

// tf (count over in-vocabulary token total) times idf. Empty rows stay zero.
FeatureMatrix tfidf(std::span<const TokenList> corpus, const Vocabulary& vocab);

}  // namespace pricelens

#endif  // PRICELENS_TEXT_HPP_
