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

// Synthetic marketplace listings with planted topic -> log-price structure,
// used for end-to-end checks and the bundled demo data.

#ifndef PRICELENS_SYNTHETIC_HPP_
#define PRICELENS_SYNTHETIC_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "pricelens/corpus.hpp"

namespace pricelens {

inline constexpr std::size_t kMaxSyntheticTopics = 8;

struct SyntheticConfig {
  std::size_t products = 600;
  std::size_t topics = 5;
  // Standard deviation of the Gaussian noise on ln(price).
  double noise_sd = 0.3;
  // Spacing between adjacent topic means on ln(price).
  double topic_spacing = 1.1;
  // Probability that a description word is drawn from the topic vocabulary
  // rather than the shared filler vocabulary.
  double topic_word_share = 0.6;
  // Fill refund_policy and industry_scores; otherwise leave them for annotate.
  bool annotated = true;
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  std::vector<DataProduct> products;
  std::vector<std::size_t> topic;  // planted topic per product
  std::vector<double> log_price;   // noise-free ln(price)
};

SyntheticCorpus generate_synthetic(const SyntheticConfig& config);

// Vocabulary of planted topic t.
std::vector<std::string_view> synthetic_topic_words(std::size_t t);
std::vector<std::string_view> synthetic_filler_words();

}  // namespace pricelens

#endif  // PRICELENS_SYNTHETIC_HPP_
