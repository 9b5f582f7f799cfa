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

// Refund-level and industry-similarity annotation through an
// OpenAI-compatible chat endpoint, with an offline rule-based fallback.

#ifndef PRICELENS_ANNOTATE_HPP_
#define PRICELENS_ANNOTATE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pricelens/corpus.hpp"

namespace pricelens {

enum class AnnotationKind { refund, industry };

// Identifier of the bundled prompt templates.
inline constexpr std::string_view kPromptVersion = "v1";

std::string_view prompt_template(AnnotationKind kind);

// The template followed by "Input texts:" and one numbered line per text.
// Whitespace runs collapse to single spaces; empty texts become "(empty)".
std::string build_prompt(AnnotationKind kind, std::span<const std::string> texts);

struct EndpointConfig {
  std::string url;    // base URL such as http://127.0.0.1:8080/v1; empty = offline
  std::string model = "deepseek-chat";
  std::string api_key_env = "PRICELENS_API_KEY";
  double timeout_seconds = 60.0;
  int retries = 3;
  int backoff_ms = 500;   // doubled after each failed attempt
  std::string cache_dir;  // empty disables the response cache
  std::size_t batch_size = 20;
};

// One chat completion at temperature 0. Responses are cached under
// sha256(model + "\n" + prompt). Throws TransportError after the retry budget
// or on a non-retryable status.
std::string call_llm(const EndpointConfig& endpoint, const std::string& prompt);

// First well-formed JSON integer array in the response.
std::vector<int> parse_refund(std::string_view response, std::size_t batch_size);

// One 12-number list per non-blank line. A maximum within 1e-6 of 1 is
// renormalised to exactly 1.
std::vector<IndustryScores> parse_industry(std::string_view response, std::size_t rows);

// Keyword rules checked in priority order 4, 3, 2, 0; anything else is 1.
int fallback_refund(std::string_view text);

// Cosine similarity of the text's TF-IDF vector with each industry's seed
// keywords, scaled so the maximum is 1. All ones when no keyword matches.
IndustryScores fallback_industry(std::string_view text);

std::vector<int> annotate_refund(std::span<const std::string> texts, const EndpointConfig& endpoint);
std::vector<IndustryScores> annotate_industry(std::span<const std::string> texts,
                                              const EndpointConfig& endpoint);

// Fills refund_policy (from refund_text) and industry_scores (from the listing
// text) on products that lack them.
void annotate_products(std::vector<DataProduct>& products, const EndpointConfig& endpoint);

}  // namespace pricelens

#endif  // PRICELENS_ANNOTATE_HPP_
