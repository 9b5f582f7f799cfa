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

#include "pricelens/synthetic.hpp"

#include <array>
#include <cmath>

#include "pricelens/annotate.hpp"

namespace pricelens {

namespace {

constexpr std::array<std::array<std::string_view, 12>, kMaxSyntheticTopics> kTopicWords = {{
    {"clinical", "patients", "hospital", "genomic", "drug", "trials", "diagnosis", "therapy",
     "medical", "pharmacy", "oncology", "cohort"},
    {"equities", "trading", "credit", "loans", "portfolio", "securities", "bonds", "banking",
     "liquidity", "yield", "dividend", "hedge"},
    {"shoppers", "footfall", "stores", "visits", "geolocation", "foot", "retail", "mobility",
     "outlets", "consumer", "loyalty", "brands"},
    {"crude", "mining", "drilling", "electricity", "commodity", "oil", "gas", "barrels",
     "pipeline", "reserves", "minerals", "refinery"},
    {"emissions", "climate", "carbon", "pollution", "weather", "rainfall", "temperature",
     "satellite", "sustainability", "forest", "wildfire", "ozone"},
    {"streaming", "viewers", "ratings", "podcast", "broadcast", "movies", "music", "subscribers",
     "television", "episodes", "publishers", "entertainment"},
    {"vehicles", "automotive", "dealers", "registrations", "mileage", "fleet", "telematics",
     "drivers", "charging", "engines", "recalls", "traffic"},
    {"players", "esports", "tournaments", "console", "titles", "betting", "casino",
     "leaderboard", "matches", "gamers", "sessions", "wagers"},
}};

// Industry each planted topic belongs to, by index into kIndustryNames.
constexpr std::array<std::size_t, kMaxSyntheticTopics> kTopicIndustry = {3, 2, 1, 4, 10, 6, 8, 11};

constexpr std::array<std::string_view, 22> kFillerWords = {
    "data", "dataset", "records", "coverage", "daily", "updated", "api", "delivery",
    "historical", "quality", "feed", "monthly", "global", "sources", "files", "schema",
    "fields", "access", "analytics", "insights", "metrics", "reports"};

constexpr std::array<std::string_view, 10> kRefundTexts = {
    "No refunds.",
    "Refunds are not offered for this subscription.",
    "",
    "Refund terms are not specified.",
    "A free trial is available before subscribing.",
    "Data sample provided; all sales are final.",
    "Please contact support@example.com about any delivery issue.",
    "Reach out to our team and we will fix data errors.",
    "Full refund available upon request.",
    "Refund within 30 days if the data feed is unavailable.",
};

std::string capitalize(std::string_view w) {
  std::string s(w);
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

std::vector<std::string_view> synthetic_topic_words(std::size_t t) {
  if (t >= kMaxSyntheticTopics) throw ValidationError("synthetic topic index out of range");
  return {kTopicWords[t].begin(), kTopicWords[t].end()};
}

std::vector<std::string_view> synthetic_filler_words() {
  return {kFillerWords.begin(), kFillerWords.end()};
}

SyntheticCorpus generate_synthetic(const SyntheticConfig& config) {
  if (config.products == 0) throw ValidationError("synthetic: products must be positive");
  if (config.topics == 0 || config.topics > kMaxSyntheticTopics) {
    throw ValidationError("synthetic: topics must be in 1.." + std::to_string(kMaxSyntheticTopics));
  }
  if (!(config.noise_sd >= 0.0)) throw ValidationError("synthetic: noise_sd must be >= 0");
  if (!(config.topic_word_share >= 0.0 && config.topic_word_share <= 1.0)) {
    throw ValidationError("synthetic: topic_word_share must be in [0,1]");
  }
  Rng rng(mix_seed(config.seed, 0x5e));
  // Box-Muller on our own uniforms; std::normal_distribution differs between
  // standard libraries.
  auto noise = [&] {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  auto bern = [&](double p) { return uniform01(rng) < p ? 1 : 0; };
  auto pick = [&](auto const& words) { return words[uniform_index(rng, words.size())]; };

  SyntheticCorpus out;
  out.products.reserve(config.products);
  for (std::size_t i = 0; i < config.products; ++i) {
    // Round-robin keeps every topic populated even for tiny corpora.
    const std::size_t t = i % config.topics;
    const auto& topic = kTopicWords[t];
    auto word = [&] {
      return uniform01(rng) < config.topic_word_share ? pick(topic) : pick(kFillerWords);
    };

    DataProduct p;
    p.id = "syn-" + std::to_string(i + 1);
    p.name = capitalize(pick(topic)) + " " + capitalize(pick(topic)) + " " +
             capitalize(pick(kFillerWords));
    p.detail = std::string(pick(topic));
    for (int k = 0; k < 5; ++k) p.detail += " " + std::string(word());
    const std::size_t len = 15 + uniform_index(rng, 16);
    for (std::size_t k = 0; k < len; ++k) {
      if (k) p.description += ' ';
      p.description += word();
    }
    p.description += '.';

    p.listed_provider = bern(0.1);
    p.volume = 1 + static_cast<int>(std::floor(-std::log(1.0 - uniform01(rng)) * 4.0));
    p.historical_version = static_cast<int>(uniform_index(rng, 3));
    p.future_version = bern(0.3);
    p.sensitive = static_cast<int>(uniform_index(rng, 3));
    p.data_sample = bern(0.3);
    p.support_email = bern(0.7);
    p.support_url = bern(0.5);
    p.refund_text = std::string(pick(kRefundTexts));

    IndustryScores scores{};
    for (auto& s : scores) s = std::round(50.0 * uniform01(rng)) / 100.0;
    const std::size_t dominant =
        uniform01(rng) < 0.8 ? kTopicIndustry[t] : uniform_index(rng, kIndustryCount);
    scores[dominant] = 1.0;

    const double mean = 4.6 + config.topic_spacing * static_cast<double>(t) +
                        0.35 * p.listed_provider + 0.25 * std::log(static_cast<double>(p.volume)) +
                        0.2 * p.data_sample - 0.1 * p.sensitive;
    const double log_price = mean + config.noise_sd * noise();
    // Two decimals, as a listed price would have.
    p.price = std::max(0.01, std::round(std::exp(log_price) * 100.0) / 100.0);

    if (config.annotated) {
      p.refund_policy = fallback_refund(p.refund_text);
      p.industry_scores = scores;
    }
    out.products.push_back(std::move(p));
    out.topic.push_back(t);
    out.log_price.push_back(mean);
  }
  return out;
}

}  // namespace pricelens
