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

#include "pricelens/annotate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pricelens/text.hpp"

namespace pricelens {

namespace {

constexpr std::string_view kRefundTemplate = R"PROMPT(You are a text classification assistant. Your task is to assign a refund policy level (0–4) based on the following rules:
- Level 0: No refunds (clear denial). Examples: "No refunds.", "Refunds are not offered on this product.", "This product is non-refundable.", "Refunds not applicable."
- Level 1: Undefined / Not specified. Examples: "This product does not have a defined refund policy.", "Refund policy will be discussed...", "Refunds are not specified for this product."
- Level 2: No refunds, but with additional details (trial, sample, disclaimer). Examples: "No refunds. Please utilize trial version before purchase.", "Please request a free sample before buying.", "Not Applicable.", "This is a free sample.", "All sales are final due to digital nature."
- Level 3: No refunds, but contact/support is offered. Examples: "No refunds but contact us at ...", "Refunds are not offered, but we will fix issues.", "Please contact support@... for assistance."
- Level 4: Conditional refunds (specific cases allowed). Examples: "Full refund available upon request.", "Refund only if subscription is canceled within 90 days.", "Refunds issued for valid reasons only."
Instruction:
Classify each input text into a level 0–4.
Return the result as a JSON array of integers, in the same order as input texts.
Do not output anything else.
)PROMPT";

constexpr std::string_view kIndustryTemplate = R"PROMPT(You are a text classification assistant. Your task is to calculate the similarity between the data product description text and each scenario in the given list of application scenario type, with a numerical range of [0,1], where the most similar scenario is assigned a value of 1. Do not output any other content. List of application scenario type and their brief descriptions:
- E-commerce and Business Data: Data products for e-commerce and online sales, such as sales data, inventory data, consumer behavior data.
- Retail and Location Data: Data involving geographical location and marketing activities, such as GPS data, advertising data, foot traffic data.
- Financial Services: Data for the financial industry, such as banking, insurance, investment data.
- Healthcare and Life Sciences Data: Data related to health, medicine, biology, such as disease data, clinical trial data, genomic data.
- Resources Data: Data about natural resources, such as energy data, mining data, agricultural data.
- Public Sector Data: Data from government and public sectors, such as census data, public records, regulatory data.
- Media and Entertainment Data: Data for media and entertainment, such as streaming data, content rating data, social media data.
- Telecommunications Data: Data from telecommunications networks and services, such as call records, network performance data.
- Cars and Automotive Data: Data related to vehicles and transportation, such as sensor data, traffic data, car sales data.
- Manufacturing Data: Data for manufacturing and industrial processes, such as production data, supply chain data.
- Environmental Data: Data about the environment, climate, sustainability, such as pollution data, climate indicators.
- Gaming Data: Data from the gaming industry, such as player statistics, game performance data.
Instruction: For N input items, return N lines. For item i, output ONLY a JSON-style list of 12 numbers in [0,1] whose maximum equals 1, corresponding to the scenarios in the exact order listed above. No extra text, no codes fences.
)PROMPT";

std::string collapse(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      space = !out.empty();
    } else {
      if (space) out += ' ';
      space = false;
      out += c;
    }
  }
  return out;
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool contains_any(const std::string& text, std::initializer_list<std::string_view> needles) {
  return std::any_of(needles.begin(), needles.end(),
                     [&](std::string_view n) { return text.find(n) != std::string::npos; });
}

}  // namespace

std::string_view prompt_template(AnnotationKind kind) {
  return kind == AnnotationKind::refund ? kRefundTemplate : kIndustryTemplate;
}

std::string build_prompt(AnnotationKind kind, std::span<const std::string> texts) {
  std::string out(prompt_template(kind));
  out += "\nInput texts:\n";
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::string t = collapse(texts[i]);
    if (t.empty()) t = "(empty)";
    out += std::to_string(i + 1) + ". " + t + "\n";
  }
  return out;
}

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // prefix without trailing slash
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ValidationError("annotation endpoint URL needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl p;
  p.origin = url.substr(0, path_start);
  p.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!p.path.empty() && p.path.back() == '/') p.path.pop_back();
  return p;
}

std::string cache_path(const EndpointConfig& endpoint, const std::string& prompt) {
  return (std::filesystem::path(endpoint.cache_dir) /
          (sha256_hex(endpoint.model + "\n" + prompt) + ".txt"))
      .string();
}

}  // namespace

std::string call_llm(const EndpointConfig& endpoint, const std::string& prompt) {
  if (endpoint.url.empty()) throw ValidationError("annotation endpoint is not configured");
  if (endpoint.timeout_seconds <= 0) throw ValidationError("annotation timeout must be positive");
  if (!endpoint.cache_dir.empty()) {
    const auto path = cache_path(endpoint, prompt);
    if (std::filesystem::exists(path)) return read_file(path);
  }
  const auto url = parse_url(endpoint.url);
  httplib::Client client(url.origin);
  const auto secs = static_cast<time_t>(endpoint.timeout_seconds);
  const auto usecs = static_cast<time_t>((endpoint.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (const char* key = std::getenv(endpoint.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const nlohmann::json body = {
      {"model", endpoint.model},
      {"temperature", 0},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  const std::string payload = body.dump();
  const std::string path = url.path + "/chat/completions";

  std::string last_error;
  int last_status = 0;
  int delay = endpoint.backoff_ms;
  for (int attempt = 0; attempt <= endpoint.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      delay *= 2;
    }
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      last_status = 0;
      continue;
    }
    last_status = res->status;
    if (res->status == 429 || res->status >= 500) {
      last_error = "server returned status " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw TransportError("annotation endpoint returned status " + std::to_string(res->status),
                           res->status);
    }
    std::string content;
    try {
      const auto j = nlohmann::json::parse(res->body);
      content = j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("annotation endpoint sent an unexpected body: ") + e.what(),
                           res->status);
    }
    if (!endpoint.cache_dir.empty()) {
      std::filesystem::create_directories(endpoint.cache_dir);
      write_file_atomic(cache_path(endpoint, prompt), content);
    }
    return content;
  }
  throw TransportError("annotation endpoint failed after " + std::to_string(endpoint.retries + 1) +
                           " attempts: " + last_error,
                       last_status);
}

std::vector<int> parse_refund(std::string_view response, std::size_t batch_size) {
  for (std::size_t open = response.find('['); open != std::string_view::npos;
       open = response.find('[', open + 1)) {
    const auto close = response.find(']', open);
    if (close == std::string_view::npos) break;
    const auto parsed = nlohmann::json::parse(response.substr(open, close - open + 1), nullptr,
                                              false);
    if (parsed.is_discarded() || !parsed.is_array()) continue;
    if (!std::all_of(parsed.begin(), parsed.end(),
                     [](const auto& v) { return v.is_number_integer(); })) {
      continue;
    }
    std::vector<int> levels;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      const auto v = parsed[i].get<long long>();
      if (v < 0 || v > 4) {
        throw ParseError("refund response: value " + std::to_string(v) + " at index " +
                         std::to_string(i) + " is outside 0-4");
      }
      levels.push_back(static_cast<int>(v));
    }
    if (levels.size() != batch_size) {
      throw ParseError("refund response: expected " + std::to_string(batch_size) +
                       " levels, got " + std::to_string(levels.size()) + " (index " +
                       std::to_string(std::min(levels.size(), batch_size)) + " is missing or extra)");
    }
    return levels;
  }
  throw ParseError("refund response: no JSON integer array found");
}

std::vector<IndustryScores> parse_industry(std::string_view response, std::size_t rows) {
  std::vector<IndustryScores> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= response.size()) {
    auto end = response.find('\n', start);
    if (end == std::string_view::npos) end = response.size();
    const std::string line = collapse(response.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    const std::size_t item = ++line_no;
    const auto open = line.find('[');
    const auto close = line.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open) {
      throw ParseError("industry response: line " + std::to_string(item) + " has no list");
    }
    const auto parsed = nlohmann::json::parse(line.substr(open, close - open + 1), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_array()) {
      throw ParseError("industry response: line " + std::to_string(item) + " is malformed");
    }
    if (parsed.size() != kIndustryCount) {
      throw ParseError("industry response: line " + std::to_string(item) + " has " +
                       std::to_string(parsed.size()) + " values, expected 12");
    }
    IndustryScores v{};
    double mx = 0.0;
    for (std::size_t k = 0; k < kIndustryCount; ++k) {
      if (!parsed[k].is_number()) {
        throw ParseError("industry response: line " + std::to_string(item) + " value " +
                         std::to_string(k) + " is not a number");
      }
      v[k] = parsed[k].get<double>();
      if (!(v[k] >= 0.0 && v[k] <= 1.0 + 1e-6)) {
        throw ParseError("industry response: line " + std::to_string(item) + " value " +
                         std::to_string(k) + " is outside [0,1]");
      }
      mx = std::max(mx, v[k]);
    }
    if (std::abs(mx - 1.0) > 1e-6) {
      throw ParseError("industry response: line " + std::to_string(item) +
                       " has maximum " + std::to_string(mx) + ", expected 1");
    }
    for (auto& x : v) x = std::min(1.0, x / mx);
    out.push_back(v);
  }
  if (out.size() != rows) {
    throw ParseError("industry response: expected " + std::to_string(rows) + " lines, got " +
                     std::to_string(out.size()));
  }
  return out;
}

int fallback_refund(std::string_view raw) {
  const std::string text = lower(collapse(raw));
  if (contains_any(text, {"full refund", "partial refund", "refund available",
                          "refunds available", "refund only if", "refund if", "refunds if",
                          "refunds issued", "refund is issued", "refund within",
                          "refund upon", "eligible for a refund", "eligible for refund",
                          "prorated refund", "pro-rated refund", "money back", "money-back"})) {
    return 4;
  }
  if (contains_any(text, {"contact", "support@", "reach out", "email us", "will fix",
                          "get in touch", "assistance"})) {
    return 3;
  }
  if (text == "not applicable." || text == "not applicable" ||
      contains_any(text, {"trial", "sample", "all sales are final", "final sale",
                          "digital nature", "disclaimer"})) {
    return 2;
  }
  if (contains_any(text, {"no refund", "non-refundable", "nonrefundable", "not refundable",
                          "refunds are not offered", "refunds not applicable",
                          "refund not applicable", "no returns"})) {
    return 0;
  }
  return 1;
}

namespace {

struct IndustrySeeds {
  std::vector<std::vector<std::string>> terms;  // per industry, unique tokens
  std::map<std::string, double> idf;
};

const IndustrySeeds& industry_seeds() {
  static const IndustrySeeds seeds = [] {
    const std::array<std::string_view, kIndustryCount> raw = {
        "ecommerce commerce online sales sale inventory consumer consumers shopping shopper "
        "purchase purchases marketplace orders customer customers brand brands product pricing",
        "retail location locations geographic geographical geolocation gps advertising marketing "
        "foot visits visitors store stores poi places mobility audience ads geospatial",
        "financial finance banking bank banks insurance investment investments stock stocks "
        "equity equities trading credit loan loans fund funds securities economic",
        "health healthcare medical medicine biology disease diseases clinical trials genomic "
        "genomics patient patients hospital drug drugs pharmaceutical covid coronavirus pandemic",
        "resources natural energy mining agricultural agriculture oil gas power electricity "
        "crop crops farm farming commodity commodities mineral minerals",
        "government public census records regulatory sector population demographic "
        "demographics election administrative municipal federal",
        "media entertainment streaming content rating ratings social news movie movies music "
        "television video publishing",
        "telecommunications telecom network networks calls mobile phone cellular wireless "
        "broadband internet carrier subscriber",
        "car cars vehicle vehicles automotive transportation sensor sensors traffic auto fleet "
        "driving dealer registrations",
        "manufacturing industrial production supply chain factory factories machinery equipment "
        "parts procurement shipping logistics",
        "environment environmental climate sustainability pollution emissions carbon weather air "
        "indicators temperature esg",
        "gaming game games player players esports console betting casino statistics"};
    IndustrySeeds s;
    std::map<std::string, std::size_t> df;
    for (const auto& r : raw) {
      auto tokens = tokenize(r);
      std::sort(tokens.begin(), tokens.end());
      tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
      for (const auto& t : tokens) ++df[t];
      s.terms.push_back(std::move(tokens));
    }
    for (const auto& [t, d] : df) {
      s.idf[t] = std::log(1.0 + static_cast<double>(kIndustryCount) / static_cast<double>(d));
    }
    return s;
  }();
  return seeds;
}

}  // namespace

IndustryScores fallback_industry(std::string_view text) {
  const auto& seeds = industry_seeds();
  std::map<std::string, double> doc;
  double total = 0.0;
  for (const auto& tok : tokenize(text)) {
    if (seeds.idf.count(tok)) {
      doc[tok] += 1.0;
      total += 1.0;
    }
  }
  IndustryScores scores{};
  if (total == 0.0) {
    scores.fill(1.0);
    return scores;
  }
  double doc_norm = 0.0;
  for (auto& [t, c] : doc) {
    c = c / total * seeds.idf.at(t);
    doc_norm += c * c;
  }
  doc_norm = std::sqrt(doc_norm);
  double mx = 0.0;
  for (std::size_t k = 0; k < kIndustryCount; ++k) {
    double dot = 0.0, norm = 0.0;
    for (const auto& t : seeds.terms[k]) {
      const double w = seeds.idf.at(t);
      norm += w * w;
      if (auto it = doc.find(t); it != doc.end()) dot += it->second * w;
    }
    scores[k] = dot / (doc_norm * std::sqrt(norm));
    mx = std::max(mx, scores[k]);
  }
  for (auto& v : scores) v = v == mx ? 1.0 : v / mx;
  return scores;
}

namespace {

template <typename T, typename Fallback, typename Remote>
std::vector<T> annotate_batches(std::span<const std::string> texts, const EndpointConfig& endpoint,
                                Fallback fallback, Remote remote) {
  std::vector<T> out;
  out.reserve(texts.size());
  if (endpoint.url.empty()) {
    for (const auto& t : texts) out.push_back(fallback(t));
    return out;
  }
  const std::size_t batch = std::max<std::size_t>(1, endpoint.batch_size);
  for (std::size_t start = 0; start < texts.size(); start += batch) {
    const auto part = texts.subspan(start, std::min(batch, texts.size() - start));
    auto values = remote(part);
    out.insert(out.end(), values.begin(), values.end());
  }
  return out;
}

}  // namespace

std::vector<int> annotate_refund(std::span<const std::string> texts, const EndpointConfig& endpoint) {
  return annotate_batches<int>(texts, endpoint, fallback_refund, [&](std::span<const std::string> part) {
    return parse_refund(call_llm(endpoint, build_prompt(AnnotationKind::refund, part)), part.size());
  });
}

std::vector<IndustryScores> annotate_industry(std::span<const std::string> texts,
                                              const EndpointConfig& endpoint) {
  return annotate_batches<IndustryScores>(
      texts, endpoint, fallback_industry, [&](std::span<const std::string> part) {
        return parse_industry(call_llm(endpoint, build_prompt(AnnotationKind::industry, part)),
                              part.size());
      });
}

void annotate_products(std::vector<DataProduct>& products, const EndpointConfig& endpoint) {
  std::vector<std::size_t> need_refund, need_industry;
  std::vector<std::string> refund_texts, industry_texts;
  for (std::size_t i = 0; i < products.size(); ++i) {
    if (!products[i].refund_policy) {
      need_refund.push_back(i);
      refund_texts.push_back(products[i].refund_text);
    }
    if (!products[i].industry_scores) {
      need_industry.push_back(i);
      industry_texts.push_back(compose_text(products[i]));
    }
  }
  const auto levels = annotate_refund(refund_texts, endpoint);
  for (std::size_t k = 0; k < need_refund.size(); ++k) products[need_refund[k]].refund_policy = levels[k];
  const auto scores = annotate_industry(industry_texts, endpoint);
  for (std::size_t k = 0; k < need_industry.size(); ++k) {
    products[need_industry[k]].industry_scores = scores[k];
  }
}

}  // namespace pricelens
