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

// Product listings: ingestion, structured-attribute encoding, targets and
// descriptive statistics.

#ifndef PRICELENS_CORPUS_HPP_
#define PRICELENS_CORPUS_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pricelens/common.hpp"

namespace pricelens {

inline constexpr std::size_t kIndustryCount = 12;

// Industry taxonomy in annotation-prompt order.
inline constexpr std::array<std::string_view, kIndustryCount> kIndustryNames = {
    "E-commerce and Business Data",
    "Retail and Location Data",
    "Financial Services",
    "Healthcare and Life Sciences Data",
    "Resources Data",
    "Public Sector Data",
    "Media and Entertainment Data",
    "Telecommunications Data",
    "Cars and Automotive Data",
    "Manufacturing Data",
    "Environmental Data",
    "Gaming Data",
};

// Column-safe keys for the same taxonomy (CSV headers use industry_<key>).
inline constexpr std::array<std::string_view, kIndustryCount> kIndustryKeys = {
    "ecommerce_business", "retail_location", "financial_services",
    "healthcare_life_sciences", "resources", "public_sector",
    "media_entertainment", "telecommunications", "cars_automotive",
    "manufacturing", "environmental", "gaming",
};

using IndustryScores = std::array<double, kIndustryCount>;

struct DataProduct {
  std::string id;
  std::string name;
  std::string detail;
  std::string description;
  int listed_provider = 0;     // {0,1}
  int volume = 1;              // >= 1
  int historical_version = 0;  // {0,1,2}
  int future_version = 0;      // {0,1}
  int sensitive = 0;           // {0,1,2}
  int data_sample = 0;         // {0,1}
  int support_email = 0;       // {0,1}
  int support_url = 0;         // {0,1}
  std::optional<int> refund_policy;  // 0..4 once annotated
  std::string refund_text;           // raw refund terms, input to annotation
  std::optional<IndustryScores> industry_scores;
  double price = 0.0;

  bool operator==(const DataProduct&) const = default;
};

// Throws ValidationError naming the offending field.
void validate(const DataProduct& product);

enum class DataFormat { csv, jsonl };
DataFormat data_format_from_string(std::string_view name);
DataFormat data_format_from_path(std::string_view path);

// CSV header (required columns): id,name,detail,description,listed_provider,
// volume,historical_version,future_version,sensitive,data_sample,
// support_email,support_url,price. Optional: refund_policy, refund_text and
// the twelve industry_<key> columns (all or none). JSONL objects use the same
// keys with industry_scores as a 12-element array.
std::vector<DataProduct> load_products(const std::string& path, DataFormat format);
std::vector<DataProduct> parse_products_csv(std::string_view text);
std::vector<DataProduct> parse_products_jsonl(std::string_view text);

std::string serialize_products_csv(std::span<const DataProduct> products);
std::string serialize_products_jsonl(std::span<const DataProduct> products);
void save_products(std::span<const DataProduct> products, const std::string& path,
                   DataFormat format);

// name + " " + detail + " " + description.
std::string compose_text(const DataProduct& product);

inline constexpr std::size_t kStructuredBaseColumns = 9;
inline constexpr std::size_t kStructuredColumns = kStructuredBaseColumns + kIndustryCount;

// Fixed column order: the nine attribute columns, then "industry:<name>".
const std::vector<std::string>& structured_column_names();

// Values are copied unscaled. Throws ValidationError pointing at `annotate`
// when refund level or industry scores are missing.
std::array<double, kStructuredColumns> encode_structured(const DataProduct& product);

// Argmax of the industry scores, lower index on ties.
std::size_t dominant_industry(const IndustryScores& scores);

struct TargetSpec {
  Task kind = Task::regression;
  bool log_transform = true;
  // Four strictly ascending cutpoints; empty means 20/40/60/80th percentiles.
  std::vector<double> tier_cutpoints;
};

inline constexpr std::size_t kTierCount = 5;

// Upper bounds of tiers 0..3 as observed in the source marketplace data
// (tier 0: <= 208.33, tier 4: >= 3200).
inline constexpr std::array<double, 4> kPublishedTierCutpoints = {208.33, 416.67,
                                                                  1250.0, 3175.0};

// Inverted-CDF quantiles: cutpoint q is the ceil(q*n)-th smallest price.
std::vector<double> quantile_cutpoints(std::span<const double> prices);

// Tier = number of cutpoints strictly below the price (ties go down).
int assign_tier(double price, std::span<const double> cutpoints);

std::vector<double> prices_of(std::span<const DataProduct> products);

// Regression: ln(price) when log_transform. Classification: tier index.
Vector make_targets(std::span<const DataProduct> products, const TargetSpec& spec);

struct ColumnStats {
  std::string name;
  double mean = 0.0;
  double std = 0.0;  // sample (n-1)
  double max = 0.0;
  double min = 0.0;
  // Bias-adjusted Fisher-Pearson skewness and excess kurtosis; nullopt when
  // the column is constant.
  std::optional<double> skewness;
  std::optional<double> kurtosis;
};

struct DescriptiveStats {
  std::vector<ColumnStats> columns;
};

ColumnStats describe_column(std::string name, std::span<const double> values);

// Statistics for the nine attribute columns plus price. Requires >= 2 rows.
DescriptiveStats describe(std::span<const DataProduct> products);

// Feature,Average,Std,Max,Min,Skewness,Kurtosis with "undefined" for missing
// moments.
std::string stats_to_csv(const DescriptiveStats& stats);

}  // namespace pricelens

#endif  // PRICELENS_CORPUS_HPP_
