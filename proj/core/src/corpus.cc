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

#include "pricelens/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "json.hpp"

#include "pricelens/csv.hpp"

namespace pricelens {
namespace {

using nlohmann::json;

const std::vector<std::string> kRequiredColumns = {
    "id",        "name",        "detail",        "description",
    "listed_provider", "volume", "historical_version", "future_version",
    "sensitive", "data_sample", "support_email", "support_url", "price"};

std::string row_context(std::size_t row) {
  return "row " + std::to_string(row);
}

void check_range(int value, int lo, int hi, const char* field) {
  if (value < lo || value > hi) {
    throw ValidationError(std::string(field) + " = " + std::to_string(value) +
                          " outside [" + std::to_string(lo) + "," +
                          std::to_string(hi) + "]");
  }
}

double parse_double_field(std::string_view text, const char* field) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  while (begin < end && *begin == ' ') ++begin;
  while (end > begin && end[-1] == ' ') --end;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) {
    throw ParseError(std::string(field) + ": not a number: \"" + std::string(text) + "\"");
  }
  return value;
}

int parse_int_field(std::string_view text, const char* field) {
  const double value = parse_double_field(text, field);
  if (value != std::floor(value) || std::abs(value) > 1e9) {
    throw ParseError(std::string(field) + ": not an integer: \"" + std::string(text) + "\"");
  }
  return static_cast<int>(value);
}

// Wraps per-record parsing so every error names the record.
template <typename Fn>
DataProduct with_row_context(std::size_t row, Fn&& fn) {
  try {
    DataProduct p = fn();
    validate(p);
    return p;
  } catch (const ParseError& e) {
    throw ParseError(row_context(row) + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(row_context(row) + ": " + e.what());
  } catch (const json::exception& e) {
    throw ParseError(row_context(row) + ": " + e.what());
  }
}

json to_json(const DataProduct& p) {
  json j;
  j["id"] = p.id;
  j["name"] = p.name;
  j["detail"] = p.detail;
  j["description"] = p.description;
  j["listed_provider"] = p.listed_provider;
  j["volume"] = p.volume;
  j["historical_version"] = p.historical_version;
  j["future_version"] = p.future_version;
  j["sensitive"] = p.sensitive;
  j["data_sample"] = p.data_sample;
  j["support_email"] = p.support_email;
  j["support_url"] = p.support_url;
  j["refund_policy"] = p.refund_policy ? json(*p.refund_policy) : json(nullptr);
  j["refund_text"] = p.refund_text;
  j["industry_scores"] =
      p.industry_scores ? json(*p.industry_scores) : json(nullptr);
  j["price"] = p.price;
  return j;
}

int json_int(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing required key ") + key);
  const json& v = j.at(key);
  if (!v.is_number_integer()) {
    if (v.is_number_float() && v.get<double>() == std::floor(v.get<double>())) {
      return static_cast<int>(v.get<double>());
    }
    throw ParseError(std::string(key) + ": expected integer");
  }
  return v.get<int>();
}

std::string json_string(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing required key ") + key);
  if (!j.at(key).is_string()) throw ParseError(std::string(key) + ": expected string");
  return j.at(key).get<std::string>();
}

DataProduct from_json(const json& j) {
  if (!j.is_object()) throw ParseError("record is not a JSON object");
  DataProduct p;
  p.id = json_string(j, "id");
  p.name = json_string(j, "name");
  p.detail = json_string(j, "detail");
  p.description = json_string(j, "description");
  p.listed_provider = json_int(j, "listed_provider");
  p.volume = json_int(j, "volume");
  p.historical_version = json_int(j, "historical_version");
  p.future_version = json_int(j, "future_version");
  p.sensitive = json_int(j, "sensitive");
  p.data_sample = json_int(j, "data_sample");
  p.support_email = json_int(j, "support_email");
  p.support_url = json_int(j, "support_url");
  if (j.contains("refund_policy") && !j["refund_policy"].is_null()) {
    p.refund_policy = json_int(j, "refund_policy");
  }
  if (j.contains("refund_text") && !j["refund_text"].is_null()) {
    p.refund_text = json_string(j, "refund_text");
  }
  if (j.contains("industry_scores") && !j["industry_scores"].is_null()) {
    const json& arr = j["industry_scores"];
    if (!arr.is_array() || arr.size() != kIndustryCount) {
      throw ParseError("industry_scores: expected an array of 12 numbers");
    }
    IndustryScores scores{};
    for (std::size_t k = 0; k < kIndustryCount; ++k) {
      if (!arr[k].is_number()) throw ParseError("industry_scores: non-numeric entry");
      scores[k] = arr[k].get<double>();
    }
    p.industry_scores = scores;
  }
  if (!j.contains("price")) throw ParseError("missing required key price");
  if (!j["price"].is_number()) throw ParseError("price: not a number");
  p.price = j["price"].get<double>();
  return p;
}

}  // namespace

void validate(const DataProduct& p) {
  if (!(p.price > 0.0) || !std::isfinite(p.price)) {
    throw ValidationError("price must be positive and finite");
  }
  check_range(p.listed_provider, 0, 1, "listed_provider");
  if (p.volume < 1) throw ValidationError("volume must be >= 1");
  check_range(p.historical_version, 0, 2, "historical_version");
  check_range(p.future_version, 0, 1, "future_version");
  check_range(p.sensitive, 0, 2, "sensitive");
  check_range(p.data_sample, 0, 1, "data_sample");
  check_range(p.support_email, 0, 1, "support_email");
  check_range(p.support_url, 0, 1, "support_url");
  if (p.refund_policy) check_range(*p.refund_policy, 0, 4, "refund_policy");
  if (p.industry_scores) {
    double max = 0.0;
    for (double s : *p.industry_scores) {
      if (!(s >= 0.0 && s <= 1.0)) {
        throw ValidationError("industry_scores entries must lie in [0,1]");
      }
      max = std::max(max, s);
    }
    if (max != 1.0) throw ValidationError("industry_scores maximum must be exactly 1.0");
  }
}

DataFormat data_format_from_string(std::string_view name) {
  if (name == "csv") return DataFormat::csv;
  if (name == "jsonl") return DataFormat::jsonl;
  throw ValidationError("unknown data format: " + std::string(name));
}

DataFormat data_format_from_path(std::string_view path) {
  if (path.ends_with(".jsonl") || path.ends_with(".json")) return DataFormat::jsonl;
  return DataFormat::csv;
}

std::vector<DataProduct> parse_products_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("csv: missing header");
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < rows[0].size(); ++c) column[rows[0][c]] = c;
  for (const auto& name : kRequiredColumns) {
    if (!column.contains(name)) throw ParseError("csv: missing required column " + name);
  }
  std::size_t industry_present = 0;
  for (auto key : kIndustryKeys) {
    industry_present += column.contains("industry_" + std::string(key));
  }
  if (industry_present != 0 && industry_present != kIndustryCount) {
    throw ParseError("csv: industry columns must be all present or all absent");
  }

  std::vector<DataProduct> products;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    const std::size_t index = products.size();
    products.push_back(with_row_context(index, [&] {
      if (row.size() != rows[0].size()) {
        throw ParseError("expected " + std::to_string(rows[0].size()) +
                         " fields, found " + std::to_string(row.size()));
      }
      auto get = [&](const std::string& name) -> const std::string& {
        return row[column.at(name)];
      };
      DataProduct p;
      p.id = get("id");
      p.name = get("name");
      p.detail = get("detail");
      p.description = get("description");
      p.listed_provider = parse_int_field(get("listed_provider"), "listed_provider");
      p.volume = parse_int_field(get("volume"), "volume");
      p.historical_version = parse_int_field(get("historical_version"), "historical_version");
      p.future_version = parse_int_field(get("future_version"), "future_version");
      p.sensitive = parse_int_field(get("sensitive"), "sensitive");
      p.data_sample = parse_int_field(get("data_sample"), "data_sample");
      p.support_email = parse_int_field(get("support_email"), "support_email");
      p.support_url = parse_int_field(get("support_url"), "support_url");
      if (column.contains("refund_policy") && !get("refund_policy").empty()) {
        p.refund_policy = parse_int_field(get("refund_policy"), "refund_policy");
      }
      if (column.contains("refund_text")) p.refund_text = get("refund_text");
      if (industry_present) {
        std::size_t blank = 0;
        IndustryScores scores{};
        for (std::size_t k = 0; k < kIndustryCount; ++k) {
          const auto& cell = get("industry_" + std::string(kIndustryKeys[k]));
          if (cell.empty()) {
            ++blank;
          } else {
            scores[k] = parse_double_field(cell, "industry score");
          }
        }
        if (blank != 0 && blank != kIndustryCount) {
          throw ParseError("industry scores partially blank");
        }
        if (blank == 0) p.industry_scores = scores;
      }
      p.price = parse_double_field(get("price"), "price");
      return p;
    }));
  }
  return products;
}

std::vector<DataProduct> parse_products_jsonl(std::string_view text) {
  std::vector<DataProduct> products;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::size_t index = products.size();
    products.push_back(with_row_context(index, [&] { return from_json(json::parse(line)); }));
  }
  return products;
}

std::vector<DataProduct> load_products(const std::string& path, DataFormat format) {
  const std::string text = read_file(path);
  return format == DataFormat::csv ? parse_products_csv(text) : parse_products_jsonl(text);
}

std::string serialize_products_csv(std::span<const DataProduct> products) {
  csv::Row header = kRequiredColumns;
  header.insert(header.end() - 1, {"refund_policy", "refund_text"});
  for (auto key : kIndustryKeys) header.insert(header.end() - 1, "industry_" + std::string(key));
  std::string out = csv::format_row(header);
  for (const auto& p : products) {
    csv::Row row = {p.id,
                    p.name,
                    p.detail,
                    p.description,
                    std::to_string(p.listed_provider),
                    std::to_string(p.volume),
                    std::to_string(p.historical_version),
                    std::to_string(p.future_version),
                    std::to_string(p.sensitive),
                    std::to_string(p.data_sample),
                    std::to_string(p.support_email),
                    std::to_string(p.support_url),
                    p.refund_policy ? std::to_string(*p.refund_policy) : "",
                    p.refund_text};
    for (std::size_t k = 0; k < kIndustryCount; ++k) {
      row.push_back(p.industry_scores ? csv::format_double((*p.industry_scores)[k]) : "");
    }
    row.push_back(csv::format_double(p.price));
    out += csv::format_row(row);
  }
  return out;
}

std::string serialize_products_jsonl(std::span<const DataProduct> products) {
  std::string out;
  for (const auto& p : products) {
    out += to_json(p).dump();
    out.push_back('\n');
  }
  return out;
}

void save_products(std::span<const DataProduct> products, const std::string& path,
                   DataFormat format) {
  write_file_atomic(path, format == DataFormat::csv ? serialize_products_csv(products)
                                                    : serialize_products_jsonl(products));
}

std::string compose_text(const DataProduct& p) {
  return p.name + " " + p.detail + " " + p.description;
}

const std::vector<std::string>& structured_column_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"listed_provider", "volume", "historical_version",
                                  "future_version",  "sensitive", "data_sample",
                                  "support_email",   "support_url", "refund_policy"};
    for (auto industry : kIndustryNames) n.push_back("industry:" + std::string(industry));
    return n;
  }();
  return names;
}

std::array<double, kStructuredColumns> encode_structured(const DataProduct& p) {
  if (!p.refund_policy) {
    throw ValidationError("product " + p.id +
                          ": refund_policy missing; run `annotate` first");
  }
  if (!p.industry_scores) {
    throw ValidationError("product " + p.id +
                          ": industry_scores missing; run `annotate` first");
  }
  std::array<double, kStructuredColumns> out{};
  out[0] = p.listed_provider;
  out[1] = p.volume;
  out[2] = p.historical_version;
  out[3] = p.future_version;
  out[4] = p.sensitive;
  out[5] = p.data_sample;
  out[6] = p.support_email;
  out[7] = p.support_url;
  out[8] = *p.refund_policy;
  std::copy(p.industry_scores->begin(), p.industry_scores->end(),
            out.begin() + kStructuredBaseColumns);
  return out;
}

std::size_t dominant_industry(const IndustryScores& scores) {
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) -
                                  scores.begin());
}

std::vector<double> quantile_cutpoints(std::span<const double> prices) {
  if (prices.empty()) throw ValidationError("cannot compute quantiles of no prices");
  std::vector<double> sorted(prices.begin(), prices.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> cuts;
  for (std::size_t q = 1; q < kTierCount; ++q) {
    // ceil(q*n/5) computed in integers.
    const std::size_t rank = (q * n + kTierCount - 1) / kTierCount;
    cuts.push_back(sorted[std::max<std::size_t>(rank, 1) - 1]);
  }
  return cuts;
}

int assign_tier(double price, std::span<const double> cutpoints) {
  int tier = 0;
  for (double c : cutpoints) tier += c < price;
  return tier;
}

std::vector<double> prices_of(std::span<const DataProduct> products) {
  std::vector<double> prices;
  prices.reserve(products.size());
  for (const auto& p : products) prices.push_back(p.price);
  return prices;
}

Vector make_targets(std::span<const DataProduct> products, const TargetSpec& spec) {
  Vector y(static_cast<Eigen::Index>(products.size()));
  const auto prices = prices_of(products);
  if (spec.kind == Task::regression) {
    for (std::size_t i = 0; i < prices.size(); ++i) {
      if (spec.log_transform && !(prices[i] > 0.0)) {
        throw ValidationError(row_context(i) + ": log transform needs a positive price");
      }
      y[static_cast<Eigen::Index>(i)] = spec.log_transform ? std::log(prices[i]) : prices[i];
    }
    return y;
  }
  std::vector<double> cuts = spec.tier_cutpoints;
  if (cuts.empty()) {
    cuts = quantile_cutpoints(prices);
  } else {
    if (cuts.size() != kTierCount - 1) {
      throw ValidationError("tier_cutpoints must hold exactly 4 values");
    }
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      if (!(cuts[i] > cuts[i - 1])) {
        throw ValidationError("tier_cutpoints must be strictly ascending");
      }
    }
  }
  for (std::size_t i = 0; i < prices.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = assign_tier(prices[i], cuts);
  }
  return y;
}

ColumnStats describe_column(std::string name, std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw ValidationError("describe needs at least 2 rows");
  ColumnStats s;
  s.name = std::move(name);
  double sum = 0.0;
  s.min = values[0];
  s.max = values[0];
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  const double nd = static_cast<double>(n);
  s.mean = sum / nd;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  s.std = std::sqrt(m2 / (nd - 1.0));
  // Keep the mean inside [min, max] despite rounding.
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (s.min == s.max) return s;
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  s.skewness = n > 2 ? g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0) : g1;
  s.kurtosis = n > 3 ? (nd - 1.0) / ((nd - 2.0) * (nd - 3.0)) * ((nd + 1.0) * g2 + 6.0) : g2;
  return s;
}

DescriptiveStats describe(std::span<const DataProduct> products) {
  if (products.size() < 2) throw ValidationError("describe needs at least 2 rows");
  static const std::vector<std::pair<std::string, int DataProduct::*>> kIntColumns = {
      {"Data provider is listed", &DataProduct::listed_provider},
      {"Data volume number", &DataProduct::volume},
      {"Sensitive level", &DataProduct::sensitive},
      {"Future version", &DataProduct::future_version},
      {"Historical version", &DataProduct::historical_version},
      {"Data sample", &DataProduct::data_sample},
      {"Email", &DataProduct::support_email},
      {"URL", &DataProduct::support_url},
  };
  DescriptiveStats stats;
  std::vector<double> column(products.size());
  for (const auto& [label, member] : kIntColumns) {
    for (std::size_t i = 0; i < products.size(); ++i) column[i] = products[i].*member;
    stats.columns.push_back(describe_column(label, column));
  }
  bool refund_complete = true;
  for (std::size_t i = 0; i < products.size(); ++i) {
    refund_complete &= products[i].refund_policy.has_value();
    column[i] = products[i].refund_policy.value_or(0);
  }
  if (refund_complete) stats.columns.push_back(describe_column("Refund", column));
  stats.columns.push_back(describe_column("Price", prices_of(products)));
  return stats;
}

std::string stats_to_csv(const DescriptiveStats& stats) {
  std::string out = "Feature,Average,Std,Max,Min,Skewness,Kurtosis\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string("undefined");
  };
  for (const auto& c : stats.columns) {
    out += csv::format_row({c.name, csv::format_double(c.mean), csv::format_double(c.std),
                            csv::format_double(c.max), csv::format_double(c.min),
                            opt(c.skewness), opt(c.kurtosis)});
  }
  return out;
}

}  // namespace pricelens
