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

#include "pricelens/skipgram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pricelens/csv.hpp"

namespace pricelens {
namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow.
double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Cumulative unigram^0.75 distribution for negative draws.
std::vector<double> noise_cdf(const std::vector<std::size_t>& counts) {
  std::vector<double> cdf(counts.size());
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += std::pow(static_cast<double>(counts[i]), 0.75);
    cdf[i] = total;
  }
  for (auto& c : cdf) c /= total;
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform01(rng);
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::string config_line(const SkipGramConfig& c) {
  std::ostringstream ss;
  ss << "dimension=" << c.dimension << " window=" << c.window << " epochs=" << c.epochs
     << " learning_rate=" << csv::format_double(c.learning_rate)
     << " negatives=" << c.negatives << " seed=" << c.seed;
  return ss.str();
}

void append_rows(std::string& out, const std::vector<std::string>& terms, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += terms[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out.push_back(' ');
      out += csv::format_double(m(i, j));
    }
    out.push_back('\n');
  }
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::vector<std::string> terms, Matrix input, Matrix output,
                               SkipGramConfig config)
    : terms_(std::move(terms)),
      input_(std::move(input)),
      output_(std::move(output)),
      config_(config) {
  if (input_.rows() != static_cast<Eigen::Index>(terms_.size()) ||
      output_.rows() != input_.rows() || output_.cols() != input_.cols()) {
    throw ValidationError("embedding table: shape mismatch");
  }
  if (!input_.allFinite() || !output_.allFinite()) {
    throw ValidationError("embedding table: non-finite entries");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

std::optional<std::size_t> EmbeddingTable::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string EmbeddingTable::to_text() const {
  std::string out = "# pricelens-embeddings v1\n";
  out += std::to_string(terms_.size()) + " " + std::to_string(dimension()) + " " +
         config_line(config_) + "\n";
  append_rows(out, terms_, input_);
  out += "#output\n";
  append_rows(out, terms_, output_);
  return out;
}

EmbeddingTable EmbeddingTable::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "# pricelens-embeddings v1") {
    throw ParseError("embedding file: unsupported header or version");
  }
  if (!std::getline(in, line)) throw ParseError("embedding file: missing size line");
  std::istringstream size_line(line);
  std::size_t n = 0, d = 0;
  if (!(size_line >> n >> d)) throw ParseError("embedding file: bad size line");
  SkipGramConfig config;
  config.dimension = d;
  std::string kv;
  while (size_line >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (key == "window") config.window = std::stoull(value);
    else if (key == "epochs") config.epochs = std::stoull(value);
    else if (key == "learning_rate") config.learning_rate = std::stod(value);
    else if (key == "negatives") config.negatives = std::stoull(value);
    else if (key == "seed") config.seed = std::stoull(value);
  }
  std::vector<std::string> terms;
  Matrix input(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  Matrix output(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  auto read_block = [&](Matrix& m, bool collect_terms) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::getline(in, line)) throw ParseError("embedding file: truncated");
      std::istringstream row(line);
      std::string term;
      row >> term;
      if (collect_terms) {
        terms.push_back(term);
      } else if (term != terms[i]) {
        throw ParseError("embedding file: output block term order differs at line " +
                         std::to_string(i));
      }
      for (std::size_t j = 0; j < d; ++j) {
        std::string tok;
        if (!(row >> tok)) throw ParseError("embedding file: short row for " + term);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc()) throw ParseError("embedding file: bad number for " + term);
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      }
    }
  };
  read_block(input, true);
  if (!std::getline(in, line) || line != "#output") {
    throw ParseError("embedding file: missing #output block");
  }
  read_block(output, false);
  return EmbeddingTable(std::move(terms), std::move(input), std::move(output), config);
}

NegativeSamplingGradient negative_sampling_gradient(
    std::span<const double> center, std::span<const double> context,
    std::span<const std::span<const double>> negatives) {
  const auto d = static_cast<Eigen::Index>(center.size());
  Eigen::Map<const Vector> v(center.data(), d);
  Eigen::Map<const Vector> u_o(context.data(), d);
  NegativeSamplingGradient g;
  const double s_o = dot(context, center);
  g.loss = -log_sigmoid(s_o);
  const double coef_o = sigmoid(s_o) - 1.0;
  g.center = coef_o * u_o;
  g.context = coef_o * v;
  for (const auto& neg : negatives) {
    Eigen::Map<const Vector> u_k(neg.data(), d);
    const double s_k = dot(neg, center);
    g.loss -= log_sigmoid(-s_k);
    const double coef_k = sigmoid(s_k);
    g.center += coef_k * u_k;
    g.negatives.push_back(coef_k * v);
  }
  return g;
}

EmbeddingTable train_skipgram(std::span<const TokenList> corpus, const Vocabulary& vocab,
                              const SkipGramConfig& config) {
  if (vocab.size() < 2) throw ValidationError("train_skipgram: vocabulary needs >= 2 terms");
  if (config.dimension == 0 || config.window == 0 || config.epochs == 0) {
    throw ValidationError("train_skipgram: dimension, window and epochs must be positive");
  }
  std::vector<std::vector<std::size_t>> docs;
  std::vector<std::size_t> counts(vocab.size(), 0);
  std::size_t pairs_per_epoch = 0;
  for (const auto& doc : corpus) {
    auto ids = to_ids(doc, vocab);
    for (auto id : ids) ++counts[id];
    const std::size_t len = ids.size();
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t lo = t >= config.window ? t - config.window : 0;
      const std::size_t hi = std::min(len - 1, t + config.window);
      pairs_per_epoch += hi - lo;
    }
    docs.push_back(std::move(ids));
  }
  if (pairs_per_epoch == 0) {
    throw ValidationError("train_skipgram: corpus too small to form any (center, context) pair");
  }
  for (auto& c : counts) c = std::max<std::size_t>(c, 1);
  const auto cdf = noise_cdf(counts);

  const auto V = static_cast<Eigen::Index>(vocab.size());
  const auto d = static_cast<Eigen::Index>(config.dimension);
  Rng rng(mix_seed(config.seed, 0));
  Matrix input(V, d);
  for (Eigen::Index i = 0; i < V; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      input(i, j) = (uniform01(rng) - 0.5) / static_cast<double>(d);
    }
  }
  Matrix output = Matrix::Zero(V, d);

  std::vector<double> epoch_losses;
  const double total_pairs = static_cast<double>(pairs_per_epoch * config.epochs);
  double processed = 0.0;
  std::vector<std::size_t> negative_ids;
  std::vector<std::span<const double>> negative_spans;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    for (const auto& ids : docs) {
      const std::size_t len = ids.size();
      for (std::size_t t = 0; t < len; ++t) {
        const std::size_t lo = t >= config.window ? t - config.window : 0;
        const std::size_t hi = std::min(len - 1, t + config.window);
        const auto center = static_cast<Eigen::Index>(ids[t]);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == t) continue;
          const auto context = static_cast<Eigen::Index>(ids[j]);
          const double lr =
              config.learning_rate * std::max(1e-4, 1.0 - processed / total_pairs);
          processed += 1.0;
          negative_ids.clear();
          negative_spans.clear();
          for (std::size_t k = 0; k < config.negatives; ++k) {
            const auto neg = draw(cdf, rng);
            if (static_cast<Eigen::Index>(neg) == context) continue;
            negative_ids.push_back(neg);
            negative_spans.push_back(row_span(output, static_cast<Eigen::Index>(neg)));
          }
          const auto g = negative_sampling_gradient(row_span(input, center),
                                                    row_span(output, context), negative_spans);
          loss_sum += g.loss;
          output.row(context) -= lr * g.context.transpose();
          for (std::size_t k = 0; k < negative_ids.size(); ++k) {
            output.row(static_cast<Eigen::Index>(negative_ids[k])) -=
                lr * g.negatives[k].transpose();
          }
          input.row(center) -= lr * g.center.transpose();
        }
      }
    }
    epoch_losses.push_back(loss_sum / static_cast<double>(pairs_per_epoch));
    if (!std::isfinite(epoch_losses.back())) {
      throw RuntimeFailure("train_skipgram: loss diverged at epoch " + std::to_string(epoch));
    }
  }
  EmbeddingTable table(vocab.terms(), std::move(input), std::move(output), config);
  table.set_epoch_losses(std::move(epoch_losses));
  return table;
}

Vector doc_embedding(const TokenList& doc, const EmbeddingTable& table) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(table.dimension()));
  std::size_t hits = 0;
  for (const auto& token : doc) {
    if (auto id = table.index_of(token)) {
      sum += table.input_vectors().row(static_cast<Eigen::Index>(*id)).transpose();
      ++hits;
    }
  }
  if (hits > 0) sum /= static_cast<double>(hits);
  return sum;
}

FeatureMatrix embedding_features(std::span<const TokenList> corpus, const EmbeddingTable& table) {
  FeatureMatrix m;
  const auto d = static_cast<Eigen::Index>(table.dimension());
  m.values.resize(static_cast<Eigen::Index>(corpus.size()), d);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    m.values.row(static_cast<Eigen::Index>(i)) = doc_embedding(corpus[i], table).transpose();
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    m.names.push_back("embedding_" + std::to_string(k));
    m.provenance.push_back(Provenance::embedding);
  }
  return m;
}

Matrix load_document_vectors_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("document vectors: empty file");
  // A header row is recognised by a non-numeric first cell.
  std::size_t first = 0;
  {
    double probe = 0.0;
    const auto& cell = rows[0][0];
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), probe);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) first = 1;
  }
  if (rows.size() <= first) throw ParseError("document vectors: no data rows");
  const std::size_t d = rows[first].size();
  Matrix m(static_cast<Eigen::Index>(rows.size() - first), static_cast<Eigen::Index>(d));
  for (std::size_t r = first; r < rows.size(); ++r) {
    if (rows[r].size() != d) {
      throw ParseError("document vectors: row " + std::to_string(r - first) + " has " +
                       std::to_string(rows[r].size()) + " fields, expected " + std::to_string(d));
    }
    for (std::size_t c = 0; c < d; ++c) {
      const auto& cell = rows[r][c];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("document vectors: row " + std::to_string(r - first) +
                         ": non-numeric value");
      }
      m(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

}  // namespace pricelens
