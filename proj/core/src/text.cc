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

#include "pricelens/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "pricelens/csv.hpp"

namespace pricelens {
namespace {

// Sorted, so lookups can binary search.
constexpr std::string_view kStopwords[] = {
    "a", "about", "above", "across", "after", "afterwards", "again",
    "against", "all", "almost", "alone", "along", "already", "also",
    "although", "always", "am", "among", "amongst", "amoungst", "amount",
    "an", "and", "another", "any", "anyhow", "anyone", "anything", "anyway",
    "anywhere", "are", "around", "as", "at", "back", "be", "became",
    "because", "become", "becomes", "becoming", "been", "before",
    "beforehand", "behind", "being", "below", "beside", "besides",
    "between", "beyond", "bill", "both", "bottom", "but", "by", "call",
    "can", "cannot", "cant", "co", "con", "could", "couldnt", "cry", "de",
    "describe", "detail", "do", "done", "down", "due", "during", "each",
    "eg", "eight", "either", "eleven", "else", "elsewhere", "empty",
    "enough", "etc", "even", "ever", "every", "everyone", "everything",
    "everywhere", "except", "few", "fifteen", "fifty", "fill", "find",
    "fire", "first", "five", "for", "former", "formerly", "forty", "found",
    "four", "from", "front", "full", "further", "get", "give", "go", "had",
    "has", "hasnt", "have", "he", "hence", "her", "here", "hereafter",
    "hereby", "herein", "hereupon", "hers", "herself", "him", "himself",
    "his", "how", "however", "hundred", "i", "ie", "if", "in", "inc",
    "indeed", "interest", "into", "is", "it", "its", "itself", "keep",
    "last", "latter", "latterly", "least", "less", "ltd", "made", "many",
    "may", "me", "meanwhile", "might", "mill", "mine", "more", "moreover",
    "most", "mostly", "move", "much", "must", "my", "myself", "name",
    "namely", "neither", "never", "nevertheless", "next", "nine", "no",
    "nobody", "none", "noone", "nor", "not", "nothing", "now", "nowhere",
    "of", "off", "often", "on", "once", "one", "only", "onto", "or",
    "other", "others", "otherwise", "our", "ours", "ourselves", "out",
    "over", "own", "part", "per", "perhaps", "please", "put", "rather",
    "re", "same", "see", "seem", "seemed", "seeming", "seems", "serious",
    "several", "she", "should", "show", "side", "since", "sincere", "six",
    "sixty", "so", "some", "somehow", "someone", "something", "sometime",
    "sometimes", "somewhere", "still", "such", "system", "take", "ten",
    "than", "that", "the", "their", "them", "themselves", "then", "thence",
    "there", "thereafter", "thereby", "therefore", "therein", "thereupon",
    "these", "they", "thick", "thin", "third", "this", "those", "though",
    "three", "through", "throughout", "thru", "thus", "to", "together",
    "too", "top", "toward", "towards", "twelve", "twenty", "two", "un",
    "under", "until", "up", "upon", "us", "very", "via", "was", "we",
    "well", "were", "what", "whatever", "when", "whence", "whenever",
    "where", "whereafter", "whereas", "whereby", "wherein", "whereupon",
    "wherever", "whether", "which", "while", "whither", "who", "whoever",
    "whole", "whom", "whose", "why", "will", "with", "within", "without",
    "would", "yet", "you", "your", "yours", "yourself", "yourselves"
};

}  // namespace

bool is_stopword(std::string_view token) {
  return std::binary_search(std::begin(kStopwords), std::end(kStopwords), token);
}

std::span<const std::string_view> stopwords() { return kStopwords; }

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2 && !is_stopword(current)) tokens.push_back(current);
    current.clear();
  };
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (uc < 0x80 && std::isalpha(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
                       std::vector<std::size_t> term_freq, std::size_t total_docs)
    : terms_(std::move(terms)),
      doc_freq_(std::move(doc_freq)),
      term_freq_(std::move(term_freq)),
      total_docs_(total_docs) {
  if (doc_freq_.size() != terms_.size() || term_freq_.size() != terms_.size()) {
    throw ValidationError("vocabulary: column lengths differ");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw ValidationError("vocabulary: duplicate term " + terms_[i]);
    }
    if (doc_freq_[i] > total_docs_) {
      throw ValidationError("vocabulary: doc_freq exceeds document count for " + terms_[i]);
    }
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::to_csv() const {
  std::string out = "term,doc_freq,term_freq\n";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out += csv::format_row(
        {terms_[i], std::to_string(doc_freq_[i]), std::to_string(term_freq_[i])});
  }
  out += csv::format_row({"#total_docs", std::to_string(total_docs_), ""});
  return out;
}

Vocabulary Vocabulary::from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "term" || rows[0][1] != "doc_freq") {
    throw ParseError("vocabulary csv: bad header");
  }
  std::vector<std::string> terms;
  std::vector<std::size_t> df, tf;
  std::size_t total = 0;
  bool saw_total = false;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 2) throw ParseError("vocabulary csv: short row " + std::to_string(r));
    try {
      if (row[0] == "#total_docs") {
        total = std::stoull(row[1]);
        saw_total = true;
        continue;
      }
      terms.push_back(row[0]);
      df.push_back(std::stoull(row[1]));
      tf.push_back(row.size() > 2 && !row[2].empty() ? std::stoull(row[2]) : df.back());
    } catch (const std::logic_error&) {
      throw ParseError("vocabulary csv: bad count on row " + std::to_string(r));
    }
  }
  if (!saw_total) {
    for (auto d : df) total = std::max(total, d);
  }
  return Vocabulary(std::move(terms), std::move(df), std::move(tf), total);
}

Vocabulary build_vocabulary(std::span<const TokenList> corpus, std::size_t max_terms) {
  if (corpus.empty()) throw ValidationError("build_vocabulary: empty corpus");
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // term -> (tf, df)
  for (const auto& doc : corpus) {
    std::map<std::string_view, bool> seen;
    for (const auto& token : doc) {
      auto& entry = counts[token];
      ++entry.first;
      if (!seen[token]) {
        seen[token] = true;
        ++entry.second;
      }
    }
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ranked(
      counts.begin(), counts.end());
  // std::map iteration is already lexicographic; stable sort keeps it for ties.
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second.first > b.second.first;
  });
  if (ranked.size() > max_terms) ranked.resize(max_terms);
  std::vector<std::string> terms;
  std::vector<std::size_t> df, tf;
  for (auto& [term, c] : ranked) {
    terms.push_back(term);
    tf.push_back(c.first);
    df.push_back(c.second);
  }
  return Vocabulary(std::move(terms), std::move(df), std::move(tf), corpus.size());
}

std::vector<std::size_t> to_ids(const TokenList& doc, const Vocabulary& vocab) {
  std::vector<std::size_t> ids;
  ids.reserve(doc.size());
  for (const auto& token : doc) {
    if (auto id = vocab.index_of(token)) ids.push_back(*id);
  }
  return ids;
}

FeatureMatrix bow(std::span<const TokenList> corpus, const Vocabulary& vocab) {
  FeatureMatrix m;
  m.values = Matrix::Zero(static_cast<Eigen::Index>(corpus.size()),
                          static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (auto id : to_ids(corpus[i], vocab)) {
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(id)) += 1.0;
    }
  }
  for (const auto& term : vocab.terms()) {
    m.names.push_back("bow:" + term);
    m.provenance.push_back(Provenance::bow);
  }
  return m;
}

std::vector<double> inverse_document_frequency(const Vocabulary& vocab) {
  std::vector<double> idf(vocab.size());
  const double n = static_cast<double>(vocab.total_docs());
  for (std::size_t j = 0; j < vocab.size(); ++j) {
    idf[j] = std::log(n / (1.0 + static_cast<double>(vocab.doc_freq()[j])));
  }
  return idf;
}

FeatureMatrix tfidf(std::span<const TokenList> corpus, const Vocabulary& vocab) {
  FeatureMatrix m = bow(corpus, vocab);
  const auto idf = inverse_document_frequency(vocab);
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    const double total = m.values.row(i).sum();
    if (total == 0.0) continue;
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      m.values(i, j) = m.values(i, j) / total * idf[static_cast<std::size_t>(j)];
    }
  }
  for (std::size_t j = 0; j < vocab.size(); ++j) {
    m.names[j] = "tfidf:" + vocab.terms()[j];
    m.provenance[j] = Provenance::tfidf;
  }
  return m;
}

}  // namespace pricelens
