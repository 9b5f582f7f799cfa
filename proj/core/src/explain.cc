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

#include "pricelens/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pricelens/csv.hpp"

namespace pricelens {

double expected_value(const Tree& tree, std::size_t output) {
  const double root = tree.nodes.front().cover;
  double acc = 0.0;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.is_leaf(i)) acc += tree.nodes[i].cover / root * tree.value_at(i)[output];
  }
  return acc;
}

namespace {

struct PathElement {
  int feature = -1;
  double zero_fraction = 0.0;
  double one_fraction = 0.0;
  double weight = 0.0;
};

using Path = std::vector<PathElement>;

void extend(Path& path, std::size_t depth, double zero, double one, int feature) {
  path[depth] = {feature, zero, one, depth == 0 ? 1.0 : 0.0};
  const double d1 = static_cast<double>(depth + 1);
  for (std::size_t i = depth; i-- > 0;) {
    path[i + 1].weight += one * path[i].weight * static_cast<double>(i + 1) / d1;
    path[i].weight = zero * path[i].weight * static_cast<double>(depth - i) / d1;
  }
}

void unwind(Path& path, std::size_t depth, std::size_t index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next = path[depth].weight;
  const double d1 = static_cast<double>(depth + 1);
  for (std::size_t i = depth; i-- > 0;) {
    if (one != 0.0) {
      const double tmp = path[i].weight;
      path[i].weight = next * d1 / (static_cast<double>(i + 1) * one);
      next = tmp - path[i].weight * zero * static_cast<double>(depth - i) / d1;
    } else {
      path[i].weight = path[i].weight * d1 / (zero * static_cast<double>(depth - i));
    }
  }
  for (std::size_t i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

double unwound_sum(const Path& path, std::size_t depth, std::size_t index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next = path[depth].weight;
  double total = 0.0;
  const double d1 = static_cast<double>(depth + 1);
  for (std::size_t i = depth; i-- > 0;) {
    if (one != 0.0) {
      const double tmp = next * d1 / (static_cast<double>(i + 1) * one);
      total += tmp;
      next = path[i].weight - tmp * zero * static_cast<double>(depth - i) / d1;
    } else if (zero != 0.0) {
      total += path[i].weight / zero / (static_cast<double>(depth - i) / d1);
    }
  }
  return total;
}

struct ShapWalk {
  const Tree& tree;
  std::span<const double> x;
  std::size_t output;
  double scale;
  Vector& phi;

  void recurse(std::size_t node, Path path, std::size_t depth, double zero, double one,
               int feature) {
    extend(path, depth, zero, one, feature);
    const auto& nd = tree.nodes[node];
    if (tree.is_leaf(node)) {
      const double leaf = tree.value_at(node)[output];
      for (std::size_t i = 1; i <= depth; ++i) {
        const double w = unwound_sum(path, depth, i);
        const auto& el = path[i];
        phi(el.feature) += scale * w * (el.one_fraction - el.zero_fraction) * leaf;
      }
      return;
    }
    const auto f = static_cast<std::size_t>(nd.feature);
    const auto hot = static_cast<std::size_t>(x[f] <= nd.threshold ? nd.left : nd.right);
    const auto cold = static_cast<std::size_t>(x[f] <= nd.threshold ? nd.right : nd.left);
    double in_zero = 1.0, in_one = 1.0;
    for (std::size_t k = 1; k <= depth; ++k) {
      if (path[k].feature == nd.feature) {
        in_zero = path[k].zero_fraction;
        in_one = path[k].one_fraction;
        unwind(path, depth, k);
        --depth;
        break;
      }
    }
    const double hot_frac = tree.nodes[hot].cover / nd.cover;
    const double cold_frac = tree.nodes[cold].cover / nd.cover;
    recurse(hot, path, depth + 1, hot_frac * in_zero, in_one, nd.feature);
    recurse(cold, path, depth + 1, cold_frac * in_zero, 0.0, nd.feature);
  }
};

}  // namespace

void tree_shap(const Tree& tree, std::span<const double> x, std::size_t output, double scale,
               Vector& phi) {
  const std::size_t max_depth = tree.depth() + 2;
  Path path(max_depth + 1);
  ShapWalk walk{tree, x, output, scale, phi};
  walk.recurse(0, std::move(path), 0, 1.0, 1.0, -1);
}

namespace {

struct TreeSet {
  std::vector<const Tree*> trees;
  double scale = 1.0;
  double offset = 0.0;
  std::size_t output = 0;
};

// Tree ensembles behind each model output.
std::vector<TreeSet> tree_sets(const Model& model) {
  std::vector<TreeSet> sets;
  if (auto* c = dynamic_cast<const CartModel*>(&model)) {
    for (std::size_t o = 0; o < c->outputs(); ++o) sets.push_back({{&c->tree()}, 1.0, 0.0, o});
    return sets;
  }
  if (auto* f = dynamic_cast<const ForestModel*>(&model)) {
    std::vector<const Tree*> trees;
    for (const auto& t : f->trees()) trees.push_back(&t);
    const double scale = 1.0 / static_cast<double>(trees.size());
    for (std::size_t o = 0; o < f->outputs(); ++o) sets.push_back({trees, scale, 0.0, o});
    return sets;
  }
  auto boosted = [](const BoostedTrees& b) {
    TreeSet s;
    for (const auto& t : b.trees) s.trees.push_back(&t);
    s.scale = b.learning_rate;
    s.offset = b.base_score;
    return s;
  };
  if (auto* g = dynamic_cast<const GbtRegressor*>(&model)) {
    sets.push_back(boosted(g->ensemble()));
    return sets;
  }
  if (auto* o = dynamic_cast<const OvrModel*>(&model)) {
    if (o->family() != Family::gbt) return {};
    for (const auto& m : o->members()) {
      if (auto* g = dynamic_cast<const GbtBinary*>(m.get())) {
        sets.push_back(boosted(g->ensemble()));
      } else if (auto* k = dynamic_cast<const ConstantClassifier*>(m.get())) {
        TreeSet s;
        s.offset = k->score();
        sets.push_back(s);
      } else {
        return {};
      }
    }
    return sets;
  }
  return {};
}

}  // namespace

bool is_tree_model(const Model& model) { return !tree_sets(model).empty(); }

std::vector<Attribution> tree_shap(const Model& model, std::span<const double> x) {
  const auto sets = tree_sets(model);
  if (sets.empty()) {
    throw ValidationError("tree_shap: model family '" + std::string(to_string(model.family())) +
                          "' is not a tree model");
  }
  std::vector<Attribution> out;
  for (const auto& s : sets) {
    Attribution a;
    a.values = Vector::Zero(static_cast<Eigen::Index>(x.size()));
    a.base_value = s.offset;
    for (const Tree* t : s.trees) {
      a.base_value += s.scale * expected_value(*t, s.output);
      tree_shap(*t, x, s.output, s.scale, a.values);
    }
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

}  // namespace

std::vector<Attribution> kernel_shap(const Model& model, std::span<const double> x,
                                     const Matrix& background, const KernelShapConfig& config) {
  const std::size_t m = x.size();
  if (background.rows() == 0) throw ValidationError("kernel_shap: background must be non-empty");
  if (static_cast<std::size_t>(background.cols()) != m) {
    throw ValidationError("kernel_shap: background width does not match the input");
  }
  if (config.coalitions < m + 2) {
    throw ValidationError("kernel_shap: need at least " + std::to_string(m + 2) + " coalitions");
  }
  Matrix xrow(1, static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) xrow(0, static_cast<Eigen::Index>(j)) = x[j];
  const Vector fx = model.scores(xrow).row(0).transpose();
  const Vector f0 = model.scores(background).colwise().mean().transpose();
  const auto outputs = fx.size();
  std::vector<Attribution> out(static_cast<std::size_t>(outputs));
  for (Eigen::Index o = 0; o < outputs; ++o) {
    out[static_cast<std::size_t>(o)].base_value = f0(o);
    out[static_cast<std::size_t>(o)].values = Vector::Zero(static_cast<Eigen::Index>(m));
  }
  if (m == 0) return out;
  if (m == 1) {
    for (Eigen::Index o = 0; o < outputs; ++o) out[static_cast<std::size_t>(o)].values(0) = fx(o) - f0(o);
    return out;
  }

  // Coalition masks and their regression weights.
  std::vector<std::vector<char>> masks;
  std::vector<double> weights;
  const bool enumerate = m < 31 && ((std::size_t{1} << m) - 2) <= config.coalitions;
  if (enumerate) {
    for (std::size_t bits = 1; bits + 1 < (std::size_t{1} << m); ++bits) {
      std::vector<char> z(m);
      std::size_t s = 0;
      for (std::size_t j = 0; j < m; ++j) {
        z[j] = static_cast<char>((bits >> j) & 1U);
        s += static_cast<std::size_t>(z[j]);
      }
      masks.push_back(std::move(z));
      weights.push_back(std::exp(std::log(static_cast<double>(m - 1)) - log_binomial(m, s) -
                                 std::log(static_cast<double>(s)) -
                                 std::log(static_cast<double>(m - s))));
    }
  } else {
    std::vector<double> size_prob(m);
    double total = 0.0;
    for (std::size_t s = 1; s < m; ++s) {
      size_prob[s] = static_cast<double>(m - 1) / (static_cast<double>(s) * static_cast<double>(m - s));
      total += size_prob[s];
    }
    Rng rng(config.seed);
    std::vector<std::size_t> perm(m);
    while (masks.size() + 2 <= config.coalitions) {
      double u = uniform01(rng) * total;
      std::size_t s = 1;
      while (s + 1 < m && u >= size_prob[s]) {
        u -= size_prob[s];
        ++s;
      }
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = 0; i < s; ++i) std::swap(perm[i], perm[i + uniform_index(rng, m - i)]);
      std::vector<char> z(m, 0);
      for (std::size_t i = 0; i < s; ++i) z[perm[i]] = 1;
      std::vector<char> comp(m);
      for (std::size_t j = 0; j < m; ++j) comp[j] = static_cast<char>(1 - z[j]);
      masks.push_back(std::move(z));
      masks.push_back(std::move(comp));
      weights.push_back(1.0);
      weights.push_back(1.0);
    }
  }

  const auto nb = background.rows();
  const auto nc = static_cast<Eigen::Index>(masks.size());
  Matrix batch(nc * nb, static_cast<Eigen::Index>(m));
  for (Eigen::Index c = 0; c < nc; ++c) {
    const auto& z = masks[static_cast<std::size_t>(c)];
    for (Eigen::Index b = 0; b < nb; ++b) {
      for (std::size_t j = 0; j < m; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        batch(c * nb + b, jj) = z[j] ? x[j] : background(b, jj);
      }
    }
  }
  const Matrix preds = model.scores(batch);

  // Eliminate the last coefficient through the efficiency constraint.
  const auto p = static_cast<Eigen::Index>(m - 1);
  Eigen::MatrixXd a(nc, p);
  for (Eigen::Index c = 0; c < nc; ++c) {
    const auto& z = masks[static_cast<std::size_t>(c)];
    for (Eigen::Index j = 0; j < p; ++j) {
      a(c, j) = static_cast<double>(z[static_cast<std::size_t>(j)]) - static_cast<double>(z[m - 1]);
    }
  }
  Eigen::VectorXd sw(nc);
  for (Eigen::Index c = 0; c < nc; ++c) sw(c) = std::sqrt(weights[static_cast<std::size_t>(c)]);
  const Eigen::MatrixXd aw = sw.asDiagonal() * a;
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> solver(aw);
  for (Eigen::Index o = 0; o < outputs; ++o) {
    const double delta = fx(o) - f0(o);
    Eigen::VectorXd rhs(nc);
    for (Eigen::Index c = 0; c < nc; ++c) {
      const double v = preds.col(o).segment(c * nb, nb).mean();
      rhs(c) = v - f0(o) - static_cast<double>(masks[static_cast<std::size_t>(c)][m - 1]) * delta;
    }
    const Eigen::VectorXd phi = solver.solve(sw.cwiseProduct(rhs));
    auto& att = out[static_cast<std::size_t>(o)];
    att.values.head(p) = phi;
    att.values(p) = delta - phi.sum();
  }
  return out;
}

std::string GlobalExplanation::ranking_csv() const {
  std::string out = "rank,feature,mean_abs_shap\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out += csv::format_row({std::to_string(i + 1), ranking[i].feature,
                            csv::format_double(ranking[i].mean_abs)});
  }
  return out;
}

std::string GlobalExplanation::beeswarm_csv(const Matrix& x, std::size_t top) const {
  std::string out = "feature,row,output,shap,value\n";
  const std::size_t count = top == 0 ? ranking.size() : std::min(top, ranking.size());
  for (std::size_t k = 0; k < count; ++k) {
    const auto& imp = ranking[k];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t o = 0; o < rows[r].size(); ++o) {
        out += csv::format_row(
            {imp.feature, std::to_string(r), std::to_string(o),
             csv::format_double(rows[r][o].values(static_cast<Eigen::Index>(imp.column))),
             csv::format_double(x(static_cast<Eigen::Index>(r),
                                  static_cast<Eigen::Index>(imp.column)))});
      }
    }
  }
  return out;
}

GlobalExplanation global_importance(const Model& model, const Matrix& x,
                                    const std::vector<std::string>& names,
                                    const Matrix& background, const KernelShapConfig& config,
                                    int threads) {
  if (x.rows() == 0) throw ValidationError("global_importance: sample must be non-empty");
  if (static_cast<std::size_t>(x.cols()) != names.size()) {
    throw ValidationError("global_importance: names do not match the columns");
  }
  GlobalExplanation g;
  g.names = names;
  g.rows.resize(static_cast<std::size_t>(x.rows()));
  const bool trees = is_tree_model(model);
  parallel_for(g.rows.size(), threads, [&](std::size_t r) {
    const auto row = row_span(x, static_cast<Eigen::Index>(r));
    if (trees) {
      g.rows[r] = tree_shap(model, row);
    } else {
      KernelShapConfig c = config;
      c.seed = mix_seed(config.seed, r);
      g.rows[r] = kernel_shap(model, row, background, c);
    }
  });
  const std::size_t k = names.size();
  std::vector<double> score(k, 0.0);
  for (const auto& row : g.rows) {
    for (const auto& a : row) {
      for (std::size_t j = 0; j < k; ++j) score[j] += std::abs(a.values(static_cast<Eigen::Index>(j)));
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    g.ranking.push_back({names[j], j, score[j] / static_cast<double>(x.rows())});
  }
  std::stable_sort(g.ranking.begin(), g.ranking.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.mean_abs > b.mean_abs;
                   });
  return g;
}

std::string KeywordProfile::to_text() const {
  std::string out = "dimension " + std::to_string(dimension) + "\n  top:";
  for (const auto& [w, v] : top) out += " " + w + "(" + csv::format_double(v) + ")";
  out += "\n  bottom:";
  for (const auto& [w, v] : bottom) out += " " + w + "(" + csv::format_double(v) + ")";
  return out + "\n";
}

KeywordProfile embedding_keywords(const EmbeddingTable& table, std::size_t dimension,
                                  std::size_t k) {
  if (dimension >= table.dimension()) {
    throw ValidationError("embedding_keywords: dimension " + std::to_string(dimension) +
                          " is out of range (d=" + std::to_string(table.dimension()) + ")");
  }
  const auto& terms = table.terms();
  std::vector<std::pair<std::string, double>> entries;
  entries.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    entries.emplace_back(terms[i], table.input_vector(i)[dimension]);
  }
  k = std::min(k, entries.size());
  KeywordProfile p;
  p.dimension = dimension;
  auto desc = entries;
  std::sort(desc.begin(), desc.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  p.top.assign(desc.begin(), desc.begin() + static_cast<std::ptrdiff_t>(k));
  auto asc = entries;
  std::sort(asc.begin(), asc.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  p.bottom.assign(asc.begin(), asc.begin() + static_cast<std::ptrdiff_t>(k));
  return p;
}

}  // namespace pricelens
