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

#include "pricelens/models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pricelens {

std::size_t Tree::leaf_of(std::span<const double> x) const {
  std::size_t node = 0;
  while (!is_leaf(node)) {
    const auto& nd = nodes[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold
                                        ? nd.left
                                        : nd.right);
  }
  return node;
}

std::size_t Tree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!is_leaf(i)) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t Tree::leaf_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) n += is_leaf(i) ? 1 : 0;
  return n;
}

Presort::Presort(const Matrix& x, std::span<const std::size_t> rows,
                 std::span<const std::size_t> feats)
    : samples(rows.size()), features(feats.begin(), feats.end()) {
  std::sort(features.begin(), features.end());
  column.resize(features.size());
  order.resize(features.size());
  for (std::size_t fi = 0; fi < features.size(); ++fi) {
    const auto f = static_cast<Eigen::Index>(features[fi]);
    auto& col = column[fi];
    col.resize(samples);
    for (std::size_t p = 0; p < samples; ++p) col[p] = x(static_cast<Eigen::Index>(rows[p]), f);
    auto& ord = order[fi];
    ord.resize(samples);
    std::iota(ord.begin(), ord.end(), 0u);
    std::stable_sort(ord.begin(), ord.end(),
                     [&col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
}

namespace {

class Grower {
 public:
  Grower(const Presort& presort, const Matrix& channels, const Vector& weights,
         const GrowthParams& params)
      : pre_(presort), ch_(channels), w_(weights), p_(params),
        nch_(static_cast<std::size_t>(channels.cols())), order_(presort.order),
        members_(presort.samples), buffer_(presort.samples), left_(presort.samples, 0) {
    std::iota(members_.begin(), members_.end(), 0u);
    if (p_.criterion != SplitCriterion::second_order) lambda_ = 0.0;
    else lambda_ = p_.lambda;
  }

  Tree run() {
    build(0, pre_.samples, 0);
    Tree t;
    t.nodes = std::move(nodes_);
    t.values.resize(static_cast<Eigen::Index>(t.nodes.size()), static_cast<Eigen::Index>(nch_));
    std::copy(values_.begin(), values_.end(), t.values.data());
    return t;
  }

 private:
  double score(const double* s, double w) const {
    const double d = w + lambda_;
    if (d <= 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t c = 0; c < nch_; ++c) acc += s[c] * s[c];
    return acc / d;
  }

  int build(std::size_t begin, std::size_t end, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_.back().cover = static_cast<double>(end - begin);
    std::vector<double> total(nch_, 0.0);
    double wsum = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const auto s = members_[k];
      for (std::size_t c = 0; c < nch_; ++c) total[c] += ch_(s, static_cast<Eigen::Index>(c));
      wsum += w_(s);
    }
    const double denom = wsum + lambda_;
    const double sign = p_.criterion == SplitCriterion::second_order ? -1.0 : 1.0;
    for (std::size_t c = 0; c < nch_; ++c) {
      values_.push_back(denom > 0.0 ? sign * total[c] / denom : 0.0);
    }

    const std::size_t n = end - begin;
    if (depth >= p_.max_depth || n < 2 * std::max<std::size_t>(1, p_.min_leaf)) return id;
    const double parent = score(total.data(), wsum);
    const double eps = 1e-12 * std::max(1.0, std::abs(parent));
    double best_gain = eps;
    std::size_t best_f = pre_.features.size();
    double best_t = 0.0;
    std::vector<double> sl(nch_), sr(nch_);
    const std::size_t min_leaf = std::max<std::size_t>(1, p_.min_leaf);
    for (std::size_t fi = 0; fi < pre_.features.size(); ++fi) {
      const auto& col = pre_.column[fi];
      const auto& ord = order_[fi];
      if (col[ord[begin]] == col[ord[end - 1]]) continue;
      std::fill(sl.begin(), sl.end(), 0.0);
      double wl = 0.0;
      for (std::size_t k = begin; k + 1 < end; ++k) {
        const auto s = ord[k];
        for (std::size_t c = 0; c < nch_; ++c) sl[c] += ch_(s, static_cast<Eigen::Index>(c));
        wl += w_(s);
        const std::size_t nl = k + 1 - begin;
        const double xa = col[s];
        const double xb = col[ord[k + 1]];
        if (xa == xb || nl < min_leaf || n - nl < min_leaf) continue;
        for (std::size_t c = 0; c < nch_; ++c) sr[c] = total[c] - sl[c];
        double gain = score(sl.data(), wl) + score(sr.data(), wsum - wl) - parent;
        if (p_.criterion == SplitCriterion::second_order) gain = 0.5 * gain - p_.gamma;
        if (gain > best_gain) {
          best_gain = gain;
          best_f = fi;
          double mid = xa + (xb - xa) / 2.0;
          if (!(mid < xb)) mid = xa;
          best_t = mid;
        }
      }
    }
    if (best_f == pre_.features.size()) return id;

    const auto& col = pre_.column[best_f];
    std::size_t nl = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const auto s = members_[k];
      left_[s] = col[s] <= best_t ? 1 : 0;
      nl += left_[s];
    }
    for (auto& ord : order_) partition(ord, begin, end);
    partition(members_, begin, end);

    nodes_[static_cast<std::size_t>(id)].feature = static_cast<int>(pre_.features[best_f]);
    nodes_[static_cast<std::size_t>(id)].threshold = best_t;
    const int l = build(begin, begin + nl, depth + 1);
    const int r = build(begin + nl, end, depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  void partition(std::vector<std::uint32_t>& v, std::size_t begin, std::size_t end) {
    std::size_t a = begin, b = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const auto s = v[k];
      if (left_[s]) v[a++] = s;
      else buffer_[b++] = s;
    }
    std::copy(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(b),
              v.begin() + static_cast<std::ptrdiff_t>(a));
  }

  const Presort& pre_;
  const Matrix& ch_;
  const Vector& w_;
  GrowthParams p_;
  std::size_t nch_;
  double lambda_ = 0.0;
  std::vector<std::vector<std::uint32_t>> order_;
  std::vector<std::uint32_t> members_;
  std::vector<std::uint32_t> buffer_;
  std::vector<char> left_;
  std::vector<TreeNode> nodes_;
  std::vector<double> values_;
};

}  // namespace

Tree grow_tree(const Presort& presort, const Matrix& channels, const Vector& weights,
               const GrowthParams& params) {
  if (static_cast<std::size_t>(channels.rows()) != presort.samples ||
      static_cast<std::size_t>(weights.size()) != presort.samples) {
    throw ValidationError("tree: statistics do not match the sample count");
  }
  if (presort.samples == 0) throw ValidationError("tree: no training samples");
  return Grower(presort, channels, weights, params).run();
}

Matrix target_channels(const Vector& y, Task task, std::size_t classes) {
  if (task == Task::regression) return y;
  Matrix out = Matrix::Zero(y.size(), static_cast<Eigen::Index>(classes));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(y(i));
    if (y(i) < 0 || c >= out.cols() || static_cast<double>(c) != y(i)) {
      throw ValidationError("tree: class label out of range at row " + std::to_string(i));
    }
    out(i, c) = 1.0;
  }
  return out;
}

void accumulate_tree(const Tree& tree, const Matrix& x, double scale, Matrix& out) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto leaf = tree.leaf_of(row_span(x, i));
    const auto v = tree.value_at(leaf);
    for (std::size_t c = 0; c < v.size(); ++c) out(i, static_cast<Eigen::Index>(c)) += scale * v[c];
  }
}

Matrix CartModel::scores(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), static_cast<Eigen::Index>(tree_.outputs()));
  accumulate_tree(tree_, x, 1.0, out);
  return out;
}

CartModel fit_cart(const Matrix& x, const Vector& y, Task task, std::size_t classes,
                   const TreeConfig& config) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (y.size() != x.rows()) throw ValidationError("cart: target length mismatch");
  if (n < std::max<std::size_t>(1, config.min_leaf)) {
    throw ValidationError("cart: fewer rows than min_leaf");
  }
  std::vector<std::size_t> rows(n), features(static_cast<std::size_t>(x.cols()));
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(features.begin(), features.end(), 0);
  const Presort presort(x, rows, features);
  GrowthParams p;
  p.criterion = task == Task::regression ? SplitCriterion::mse : SplitCriterion::gini;
  p.max_depth = config.max_depth;
  p.min_leaf = config.min_leaf;
  return CartModel(task, grow_tree(presort, target_channels(y, task, classes),
                                   Vector::Ones(static_cast<Eigen::Index>(n)), p));
}

}  // namespace pricelens
