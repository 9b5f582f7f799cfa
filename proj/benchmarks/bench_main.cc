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

// Micro benchmarks for the hot loops: TF-IDF, skip-gram training, collapsed
// Gibbs sweeps, boosted-tree fitting and TreeSHAP.

#include <benchmark/benchmark.h>

#include "pricelens/explain.hpp"
#include "pricelens/features.hpp"
#include "pricelens/lda.hpp"
#include "pricelens/models/gbt.hpp"
#include "pricelens/models/model.hpp"
#include "pricelens/skipgram.hpp"
#include "pricelens/synthetic.hpp"
#include "pricelens/text.hpp"

namespace {

using namespace pricelens;

struct Corpus {
  std::vector<DataProduct> products;
  std::vector<TokenList> docs;
  Vocabulary vocab;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    out.products = generate_synthetic({}).products;
    out.docs = tokenize_products(out.products);
    out.vocab = build_vocabulary(out.docs);
    return out;
  }();
  return c;
}

void BM_Tfidf(benchmark::State& state) {
  const auto& c = corpus();
  for (auto _ : state) benchmark::DoNotOptimize(tfidf(c.docs, c.vocab));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.docs.size()));
}
BENCHMARK(BM_Tfidf)->Unit(benchmark::kMillisecond);

void BM_SkipGramEpoch(benchmark::State& state) {
  const auto& c = corpus();
  SkipGramConfig cfg;
  cfg.dimension = static_cast<std::size_t>(state.range(0));
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_skipgram(c.docs, c.vocab, cfg));
}
BENCHMARK(BM_SkipGramEpoch)->Arg(32)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_GibbsSweeps(benchmark::State& state) {
  const auto& c = corpus();
  LdaConfig cfg;
  cfg.topics = static_cast<std::size_t>(state.range(0));
  cfg.iterations = 20;
  for (auto _ : state) benchmark::DoNotOptimize(train_lda(c.docs, c.vocab, cfg));
}
BENCHMARK(BM_GibbsSweeps)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

FeatureMatrix synthetic_features(Vector& y) {
  const auto& c = corpus();
  y = make_targets(c.products, {});
  return structured_features(c.products);
}

void BM_GbtFit(benchmark::State& state) {
  Vector y;
  const auto f = synthetic_features(y);
  GbtConfig cfg;
  cfg.rounds = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_boosted_trees(f.values, y, BoostLoss::squared, cfg));
  }
}
BENCHMARK(BM_GbtFit)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_TreeShap(benchmark::State& state) {
  Vector y;
  const auto f = synthetic_features(y);
  ModelSpec spec;
  spec.family = Family::gbt;
  spec.gbt.rounds = 100;
  const auto m = fit_model(spec, f, y, Task::regression, 0, 1);
  Eigen::Index row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree_shap(*m.model, row_span(f.values, row)));
    row = (row + 1) % f.values.rows();
  }
}
BENCHMARK(BM_TreeShap)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
