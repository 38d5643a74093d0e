#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "lexent/analysis.hpp"
#include "lexent/hfeature.hpp"
#include "lexent/logreg.hpp"
#include "lexent/svm.hpp"
#include "lexent/synth.hpp"
#include "lexent/vecspace.hpp"

using namespace lexent;

namespace {

struct Planted {
  VectorSpace space;
  std::vector<LabeledPair> pairs;
};

// Planted corpus with `categories` categories, built once per size.
const Planted& planted(int categories) {
  static std::map<int, Planted> cache;
  auto it = cache.find(categories);
  if (it != cache.end()) return it->second;
  SynthConfig c;
  c.categories = categories;
  const SynthCorpus corpus = synth_corpus(c);
  Planted p;
  p.space = build_space(corpus.counts, 60);
  p.pairs = filter_to_vocab(corpus.pairs, p.space).kept;
  return cache.emplace(categories, std::move(p)).first->second;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

std::vector<int> blob_labels(Matrix& X, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> y(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    y[static_cast<std::size_t>(i)] = static_cast<int>(rng() & 1);
    X(i, 0) += y[static_cast<std::size_t>(i)] ? 1.5 : -1.5;
  }
  return y;
}

}  // namespace

static void BM_PpmiTransform(benchmark::State& state) {
  SynthConfig c;
  c.categories = static_cast<int>(state.range(0));
  const CountMatrix counts = synth_corpus(c).counts;
  for (auto _ : state) benchmark::DoNotOptimize(ppmi_transform(counts));
  state.counters["nnz"] = static_cast<double>(counts.nonzeros());
}
BENCHMARK(BM_PpmiTransform)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_TruncatedSvdDense(benchmark::State& state) {
  const Matrix a = random_matrix(state.range(0), state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(truncated_svd(a, 50));
}
BENCHMARK(BM_TruncatedSvdDense)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_TruncatedSvdRandomized(benchmark::State& state) {
  SynthConfig c;
  c.categories = static_cast<int>(state.range(0));
  const auto sparse = ppmi_transform(synth_corpus(c).counts).to_sparse();
  SvdOptions o;
  o.dense_threshold = 0;
  for (auto _ : state) benchmark::DoNotOptimize(truncated_svd(sparse, 100, o));
  state.counters["rows"] = static_cast<double>(sparse.rows());
  state.counters["cols"] = static_cast<double>(sparse.cols());
}
BENCHMARK(BM_TruncatedSvdRandomized)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_TrainLogreg(benchmark::State& state) {
  Matrix X = random_matrix(state.range(0), 120, 2);
  const auto y = blob_labels(X, 3);
  for (auto _ : state) benchmark::DoNotOptimize(train_logreg(X, y));
}
BENCHMARK(BM_TrainLogreg)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_TrainRbfSvm(benchmark::State& state) {
  Matrix X = random_matrix(state.range(0), 16, 4);
  const auto y = blob_labels(X, 5);
  for (auto _ : state) benchmark::DoNotOptimize(train_rbf_svm(X, y));
}
BENCHMARK(BM_TrainRbfSvm)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_FitHFeature(benchmark::State& state) {
  const Planted& p = planted(100);
  HFeatureConfig config;
  config.n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_hfeature(p.pairs, p.space, config));
  state.counters["pairs"] = static_cast<double>(p.pairs.size());
}
BENCHMARK(BM_FitHFeature)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_NearestContexts(benchmark::State& state) {
  const Planted& p = planted(static_cast<int>(state.range(0)));
  const Vector query = p.space.contexts().row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(nearest(p.space, query, Side::kContext, 10));
  state.counters["contexts"] = static_cast<double>(p.space.num_contexts());
}
BENCHMARK(BM_NearestContexts)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
