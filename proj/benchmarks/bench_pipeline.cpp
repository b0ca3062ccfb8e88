#include <benchmark/benchmark.h>

#include <random>

#include "subalign/classifier.hpp"
#include "subalign/evolution.hpp"
#include "subalign/linear.hpp"
#include "subalign/projection_errors.hpp"
#include "subalign/synthetic.hpp"

namespace {

using namespace subalign;

struct Problem {
  Dataset source;
  Dataset target;
};

Problem make_problem(std::size_t categories, std::size_t dim) {
  SyntheticSpec spec;
  spec.num_categories = categories;
  spec.feature_dim = dim;
  spec.target_shift = 2.0;
  const SyntheticDomain domain(spec);
  std::vector<CategoryId> half;
  for (CategoryId c = 0; c < categories; c += 2) half.push_back(c);
  return {domain.source(), domain.make_target(half)};
}

void BM_Pca(benchmark::State& state) {
  const auto rows = state.range(0);
  const auto cols = state.range(1);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Matrix data(rows, cols);
  for (Eigen::Index i = 0; i < data.size(); ++i) data(i) = normal(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pca(data, 20).basis().data());
  }
}
BENCHMARK(BM_Pca)->Args({200, 64})->Args({800, 256})->Args({2000, 512});

void BM_ScoreSubset(benchmark::State& state) {
  const Problem p = make_problem(20, static_cast<std::size_t>(state.range(0)));
  const SubsetScorer scorer(p.source, p.target, ErrorKind::Reprojection, 20);
  const CategorySubset subset({0, 2, 4, 6, 8, 10});
  for (auto _ : state) benchmark::DoNotOptimize(scorer.score(subset));
}
BENCHMARK(BM_ScoreSubset)->Arg(64)->Arg(256);

// Full greedy ordering; second argument is the worker count.
void BM_Evolve(benchmark::State& state) {
  const Problem p = make_problem(static_cast<std::size_t>(state.range(0)), 64);
  const SubsetScorer scorer(p.source, p.target, ErrorKind::Reprojection, 10);
  const EvolveOptions options{static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(scorer, options).errors.data());
}
BENCHMARK(BM_Evolve)
    ->Args({10, 1})
    ->Args({20, 1})
    ->Args({20, 4})
    ->Unit(benchmark::kMillisecond);

void BM_Train(benchmark::State& state) {
  const Problem p = make_problem(10, 64);
  const CategorySubset subset({0, 2, 4, 6, 8});
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(p.source, subset, p.target, 10).weights().data());
  }
}
BENCHMARK(BM_Train)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
