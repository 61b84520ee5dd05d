#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <string>

#include "jpf/inside.hpp"

namespace {

std::string random_rna(int len, unsigned seed) {
  std::mt19937 rng(seed);
  std::string s;
  for (int k = 0; k < len; ++k) s.push_back("ACGU"[rng() % 4]);
  return s;
}

void run(benchmark::State& state, int threads) {
  const int n = static_cast<int>(state.range(0));
  const auto r = jpf::Strand::from_5to3("r", random_rna(n, 1), jpf::Role::Query);
  const auto s = jpf::Strand::from_5to3("s", random_rna(n, 2), jpf::Role::Target);
  const jpf::EnergyModel model;
  jpf::InsideOptions opt;
  opt.threads = threads;
  opt.with_adjoints = false;
  for (auto _ : state) {
    auto in = jpf::inside(r, s, model, opt);
    benchmark::DoNotOptimize(in.q_total());
  }
  state.counters["threads"] = threads;
}

void BM_InsideSerial(benchmark::State& state) { run(state, 1); }
void BM_InsideParallel(benchmark::State& state) { run(state, omp_get_max_threads()); }

}  // namespace

BENCHMARK(BM_InsideSerial)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InsideParallel)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
