// bench/bench_kernels.cpp

// Copyright 2026  The cohortsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels on a UBM-sized workload.

#include <benchmark/benchmark.h>

#include <random>

#include "cohortsv/kernels.hpp"

namespace {

using cohortsv::DiagGmm;
using cohortsv::FeatureMatrix;

FeatureMatrix frames(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<float> v(n * dim);
  for (auto& x : v) x = g(rng);
  return FeatureMatrix(n, dim, std::move(v));
}

DiagGmm model(std::size_t m, std::size_t dim) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> w(m, 1.0 / static_cast<double>(m)), mu(m * dim), var(m * dim, 1.0);
  for (auto& x : mu) x = g(rng);
  return DiagGmm(std::move(w), std::move(mu), std::move(var));
}

template <double (*Fn)(const DiagGmm&, const FeatureMatrix&)>
void BM_TotalLoglik(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const DiagGmm g = model(m, 8);
  const FeatureMatrix x = frames(60000, 8);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(g, x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.frames()));
}

template <cohortsv::kernels::SuffStats (*Fn)(const DiagGmm&, const FeatureMatrix&, bool)>
void BM_Accumulate(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const DiagGmm g = model(m, 8);
  const FeatureMatrix x = frames(60000, 8);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(g, x, true));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.frames()));
}

BENCHMARK(BM_TotalLoglik<cohortsv::kernels::serial::total_loglik>)->Name("total_loglik/serial")->Arg(32)->Arg(256);
BENCHMARK(BM_TotalLoglik<cohortsv::kernels::omp::total_loglik>)->Name("total_loglik/omp")->Arg(32)->Arg(256);
BENCHMARK(BM_Accumulate<cohortsv::kernels::serial::accumulate>)->Name("accumulate/serial")->Arg(32)->Arg(256);
BENCHMARK(BM_Accumulate<cohortsv::kernels::omp::accumulate>)->Name("accumulate/omp")->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
