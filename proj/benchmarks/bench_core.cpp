// Copyright 2026 The adiaband Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "adiaband/bounds.hpp"
#include "adiaband/family.hpp"
#include "adiaband/propagator.hpp"
#include "adiaband/schedule.hpp"
#include "adiaband/spectral.hpp"

namespace {

using namespace adiaband;

Operator RandomMatrix(Eigen::Index d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Operator m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

void BM_UnitaryExp(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const HermitianOperator h = HermitianOperator::Symmetrized(RandomMatrix(d, 1));
  for (auto _ : state) benchmark::DoNotOptimize(UnitaryExp(h, 0.1));
}
BENCHMARK(BM_UnitaryExp)->RangeMultiplier(2)->Range(4, 64);

void BM_Twiddle(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const HamiltonianFamily family = RandomSmoothFamily(d, 3, 2);
  const ProjectorBundle bundle = BundleAt(family, 0.3, BandSelector::Ground());
  const Operator x = RandomMatrix(d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Twiddle(x, bundle));
}
BENCHMARK(BM_Twiddle)->RangeMultiplier(2)->Range(4, 64);

void BM_EvolveReal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HamiltonianFamily family = MakeGroverFamily({n}, LinearSchedule()).family;
  const TimeGrid grid = TimeGrid::Uniform(257);
  for (auto _ : state) benchmark::DoNotOptimize(EvolveReal(family, 100.0, grid));
}
BENCHMARK(BM_EvolveReal)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_BoundProfile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HamiltonianFamily family = MakeGroverFamily({n}, LinearSchedule()).family;
  const TimeGrid grid = TimeGrid::Uniform(1025);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EvaluateBoundProfile(family, BandSelector::Ground(), 100.0, grid, 1.0));
  }
}
BENCHMARK(BM_BoundProfile)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
