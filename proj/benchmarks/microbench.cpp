// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Microbenchmarks for the hot paths: multiplier solves, learner steps on both
// engines, sampling, the geodesic metric, and the heavier baselines.

#include <benchmark/benchmark.h>

#include <cmath>
#include <utility>
#include <vector>

#include "contreg/baselines.hpp"
#include "contreg/domains.hpp"
#include "contreg/dual_averaging.hpp"
#include "contreg/potentials.hpp"
#include "contreg/rewards.hpp"
#include "contreg/rng.hpp"
#include "contreg/schedule.hpp"

using namespace contreg;

namespace {

std::vector<double> sinusoid_profile(const Grid& g) {
  std::vector<double> U(g.size());
  for (size_t i = 0; i < g.size(); ++i)
    U[i] = std::sin(7.0 * g.nodes[i][0]) + 0.5 * std::cos(3.0 * g.nodes[i][0]);
  return U;
}

void BM_MultiplierSolveCold(benchmark::State& state) {
  const Domain S =
      Domain::interval(0.0, 1.0, static_cast<int>(state.range(0)));
  const std::vector<double> U = sinusoid_profile(S.grid());
  const Potential pot = Potential::exponential();
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_nu_star(pot, S, U, 0.5).nu);
}
BENCHMARK(BM_MultiplierSolveCold)->Arg(512)->Arg(4096);

void BM_MultiplierSolveWarm(benchmark::State& state) {
  const Domain S =
      Domain::interval(0.0, 1.0, static_cast<int>(state.range(0)));
  const std::vector<double> U = sinusoid_profile(S.grid());
  const Potential pot = Potential::exponential();
  const double root = solve_nu_star(pot, S, U, 0.5).nu;
  const std::pair<double, double> hint{root - 1e-3, root + 1e-3};
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_nu_star(pot, S, U, 0.5, 1e-10, hint).nu);
}
BENCHMARK(BM_MultiplierSolveWarm)->Arg(512)->Arg(4096);

void BM_LearnerStepAffine(benchmark::State& state) {
  const Domain S = Domain::interval(0.0, 1.0, 512);
  DensityState st(Potential::exponential(), S, Schedule::poly(1.0, 0.5), 5.0);
  auto stream = make_alternating_affine(S, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(st.step(stream->next()).t);
}
BENCHMARK(BM_LearnerStepAffine);

void BM_LearnerStepGrid(benchmark::State& state) {
  const Domain S =
      Domain::interval(0.0, 1.0, static_cast<int>(state.range(0)));
  DensityState st(Potential::exponential(), S, Schedule::poly(1.0, 0.5), 1.0);
  const RewardFn u = RewardFn::generic(
      [](const Point& s) { return 0.5 + 0.5 * std::sin(6.0 * s[0]); });
  for (auto _ : state) benchmark::DoNotOptimize(st.step(u).t);
}
BENCHMARK(BM_LearnerStepGrid)->Arg(512)->Arg(4096);

void BM_SampleAffine(benchmark::State& state) {
  const Domain S = Domain::interval(0.0, 1.0, 512);
  DensityState st(Potential::exponential(), S, Schedule::fixed(0.5), 5.0);
  auto stream = make_alternating_affine(S, 5.0);
  for (int t = 0; t < 5; ++t) st.step(stream->next());
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(st.sample(rng)[0]);
}
BENCHMARK(BM_SampleAffine);

void BM_SampleGrid(benchmark::State& state) {
  const Domain S =
      Domain::interval(0.0, 1.0, static_cast<int>(state.range(0)));
  DensityState st(Potential::exponential(), S, Schedule::fixed(0.5), 1.0);
  const RewardFn u = RewardFn::generic(
      [](const Point& s) { return 0.5 + 0.5 * std::sin(6.0 * s[0]); });
  for (int t = 0; t < 5; ++t) st.step(u);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(st.sample(rng)[0]);
}
BENCHMARK(BM_SampleGrid)->Arg(512)->Arg(4096);

void BM_GeodesicDistance(benchmark::State& state) {
  const Domain S = Domain::lshape(100);
  Rng rng(3);
  std::vector<std::pair<Point, Point>> pairs(256);
  for (auto& p : pairs) {
    p.first = S.sample_uniform(rng);
    p.second = S.sample_uniform(rng);
  }
  size_t i = 0;
  for (auto _ : state) {
    const auto& p = pairs[i++ & 255];
    benchmark::DoNotOptimize(S.distance(p.first, p.second));
  }
}
BENCHMARK(BM_GeodesicDistance);

void BM_EwooStep(benchmark::State& state) {
  const Domain S = Domain::hypercube(2, 0.5, 64);
  const Grid& g = S.grid();
  std::vector<double> cumL(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    const Point& s = g.nodes[i];
    cumL[i] = s[0] * s[0] + 0.5 * s[1] * s[1] + 0.3 * s[0];
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(ewoo_step(cumL, 2.0, S)[0]);
}
BENCHMARK(BM_EwooStep);

void BM_FtalStep(benchmark::State& state) {
  const Domain S = Domain::hypercube(2, 0.5, 8);
  FtalState st(2);
  Point s = Point::of(0.0, 0.0);
  Rng rng(5);
  for (auto _ : state) {
    const Point grad = Point::of(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    s = ftal_step(st, grad, s, 0.05, S);
    benchmark::DoNotOptimize(s[0]);
  }
}
BENCHMARK(BM_FtalStep);

}  // namespace

BENCHMARK_MAIN();
