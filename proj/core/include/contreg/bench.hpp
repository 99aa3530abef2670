// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "contreg/domains.hpp"
#include "contreg/regret.hpp"

namespace contreg {

// Configuration for a multi-algorithm regret benchmark on one stream family.
// All listed algorithms see the same reward instances within a repetition.
struct BenchConfig {
  std::string domain = "hypercube:n=2,w=0.5";
  std::string stream = "quad";
  std::vector<std::string> algorithms = {"da:exp", "da:rho:1.5", "greedy",
                                         "gp", "ogd", "ewoo", "ftal"};
  int64_t T = 10000;
  int reps = 10;
  uint64_t seed = 1;
  int threads = 0;                 // 0: CR_THREADS env or hardware
  int grid_m = 0;                  // 0: domain default
  double vartheta = -1;            // -1: r0/2
  std::vector<int64_t> checkpoints;  // empty: ~24/decade geometric
  // Slope fit window (defaults to [T/100, T]).
  int64_t fit_lo = 0, fit_hi = 0;
};

struct SeriesPoint {
  int64_t t = 0;
  double mean = 0;      // mean over reps of R_t / t
  double q10 = 0, q90 = 0;
  double bound = -1;    // theory curve for this algorithm (if defined)
};

struct AlgoSeries {
  std::string name;
  std::vector<SeriesPoint> points;
  double slope = 0;     // fitted log-log rate of mean R_t/t
  int64_t bound_violations = 0;  // rounds where measured > bound (DA only)
};

struct BenchResult {
  BenchConfig cfg;
  std::vector<AlgoSeries> algos;
};

std::vector<int64_t> default_checkpoints(int64_t T);

// Runs reps repetitions; DA algorithms record expected reward <u_t, x_t>
// (deterministic given the stream), point baselines record realized reward.
BenchResult run_bench(const BenchConfig& cfg);

// Lower-bound experiment: entropy-DA against the Rademacher-profile stream;
// reports repetition-mean worst-case regret at T against the
// w(diam)/(2 sqrt 2) sqrt t curve.
struct LowerBoundResult {
  int64_t T = 0;
  int reps = 0;
  double mean_regret = 0;
  double std_err = 0;       // sample std / sqrt(reps)
  double lower_curve = 0;   // w(diam)/(2 sqrt 2) sqrt T
  double w_at_diam = 0;
  bool dominated = false;   // mean >= curve - 3 std_err
};
LowerBoundResult run_lowerbound(const std::string& domain_cfg, double M,
                                double alpha, double C_alpha, int64_t T,
                                int reps, uint64_t seed, int threads);

int resolve_threads(int requested);

// Runs fn(0..jobs-1) over a worker pool; worker exceptions rethrow on the
// caller thread. Callers write results into disjoint pre-sized slots so the
// outcome is independent of the worker count.
void parallel_for(int jobs, int threads, const std::function<void(int)>& fn);

}  // namespace contreg
