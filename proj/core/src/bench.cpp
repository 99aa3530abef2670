// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "contreg/baselines.hpp"
#include "contreg/dual_averaging.hpp"
#include "contreg/rewards.hpp"
#include "contreg/rng.hpp"
#include "contreg/schedule.hpp"

namespace contreg {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw ConfigError("CR_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<int64_t> default_checkpoints(int64_t T) {
  std::vector<int64_t> out;
  for (int64_t t = 1; t <= std::min<int64_t>(T, 8); ++t) out.push_back(t);
  for (int k = 0;; ++k) {
    const auto t = static_cast<int64_t>(std::llround(std::pow(10.0, k / 24.0)));
    if (t > T) break;
    if (t >= 9) out.push_back(t);
  }
  out.push_back(T);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct AlgoSpec {
  std::string name;
  bool is_da = false;
  Potential pot = Potential::exponential();
};

AlgoSpec parse_algo(const std::string& name) {
  AlgoSpec a;
  a.name = name;
  if (name.rfind("da:", 0) == 0) {
    a.is_da = true;
    a.pot = Potential::parse(name.substr(3));
  } else if (name != "greedy" && name != "gp" && name != "ogd" && name != "ewoo" &&
             name != "ftal") {
    throw ConfigError("algorithms: unknown entry '" + name + "'");
  }
  return a;
}

// Interpolating (type-7) quantile of an unsorted sample.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1 - frac) + v[lo + 1] * frac;
}

std::vector<int64_t> sanitize_checkpoints(std::vector<int64_t> marks, int64_t T) {
  if (marks.empty()) marks = default_checkpoints(T);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  while (!marks.empty() && marks.back() > T) marks.pop_back();
  if (marks.empty() || marks.front() < 1)
    throw ConfigError("checkpoints must lie in [1, T]");
  return marks;
}

}  // namespace

void parallel_for(int jobs, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, jobs));
  if (threads == 1) {
    for (int j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto work = [&] {
    for (;;) {
      const int j = next.fetch_add(1);
      if (j >= jobs) return;
      try {
        fn(j);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}


BenchResult run_bench(const BenchConfig& cfg) {
  if (cfg.T < 1) throw ConfigError("T must be >= 1");
  if (cfg.reps < 1) throw ConfigError("reps must be >= 1");
  if (cfg.algorithms.empty()) throw ConfigError("algorithms must be non-empty");
  Domain S = Domain::parse(cfg.domain);
  if (cfg.grid_m > 0) S = S.with_grid(cfg.grid_m);
  const Regularity reg = S.regularity();
  const std::vector<int64_t> marks = sanitize_checkpoints(cfg.checkpoints, cfg.T);
  std::vector<AlgoSpec> specs;
  specs.reserve(cfg.algorithms.size());
  for (const auto& name : cfg.algorithms) specs.push_back(parse_algo(name));
  const size_t na = specs.size(), nc = marks.size();
  const auto nr = static_cast<size_t>(cfg.reps);

  // measured/bounds indexed [alg][checkpoint][rep]; disjoint per-rep writes.
  std::vector<std::vector<std::vector<double>>> measured(
      na, std::vector<std::vector<double>>(nc, std::vector<double>(nr, 0.0)));
  auto bounds = measured;
  std::vector<std::vector<int64_t>> violations(na, std::vector<int64_t>(nr, 0));

  auto run_rep = [&](int rep) {
    auto stream = make_stream(cfg.stream, S, cfg.T,
                              Rng::keyed(cfg.seed, static_cast<uint64_t>(rep)));
    const double M = stream->bound_M();
    const HoelderModulus chi = stream->modulus();
    const StreamTags tags = stream->tags();
    const double D = norm2(S.box_hi() - S.box_lo());

    std::vector<std::optional<DensityState>> da(na);
    std::vector<Schedule> sched(na, Schedule::fixed(1.0));
    std::vector<std::unique_ptr<Baseline>> base(na);
    std::vector<RegretLedger> ledger;
    ledger.reserve(na);
    bool any_nodes_alg = false;
    for (size_t i = 0; i < na; ++i) {
      ledger.emplace_back(S);
      if (specs[i].is_da) {
        sched[i] = specs[i].pot.kind() == PotentialKind::Exponential
                       ? Schedule::entropy_tuned(reg, M, chi.alpha, cfg.vartheta)
                       : Schedule::growth_tuned(reg, specs[i].pot, M, chi.alpha,
                                                cfg.vartheta);
        da[i].emplace(specs[i].pot, S, sched[i], M);
      } else {
        base[i] = make_baseline(specs[i].name, S, tags);
        if (specs[i].name == "greedy" || specs[i].name == "ewoo")
          any_nodes_alg = true;
      }
    }

    const Grid& grid = S.grid();
    std::vector<double> u_nodes;
    size_t next_mark = 0;
    for (int64_t t = 1; t <= cfg.T; ++t) {
      const RewardFn u = stream->next();
      const bool affine_fast = u.affine_form().has_value() && S.is_box();
      const bool want_nodes = any_nodes_alg || !affine_fast;
      if (want_nodes) {
        u_nodes.resize(grid.size());
        for (size_t j = 0; j < grid.size(); ++j) u_nodes[j] = u(grid.nodes[j]);
      }
      for (size_t i = 0; i < na; ++i) {
        if (specs[i].is_da) {
          // Expected reward <u, x_t> is deterministic given the stream, so it
          // serves as both the realized and expected ledger entries.
          const double eta_before = da[i]->eta();
          double exp_reward;
          if (affine_fast) {
            exp_reward = da[i]->expected_reward(u);
            ledger[i].record_affine(*u.affine_form(), exp_reward, exp_reward,
                                    eta_before);
            da[i]->step(u);
          } else {
            exp_reward = da[i]->expected_reward_nodes(u_nodes);
            ledger[i].record(u_nodes, exp_reward, exp_reward, eta_before);
            da[i]->step(u, u_nodes);
          }
        } else {
          const Point s = base[i]->current();
          const double realized = u(s);
          if (affine_fast)
            ledger[i].record_affine(*u.affine_form(), realized, realized, 0.0);
          else
            ledger[i].record(u_nodes, realized, realized, 0.0);
          base[i]->absorb(u, u_nodes);
        }
      }
      if (next_mark < nc && t == marks[next_mark]) {
        const double td = static_cast<double>(t);
        for (size_t i = 0; i < na; ++i) {
          double avg_regret, bound = -1;
          if (specs[i].is_da) {
            avg_regret = ledger[i].worst_case_expected() / td;
            bound = bound_fdiv_scan(ledger[i], specs[i].pot, sched[i], reg, chi, t);
          } else {
            avg_regret = ledger[i].worst_case_realized() / td;
            const std::string& nm = specs[i].name;
            if (nm == "gp")
              bound = baseline_bound_gp(D, tags.grad_bound_G, t);
            else if (nm == "ogd")
              bound = baseline_bound_ogd(tags.strong_convexity_H, tags.grad_bound_G, t);
            else if (nm == "ftal")
              bound = baseline_bound_ftal(S.dim(), tags.exp_concavity_alpha,
                                          tags.grad_bound_G, D, t);
            else if (nm == "ewoo")
              bound = baseline_bound_ewoo(S.dim(), tags.exp_concavity_alpha, t);
          }
          measured[i][next_mark][static_cast<size_t>(rep)] = avg_regret;
          bounds[i][next_mark][static_cast<size_t>(rep)] = bound;
          if (bound >= 0 && avg_regret > bound)
            ++violations[i][static_cast<size_t>(rep)];
        }
        ++next_mark;
      }
    }
  };

  parallel_for(cfg.reps, resolve_threads(cfg.threads), run_rep);

  const int64_t fit_lo = cfg.fit_lo > 0 ? cfg.fit_lo : std::max<int64_t>(1, cfg.T / 100);
  const int64_t fit_hi = cfg.fit_hi > 0 ? cfg.fit_hi : cfg.T;
  BenchResult res;
  res.cfg = cfg;
  for (size_t i = 0; i < na; ++i) {
    AlgoSeries as;
    as.name = specs[i].name;
    std::vector<std::pair<int64_t, double>> mean_series;
    for (size_t c = 0; c < nc; ++c) {
      SeriesPoint p;
      p.t = marks[c];
      const auto& reps_v = measured[i][c];
      p.mean = std::accumulate(reps_v.begin(), reps_v.end(), 0.0) /
               static_cast<double>(nr);
      p.q10 = quantile(reps_v, 0.10);
      p.q90 = quantile(reps_v, 0.90);
      const auto& b = bounds[i][c];
      p.bound = b[0] >= 0 ? std::accumulate(b.begin(), b.end(), 0.0) /
                                static_cast<double>(nr)
                          : -1;
      mean_series.emplace_back(p.t, p.mean);
      as.points.push_back(p);
    }
    as.bound_violations =
        std::accumulate(violations[i].begin(), violations[i].end(), int64_t{0});
    try {
      as.slope = fit_rate(mean_series, fit_lo, fit_hi);
    } catch (const DomainError&) {
      as.slope = std::numeric_limits<double>::quiet_NaN();
    }
    res.algos.push_back(std::move(as));
  }
  return res;
}

LowerBoundResult run_lowerbound(const std::string& domain_cfg, double M,
                                double alpha, double C_alpha, int64_t T, int reps,
                                uint64_t seed, int threads) {
  if (T < 1) throw ConfigError("T must be >= 1");
  if (reps < 1) throw ConfigError("reps must be >= 1");
  Domain S = Domain::parse(domain_cfg);
  const Regularity reg = S.regularity();
  std::vector<double> regret(static_cast<size_t>(reps), 0.0);
  double w_at_diam = 0;
  {
    auto probe = make_rademacher_profile(S, M, alpha, C_alpha, 2.0, Rng::keyed(seed, 0));
    w_at_diam = probe->modulus()(S.diameter());
  }
  auto run_rep = [&](int rep) {
    auto stream = make_rademacher_profile(S, M, alpha, C_alpha, 2.0,
                                          Rng::keyed(seed, static_cast<uint64_t>(rep)));
    const HoelderModulus chi = stream->modulus();
    DensityState st(Potential::exponential(), S,
                    Schedule::entropy_tuned(reg, stream->bound_M(), chi.alpha),
                    stream->bound_M());
    RegretLedger lg(S);
    const Grid& grid = S.grid();
    std::vector<double> u_nodes(grid.size());
    for (int64_t t = 1; t <= T; ++t) {
      const RewardFn u = stream->next();
      for (size_t j = 0; j < grid.size(); ++j) u_nodes[j] = u(grid.nodes[j]);
      const double exp_reward = st.expected_reward_nodes(u_nodes);
      lg.record(u_nodes, exp_reward, exp_reward, st.eta());
      st.step(u, u_nodes);
    }
    regret[static_cast<size_t>(rep)] = lg.worst_case_expected();
  };
  parallel_for(reps, resolve_threads(threads), run_rep);

  LowerBoundResult r;
  r.T = T;
  r.reps = reps;
  r.w_at_diam = w_at_diam;
  r.mean_regret = std::accumulate(regret.begin(), regret.end(), 0.0) /
                  static_cast<double>(reps);
  double ss = 0;
  for (const double v : regret) ss += (v - r.mean_regret) * (v - r.mean_regret);
  r.std_err = reps > 1 ? std::sqrt(ss / (reps - 1)) / std::sqrt(reps) : 0.0;
  r.lower_curve = bound_lower_rademacher(w_at_diam, T);
  r.dominated = r.mean_regret >= r.lower_curve - 3 * r.std_err;
  return r;
}

}  // namespace contreg
