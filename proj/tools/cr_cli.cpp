// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Experiment driver: seeded benchmark / game / lower-bound / self-check runs
// with structured CSV + JSON outputs for offline plotting.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "contreg/baselines.hpp"
#include "contreg/bench.hpp"
#include "contreg/domains.hpp"
#include "contreg/dual_averaging.hpp"
#include "contreg/games.hpp"
#include "contreg/io.hpp"
#include "contreg/potentials.hpp"
#include "contreg/regret.hpp"
#include "contreg/rewards.hpp"
#include "contreg/rng.hpp"
#include "contreg/schedule.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace contreg;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out = "cr-out";
  bool print_defaults = false;
  std::optional<uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (overrides defaults)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "base RNG seed (overrides config)");
  cmd->add_option("--reps", o.reps, "repetitions (overrides config)");
  cmd->add_option("--threads", o.threads,
                  "worker threads; 0 = CR_THREADS env or hardware (overrides config)");
  cmd->add_flag("--print-defaults", o.print_defaults,
                "print the default config JSON and exit");
}

json effective_config(const json& defaults, const CommonOpts& o) {
  json cfg = defaults;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot read config file '" + o.config_path + "'");
    json file = json::parse(in, nullptr, true, true);
    if (!file.is_object()) throw ConfigError("config root must be a JSON object");
    for (const auto& [k, v] : file.items()) {
      if (!cfg.contains(k)) throw ConfigError("unknown config field '" + k + "'");
      cfg[k] = v;
    }
  }
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.reps) cfg["reps"] = *o.reps;
  if (o.threads) cfg["threads"] = *o.threads;
  return cfg;
}

template <class T>
T field(const json& cfg, const std::string& key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const std::exception& e) {
    throw ConfigError("config field '" + key + "': " + e.what());
  }
}

fs::path prepare_out(const std::string& out, const std::string& command,
                     const json& cfg) {
  fs::path dir(out);
  fs::create_directories(dir);
  json manifest = {{"tool", "cr"},
                   {"version", "0.1.0"},
                   {"command", command},
                   {"config", cfg}};
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return dir;
}

std::string sanitize(std::string name) {
  for (char& c : name)
    if (c == ':' || c == '/' || c == ' ') c = '_';
  return name;
}

// ---------------------------------------------------------------- bench ----

json bench_defaults() {
  BenchConfig d;
  return json{{"domain", d.domain},
              {"stream", d.stream},
              {"algorithms", d.algorithms},
              {"T", d.T},
              {"reps", d.reps},
              {"seed", d.seed},
              {"threads", d.threads},
              {"grid_m", d.grid_m},
              {"vartheta", d.vartheta},
              {"checkpoints", d.checkpoints},
              {"fit_lo", d.fit_lo},
              {"fit_hi", d.fit_hi}};
}

int cmd_bench(const json& cfg, const fs::path& out) {
  BenchConfig b;
  b.domain = field<std::string>(cfg, "domain");
  b.stream = field<std::string>(cfg, "stream");
  b.algorithms = field<std::vector<std::string>>(cfg, "algorithms");
  b.T = field<int64_t>(cfg, "T");
  b.reps = field<int>(cfg, "reps");
  b.seed = field<uint64_t>(cfg, "seed");
  b.threads = field<int>(cfg, "threads");
  b.grid_m = field<int>(cfg, "grid_m");
  b.vartheta = field<double>(cfg, "vartheta");
  b.checkpoints = field<std::vector<int64_t>>(cfg, "checkpoints");
  b.fit_lo = field<int64_t>(cfg, "fit_lo");
  b.fit_hi = field<int64_t>(cfg, "fit_hi");

  const BenchResult res = run_bench(b);

  Domain S = Domain::parse(b.domain);
  if (b.grid_m > 0) S = S.with_grid(b.grid_m);
  const auto probe = make_stream(b.stream, S, 1, Rng::keyed(b.seed, 0));
  const double rigor = probe->modulus()(S.grid().cell_diameter);

  json algos = json::array();
  for (const auto& a : res.algos) {
    CsvWriter csv(out / ("series_" + sanitize(a.name) + ".csv"),
                  "bench " + a.name + " avg-regret series",
                  {"t", "mean_avg_regret", "q10", "q90", "bound"});
    for (const auto& p : a.points)
      csv.row({static_cast<double>(p.t), p.mean, p.q10, p.q90, p.bound});
    algos.push_back(json{{"name", a.name},
                         {"slope", a.slope},
                         {"bound_violations", a.bound_violations},
                         {"final_mean_avg_regret", a.points.back().mean}});
  }
  json summary = {{"command", "bench"},
                  {"config", cfg},
                  {"sup_rigor_slack_per_round", rigor},
                  {"algorithms", algos}};
  write_text_file(out / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ----------------------------------------------------------------- game ----

json game_defaults() {
  return json{{"game", "g2"},
              {"T", int64_t{100000}},
              {"reps", 10},
              {"seed", uint64_t{1}},
              {"threads", 0},
              {"potential1", "exp"},
              {"potential2", "exp"},
              {"schedule1", "tuned"},
              {"schedule2", "tuned"},
              {"histogram_bins", 200},
              {"checkpoints", std::vector<int64_t>{}},
              {"hist_at", std::vector<int64_t>{}},
              {"alpha_trace", true}};
}

void write_hist_csv(const fs::path& path, const Histogram& h, const char* tag) {
  if (h.dim == 1) {
    CsvWriter csv(path, tag, {"bin_left", "bin_right", "density"});
    const double w = (h.hi[0] - h.lo[0]) / h.bins;
    for (int i = 0; i < h.bins; ++i)
      csv.row({h.lo[0] + i * w, h.lo[0] + (i + 1) * w, h.mass[static_cast<size_t>(i)]});
    return;
  }
  CsvWriter csv(path, tag,
                {"bin_left_1", "bin_right_1", "bin_left_2", "bin_right_2", "density"});
  const double w0 = (h.hi[0] - h.lo[0]) / h.bins;
  const double w1 = (h.hi[1] - h.lo[1]) / h.bins;
  for (int j = 0; j < h.bins; ++j)
    for (int i = 0; i < h.bins; ++i)
      csv.row({h.lo[0] + i * w0, h.lo[0] + (i + 1) * w0, h.lo[1] + j * w1,
               h.lo[1] + (j + 1) * w1,
               h.mass[static_cast<size_t>(j) * h.bins + static_cast<size_t>(i)]});
}

int cmd_game(const json& cfg, const fs::path& out) {
  const std::string game_name = field<std::string>(cfg, "game");
  const auto T = field<int64_t>(cfg, "T");
  const int reps = field<int>(cfg, "reps");
  const auto seed = field<uint64_t>(cfg, "seed");
  const int threads = field<int>(cfg, "threads");
  if (T < 1) throw ConfigError("T must be >= 1");
  if (reps < 1) throw ConfigError("reps must be >= 1");

  const ZeroSumGame game = builtin_game(game_name);
  // "tuned" picks the potential's regret-tuned schedule for the game's domain.
  auto sched_of = [&cfg](const char* key) -> std::optional<Schedule> {
    const auto s = field<std::string>(cfg, key);
    if (s == "tuned" || s.empty()) return std::nullopt;
    return Schedule::parse(s);
  };
  const PlayerStrategy p1 = PlayerStrategy::da(
      Potential::parse(field<std::string>(cfg, "potential1")), sched_of("schedule1"));
  const PlayerStrategy p2 = PlayerStrategy::da(
      Potential::parse(field<std::string>(cfg, "potential2")), sched_of("schedule2"));

  GameRecordOptions opt;
  opt.histogram_bins = field<int>(cfg, "histogram_bins");
  opt.alpha_trace = field<bool>(cfg, "alpha_trace");
  opt.checkpoints = field<std::vector<int64_t>>(cfg, "checkpoints");
  if (opt.checkpoints.empty()) opt.checkpoints = default_checkpoints(T);
  std::vector<int64_t> hist_at = field<std::vector<int64_t>>(cfg, "hist_at");
  if (hist_at.empty()) {
    for (int64_t t = 10; t <= T; t *= 10) hist_at.push_back(t);
    hist_at.push_back(T / 2);
    hist_at.push_back(T);
  }
  std::sort(hist_at.begin(), hist_at.end());
  hist_at.erase(std::unique(hist_at.begin(), hist_at.end()), hist_at.end());
  while (!hist_at.empty() && hist_at.back() > T) hist_at.pop_back();
  opt.checkpoints.insert(opt.checkpoints.end(), hist_at.begin(), hist_at.end());

  std::vector<GameResult> runs(static_cast<size_t>(reps));
  parallel_for(reps, resolve_threads(threads), [&](int rep) {
    const uint64_t session_seed =
        seed + 0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(rep) + 1);
    runs[static_cast<size_t>(rep)] =
        run_repeated_game(game, p1, p2, T, session_seed, opt);
  });

  const auto& cps = runs[0].checkpoints;
  const size_t nc = cps.size();
  const double nr = static_cast<double>(reps);

  CsvWriter series(out / "series_game.csv", "game " + game_name + " checkpoints",
                   {"t", "avg_payoff", "regret1", "regret2", "nash_gap", "ks1",
                    "ks2", "alpha1", "alpha2"});
  json cp_rows = json::array();
  for (size_t c = 0; c < nc; ++c) {
    GameCheckpoint agg;
    agg.t = cps[c].t;
    agg.ks1 = agg.ks2 = 0;  // struct default -1 marks "unknown", not a value
    for (const auto& r : runs) {
      const GameCheckpoint& x = r.checkpoints[c];
      agg.avg_payoff += x.avg_payoff / nr;
      agg.regret1 += x.regret1 / nr;
      agg.regret2 += x.regret2 / nr;
      agg.nash_gap += x.nash_gap / nr;
      agg.ks1 += x.ks1 / nr;
      agg.ks2 += x.ks2 / nr;
      agg.alpha1 += x.alpha1 / nr;
      agg.alpha2 += x.alpha2 / nr;
    }
    if (cps[c].ks1 < 0) agg.ks1 = -1;
    if (cps[c].ks2 < 0) agg.ks2 = -1;
    series.row({static_cast<double>(agg.t), agg.avg_payoff, agg.regret1,
                agg.regret2, agg.nash_gap, agg.ks1, agg.ks2, agg.alpha1,
                agg.alpha2});
    cp_rows.push_back(json{{"t", agg.t},
                           {"avg_payoff", agg.avg_payoff},
                           {"regret1", agg.regret1},
                           {"regret2", agg.regret2},
                           {"nash_gap", agg.nash_gap},
                           {"ks1", agg.ks1},
                           {"ks2", agg.ks2},
                           {"alpha1", agg.alpha1},
                           {"alpha2", agg.alpha2}});

    if (std::find(hist_at.begin(), hist_at.end(), cps[c].t) != hist_at.end()) {
      for (int player = 1; player <= 2; ++player) {
        Histogram h = player == 1 ? runs[0].checkpoints[c].hist1
                                  : runs[0].checkpoints[c].hist2;
        for (size_t r = 1; r < runs.size(); ++r) {
          const Histogram& o = player == 1 ? runs[r].checkpoints[c].hist1
                                           : runs[r].checkpoints[c].hist2;
          for (size_t i = 0; i < h.mass.size(); ++i) h.mass[i] += o.mass[i];
        }
        for (double& m : h.mass) m /= nr;
        const std::string name =
            "hist_" + std::to_string(player) + "_" + std::to_string(cps[c].t) + ".csv";
        write_hist_csv(out / name, h,
                       "game empirical action distribution (mean over reps)");
      }
    }
  }

  if (opt.alpha_trace && !runs[0].alpha1_series.empty()) {
    CsvWriter alpha(out / "series_alpha.csv", "game " + game_name + " tilt traces",
                    {"t", "alpha1", "alpha2"});
    const size_t n = runs[0].alpha1_series.size();
    for (size_t i = 0; i < n; ++i) {
      double a1 = 0, a2 = 0;
      for (const auto& r : runs) {
        a1 += r.alpha1_series[i].second / nr;
        a2 += r.alpha2_series[i].second / nr;
      }
      alpha.row({static_cast<double>(runs[0].alpha1_series[i].first), a1, a2});
    }
  }

  double final_pay = 0;
  for (const auto& r : runs) final_pay += r.final_avg_payoff / nr;
  json summary = {{"command", "game"},
                  {"config", cfg},
                  {"value", game.value ? json(*game.value) : json()},
                  {"final_avg_payoff", final_pay},
                  {"value_abs_error",
                   game.value ? json(std::abs(final_pay - *game.value)) : json()},
                  {"checkpoints", cp_rows}};
  write_text_file(out / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ----------------------------------------------------------- lowerbound ----

json lowerbound_defaults() {
  return json{{"domain", "interval:lo=0,hi=1,m=1024"},
              {"M", 1.0},
              {"alpha", 1.0},
              {"C_alpha", 1.0},
              {"T", int64_t{1024}},
              {"reps", 1000},
              {"seed", uint64_t{1}},
              {"threads", 0}};
}

int cmd_lowerbound(const json& cfg, const fs::path& out) {
  const LowerBoundResult r = run_lowerbound(
      field<std::string>(cfg, "domain"), field<double>(cfg, "M"),
      field<double>(cfg, "alpha"), field<double>(cfg, "C_alpha"),
      field<int64_t>(cfg, "T"), field<int>(cfg, "reps"),
      field<uint64_t>(cfg, "seed"), field<int>(cfg, "threads"));

  CsvWriter csv(out / "series_lowerbound.csv", "adversarial lower-bound curve",
                {"t", "lower_bound"});
  for (const int64_t t : default_checkpoints(r.T))
    csv.row({static_cast<double>(t), bound_lower_rademacher(r.w_at_diam, t)});

  json summary = {{"command", "lowerbound"}, {"config", cfg},
                  {"T", r.T},               {"reps", r.reps},
                  {"mean_regret", r.mean_regret}, {"std_err", r.std_err},
                  {"lower_curve", r.lower_curve}, {"w_at_diam", r.w_at_diam},
                  {"dominated", r.dominated}};
  write_text_file(out / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return r.dominated ? 0 : 2;
}

// ------------------------------------------------------------ selfcheck ----

json selfcheck_defaults() {
  return json{{"seed", uint64_t{1}},
              {"reps", 1},
              {"threads", 0},
              {"duality_trials", 100},
              {"warm_steps", 2000},
              {"normalization_trials", 50},
              {"metric_triples", 200},
              {"stream_rounds", 50}};
}

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

CheckResult check_duality(uint64_t seed, int trials) {
  const Domain S = Domain::interval(0.0, 1.0, 4096);
  const Grid& g = S.grid();
  double worst = 0;
  for (int k = 0; k < trials; ++k) {
    Rng rng = Rng::keyed(seed, 100, static_cast<uint64_t>(k));
    std::vector<double> U(g.size());
    for (double& v : U) v = rng.uniform(-3.0, 3.0);
    const double eta = rng.uniform(0.1, 5.0);
    const EntropyClosedForm closed = entropy_closed_form(S, U, eta);
    const SolverReport rep =
        solve_nu_star(Potential::exponential(), S, U, eta, 1e-14);
    const Potential pot = Potential::exponential();
    for (size_t i = 0; i < g.size(); ++i) {
      const double xi = pot.phi(eta * (U[i] + rep.nu));
      worst = std::max(worst, std::abs(xi - closed.density[i]));
    }
  }
  return {"duality_agreement", worst <= 1e-8,
          "sup density gap " + fmt17(worst) + " over " + std::to_string(trials) +
              " random profiles (tol 1e-8)"};
}

CheckResult check_warm_start(uint64_t seed, int steps) {
  const Domain S = Domain::interval(0.0, 1.0, 512);
  const Grid& g = S.grid();
  const double M = 2.0;
  DensityState st(Potential::exponential(), S,
                  Schedule::entropy_tuned(S.regularity(), M, 1.0), M);
  Rng rng = Rng::keyed(seed, 101);
  const RewardFn probe = RewardFn::generic([](const Point&) { return 0.0; });
  std::vector<double> u(g.size());
  int64_t inside = 0;
  for (int t = 0; t < steps; ++t) {
    const double amp = rng.uniform(0.0, M);
    const double freq = rng.uniform(0.5, 20.0);
    const double phase = rng.uniform(0.0, 6.28);
    for (size_t i = 0; i < g.size(); ++i)
      u[i] = amp * 0.5 * (1.0 + std::sin(freq * g.nodes[i][0] + phase));
    const StepInfo& info = st.step(probe, u);
    if (info.solver.nu >= info.warm_interval.first - 1e-12 &&
        info.solver.nu <= info.warm_interval.second + 1e-12)
      ++inside;
  }
  return {"warm_start_containment", inside == steps,
          std::to_string(inside) + "/" + std::to_string(steps) +
              " multipliers inside the published interval"};
}

CheckResult check_normalization(uint64_t seed, int trials) {
  double worst = 0;
  for (int k = 0; k < trials; ++k) {
    Rng rng = Rng::keyed(seed, 102, static_cast<uint64_t>(k));
    const bool use_rho = k % 2 == 1;
    const Potential pot =
        use_rho ? Potential::rho_norm(1.5) : Potential::exponential();
    const Domain S = Domain::interval(0.0, 1.0, 512);
    DensityState st(pot, S, Schedule::fixed(rng.uniform(0.2, 2.0)), 2.0);
    for (int r = 0; r < 5; ++r) {
      const AffineForm a{Point::of(rng.uniform(-2.0, 2.0)), rng.uniform(-1.0, 1.0)};
      st.step(RewardFn::affine(a));
    }
    const double mass = S.integrate_nodes(st.density_nodes());
    worst = std::max(worst, std::abs(mass - 1.0));
  }
  return {"density_normalization", worst <= 1e-4,
          "max |mass - 1| = " + fmt17(worst) + " (midpoint quadrature, tol 1e-4)"};
}

CheckResult check_metric(uint64_t seed, int triples) {
  const Domain S = Domain::lshape(100);
  Rng rng = Rng::keyed(seed, 103);
  double worst_sym = 0, worst_tri = -1e300, worst_euclid = 1e300;
  for (int k = 0; k < triples; ++k) {
    const Point a = S.sample_uniform(rng);
    const Point b = S.sample_uniform(rng);
    const Point c = S.sample_uniform(rng);
    const double ab = S.distance(a, b), ba = S.distance(b, a);
    const double ac = S.distance(a, c), cb = S.distance(c, b);
    worst_sym = std::max(worst_sym, std::abs(ab - ba));
    worst_tri = std::max(worst_tri, ab - (ac + cb));
    worst_euclid = std::min(worst_euclid, ab - norm2(a - b));
  }
  const bool pass = worst_sym <= 1e-12 && worst_tri <= 1e-9 && worst_euclid >= -1e-12;
  return {"metric_axioms", pass,
          "symmetry gap " + fmt17(worst_sym) + ", triangle slack " +
              fmt17(worst_tri) + ", geodesic-vs-euclid margin " +
              fmt17(worst_euclid)};
}

CheckResult check_streams(uint64_t seed, int rounds) {
  const Domain box = Domain::hypercube(2, 0.5, 64);
  std::string detail;
  try {
    Rng rng = Rng::keyed(seed, 104);
    auto alt = make_stream("altaffine:L=5", box, rounds, Rng::keyed(seed, 105));
    for (int t = 0; t < rounds; ++t) {
      const RewardFn u = alt->next();
      audit_bound(u, box, alt->bound_M());
      audit_hoelder(u, box, alt->modulus(), 20, rng);
    }
    auto quad = make_stream("quad", box, rounds, Rng::keyed(seed, 106));
    for (int t = 0; t < rounds; ++t) {
      const RewardFn u = quad->next();
      audit_bound(u, box, quad->bound_M());
      audit_hoelder(u, box, quad->modulus(), 20, rng);
    }
    detail = "bound + modulus audits clean over " + std::to_string(rounds) +
             " rounds of altaffine and quad";
    return {"stream_contracts", true, detail};
  } catch (const Error& e) {
    return {"stream_contracts", false, e.what()};
  }
}

int cmd_selfcheck(const json& cfg, const fs::path& out) {
  const auto seed = field<uint64_t>(cfg, "seed");
  std::vector<CheckResult> checks;
  checks.push_back(check_duality(seed, field<int>(cfg, "duality_trials")));
  checks.push_back(check_warm_start(seed, field<int>(cfg, "warm_steps")));
  checks.push_back(check_normalization(seed, field<int>(cfg, "normalization_trials")));
  checks.push_back(check_metric(seed, field<int>(cfg, "metric_triples")));
  checks.push_back(check_streams(seed, field<int>(cfg, "stream_rounds")));

  bool all = true;
  json rows = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    rows.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  json summary = {{"command", "selfcheck"},
                  {"config", cfg},
                  {"checks", rows},
                  {"all_pass", all}};
  write_text_file(out / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contreg: dual averaging over densities - experiment driver"};
  app.require_subcommand(1);

  CommonOpts ob, og, ol, os;
  CLI::App* bench = app.add_subcommand("bench", "multi-algorithm regret benchmark");
  CLI::App* game = app.add_subcommand("game", "repeated zero-sum game with DA players");
  CLI::App* lower = app.add_subcommand("lowerbound", "adversarial lower-bound study");
  CLI::App* self = app.add_subcommand("selfcheck", "library invariant suite");
  add_common(bench, ob);
  add_common(game, og);
  add_common(lower, ol);
  add_common(self, os);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      if (ob.print_defaults) {
        std::cout << bench_defaults().dump(2) << "\n";
        return 0;
      }
      const json cfg = effective_config(bench_defaults(), ob);
      return cmd_bench(cfg, prepare_out(ob.out, "bench", cfg));
    }
    if (game->parsed()) {
      if (og.print_defaults) {
        std::cout << game_defaults().dump(2) << "\n";
        return 0;
      }
      const json cfg = effective_config(game_defaults(), og);
      return cmd_game(cfg, prepare_out(og.out, "game", cfg));
    }
    if (lower->parsed()) {
      if (ol.print_defaults) {
        std::cout << lowerbound_defaults().dump(2) << "\n";
        return 0;
      }
      const json cfg = effective_config(lowerbound_defaults(), ol);
      return cmd_lowerbound(cfg, prepare_out(ol.out, "lowerbound", cfg));
    }
    if (self->parsed()) {
      if (os.print_defaults) {
        std::cout << selfcheck_defaults().dump(2) << "\n";
        return 0;
      }
      const json cfg = effective_config(selfcheck_defaults(), os);
      return cmd_selfcheck(cfg, prepare_out(os.out, "selfcheck", cfg));
    }
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
