// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contreg/domains.hpp"
#include "contreg/dual_averaging.hpp"
#include "contreg/potentials.hpp"
#include "contreg/regret.hpp"
#include "contreg/rewards.hpp"
#include "contreg/schedule.hpp"

namespace contreg {

// Two-player zero-sum game with continuous action spaces. payoff(s1, s2) is
// player 1's gain (player 2 pays it). partial1/partial2 materialize the
// per-round reward functions each player feeds to its no-regret learner:
//   player 1 sees u(., s2_t), player 2 sees -u(s1_t, .).
class ZeroSumGame {
 public:
  ZeroSumGame(std::string name, Domain S1, Domain S2,
              std::function<double(const Point&, const Point&)> payoff,
              double M1, double M2, HoelderModulus chi1, HoelderModulus chi2);

  const std::string& name() const { return name_; }
  const Domain& domain1() const { return S1_; }
  const Domain& domain2() const { return S2_; }
  double payoff(const Point& s1, const Point& s2) const { return payoff_(s1, s2); }
  RewardFn partial1(const Point& s2) const;
  RewardFn partial2(const Point& s1) const;
  double bound_M(int player) const { return player == 1 ? M1_ : M2_; }
  HoelderModulus modulus(int player) const { return player == 1 ? chi1_ : chi2_; }

  // Known value / equilibrium marginals (1D CDFs), when available.
  std::optional<double> value;
  std::function<double(double)> equilibrium_cdf1;  // null if unknown
  std::function<double(double)> equilibrium_cdf2;

  // Affine structure: partial payoffs are affine in the opponent's action
  // (enables the closed-form learner engine).
  void set_affine_partials(
      std::function<AffineForm(const Point&)> for_player1,
      std::function<AffineForm(const Point&)> for_player2);

 private:
  std::string name_;
  Domain S1_, S2_;
  std::function<double(const Point&, const Point&)> payoff_;
  double M1_, M2_;
  HoelderModulus chi1_, chi2_;
  std::function<AffineForm(const Point&)> affine1_, affine2_;
};

// Built-in games:
//  g1: S = [0,1]^2, u = (1+s1)(1+s2)(1-s1 s2)/(1+s1 s2)^2; value 4/pi with a
//      continuous equilibrium density 2/(pi sqrt(s)(1+s)), CDF (4/pi) atan(sqrt s).
//  g2: S = [0,1]^2, u = s1 s2 - a1 s1 - a2 s2, a1 = (e-2)/(e-1), a2 = 1/(e-1);
//      equilibrium densities proportional to e^s (player 1) and e^{-s}
//      (player 2); partial payoffs are affine.
//  g3: S = LShape with geodesic metric, u = d(s1,s2) - d(s1, origin)/10
//      (hide-and-seek with a soft anchor); no closed-form equilibrium.
ZeroSumGame builtin_game(std::string_view name);

// Per-player strategy configuration for repeated play.
struct PlayerStrategy {
  enum class Kind { DualAveraging, FixedDensity, Greedy } kind = Kind::DualAveraging;
  // DualAveraging:
  Potential pot = Potential::exponential();
  std::optional<Schedule> sched;       // default: tuned for the game domain
  // FixedDensity: unnormalized density on the player's domain.
  std::function<double(const Point&)> fixed_density;

  static PlayerStrategy da(Potential p, std::optional<Schedule> s = {});
  static PlayerStrategy fixed(std::function<double(const Point&)> dens);
  static PlayerStrategy greedy();
};

struct GameRecordOptions {
  std::vector<int64_t> checkpoints;    // where to snapshot regret/distances
  int histogram_bins = 200;            // per axis
  bool keep_actions = false;           // retain full action histories
  bool alpha_trace = false;            // record eta_t-scaled cumulative tilts
};

struct Histogram {
  int dim = 1;
  int bins = 0;
  double lo[2] = {0, 0}, hi[2] = {1, 1};
  std::vector<double> mass;            // bin densities (integrate to 1); dim2: row-major
};

struct GameCheckpoint {
  int64_t t = 0;
  double avg_payoff = 0;               // (1/t) sum u(s1,s2)
  double regret1 = 0, regret2 = 0;     // realized worst-case regret / t
  double nash_gap = 0;                 // (regret1 + regret2)
  double ks1 = -1, ks2 = -1;           // vs known equilibrium CDFs (1D only)
  Histogram hist1, hist2;
  double alpha1 = 0, alpha2 = 0;       // time average of eta_tau * cumulative tilt
};

struct GameResult {
  std::vector<GameCheckpoint> checkpoints;
  double final_avg_payoff = 0;
  std::vector<Point> actions1, actions2;  // only if keep_actions
  std::vector<std::pair<int64_t, double>> alpha1_series, alpha2_series;
};

// Run T rounds of simultaneous play. Each player draws an action from its
// current strategy state, then both observe their partial payoff. Player RNG
// streams are keyed (seed, player) and advance independently of each other
// and of any recording options.
GameResult run_repeated_game(const ZeroSumGame& game, const PlayerStrategy& p1,
                             const PlayerStrategy& p2, int64_t T, uint64_t seed,
                             const GameRecordOptions& opt);

// Normalized histogram of 1D or 2D actions seen up to a round.
Histogram empirical_distribution(const std::vector<Point>& actions,
                                 const Domain& S, int bins);

// Kolmogorov distance between the empirical CDF of 1D samples and a
// reference CDF.
double cdf_distance(std::vector<double> samples,
                    const std::function<double(double)>& ref_cdf);

// L1 distance between two histograms on the same binning.
double hist_l1(const Histogram& a, const Histogram& b);

}  // namespace contreg
