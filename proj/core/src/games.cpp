// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "contreg/baselines.hpp"
#include "contreg/rng.hpp"

namespace contreg {

ZeroSumGame::ZeroSumGame(std::string name, Domain S1, Domain S2,
                         std::function<double(const Point&, const Point&)> payoff,
                         double M1, double M2, HoelderModulus chi1,
                         HoelderModulus chi2)
    : name_(std::move(name)),
      S1_(std::move(S1)),
      S2_(std::move(S2)),
      payoff_(std::move(payoff)),
      M1_(M1),
      M2_(M2),
      chi1_(chi1),
      chi2_(chi2) {}

void ZeroSumGame::set_affine_partials(
    std::function<AffineForm(const Point&)> for_player1,
    std::function<AffineForm(const Point&)> for_player2) {
  affine1_ = std::move(for_player1);
  affine2_ = std::move(for_player2);
}

RewardFn ZeroSumGame::partial1(const Point& s2) const {
  S2_.require_member(s2);
  if (affine1_) return RewardFn::affine(affine1_(s2));
  return RewardFn::generic([pay = payoff_, s2](const Point& s) { return pay(s, s2); });
}

RewardFn ZeroSumGame::partial2(const Point& s1) const {
  S1_.require_member(s1);
  if (affine2_) return RewardFn::affine(affine2_(s1));
  return RewardFn::generic(
      [pay = payoff_, s1](const Point& s) { return -pay(s1, s); });
}

ZeroSumGame builtin_game(std::string_view name) {
  constexpr double kPi = 3.14159265358979323846;
  const double e = std::exp(1.0);
  if (name == "g1") {
    Domain S = Domain::interval(0.0, 1.0, 512);
    auto pay = [](const Point& s1, const Point& s2) {
      const double x = s1[0], y = s2[0];
      const double d = 1.0 + x * y;
      return (1.0 + x) * (1.0 + y) * (1.0 - x * y) / (d * d);
    };
    ZeroSumGame g("g1", S, S, pay, 2.0, 2.0, {1.0, 8.0}, {1.0, 8.0});
    g.value = 4.0 / kPi;
    auto cdf = [kPi](double s) { return 4.0 / kPi * std::atan(std::sqrt(s)); };
    g.equilibrium_cdf1 = cdf;
    g.equilibrium_cdf2 = cdf;
    return g;
  }
  if (name == "g2") {
    Domain S = Domain::interval(0.0, 1.0, 512);
    const double a1 = (e - 2.0) / (e - 1.0);
    const double a2 = 1.0 / (e - 1.0);
    auto pay = [a1, a2](const Point& s1, const Point& s2) {
      return s1[0] * s2[0] - a1 * s1[0] - a2 * s2[0];
    };
    // Bilinear payoff: sup |u| is attained at a corner (value a2), and each
    // partial is Lipschitz with constant max(a1, 1-a1) = max(a2, 1-a2) = a2.
    ZeroSumGame g("g2", S, S, pay, a2, a2, {1.0, a2}, {1.0, a2});
    g.value = -a1 * a2;
    g.equilibrium_cdf1 = [e](double s) { return (std::exp(s) - 1.0) / (e - 1.0); };
    g.equilibrium_cdf2 = [e](double s) {
      return (e - std::exp(1.0 - s)) / (e - 1.0);
    };
    g.set_affine_partials(
        [a1, a2](const Point& s2) {
          return AffineForm{Point::of(s2[0] - a1), -a2 * s2[0]};
        },
        [a1, a2](const Point& s1) {
          return AffineForm{Point::of(a2 - s1[0]), a1 * s1[0]};
        });
    return g;
  }
  if (name == "g3") {
    Domain S = Domain::lshape(250);
    const Point origin = Point::of(0.0, 0.0);
    auto pay = [S, origin](const Point& s1, const Point& s2) {
      return S.distance(s1, s2) - S.distance(s1, origin) / 10.0;
    };
    // The seeker's reward moves by at most 1.1 d(s,s') (two geodesic terms),
    // the hider's by at most d(s,s').
    return ZeroSumGame("g3", S, S, pay, 3.0, 3.0, {1.0, 1.1}, {1.0, 1.0});
  }
  throw ConfigError("unknown game '" + std::string(name) + "'");
}

PlayerStrategy PlayerStrategy::da(Potential p, std::optional<Schedule> s) {
  PlayerStrategy st;
  st.kind = Kind::DualAveraging;
  st.pot = p;
  st.sched = s;
  return st;
}

PlayerStrategy PlayerStrategy::fixed(std::function<double(const Point&)> dens) {
  PlayerStrategy st;
  st.kind = Kind::FixedDensity;
  st.fixed_density = std::move(dens);
  return st;
}

PlayerStrategy PlayerStrategy::greedy() {
  PlayerStrategy st;
  st.kind = Kind::Greedy;
  return st;
}

namespace {

Schedule default_game_schedule(const PlayerStrategy& str, const Domain& S, double M,
                               double alpha) {
  if (str.sched) return *str.sched;
  const Regularity reg = S.regularity();
  if (str.pot.kind() == PotentialKind::Exponential)
    return Schedule::entropy_tuned(reg, M, alpha);
  return Schedule::growth_tuned(reg, str.pot, M, alpha);
}

// One player's live state in a repeated game.
struct PlayerSession {
  const Domain& S;
  PlayerStrategy::Kind kind;
  std::optional<DensityState> da;
  std::unique_ptr<Baseline> greedy;
  // Fixed-density play: rejection sampler data.
  std::function<double(const Point&)> fixed_dens;
  double fixed_envelope = 0;
  std::vector<double> fixed_node_prob;  // normalized over grid nodes
  RegretLedger ledger;
  Rng rng;
  std::vector<Point> actions;
  std::vector<double> scalar_actions;  // dim-1 domains, for CDF distances
  double alpha_sum = 0;                // running sum of eta_t * cumulative tilt
  bool affine_partials = false;

  PlayerSession(const ZeroSumGame& game, int player, const PlayerStrategy& str,
                uint64_t seed)
      : S(player == 1 ? game.domain1() : game.domain2()),
        kind(str.kind),
        ledger(player == 1 ? game.domain1() : game.domain2()),
        rng(Rng::keyed(seed, static_cast<uint64_t>(player))) {
    const double M = game.bound_M(player);
    const HoelderModulus chi = game.modulus(player);
    // Probe the partial-payoff structure with an arbitrary opponent action.
    const Domain& opp = player == 1 ? game.domain2() : game.domain1();
    const Point probe = opp.grid().nodes.front();
    const RewardFn u0 = player == 1 ? game.partial1(probe) : game.partial2(probe);
    affine_partials = u0.affine_form().has_value() && S.is_box();
    switch (kind) {
      case PlayerStrategy::Kind::DualAveraging:
        da.emplace(str.pot, S, default_game_schedule(str, S, M, chi.alpha), M);
        break;
      case PlayerStrategy::Kind::Greedy:
        greedy = make_greedy(S);
        break;
      case PlayerStrategy::Kind::FixedDensity: {
        if (!str.fixed_density) throw ConfigError("fixed strategy needs a density");
        fixed_dens = str.fixed_density;
        const Grid& g = S.grid();
        fixed_node_prob.resize(g.size());
        double node_max = 0, total = 0;
        for (size_t i = 0; i < g.size(); ++i) {
          const double v = fixed_dens(g.nodes[i]);
          if (!(v >= 0)) throw DomainError("fixed density must be nonnegative");
          node_max = std::max(node_max, v);
          fixed_node_prob[i] = v * g.weights[i];
          total += fixed_node_prob[i];
        }
        if (!(total > 0)) throw DomainError("fixed density integrates to zero");
        for (double& p : fixed_node_prob) p /= total;
        fixed_envelope = 1.2 * node_max;
        break;
      }
    }
  }

  bool needs_nodes() const {
    if (kind == PlayerStrategy::Kind::Greedy) return true;
    if (!affine_partials) return true;  // grid ledger and grid learner
    return false;
  }

  Point play() {
    switch (kind) {
      case PlayerStrategy::Kind::DualAveraging:
        return da->sample(rng);
      case PlayerStrategy::Kind::Greedy:
        return greedy->current();
      case PlayerStrategy::Kind::FixedDensity: {
        for (int tries = 0; tries < 1000000; ++tries) {
          const Point s = S.sample_uniform(rng);
          const double v = fixed_dens(s);
          if (v > fixed_envelope)
            throw EnvelopeError("fixed density exceeds its rejection envelope");
          if (rng.uniform01() * fixed_envelope <= v) return s;
        }
        throw EnvelopeError("fixed-density rejection sampler stalled");
      }
    }
    throw StateError("unreachable strategy kind");
  }

  // Expected reward of the density used this round (before absorbing u).
  double expected(const RewardFn& u, const std::vector<double>* u_nodes) const {
    switch (kind) {
      case PlayerStrategy::Kind::DualAveraging:
        return u_nodes ? da->expected_reward_nodes(*u_nodes) : da->expected_reward(u);
      case PlayerStrategy::Kind::Greedy:
        return u(greedy->current());
      case PlayerStrategy::Kind::FixedDensity: {
        if (u_nodes) {
          double acc = 0;
          for (size_t i = 0; i < u_nodes->size(); ++i)
            acc += fixed_node_prob[i] * (*u_nodes)[i];
          return acc;
        }
        const AffineForm& a = *u.affine_form();
        double acc = 0;
        const Grid& g = S.grid();
        for (size_t i = 0; i < g.size(); ++i)
          acc += fixed_node_prob[i] * a(g.nodes[i]);
        return acc;
      }
    }
    throw StateError("unreachable strategy kind");
  }

  void absorb(const RewardFn& u, const std::vector<double>* u_nodes,
              double realized) {
    const double eta_before =
        kind == PlayerStrategy::Kind::DualAveraging ? da->eta() : 0.0;
    const double exp_reward = expected(u, u_nodes);
    if (u_nodes)
      ledger.record(*u_nodes, realized, exp_reward, eta_before);
    else
      ledger.record_affine(*u.affine_form(), realized, exp_reward, eta_before);
    switch (kind) {
      case PlayerStrategy::Kind::DualAveraging:
        if (u_nodes)
          da->step(u, *u_nodes);
        else
          da->step(u);
        break;
      case PlayerStrategy::Kind::Greedy:
        greedy->absorb(u, *u_nodes);
        break;
      case PlayerStrategy::Kind::FixedDensity:
        break;
    }
    // Tilt trace: the scalar weight eta_t * G_t the learner places on its
    // cumulative affine reward direction (first coordinate).
    if (kind == PlayerStrategy::Kind::DualAveraging) {
      if (auto aff = da->cumulative_affine()) alpha_sum += da->eta() * aff->g[0];
    }
  }

  double alpha_now() const {
    if (kind != PlayerStrategy::Kind::DualAveraging) return 0;
    if (auto aff = da->cumulative_affine()) return da->eta() * aff->g[0];
    return 0;
  }
};

}  // namespace

Histogram empirical_distribution(const std::vector<Point>& actions, const Domain& S,
                                 int bins) {
  if (actions.empty()) throw DomainError("empirical_distribution needs actions");
  if (bins < 1) throw ConfigError("empirical_distribution needs bins >= 1");
  Histogram h;
  h.dim = S.dim() >= 2 ? 2 : 1;
  h.bins = bins;
  const Point lo = S.box_lo(), hi = S.box_hi();
  for (int k = 0; k < h.dim; ++k) {
    h.lo[k] = lo[k];
    h.hi[k] = hi[k];
  }
  const size_t cells = h.dim == 1 ? static_cast<size_t>(bins)
                                  : static_cast<size_t>(bins) * bins;
  h.mass.assign(cells, 0.0);
  double binw[2] = {1, 1}, area = 1;
  for (int k = 0; k < h.dim; ++k) {
    binw[k] = (h.hi[k] - h.lo[k]) / bins;
    area *= binw[k];
  }
  for (const Point& s : actions) {
    size_t idx = 0;
    for (int k = h.dim - 1; k >= 0; --k) {
      int b = static_cast<int>((s[k] - h.lo[k]) / binw[k]);
      b = std::clamp(b, 0, bins - 1);
      idx = idx * bins + static_cast<size_t>(b);
    }
    h.mass[idx] += 1.0;
  }
  // Store densities: integrating over the binned box gives 1.
  const double scale = 1.0 / (static_cast<double>(actions.size()) * area);
  for (double& m : h.mass) m *= scale;
  return h;
}

double cdf_distance(std::vector<double> samples,
                    const std::function<double(double)>& ref_cdf) {
  if (samples.empty()) throw DomainError("cdf_distance needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double F = ref_cdf(samples[i]);
    ks = std::max(ks, std::abs(F - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - F));
  }
  return ks;
}

double hist_l1(const Histogram& a, const Histogram& b) {
  if (a.dim != b.dim || a.bins != b.bins || a.mass.size() != b.mass.size())
    throw DomainError("hist_l1 needs identical binnings");
  double area = 1;
  for (int k = 0; k < a.dim; ++k) area *= (a.hi[k] - a.lo[k]) / a.bins;
  double acc = 0;
  for (size_t i = 0; i < a.mass.size(); ++i) acc += std::abs(a.mass[i] - b.mass[i]);
  return acc * area;
}

GameResult run_repeated_game(const ZeroSumGame& game, const PlayerStrategy& p1,
                             const PlayerStrategy& p2, int64_t T, uint64_t seed,
                             const GameRecordOptions& opt) {
  if (T < 1) throw ConfigError("run_repeated_game needs T >= 1");
  PlayerSession a(game, 1, p1, seed);
  PlayerSession b(game, 2, p2, seed);

  std::vector<int64_t> marks = opt.checkpoints;
  if (marks.empty()) marks.push_back(T);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  while (!marks.empty() && marks.back() > T) marks.pop_back();
  marks.erase(std::remove_if(marks.begin(), marks.end(),
                             [](int64_t t) { return t < 1; }),
              marks.end());

  GameResult res;
  res.checkpoints.reserve(marks.size());
  const bool nodes1 = a.needs_nodes();
  const bool nodes2 = b.needs_nodes();
  std::vector<double> u1_nodes, u2_nodes;
  double cum_pay = 0;
  size_t next_mark = 0;

  for (int64_t t = 1; t <= T; ++t) {
    const Point s1 = a.play();
    const Point s2 = b.play();
    a.actions.push_back(s1);
    b.actions.push_back(s2);
    if (a.S.dim() == 1) a.scalar_actions.push_back(s1[0]);
    if (b.S.dim() == 1) b.scalar_actions.push_back(s2[0]);

    const double pay = game.payoff(s1, s2);
    cum_pay += pay;
    const RewardFn u1 = game.partial1(s2);
    const RewardFn u2 = game.partial2(s1);
    if (nodes1) {
      const Grid& g = a.S.grid();
      u1_nodes.resize(g.size());
      for (size_t i = 0; i < g.size(); ++i) u1_nodes[i] = u1(g.nodes[i]);
    }
    if (nodes2) {
      const Grid& g = b.S.grid();
      u2_nodes.resize(g.size());
      for (size_t i = 0; i < g.size(); ++i) u2_nodes[i] = u2(g.nodes[i]);
    }
    a.absorb(u1, nodes1 ? &u1_nodes : nullptr, pay);
    b.absorb(u2, nodes2 ? &u2_nodes : nullptr, -pay);

    if (opt.alpha_trace) {
      res.alpha1_series.emplace_back(t, a.alpha_now());
      res.alpha2_series.emplace_back(t, b.alpha_now());
    }

    if (next_mark < marks.size() && t == marks[next_mark]) {
      GameCheckpoint cp;
      cp.t = t;
      const double td = static_cast<double>(t);
      cp.avg_payoff = cum_pay / td;
      cp.regret1 = a.ledger.worst_case_realized() / td;
      cp.regret2 = b.ledger.worst_case_realized() / td;
      cp.nash_gap = cp.regret1 + cp.regret2;
      if (game.equilibrium_cdf1 && a.S.dim() == 1)
        cp.ks1 = cdf_distance(a.scalar_actions, game.equilibrium_cdf1);
      if (game.equilibrium_cdf2 && b.S.dim() == 1)
        cp.ks2 = cdf_distance(b.scalar_actions, game.equilibrium_cdf2);
      cp.hist1 = empirical_distribution(a.actions, a.S, opt.histogram_bins);
      cp.hist2 = empirical_distribution(b.actions, b.S, opt.histogram_bins);
      cp.alpha1 = a.alpha_sum / td;
      cp.alpha2 = b.alpha_sum / td;
      res.checkpoints.push_back(std::move(cp));
      ++next_mark;
    }
  }
  res.final_avg_payoff = cum_pay / static_cast<double>(T);
  if (opt.keep_actions) {
    res.actions1 = std::move(a.actions);
    res.actions2 = std::move(b.actions);
  }
  return res;
}

}  // namespace contreg
