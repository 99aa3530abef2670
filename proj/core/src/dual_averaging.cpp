// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/dual_averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace contreg {

namespace {

// log of E1(lambda,a,b) = (e^{lambda b} - e^{lambda a}) / (lambda (b-a)),
// the normalized exponential integral over [a,b]; stable for any lambda.
double log_e1(double lambda, double a, double b) {
  const double w = b - a;
  const double u = lambda * w;
  if (std::abs(u) < 1e-12) return lambda * a + std::log1p(u / 2 + u * u / 6);
  if (u > 0) return lambda * b + std::log(-std::expm1(-u)) - std::log(u);
  return lambda * a + std::log(-std::expm1(u)) - std::log(-u);
}

// Mean of the density proportional to e^{lambda s} on [a,b].
double trunc_exp_mean(double lambda, double a, double b) {
  const double w = b - a;
  const double u = lambda * w;
  if (std::abs(u) < 1e-8) return 0.5 * (a + b) + w * u / 12.0;
  const double e = std::expm1(u);
  const double inv = std::isinf(e) ? 0.0 : 1.0 / e;
  return b + w * (inv - 1.0 / u);
}

// Inverse-CDF draw from the density proportional to e^{lambda s} on [a,b].
double trunc_exp_sample(double lambda, double a, double b, double u01) {
  const double w = b - a;
  const double u = lambda * w;
  if (std::abs(u) < 1e-12) return a + u01 * w;
  if (u > 700.0) {
    const double s = b + std::log(u01) / lambda;
    return std::max(a, s);
  }
  return a + std::log1p(u01 * std::expm1(u)) / lambda;
}

struct GridObjective {
  const Potential& pot;
  const Grid& g;
  const std::vector<double>& U;
  double eta;

  // integral phi(eta (U + nu)) - 1 and its nu-derivative.
  std::pair<double, double> eval(double nu) const {
    double f = 0, df = 0;
    const double* w = g.weights.data();
    const double* u = U.data();
    const size_t n = U.size();
    if (pot.kind() == PotentialKind::Exponential) {
      for (size_t i = 0; i < n; ++i) {
        const double v = std::exp(eta * (u[i] + nu) - 1.0);
        f += w[i] * v;
        df += w[i] * v;
      }
      df *= eta;
    } else {
      const double p = 1.0 / (pot.rho() - 1.0);
      if (p == 2.0) {
        for (size_t i = 0; i < n; ++i) {
          const double z = eta * (u[i] + nu);
          if (z > 0) {
            f += w[i] * z * z;
            df += w[i] * z;
          }
        }
        df *= 2.0 * eta;
      } else {
        for (size_t i = 0; i < n; ++i) {
          const double z = eta * (u[i] + nu);
          if (z > 0) {
            const double zz = std::pow(z, p - 1.0);
            f += w[i] * zz * z;
            df += w[i] * zz;
          }
        }
        df *= p * eta;
      }
    }
    return {f - 1.0, df};
  }
};

// Safeguarded Newton on a monotone scalar objective with a certified bracket
// [lo, hi] (f(lo) <= 0 <= f(hi)).
template <typename Objective>
SolverReport newton_bisect(const Objective& obj, double lo, double hi, double tol) {
  SolverReport rep;
  rep.bracket = {lo, hi};
  double nu = 0.5 * (lo + hi);
  double f = 0, df = 0;
  double step_prev = hi - lo;
  for (int it = 0; it < 200; ++it) {
    std::tie(f, df) = obj.eval(nu);
    if (std::isfinite(f) && std::abs(f) <= tol) {
      rep.nu = nu;
      rep.residual = std::abs(f);
      return rep;
    }
    if (std::isfinite(f)) {
      (f > 0 ? hi : lo) = nu;
    } else {
      // Overflow only happens far above the root.
      hi = nu;
    }
    double next = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(f) && std::isfinite(df) && df > 0) {
      // Guaranteed progress: accept Newton only if it at least halves the
      // previous step. Far above an exponential root the step is a constant
      // 1/eta crawl that stays inside the bracket; without this rule the
      // iteration budget can run out before the crawl reaches the root.
      const double step = f / df;
      if (std::abs(step) <= 0.5 * step_prev) {
        next = nu - step;
        ++rep.newton_iters;
      }
    }
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
      ++rep.bisect_iters;
    }
    step_prev = std::abs(next - nu);
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(nu))) {
      // Bracket collapsed to machine width; accept if the residual is sane.
      if (std::abs(f) < 1e6 * tol) {
        rep.nu = nu;
        rep.residual = std::abs(f);
        return rep;
      }
      throw SolverError("normalization solve stalled at residual " + fmt17(f));
    }
    nu = next;
  }
  throw SolverError("normalization solve did not converge (residual " + fmt17(f) + ")");
}

}  // namespace

std::pair<double, double> warm_start_interval(double nu_t, double eta_t,
                                              double eta_next, double M, int64_t t) {
  if (!(eta_next > 0) || !(eta_t > 0)) throw DomainError("warm start needs eta > 0");
  if (eta_next > eta_t + 1e-15 * eta_t)
    throw DomainError("warm start assumes a non-increasing schedule");
  const double ratio = eta_t / eta_next;
  const double lo = ratio * nu_t - M;
  const double hi = ratio * nu_t + (ratio - 1.0) * static_cast<double>(t) * M;
  return {lo, hi};
}

SolverReport solve_nu_star(const Potential& pot, const Domain& S,
                           const std::vector<double>& U_nodes, double eta,
                           double tol, std::optional<std::pair<double, double>> bracket) {
  const Grid& g = S.grid();
  if (U_nodes.size() != g.size())
    throw DomainError("cumulative reward node count does not match grid");
  if (!(eta > 0)) throw DomainError("solve_nu_star needs eta > 0");
  GridObjective obj{pot, g, U_nodes, eta};

  double lo, hi;
  const double pivot = pot.phi_inverse(1.0) / eta;
  if (bracket) {
    lo = bracket->first;
    hi = bracket->second;
    bool ok_lo = obj.eval(lo).first <= 0;
    bool ok_hi = obj.eval(hi).first >= 0;
    if (!(ok_lo && ok_hi)) {
      // Expand geometrically around the center before giving up on the hint.
      const double c = 0.5 * (lo + hi);
      double w = std::max(hi - lo, 1e-6);
      for (int k = 0; k < 64 && !(ok_lo && ok_hi); ++k) {
        w *= 2;
        lo = c - w;
        hi = c + w;
        ok_lo = obj.eval(lo).first <= 0;
        ok_hi = obj.eval(hi).first >= 0;
      }
      if (!(ok_lo && ok_hi)) throw SolverError("could not bracket the multiplier");
      auto rep = newton_bisect(obj, lo, hi, tol);
      rep.bracket_expanded = true;
      return rep;
    }
    return newton_bisect(obj, lo, hi, tol);
  }
  // Exact cold bracket: with U in [Umin, Umax], nu = phi^{-1}(1)/eta - Umax
  // makes every integrand term <= 1, and -Umin makes every term >= 1.
  const auto [mn, mx] = std::minmax_element(U_nodes.begin(), U_nodes.end());
  lo = pivot - *mx;
  hi = pivot - *mn;
  if (hi - lo < 1e-12) {
    SolverReport rep;
    rep.nu = pivot - *mx;
    rep.closed_form = true;
    rep.bracket = {lo, hi};
    return rep;
  }
  return newton_bisect(obj, lo, hi, tol);
}

EntropyClosedForm entropy_closed_form(const Domain& S,
                                      const std::vector<double>& U_nodes,
                                      double eta) {
  const Grid& g = S.grid();
  if (U_nodes.size() != g.size())
    throw DomainError("cumulative reward node count does not match grid");
  double amax = -std::numeric_limits<double>::infinity();
  for (const double u : U_nodes) amax = std::max(amax, eta * u);
  double z = 0;
  for (size_t i = 0; i < U_nodes.size(); ++i)
    z += g.weights[i] * std::exp(eta * U_nodes[i] - amax);
  const double logZ = amax + std::log(z);
  EntropyClosedForm out;
  out.density.resize(U_nodes.size());
  for (size_t i = 0; i < U_nodes.size(); ++i)
    out.density[i] = std::exp(eta * U_nodes[i] - logZ);
  out.nu = (1.0 - logZ) / eta;
  return out;
}

double consistency_probe(const Potential& pot, const Domain& S,
                         const std::function<double(const Point&)>& U,
                         double i_scale, double delta) {
  if (!(i_scale > 0)) throw DomainError("consistency probe needs a positive scale");
  const Grid& g = S.grid();
  std::vector<double> u(g.size());
  size_t arg = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    u[i] = U(g.nodes[i]);
    require_finite(u[i], "consistency_probe");
    if (u[i] > u[arg]) arg = i;  // strict: lowest index wins ties
  }
  const auto rep = solve_nu_star(pot, S, u, i_scale);
  const Point star = g.nodes[arg];
  double mass = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    if (S.distance(g.nodes[i], star) <= delta)
      mass += g.weights[i] * pot.phi(i_scale * (u[i] + rep.nu));
  }
  return mass;
}

DensityState::DensityState(const Potential& pot, const Domain& S,
                           const Schedule& sched, double M, double solver_tol)
    : pot_(pot), S_(S), sched_(sched), M_(M), tol_(solver_tol) {
  if (!(M > 0)) throw ConfigError("DensityState needs a positive reward bound M");
  fast_ = S_.is_box();
  cum_affine_.g = Point(S_.dim());
  cum_affine_.b = 0;
  if (!fast_) cum_nodes_.assign(S_.grid().size(), 0.0);
  nu_ = pot_.phi_inverse(1.0) / sched_.at(0);
  nu_valid_ = true;
  last_.t = 0;
  last_.eta_after = sched_.at(0);
  last_.solver.nu = nu_;
  last_.solver.closed_form = true;
}

double DensityState::eta() const { return sched_.at(t_); }

double DensityState::nu() const {
  if (!nu_valid_) throw StateError("multiplier is stale; step the state first");
  return nu_;
}

void DensityState::switch_to_grid() {
  if (!fast_) return;
  const Grid& g = S_.grid();
  cum_nodes_.resize(g.size());
  for (size_t i = 0; i < g.size(); ++i) cum_nodes_[i] = cum_affine_(g.nodes[i]);
  fast_ = false;
}

const StepInfo& DensityState::step(const RewardFn& u) {
  static const std::vector<double> kNoNodes;
  return step(u, kNoNodes);
}

const StepInfo& DensityState::step(const RewardFn& u, const std::vector<double>& u_nodes) {
  const double eta_before = sched_.at(t_);
  const double eta_after = sched_.at(t_ + 1);
  const int64_t t_prev = t_;
  const double nu_prev = nu_valid_ ? nu_ : 0;

  StepInfo info;
  info.eta_before = eta_before;
  info.eta_after = eta_after;
  info.warm_interval =
      nu_valid_ ? warm_start_interval(nu_prev, eta_before, eta_after, M_, t_prev)
                : std::pair<double, double>{0, 0};

  // Absorb the reward into the cumulative profile.
  const auto& aff = u.affine_form();
  if (fast_ && aff) {
    int incoming_axis = -1;
    bool multi = false;
    for (int i = 0; i < S_.dim(); ++i) {
      if (aff->g[i] != 0.0) {
        if (incoming_axis >= 0) multi = true;
        incoming_axis = i;
      }
    }
    bool ok = true;
    if (pot_.kind() == PotentialKind::RhoNorm) {
      // The closed-form engine handles a single tilted axis only.
      if (multi) ok = false;
      if (ok && incoming_axis >= 0) {
        if (rho_axis_ < 0)
          rho_axis_ = incoming_axis;
        else if (rho_axis_ != incoming_axis)
          ok = false;
      }
    }
    if (ok) {
      cum_affine_.g = cum_affine_.g + aff->g;
      cum_affine_.b += aff->b;
    } else {
      switch_to_grid();
    }
  } else if (fast_) {
    switch_to_grid();
  }
  if (!fast_ || !aff) {
    if (!fast_) {
      const Grid& g = S_.grid();
      if (!u_nodes.empty()) {
        if (u_nodes.size() != g.size())
          throw DomainError("reward node count does not match grid");
        for (size_t i = 0; i < g.size(); ++i) cum_nodes_[i] += u_nodes[i];
      } else {
        for (size_t i = 0; i < g.size(); ++i) {
          const double v = u(g.nodes[i]);
          if (!std::isfinite(v))
            throw NumericError("reward not finite at node " + to_string(g.nodes[i]));
          cum_nodes_[i] += v;
        }
      }
    }
  }

  ++t_;
  ++rev_;

  // Re-solve the multiplier at the new learning rate.
  std::optional<std::pair<double, double>> warm;
  if (nu_valid_ && !fast_) {
    // Published interval widened to a symmetric safe bracket (the published
    // form is only guaranteed for nonnegative rewards).
    const double ratio = eta_before / eta_after;
    const double c = ratio * nu_prev;
    const double w =
        (ratio - 1.0) * static_cast<double>(t_prev) * M_ + M_ + 1e-12;
    warm = {{c - w, c + w}};
  }
  info.solver = solve_current(warm);

  info.t = t_;
  info.fast_path = fast_;
  last_ = info;
  return last_;
}

SolverReport DensityState::solve_current(
    const std::optional<std::pair<double, double>>& warm) {
  const double eta = sched_.at(t_);
  SolverReport rep;
  if (fast_) {
    const Point lo = S_.box_lo(), hi = S_.box_hi();
    if (pot_.kind() == PotentialKind::Exponential) {
      double logZ = eta * cum_affine_.b;
      for (int i = 0; i < S_.dim(); ++i)
        logZ += log_e1(eta * cum_affine_.g[i], lo[i], hi[i]);
      rep.nu = (1.0 - logZ) / eta;
      rep.closed_form = true;
    } else {
      // Single tilted axis: elementary antiderivative of z_+^p.
      const int k = std::max(rho_axis_, 0);
      const double G = cum_affine_.g[k];
      const double p = 1.0 / (pot_.rho() - 1.0);
      if (G == 0.0) {
        rep.nu = pot_.phi_inverse(1.0) / eta - cum_affine_.b;
        rep.closed_form = true;
      } else {
        const double a = lo[k], b = hi[k], w = b - a;
        const double A = eta * G;
        struct Rho1D {
          double eta, A, a, b, w, p, B;
          std::pair<double, double> eval(double nu) const {
            const double C = eta * (B + nu);
            const double z1 = A * a + C, z2 = A * b + C;
            const double zl = std::max(std::min(z1, z2), 0.0);
            const double zh = std::max(std::max(z1, z2), 0.0);
            const double den = std::abs(A) * w;
            const double f =
                (std::pow(zh, p + 1) - std::pow(zl, p + 1)) / (den * (p + 1)) - 1.0;
            const double df = eta * (std::pow(zh, p) - std::pow(zl, p)) / den;
            return {f, df};
          }
        } obj{eta, A, a, b, w, p, cum_affine_.b};
        // Exact bracket from the box extremes of the affine profile.
        const double umin = std::min(G * a, G * b) + cum_affine_.b;
        const double umax = std::max(G * a, G * b) + cum_affine_.b;
        const double pivot = pot_.phi_inverse(1.0) / eta;
        rep = newton_bisect(obj, pivot - umax, pivot - umin, tol_);
      }
    }
  } else if (pot_.kind() == PotentialKind::Exponential) {
    // Grid logsumexp closed form; identical to the iterative root within
    // rounding (the objective is exp-affine in nu).
    const Grid& g = S_.grid();
    double amax = -std::numeric_limits<double>::infinity();
    for (const double u : cum_nodes_) amax = std::max(amax, eta * u);
    double z = 0;
    for (size_t i = 0; i < g.size(); ++i)
      z += g.weights[i] * std::exp(eta * cum_nodes_[i] - amax);
    rep.nu = (1.0 - (amax + std::log(z))) / eta;
    rep.closed_form = true;
  } else {
    rep = solve_nu_star(pot_, S_, cum_nodes_, eta, tol_, warm);
  }
  nu_ = rep.nu;
  nu_valid_ = true;
  return rep;
}

double DensityState::density_from_cum(double cum_value) const {
  return pot_.phi(sched_.at(t_) * (cum_value + nu_));
}

double DensityState::density_at(const Point& s) const {
  S_.require_member(s);
  if (!nu_valid_) throw StateError("multiplier is stale; step the state first");
  if (fast_) return density_from_cum(cum_affine_(s));
  // Multilinear interpolation of the cumulative profile between grid nodes
  // (exact at the nodes). Masked corner nodes are dropped and the stencil
  // weights renormalized.
  const Grid& g = S_.grid();
  double frac[kMaxDim];
  int base[kMaxDim];
  for (int i = 0; i < g.dim; ++i) {
    const double x = (s[i] - g.lo[i]) / g.step[i] - 0.5;
    const double xc = std::clamp(x, 0.0, static_cast<double>(g.m[i] - 1));
    base[i] = std::min(static_cast<int>(xc), g.m[i] - 2);
    if (g.m[i] == 1) base[i] = 0;
    frac[i] = std::clamp(xc - base[i], 0.0, 1.0);
  }
  double acc = 0, wsum = 0;
  const int corners = 1 << g.dim;
  for (int mask = 0; mask < corners; ++mask) {
    double wcorner = 1;
    int64_t cell = 0, mult = 1;
    for (int i = 0; i < g.dim; ++i) {
      const int off = (mask >> i) & 1;
      wcorner *= off ? frac[i] : 1.0 - frac[i];
      int idx = base[i] + off;
      if (g.m[i] == 1) idx = 0;
      cell += mult * idx;
      mult *= g.m[i];
    }
    if (wcorner == 0) continue;
    const int node = g.cell_to_node[static_cast<size_t>(cell)];
    if (node < 0) continue;
    acc += wcorner * cum_nodes_[static_cast<size_t>(node)];
    wsum += wcorner;
  }
  if (wsum <= 0) throw NumericError("density interpolation stencil fully masked");
  return density_from_cum(acc / wsum);
}

const std::vector<double>& DensityState::density_nodes() const {
  if (!nu_valid_) throw StateError("multiplier is stale; step the state first");
  if (dens_cache_rev_ == rev_) return dens_cache_;
  const Grid& g = S_.grid();
  dens_cache_.resize(g.size());
  const double eta = sched_.at(t_);
  if (fast_) {
    for (size_t i = 0; i < g.size(); ++i)
      dens_cache_[i] = pot_.phi(eta * (cum_affine_(g.nodes[i]) + nu_));
  } else {
    for (size_t i = 0; i < g.size(); ++i)
      dens_cache_[i] = pot_.phi(eta * (cum_nodes_[i] + nu_));
  }
  dens_cache_rev_ = rev_;
  return dens_cache_;
}

double DensityState::expected_reward(const RewardFn& u) const {
  if (!nu_valid_) throw StateError("multiplier is stale; step the state first");
  const auto& aff = u.affine_form();
  if (fast_ && aff) {
    const Point lo = S_.box_lo(), hi = S_.box_hi();
    const double eta = sched_.at(t_);
    double acc = aff->b;
    for (int i = 0; i < S_.dim(); ++i) {
      if (aff->g[i] == 0.0) continue;
      acc += aff->g[i] * coordinate_mean(i, eta, lo, hi);
    }
    return acc;
  }
  const Grid& g = S_.grid();
  const auto& x = density_nodes();
  double acc = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    const double v = u(g.nodes[i]);
    if (!std::isfinite(v))
      throw NumericError("reward not finite at node " + to_string(g.nodes[i]));
    acc += g.weights[i] * x[i] * v;
  }
  return acc;
}

double DensityState::expected_reward_nodes(const std::vector<double>& u_nodes) const {
  const Grid& g = S_.grid();
  if (u_nodes.size() != g.size())
    throw DomainError("reward node count does not match grid");
  const auto& x = density_nodes();
  double acc = 0;
  for (size_t i = 0; i < g.size(); ++i) acc += g.weights[i] * x[i] * u_nodes[i];
  return acc;
}

double DensityState::coordinate_mean(int axis, double eta, const Point& lo,
                                     const Point& hi) const {
  if (pot_.kind() == PotentialKind::Exponential)
    return trunc_exp_mean(eta * cum_affine_.g[axis], lo[axis], hi[axis]);
  // RhoNorm: only rho_axis_ is tilted.
  if (axis != rho_axis_ || cum_affine_.g[axis] == 0.0)
    return 0.5 * (lo[axis] + hi[axis]);
  const double p = 1.0 / (pot_.rho() - 1.0);
  const double a = lo[axis], b = hi[axis], w = b - a;
  double A = eta * cum_affine_.g[axis];
  double C = eta * (cum_affine_.b + nu_);
  const bool reflected = A < 0;
  if (reflected) {
    // s -> a + b - s maps the density to one with positive tilt.
    C += A * (a + b);
    A = -A;
  }
  const double zl = std::max(A * a + C, 0.0);
  const double zh = A * b + C;
  auto T = [&](double z) {
    return std::pow(z, p + 2) / (p + 2) - C * std::pow(z, p + 1) / (p + 1);
  };
  const double m = (T(zh) - T(zl)) / (A * A * w);
  return reflected ? a + b - m : m;
}

Point DensityState::sample(Rng& rng) const {
  if (!nu_valid_) throw StateError("multiplier is stale; step the state first");
  const Point lo = S_.box_lo(), hi = S_.box_hi();
  const double eta = sched_.at(t_);
  if (fast_ && pot_.kind() == PotentialKind::Exponential) {
    Point s(S_.dim());
    for (int i = 0; i < S_.dim(); ++i)
      s[i] = trunc_exp_sample(eta * cum_affine_.g[i], lo[i], hi[i], rng.uniform01());
    ++sstats_.proposals;
    ++sstats_.accepts;
    return s;
  }
  if (fast_) {
    // RhoNorm closed form: inverse CDF on the tilted axis, uniform elsewhere.
    Point s(S_.dim());
    for (int i = 0; i < S_.dim(); ++i) s[i] = rng.uniform(lo[i], hi[i]);
    const int k = rho_axis_;
    if (k >= 0 && cum_affine_.g[k] != 0.0) {
      const double p = 1.0 / (pot_.rho() - 1.0);
      const double A = eta * cum_affine_.g[k];
      const double C = eta * (cum_affine_.b + nu_);
      const double z1 = A * lo[k] + C, z2 = A * hi[k] + C;
      const double zl = std::max(std::min(z1, z2), 0.0);
      const double zh = std::max(z1, z2);
      const double u01 = rng.uniform01();
      const double zp = std::pow(std::pow(zl, p + 1) +
                                     u01 * (std::pow(zh, p + 1) - std::pow(zl, p + 1)),
                                 1.0 / (p + 1));
      double sk = (zp - C) / A;
      s[k] = std::clamp(sk, lo[k], hi[k]);
    }
    ++sstats_.proposals;
    ++sstats_.accepts;
    return s;
  }
  // Grid engine: exact inverse-CDF draw over node masses (weight * density),
  // then a uniform jitter inside the chosen cell. This stays O(log m) per
  // sample no matter how concentrated the density gets, where rejection
  // against a global envelope would stall.
  const auto& x = density_nodes();
  const Grid& g = S_.grid();
  if (node_cdf_rev_ != rev_) {
    node_cdf_.resize(g.size());
    double acc = 0;
    for (size_t i = 0; i < g.size(); ++i) {
      acc += std::max(x[i], 0.0) * g.weights[i];
      node_cdf_[i] = acc;
    }
    if (!(acc > 0)) throw EnvelopeError("density is zero on every grid node");
    for (double& v : node_cdf_) v /= acc;
    node_cdf_.back() = 1.0;
    node_cdf_rev_ = rev_;
  }
  const double u = rng.uniform01();
  const auto it = std::lower_bound(node_cdf_.begin(), node_cdf_.end(), u);
  const size_t idx = static_cast<size_t>(it - node_cdf_.begin());
  const Point& node = g.nodes[idx];
  ++sstats_.proposals;
  ++sstats_.accepts;
  // Cells straddling the boundary keep their in-domain part: jitter until the
  // point is a member, falling back to the (always valid) cell midpoint.
  for (int tries = 0; tries < 64; ++tries) {
    Point s = node;
    for (int i = 0; i < S_.dim(); ++i)
      s[i] = node[i] + (rng.uniform01() - 0.5) * g.step[static_cast<size_t>(i)];
    if (S_.contains(s)) return s;
  }
  return node;
}

const std::vector<double>& DensityState::cumulative_nodes() const {
  if (!fast_) return cum_nodes_;
  const Grid& g = S_.grid();
  cum_nodes_scratch_.resize(g.size());
  for (size_t i = 0; i < g.size(); ++i)
    cum_nodes_scratch_[i] = cum_affine_(g.nodes[i]);
  return cum_nodes_scratch_;
}

std::optional<AffineForm> DensityState::cumulative_affine() const {
  if (!fast_) return std::nullopt;
  return cum_affine_;
}

}  // namespace contreg
