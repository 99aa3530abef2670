// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "contreg/domains.hpp"
#include "contreg/rewards.hpp"
#include "contreg/rng.hpp"

namespace contreg {

// Classical point-iterate baselines. All minimize losses l_t = -u_t. Each
// baseline consumes the stream's declared tags (gradient bound G, strong
// convexity H, exp-concavity alpha) for its standard tuning; constructing a
// baseline whose requirements the stream does not declare throws ConfigError.
class Baseline {
 public:
  virtual ~Baseline() = default;
  // Point to play this round (before seeing u_t).
  virtual Point current() const = 0;
  // Absorb this round's reward. u_nodes are the grid values of u_t (shared
  // with ledger bookkeeping; only grid-based baselines use them).
  virtual void absorb(const RewardFn& u, const std::vector<double>& u_nodes) = 0;
  virtual std::string name() const = 0;
};

// Follow-the-leader point version: argmax over the grid of the cumulative
// reward, lowest node index on ties. Plays the grid node. First round plays
// node 0 ... the argmax of the zero profile (lowest index).
std::unique_ptr<Baseline> make_greedy(const Domain& S);

// Projected gradient: s_{t+1} = proj(s_t + eta_{t+1} grad u_t(s_t)) with
// eta_t = D / (G sqrt t) ... the scale-free 1/sqrt(t) variant eta_t = 1/sqrt t.
std::unique_ptr<Baseline> make_gradient_projection(const Domain& S, const StreamTags& tags);

// Online gradient descent for H-strongly-convex losses: eta_t = 1/(H t).
std::unique_ptr<Baseline> make_ogd_strongly_convex(const Domain& S, const StreamTags& tags);

// Exponentially weighted online optimization over alpha-exp-concave losses:
// plays the mean of the density proportional to exp(-alpha L_t) (grid
// quadrature); the mean lies in S for convex S.
std::unique_ptr<Baseline> make_ewoo(const Domain& S, const StreamTags& tags);

// Follow-the-approximate-leader with second-order surrogates:
//   beta = min(1/(8 G D), alpha/2),
//   surrogate minimizer s~ = A_t^+ b_t,  A_t = sum g g', b_t accumulates
//   g g' s_tau - g_tau / beta ... see implementation; plays the A_t-norm
//   projection of s~ onto S (boxes only), Euclidean tie-break among
//   minimizers via epsilon-regularization.
std::unique_ptr<Baseline> make_ftal(const Domain& S, const StreamTags& tags);

// "greedy" | "gp" | "ogd" | "ewoo" | "ftal".
std::unique_ptr<Baseline> make_baseline(std::string_view name, const Domain& S,
                                        const StreamTags& tags);

// Single-step primitives behind the classes above.

// Argmax of the cumulative reward over the grid, lowest index on ties.
Point greedy_step(const std::vector<double>& U_nodes, const Domain& S);

// project(s - eta * grad) for a loss gradient; convex domains only.
Point gp_step(const Point& s, const Point& grad, double eta, const Domain& S);

// Mean of the density proportional to exp(-alpha * L) on the grid.
Point ewoo_step(const std::vector<double>& L_nodes, double alpha, const Domain& S);

// Second-order follow-the-leader state: A accumulates g g', rhs accumulates
// g g' s_played - g / beta.
struct FtalState {
  std::array<double, kMaxDim * kMaxDim> A{};
  Point rhs;
  int n = 1;
  explicit FtalState(int dim) : rhs(dim), n(dim) {}
  std::array<double, kMaxDim> eigenvalues() const;  // of A, ascending
};

// Absorbs one (gradient, played point) pair and returns the new iterate:
// the A-seminorm projection of the surrogate minimizer onto the box, with
// Euclidean tie-break among minimizers. g = 0 leaves the state unchanged.
Point ftal_step(FtalState& st, const Point& g, const Point& s_played, double beta,
                const Domain& S);

// Standard per-round average-regret guarantees for the Euclidean baselines
// (D = Euclidean diameter, G/H/alpha from tags, n = dim): used as reference
// curves next to measured regret.
double baseline_bound_gp(double D, double G, int64_t t);
double baseline_bound_ogd(double H, double G, int64_t t);
double baseline_bound_ftal(int n, double alpha, double G, double D, int64_t t);
double baseline_bound_ewoo(int n, double alpha, int64_t t);

}  // namespace contreg
