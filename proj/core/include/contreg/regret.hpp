// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "contreg/domains.hpp"
#include "contreg/potentials.hpp"
#include "contreg/rewards.hpp"
#include "contreg/schedule.hpp"

namespace contreg {

// Per-round scalars retained for bound evaluation and audits.
struct LedgerRound {
  double sup_abs_u = 0;   // ||u_tau||_inf over S
  double realized = 0;    // u_tau(s_tau) (or expected reward if no sampling)
  double expected = 0;    // <u_tau, x_tau>
  double eta_before = 0;  // eta_{tau-1} in force when x_tau was formed
};

// Accumulates the cumulative reward profile U_t and per-round scalars needed
// for worst-case regret sup_s U_t(s) - sum_tau reward_tau and for evaluating
// regret bounds. Tracks U_t either as an affine form (while every recorded
// round is affine) or on the quadrature grid.
class RegretLedger {
 public:
  explicit RegretLedger(const Domain& S);

  void record(const std::vector<double>& u_nodes, double realized,
              double expected, double eta_before);
  void record_affine(const AffineForm& u, double realized, double expected,
                     double eta_before);

  int64_t rounds() const { return static_cast<int64_t>(history_.size()); }
  const std::vector<LedgerRound>& history() const { return history_; }

  double sup_cumulative() const;  // sup_s U_t(s) over the grid (or corners)
  double sum_realized() const { return sum_realized_; }
  double sum_expected() const { return sum_expected_; }

  // Worst-case regret against the best fixed density (a point mass at the
  // argmax of U_t): sup_s U_t(s) - sum of per-round rewards.
  double worst_case_realized() const { return sup_cumulative() - sum_realized_; }
  double worst_case_expected() const { return sup_cumulative() - sum_expected_; }

  // sum_{tau<=t} ||u_tau|| * gamma_tilde_inv(eta_{tau-1} ||u_tau|| / 2),
  // maintained incrementally for the generic bound.
  double drift_sum(const Potential& pot) const;

  double max_sup_abs() const { return max_sup_abs_; }
  const Domain& domain() const { return S_; }

 private:
  Domain S_;
  std::vector<LedgerRound> history_;
  double sum_realized_ = 0;
  double sum_expected_ = 0;
  double sum_eta_norm_sq_ = 0;  // sum eta_{tau-1} ||u_tau||^2
  double max_sup_abs_ = 0;
  bool affine_mode_ = true;
  AffineForm cum_affine_;
  std::vector<double> cum_nodes_;
};

// Generic anytime bound: capacity / eta_t + drift term from the ledger.
// capacity = h(comparator) - inf h for the chosen comparator class.
double bound_general_da(const RegretLedger& lg, const Potential& pot,
                        const Schedule& sch, double capacity, int64_t t);

// Closed form of the same bound for eta_t = eta t^{-beta}, ||u||<=M and
// modulus gamma(r) = C r^{1+kappa}:
//   capacity/eta t^beta + kappa/(kappa-beta) (eta/(2C))^{1/kappa} M^{1+1/kappa} t^{1-beta/kappa}.
double bound_poly_closed(double capacity, double eta, double beta, double kappa,
                         double C, double M, int64_t t);

// Capacity of the ball comparator at resolution vartheta on a regular space:
// mass floor p = min(c0 vartheta^Q, 1) ... the f-divergence of the uniform
// density on a ball of measure >= c0 vartheta^Q, clipped by measure 1:
//   min(C0 vartheta^Q, 1) * f(1 / (c0 vartheta^Q)) ... see bound_fdiv.
double ball_capacity(const Potential& pot, const Regularity& reg, double vartheta);

// Resolution-penalized average-regret bound at round t for comparator balls
// of radius vartheta <= r0:
//   R_t/t <= min(C0 v^Q, 1) f(c0^{-1} v^{-Q}) / (t eta_t)
//            + chi(v) + (1/t) * drift_sum.
double bound_fdiv(const RegretLedger& lg, const Potential& pot,
                  const Schedule& sch, const Regularity& reg,
                  const HoelderModulus& chi, double vartheta, int64_t t);

// Minimum of bound_fdiv over 64 log-spaced vartheta in (cell_diameter, r0].
double bound_fdiv_scan(const RegretLedger& lg, const Potential& pot,
                       const Schedule& sch, const Regularity& reg,
                       const HoelderModulus& chi, int64_t t);

// Headline average-regret rate for the entropy regularizer with its tuned
// schedule (sqrt(log t / t) up to resolution-dependent constants).
double bound_entropy_rate(const Regularity& reg, double M,
                          const HoelderModulus& chi, double vartheta, int64_t t);

// Headline rate t^{-1/(2 + kappa Q / alpha)} for growth-(kappa, C) potentials
// with the matching tuned schedule.
double bound_growth_rate(const Regularity& reg, const Potential& pot, double M,
                         const HoelderModulus& chi, double vartheta, int64_t t);

// Lower bounds for adversarial streams on (S, d, mu):
// Rademacher-profile construction: E R_t >= w_at_diam / (2 sqrt 2) * sqrt t.
double bound_lower_rademacher(double w_at_diam, int64_t t);
// Simplified form min(C_alpha^{1/alpha} D^alpha ... , M) / (2 sqrt 2) sqrt t.
double bound_lower_simple(double C_alpha, double alpha, double diam, double M,
                          int64_t t);

// Least-squares slope of log(value) against log(t) over checkpoints with
// t in [t_lo, t_hi]. Requires >= 10 points in range and positive values;
// throws DomainError otherwise.
double fit_rate(const std::vector<std::pair<int64_t, double>>& series,
                int64_t t_lo, int64_t t_hi);

}  // namespace contreg
