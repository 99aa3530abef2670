// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace contreg {

RegretLedger::RegretLedger(const Domain& S) : S_(S) {
  affine_mode_ = S.is_box();
  cum_affine_.g = Point(S.dim());
  cum_affine_.b = 0;
}

namespace {

double corner_max(const Domain& S, const AffineForm& a, bool absolute) {
  const Point lo = S.box_lo(), hi = S.box_hi();
  double best = -std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << S.dim()); ++mask) {
    Point s(S.dim());
    for (int i = 0; i < S.dim(); ++i) s[i] = (mask >> i) & 1 ? hi[i] : lo[i];
    const double v = a(s);
    best = std::max(best, absolute ? std::abs(v) : v);
  }
  return best;
}

}  // namespace

void RegretLedger::record(const std::vector<double>& u_nodes, double realized,
                          double expected, double eta_before) {
  const Grid& g = S_.grid();
  if (u_nodes.size() != g.size())
    throw DomainError("ledger: reward node count does not match grid");
  if (affine_mode_) {
    // Materialize the affine prefix on the grid before going pointwise.
    cum_nodes_.resize(g.size());
    for (size_t i = 0; i < g.size(); ++i) cum_nodes_[i] = cum_affine_(g.nodes[i]);
    affine_mode_ = false;
  }
  if (cum_nodes_.empty()) cum_nodes_.assign(g.size(), 0.0);
  double sup = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    require_finite(u_nodes[i], "ledger reward");
    cum_nodes_[i] += u_nodes[i];
    sup = std::max(sup, std::abs(u_nodes[i]));
  }
  history_.push_back({sup, realized, expected, eta_before});
  sum_realized_ += realized;
  sum_expected_ += expected;
  sum_eta_norm_sq_ += eta_before * sup * sup;
  max_sup_abs_ = std::max(max_sup_abs_, sup);
}

void RegretLedger::record_affine(const AffineForm& u, double realized,
                                 double expected, double eta_before) {
  if (!affine_mode_) {
    std::vector<double> nodes(S_.grid().size());
    for (size_t i = 0; i < nodes.size(); ++i) nodes[i] = u(S_.grid().nodes[i]);
    record(nodes, realized, expected, eta_before);
    return;
  }
  cum_affine_.g = cum_affine_.g + u.g;
  cum_affine_.b += u.b;
  const double sup = corner_max(S_, u, /*absolute=*/true);
  history_.push_back({sup, realized, expected, eta_before});
  sum_realized_ += realized;
  sum_expected_ += expected;
  sum_eta_norm_sq_ += eta_before * sup * sup;
  max_sup_abs_ = std::max(max_sup_abs_, sup);
}

double RegretLedger::sup_cumulative() const {
  if (history_.empty()) return 0;
  if (affine_mode_) return corner_max(S_, cum_affine_, /*absolute=*/false);
  double best = -std::numeric_limits<double>::infinity();
  for (const double v : cum_nodes_) best = std::max(best, v);
  return best;
}

double RegretLedger::drift_sum(const Potential& pot) const {
  double acc = 0;
  for (const auto& r : history_)
    acc += r.sup_abs_u * pot.gamma_tilde_inv(0.5 * r.eta_before * r.sup_abs_u);
  return acc;
}

double bound_general_da(const RegretLedger& lg, const Potential& pot,
                        const Schedule& sch, double capacity, int64_t t) {
  if (t <= 0) return 0;
  if (t > lg.rounds()) throw DomainError("bound requested beyond recorded rounds");
  double drift = 0;
  const auto& h = lg.history();
  for (int64_t i = 0; i < t; ++i)
    drift += h[static_cast<size_t>(i)].sup_abs_u *
             pot.gamma_tilde_inv(0.5 * h[static_cast<size_t>(i)].eta_before *
                                 h[static_cast<size_t>(i)].sup_abs_u);
  return capacity / sch.at(t) + drift;
}

double bound_poly_closed(double capacity, double eta, double beta, double kappa,
                         double C, double M, int64_t t) {
  if (!(kappa > beta)) throw DomainError("closed-form bound needs kappa > beta");
  const double td = static_cast<double>(t);
  return capacity / eta * std::pow(td, beta) +
         kappa / (kappa - beta) * std::pow(eta / (2 * C), 1.0 / kappa) *
             std::pow(M, 1.0 + 1.0 / kappa) * std::pow(td, 1.0 - beta / kappa);
}

double ball_capacity(const Potential& pot, const Regularity& reg, double vartheta) {
  if (!(vartheta > 0)) throw DomainError("ball capacity needs vartheta > 0");
  const double vQ = std::pow(vartheta, reg.Q);
  return std::min(reg.C0 * vQ, 1.0) * pot.f(1.0 / (reg.c0 * vQ));
}

double bound_fdiv(const RegretLedger& lg, const Potential& pot,
                  const Schedule& sch, const Regularity& reg,
                  const HoelderModulus& chi, double vartheta, int64_t t) {
  if (!(vartheta > 0) || vartheta > reg.r0)
    throw DomainError("bound_fdiv needs 0 < vartheta <= r0, got " + fmt17(vartheta));
  if (t <= 0) return std::numeric_limits<double>::infinity();
  if (t > lg.rounds()) throw DomainError("bound requested beyond recorded rounds");
  const double td = static_cast<double>(t);
  double drift = 0;
  const auto& h = lg.history();
  for (int64_t i = 0; i < t; ++i)
    drift += h[static_cast<size_t>(i)].sup_abs_u *
             pot.gamma_tilde_inv(0.5 * h[static_cast<size_t>(i)].eta_before *
                                 h[static_cast<size_t>(i)].sup_abs_u);
  return ball_capacity(pot, reg, vartheta) / (td * sch.at(t)) + chi(vartheta) +
         drift / td;
}

double bound_fdiv_scan(const RegretLedger& lg, const Potential& pot,
                       const Schedule& sch, const Regularity& reg,
                       const HoelderModulus& chi, int64_t t) {
  const double cell = lg.domain().grid().cell_diameter;
  const double lo = std::min(cell, reg.r0 * 0.5);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 64; ++k) {
    const double v = lo * std::pow(reg.r0 / lo, static_cast<double>(k) / 64.0);
    best = std::min(best, bound_fdiv(lg, pot, sch, reg, chi, v, t));
  }
  return best;
}

double bound_entropy_rate(const Regularity& reg, double M,
                          const HoelderModulus& chi, double vartheta, int64_t t) {
  if (!(vartheta > 0)) throw DomainError("bound needs vartheta > 0");
  if (t < 1) return std::numeric_limits<double>::infinity();
  const double td = static_cast<double>(std::max<int64_t>(t, 3));
  const double rate = std::sqrt(std::log(td) / static_cast<double>(t));
  // Validity window of the corollary.
  if (!(rate < std::pow(reg.r0, chi.alpha) / vartheta))
    return std::numeric_limits<double>::infinity();
  const double logterm =
      std::max(std::log(std::pow(vartheta, -reg.Q / chi.alpha) / reg.c0), 0.0);
  const double lead =
      2.0 * M *
      std::sqrt(2.0 * reg.C0 / reg.c0 * (logterm + reg.Q / (2.0 * chi.alpha)));
  return (lead + chi.C * vartheta) * rate;
}

double bound_growth_rate(const Regularity& reg, const Potential& pot, double M,
                         const HoelderModulus& chi, double vartheta, int64_t t) {
  if (!(vartheta > 0) || !(vartheta < reg.r0))
    throw DomainError("bound needs 0 < vartheta < r0");
  if (t < 1) return std::numeric_limits<double>::infinity();
  const double kappa = pot.growth_kappa();
  const double kQa = kappa * reg.Q / chi.alpha;
  const double Ct = std::sqrt((2.0 + kQa) / (1.0 + kQa) * reg.C0 * pot.growth_c() /
                              std::pow(reg.c0, 1.0 + kappa));
  const double lead = 2.0 * M * Ct * std::pow(vartheta, -kappa * reg.Q / 2.0);
  return (lead + chi(vartheta)) *
         std::pow(static_cast<double>(t), -1.0 / (2.0 + kQa));
}

double bound_lower_rademacher(double w_at_diam, int64_t t) {
  return w_at_diam / (2.0 * std::sqrt(2.0)) * std::sqrt(static_cast<double>(t));
}

double bound_lower_simple(double C_alpha, double alpha, double diam, double M,
                          int64_t t) {
  const double w =
      std::min(std::pow(C_alpha, 1.0 / alpha) * std::pow(diam, alpha), M);
  return w / (2.0 * std::sqrt(2.0)) * std::sqrt(static_cast<double>(t));
}

double fit_rate(const std::vector<std::pair<int64_t, double>>& series,
                int64_t t_lo, int64_t t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int64_t n = 0;
  for (const auto& [t, v] : series) {
    if (t < t_lo || t > t_hi) continue;
    if (!(v > 0))
      throw DomainError("fit_rate needs positive values, got " + fmt17(v) +
                        " at t=" + std::to_string(t));
    const double x = std::log(static_cast<double>(t));
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 10)
    throw DomainError("fit_rate needs >= 10 points in window, got " +
                      std::to_string(n));
  const double nd = static_cast<double>(n);
  const double denom = nd * sxx - sx * sx;
  if (denom <= 0) throw DomainError("fit_rate window is degenerate");
  return (nd * sxy - sx * sy) / denom;
}

}  // namespace contreg
