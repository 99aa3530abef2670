// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "contreg/domains.hpp"
#include "contreg/potentials.hpp"
#include "contreg/rewards.hpp"
#include "contreg/rng.hpp"
#include "contreg/schedule.hpp"

namespace contreg {

// Result of solving the normalization equation
//   integral phi(eta (U(s) + nu)) dmu(s) = 1
// for the multiplier nu (unique root: the integrand is non-decreasing in nu
// and strictly increasing wherever the density is positive).
struct SolverReport {
  double nu = 0;
  double residual = 0;       // |integral - 1| at the returned nu
  int newton_iters = 0;
  int bisect_iters = 0;
  bool closed_form = false;  // no iteration was needed
  bool bracket_expanded = false;
  std::pair<double, double> bracket{0, 0};
};

// Published warm-start interval for the multiplier after one more round with
// |u| <= M: given nu_t solved at eta_t, the next multiplier at eta_next is
// sought near (eta_t/eta_next) nu_t. Valid for nonnegative bounded rewards
// with non-increasing eta; the internal solver widens it symmetrically
// before trusting it (see DensityState).
std::pair<double, double> warm_start_interval(double nu_t, double eta_t,
                                              double eta_next, double M,
                                              int64_t t);

// Solve the normalization equation on the grid by safeguarded Newton with a
// bisection fallback, to |integral - 1| <= tol or a machine-width bracket.
SolverReport solve_nu_star(const Potential& pot, const Domain& S,
                           const std::vector<double>& U_nodes, double eta,
                           double tol = 1e-10,
                           std::optional<std::pair<double, double>> bracket = {});

// Closed-form density for the exponential potential via max-subtracted
// normalization (softmax on the grid). Reference implementation used to
// cross-check the iterative pipeline.
struct EntropyClosedForm {
  std::vector<double> density;
  double nu;
};
EntropyClosedForm entropy_closed_form(const Domain& S,
                                      const std::vector<double>& U_nodes,
                                      double eta);

// Mass the scaled mirror density phi(i (U + nu)) places within distance
// delta of the argmax of U. As i -> inf the mass tends to 1 (consistency).
double consistency_probe(const Potential& pot, const Domain& S,
                         const std::function<double(const Point&)>& U,
                         double i_scale, double delta);

struct StepInfo {
  int64_t t = 0;               // rounds absorbed after this step
  double eta_before = 0;       // eta_{t-1} (with eta_0 := eta_1)
  double eta_after = 0;        // eta_t
  std::pair<double, double> warm_interval{0, 0};  // published formula
  SolverReport solver;
  bool fast_path = false;
};

struct SampleStats {
  int64_t proposals = 0;
  int64_t accepts = 0;
};

// Dual-averaging state over densities: after absorbing rewards u_1..u_t the
// current density is x_{t+1}(s) = phi(eta_t (U_t(s) + nu_t)) with U_t the
// cumulative reward and nu_t the normalization multiplier. x_1 is uniform.
//
// Engines:
//  - closed-form affine engine when the domain is a box and every reward is
//    affine (any tilt for the exponential potential; single-axis tilts for
//    RhoNorm), giving O(dim) steps, exact expectations and inverse-CDF
//    sampling;
//  - grid engine otherwise: cumulative reward on quadrature nodes, iterative
//    multiplier solve, inverse-CDF sampling over node masses with a uniform
//    jitter inside the drawn cell.
class DensityState {
 public:
  DensityState(const Potential& pot, const Domain& S, const Schedule& sched,
               double M, double solver_tol = 1e-10);

  int64_t round() const { return t_; }
  double eta() const;                  // eta_t in force for the current density
  double nu() const;                   // throws StateError if invalidated
  double M() const { return M_; }
  const Potential& potential() const { return pot_; }
  const Domain& domain() const { return S_; }
  const Schedule& schedule() const { return sched_; }

  const StepInfo& step(const RewardFn& u);
  const StepInfo& step(const RewardFn& u, const std::vector<double>& u_nodes);
  const StepInfo& last_step() const { return last_; }

  double density_at(const Point& s) const;
  const std::vector<double>& density_nodes() const;  // cached per revision
  double expected_reward(const RewardFn& u) const;
  double expected_reward_nodes(const std::vector<double>& u_nodes) const;
  Point sample(Rng& rng) const;
  const SampleStats& sample_stats() const { return sstats_; }

  bool on_fast_path() const { return fast_; }
  const std::vector<double>& cumulative_nodes() const;  // U_t on the grid
  std::optional<AffineForm> cumulative_affine() const;

  // Test hook: marks the multiplier stale so density queries must fail until
  // the next step re-solves it.
  void debug_invalidate_nu() { nu_valid_ = false; }

 private:
  void switch_to_grid();
  SolverReport solve_current(const std::optional<std::pair<double, double>>& warm);
  double density_from_cum(double cum_value) const;
  double coordinate_mean(int axis, double eta, const Point& lo, const Point& hi) const;

  Potential pot_;
  Domain S_;
  Schedule sched_;
  double M_;
  double tol_;
  int64_t t_ = 0;

  bool fast_ = true;                 // affine engine active
  int rho_axis_ = -1;                // RhoNorm fast path: single tilted axis
  AffineForm cum_affine_;            // valid while fast_
  std::vector<double> cum_nodes_;    // valid when !fast_ (or materialized)
  double nu_ = 0;
  bool nu_valid_ = false;
  StepInfo last_;

  mutable std::vector<double> dens_cache_;
  mutable int64_t dens_cache_rev_ = -1;
  mutable std::vector<double> node_cdf_;
  mutable int64_t node_cdf_rev_ = -1;
  mutable std::vector<double> cum_nodes_scratch_;
  mutable SampleStats sstats_;
  int64_t rev_ = 0;
};

}  // namespace contreg
