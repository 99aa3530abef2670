// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contreg/common.hpp"
#include "contreg/domains.hpp"
#include "contreg/rng.hpp"

namespace contreg {

// u(s) = <g, s> + b.
struct AffineForm {
  Point g;
  double b = 0;
  double operator()(const Point& s) const { return dot(g, s) + b; }
};

// u(s) = -1/2 (s-mu)' Q (s-mu) - c with Q symmetric PSD (row-major n x n).
struct QuadraticForm {
  std::array<double, kMaxDim * kMaxDim> Q{};
  Point mu;
  double c = 0;
  int n = 1;
  double operator()(const Point& s) const;
  Point gradient(const Point& s) const;  // of u (not of the loss)
};

// One round's reward function with optional structure tags that enable
// closed-form updates and gradient-based baselines.
class RewardFn {
 public:
  static RewardFn affine(AffineForm a);
  static RewardFn quadratic(QuadraticForm q);
  static RewardFn generic(std::function<double(const Point&)> f,
                          std::function<Point(const Point&)> grad = nullptr);

  double operator()(const Point& s) const;
  const std::optional<AffineForm>& affine_form() const { return affine_; }
  const std::optional<QuadraticForm>& quadratic_form() const { return quad_; }
  bool has_gradient() const;
  Point gradient(const Point& s) const;  // throws UnsupportedError if untagged

 private:
  std::function<double(const Point&)> f_;
  std::function<Point(const Point&)> grad_;
  std::optional<AffineForm> affine_;
  std::optional<QuadraticForm> quad_;
};

// Hoelder modulus chi(r) = C * r^alpha bounding per-round oscillation:
// |u(s) - u(s')| <= chi(d(s,s')).
struct HoelderModulus {
  double alpha = 1;
  double C = 1;
  double operator()(double r) const;
};

// Structural properties a stream declares about the losses l_t = -u_t,
// consumed by baseline tuning (all with respect to the Euclidean norm).
struct StreamTags {
  bool affine = false;
  bool convex_loss = false;
  double strong_convexity_H = 0;  // 0 = not declared
  double exp_concavity_alpha = 0; // 0 = not declared
  double grad_bound_G = 0;        // 0 = not declared
};

// Adversarial reward source. next() must be called exactly once per round;
// round() is the number of rewards emitted so far. Streams self-declare the
// sup-norm bound M, the Hoelder modulus, and structure tags, and those
// declarations are auditable against emitted rounds.
class RewardStream {
 public:
  virtual ~RewardStream() = default;
  virtual RewardFn next() = 0;
  virtual double bound_M() const = 0;
  virtual HoelderModulus modulus() const = 0;
  virtual StreamTags tags() const { return {}; }
  int64_t round() const { return round_; }

 protected:
  int64_t round_ = 0;
};

// Alternating affine stream on a box centered at the origin:
//   round 1: u(s) = -(L/2) s_1 - L/4
//   round k>=2: u(s) = (-1)^k L s_1 - L/2  (signs alternate, +L at k=2)
// Consecutive rounds cancel to -L pointwise; the cumulative reward always
// lies within one round of -L/2 * t, which defeats any policy chasing the
// previous argmax. sup-norm bound is attained on the box.
std::unique_ptr<RewardStream> make_alternating_affine(const Domain& S, double L = 5);

// Random concave quadratics u_t(s) = -1/2 (s-mu_t)' Q_t (s-mu_t) - c_t with
// log-uniform eigenvalues in [0.2, 2], random rotations, uniform mu_t in S,
// c_t uniform in [0,1], globally rescaled so that over the pre-generated
// horizon: Lipschitz <= 5, sup|u| <= 3.75, and a 4-norm proxy <= 1.6.
// Declares G=5, strong convexity H = min_t lambda_min(zeta_t Q_t), and the
// exact exp-concavity alpha = min_t 1 / sup_s (s-mu_t)' zeta_t Q_t (s-mu_t)
// (A >= alpha aa' for a = A(s-mu) iff alpha (s-mu)'A(s-mu) <= 1; the box sup
// sits at a vertex). This is the largest constant valid for every round.
std::unique_ptr<RewardStream> make_random_quadratic(const Domain& S, int64_t horizon,
                                                    Rng rng);

// Rademacher-modulated profile u_t = V_t * v with v(s) = w(d(s, s_b)),
// w(r) = min(C_alpha^{1/alpha}, M / ||d(.,s_b)^alpha||_q) * r^alpha, where
// (s_a, s_b) realize the diameter. v(s_b) = 0 and v(s_a) = w(diam).
std::unique_ptr<RewardStream> make_rademacher_profile(const Domain& S, double M,
                                                      double alpha, double C_alpha,
                                                      double q, Rng rng);

// "altaffine:L=5" | "quad:T=10000" | "rademacher:M=1,alpha=1,C=1,q=2".
std::unique_ptr<RewardStream> make_stream(std::string_view config, const Domain& S,
                                          int64_t horizon, Rng rng);

// Audit helpers (throw StreamContractError on violation).
void audit_bound(const RewardFn& u, const Domain& S, double M, double tol = 1e-9);
void audit_hoelder(const RewardFn& u, const Domain& S, const HoelderModulus& chi,
                   int pairs, Rng& rng, double tol = 1e-9);

}  // namespace contreg
