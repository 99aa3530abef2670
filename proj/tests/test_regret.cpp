// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <cmath>
#include <vector>

#include "contreg/dual_averaging.hpp"
#include "contreg/regret.hpp"
#include "doctest.h"

using namespace contreg;

namespace {

Point pt1(double x) {
  Point p(1);
  p[0] = x;
  return p;
}

AffineForm aff1(double g, double b) {
  AffineForm a;
  a.g = pt1(g);
  a.b = b;
  return a;
}

}  // namespace

TEST_SUITE("regret") {
  TEST_CASE("ledger tracks cumulative sup and sums") {
    const Domain S = Domain::interval(0.0, 1.0, 512);
    RegretLedger lg(S);
    CHECK(lg.rounds() == 0);
    CHECK(lg.sup_cumulative() == doctest::Approx(0.0));

    lg.record_affine(aff1(2.0, -1.0), 0.3, 0.25, 0.5);  // sup U = 1 at s=1
    CHECK(lg.rounds() == 1);
    CHECK(lg.sup_cumulative() == doctest::Approx(1.0));
    CHECK(lg.worst_case_realized() == doctest::Approx(1.0 - 0.3));
    CHECK(lg.worst_case_expected() == doctest::Approx(1.0 - 0.25));
    CHECK(lg.max_sup_abs() == doctest::Approx(1.0));

    lg.record_affine(aff1(-2.0, 1.0), -0.1, 0.0, 0.5);  // cancels to U = 0
    CHECK(lg.sup_cumulative() == doctest::Approx(0.0));
    CHECK(lg.worst_case_realized() == doctest::Approx(-(0.3 - 0.1)));
    CHECK(lg.sum_realized() == doctest::Approx(0.2));
  }

  TEST_CASE("ledger switches to grid mode and stays consistent") {
    const Domain S = Domain::interval(0.0, 1.0, 512);
    RegretLedger lg(S);
    lg.record_affine(aff1(1.0, 0.0), 0.0, 0.0, 0.5);
    std::vector<double> bump(S.grid().size());
    for (size_t i = 0; i < bump.size(); ++i) {
      const double s = S.grid().nodes[i][0];
      bump[i] = -(s - 0.25) * (s - 0.25);
    }
    lg.record(bump, 0.0, 0.0, 0.5);
    // U(s) = s - (s - 0.25)^2, maximized at s = 0.75 with value 0.5.
    CHECK(lg.sup_cumulative() == doctest::Approx(0.5).epsilon(1e-5));
  }

  TEST_CASE("drift sum accumulates eta-scaled squared norms") {
    const Domain S = Domain::interval(0.0, 1.0, 128);
    RegretLedger lg(S);
    lg.record_affine(aff1(2.0, -1.0), 0.0, 0.0, 0.5);  // ||u|| = 1, eta = 0.5
    lg.record_affine(aff1(2.0, -1.0), 0.0, 0.0, 0.25);
    // gamma_tilde_inv(eta ||u|| / 2) = eta ||u||, so each round adds
    // eta * ||u||^2.
    const double expect = 0.5 * 1.0 + 0.25 * 1.0;
    CHECK(lg.drift_sum(Potential::exponential()) == doctest::Approx(expect));

    // The generic bound is capacity / eta_t plus exactly this drift.
    const Schedule sch = Schedule::fixed(0.25);
    const double cap = 1.7;
    CHECK(bound_general_da(lg, Potential::exponential(), sch, cap, 2) ==
          doctest::Approx(cap / 0.25 + expect));
  }

  TEST_CASE("closed-form polynomial bound: frozen example") {
    // capacity 1, eta = 0.5, beta = 0.5, kappa = 1, C = 1/e, M = 2, t = 16:
    //   1/0.5 * 4 + (1/(1-0.5)) * (0.5 e / 2) * 4 * 4 = 8 + 21.74625462767236.
    const double b =
        bound_poly_closed(1.0, 0.5, 0.5, 1.0, 1.0 / std::exp(1.0), 2.0, 16);
    CHECK(b == doctest::Approx(29.74625462767236).epsilon(1e-12));
  }

  TEST_CASE("ball capacity for the entropy regularizer: frozen example") {
    const Regularity reg = Domain::interval(0.0, 1.0).regularity();
    // min(C0 v, 1) * f(1/(c0 v)) at v = 1/4: 0.5 * 4 log 4 / ... = 2 log 4.
    CHECK(ball_capacity(Potential::exponential(), reg, 0.25) ==
          doctest::Approx(0.5 * 4.0 * std::log(4.0)).epsilon(1e-12));
  }

  TEST_CASE("resolution-penalized bound decomposes as stated") {
    const Domain S = Domain::interval(0.0, 1.0, 512);
    RegretLedger lg(S);
    lg.record_affine(aff1(2.0, -1.0), 0.0, 0.0, 0.5);
    lg.record_affine(aff1(-2.0, 1.0), 0.0, 0.0, 0.5);
    const Potential pot = Potential::exponential();
    const Schedule sch = Schedule::fixed(0.5);
    const Regularity reg = S.regularity();
    const HoelderModulus chi{1.0, 2.0};
    const double v = 0.25;
    const int64_t t = 2;
    const double expect = ball_capacity(pot, reg, v) / (t * 0.5) + chi(v) +
                          lg.drift_sum(pot) / t;
    CHECK(bound_fdiv(lg, pot, sch, reg, chi, v, t) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(bound_fdiv(lg, pot, sch, reg, chi, reg.r0 * 2, t),
                    DomainError);

    // The scan minimizes over its own vartheta grid, which includes r0.
    const double scanned = bound_fdiv_scan(lg, pot, sch, reg, chi, t);
    CHECK(scanned <= bound_fdiv(lg, pot, sch, reg, chi, reg.r0, t) + 1e-12);
    CHECK(scanned > 0.0);
  }

  TEST_CASE("headline rates carry their advertised time shapes") {
    const Regularity reg = Domain::interval(0.0, 1.0).regularity();
    const HoelderModulus chi{1.0, 1.0};
    // Entropy: proportional to sqrt(log t / t).
    const double r1 = bound_entropy_rate(reg, 1.0, chi, 0.25, 1000) /
                      std::sqrt(std::log(1000.0) / 1000.0);
    const double r2 = bound_entropy_rate(reg, 1.0, chi, 0.25, 100000) /
                      std::sqrt(std::log(100000.0) / 100000.0);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-9));
    // Growth potentials: proportional to t^{-beta} with beta = 1/(2 + kappa).
    const Potential rho = Potential::rho_norm(1.5);
    const double beta = 1.0 / 2.5;
    const double g1 = bound_growth_rate(reg, rho, 1.0, chi, 0.25, 1000) *
                      std::pow(1000.0, beta);
    const double g2 = bound_growth_rate(reg, rho, 1.0, chi, 0.25, 100000) *
                      std::pow(100000.0, beta);
    CHECK(g1 == doctest::Approx(g2).epsilon(1e-9));
  }

  TEST_CASE("adversarial lower-bound curves: frozen examples") {
    CHECK(bound_lower_simple(1.0, 1.0, 1.0, 1.0, 8) == doctest::Approx(1.0));
    CHECK(bound_lower_rademacher(1.0, 1024) ==
          doctest::Approx(11.313708498984761).epsilon(1e-12));
  }

  TEST_CASE("rate fitting recovers exact power laws") {
    std::vector<std::pair<int64_t, double>> series;
    for (int k = 0; k < 40; ++k) {
      const int64_t t = static_cast<int64_t>(std::llround(10.0 * std::pow(1.25, k)));
      series.emplace_back(t, 3.0 / std::sqrt(static_cast<double>(t)));
    }
    CHECK(fit_rate(series, 10, 100000000) == doctest::Approx(-0.5).epsilon(1e-9));

    std::vector<std::pair<int64_t, double>> flat;
    for (int k = 1; k <= 20; ++k) flat.emplace_back(k * 10, 2.5);
    CHECK(fit_rate(flat, 1, 1000) == doctest::Approx(0.0));

    CHECK_THROWS_AS(fit_rate(series, 5, 12), DomainError);  // too few points
    std::vector<std::pair<int64_t, double>> bad = series;
    bad[5].second = 0.0;
    CHECK_THROWS_AS(fit_rate(bad, 10, 100000000), DomainError);
  }

  TEST_CASE("realized play concentrates around expected play") {
    const Domain S = Domain::interval(0.0, 1.0, 512);
    const Schedule sch = Schedule::entropy_tuned(S.regularity(), 1.0, 1.0);
    DensityState st(Potential::exponential(), S, sch, 1.0);
    RegretLedger lg(S);
    auto stream = make_rademacher_profile(S, 1.0, 1.0, 1.0, 2.0, Rng::keyed(61, 0));
    Rng play = Rng::keyed(61, 1);
    for (int t = 1; t <= 500; ++t) {
      const Point s = st.sample(play);
      const RewardFn u = stream->next();
      std::vector<double> u_nodes(S.grid().size());
      for (size_t i = 0; i < u_nodes.size(); ++i) u_nodes[i] = u(S.grid().nodes[i]);
      const double eta_before = st.eta();
      const double expected = st.expected_reward_nodes(u_nodes);
      lg.record(u_nodes, u(s), expected, eta_before);
      st.step(u, u_nodes);
    }
    // Azuma: the realized-minus-expected martingale stays within
    // 3 sqrt(2 log(2/0.01)) times its quadratic-variation scale.
    double qv = 0;
    for (const auto& r : lg.history()) qv += r.sup_abs_u * r.sup_abs_u;
    const double gap = std::abs(lg.sum_realized() - lg.sum_expected());
    CHECK(gap <= 3.0 * std::sqrt(2.0 * std::log(200.0)) * std::sqrt(qv));
  }
}
