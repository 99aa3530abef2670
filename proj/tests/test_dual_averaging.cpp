// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <cmath>
#include <vector>

#include "contreg/dual_averaging.hpp"
#include "doctest.h"

using namespace contreg;

namespace {

Point pt1(double x) {
  Point p(1);
  p[0] = x;
  return p;
}

std::vector<double> node_values(const Domain& S,
                                const std::function<double(const Point&)>& f) {
  std::vector<double> v(S.grid().size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = f(S.grid().nodes[i]);
  return v;
}

}  // namespace

TEST_SUITE("dual_averaging") {
  TEST_CASE("multiplier for a linear profile matches the analytic value") {
    // For U(s) = s on [0,1] with eta = 1 and the exponential link, the
    // normalized density is e^{s + nu - 1} with nu = 1 - log(e - 1).
    const Domain S = Domain::interval(0.0, 1.0, 4096);
    const auto U = node_values(S, [](const Point& p) { return p[0]; });
    const SolverReport rep =
        solve_nu_star(Potential::exponential(), S, U, 1.0);
    CHECK(rep.nu == doctest::Approx(0.458675145387082).epsilon(1e-7));
    CHECK(rep.residual <= 1e-10);

    const EntropyClosedForm cf = entropy_closed_form(S, U, 1.0);
    CHECK(cf.nu == doctest::Approx(rep.nu).epsilon(1e-10));
    // Density endpoints e^{nu-1} = 1/(e-1) and e^{nu} = e/(e-1); the first
    // and last grid nodes sit half a cell inside, hence the loose tolerance.
    CHECK(cf.density.front() ==
          doctest::Approx(0.5819767068693265).epsilon(5e-4));
    CHECK(cf.density.back() ==
          doctest::Approx(1.5819767068693265).epsilon(5e-4));
    CHECK(S.integrate_nodes(cf.density) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("iterative solve agrees with the closed form on random profiles") {
    const Domain S = Domain::interval(0.0, 1.0, 512);
    Rng rng = Rng::keyed(17, 0);
    for (int k = 0; k < 10; ++k) {
      std::vector<double> U(S.grid().size());
      for (double& v : U) v = rng.uniform(-2.0, 2.0);
      const double eta = rng.uniform(0.05, 3.0);
      const SolverReport rep = solve_nu_star(Potential::exponential(), S, U, eta);
      const EntropyClosedForm cf = entropy_closed_form(S, U, eta);
      CHECK(rep.nu == doctest::Approx(cf.nu).epsilon(1e-9));
      for (size_t i = 0; i < U.size(); i += 37) {
        const double d = Potential::exponential().phi(eta * (U[i] + rep.nu));
        CHECK(d == doctest::Approx(cf.density[i]).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("zero profile yields the uniform density for both links") {
    const Domain S = Domain::interval(0.0, 1.0, 256);
    const std::vector<double> U(S.grid().size(), 0.0);
    for (const auto& pot :
         {Potential::exponential(), Potential::rho_norm(1.5)}) {
      const SolverReport rep = solve_nu_star(pot, S, U, 2.0);
      // phi(eta nu) = 1 at the root, so nu = phi^{-1}(1) / eta = 1/2.
      CHECK(rep.nu == doctest::Approx(0.5).epsilon(1e-9));
      CHECK(pot.phi(2.0 * rep.nu) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("constant shifts move the multiplier, not the density") {
    const Domain S = Domain::interval(0.0, 1.0, 512);
    const auto U = node_values(S, [](const Point& p) { return std::sin(5 * p[0]); });
    auto shifted = U;
    for (double& v : shifted) v += 3.25;
    for (const auto& pot :
         {Potential::exponential(), Potential::rho_norm(1.5)}) {
      const SolverReport a = solve_nu_star(pot, S, U, 0.8);
      const SolverReport b = solve_nu_star(pot, S, shifted, 0.8);
      CHECK(b.nu == doctest::Approx(a.nu - 3.25).epsilon(1e-8));
      CHECK(pot.phi(0.8 * (U[100] + a.nu)) ==
            doctest::Approx(pot.phi(0.8 * (shifted[100] + b.nu))).epsilon(1e-8));
    }
  }

  TEST_CASE("published warm-start interval: frozen example") {
    const Schedule sch = Schedule::poly(1.0, 0.5);
    const auto [lo, hi] =
        warm_start_interval(3.0, sch.at(100), sch.at(101), 1.0, 100);
    CHECK(lo == doctest::Approx(2.0149626863362666).epsilon(1e-12));
    CHECK(hi == doctest::Approx(3.5137188975451616).epsilon(1e-12));
    // A constant learning rate pins the interval to [nu - M, nu + 0].
    const auto [clo, chi] = warm_start_interval(3.0, 0.2, 0.2, 1.0, 50);
    CHECK(clo == doctest::Approx(2.0));
    CHECK(chi == doctest::Approx(3.0));
  }

  TEST_CASE("warm-start interval contains the next multiplier on a stream") {
    const Domain S = Domain::interval(0.0, 1.0, 512);
    const Schedule sch =
        Schedule::entropy_tuned(S.regularity(), 1.0, 1.0);
    DensityState st(Potential::exponential(), S, sch, 1.0);
    Rng rng = Rng::keyed(23, 0);
    for (int t = 1; t <= 300; ++t) {
      const double amp = rng.uniform(0.1, 1.0);
      const double freq = rng.uniform(1.0, 9.0);
      const double phase = rng.uniform(0.0, 6.28);
      // Nonnegative bounded reward, evaluated in grid mode.
      const RewardFn u = RewardFn::generic([=](const Point& p) {
        return amp * 0.5 * (1.0 + std::sin(freq * p[0] + phase));
      });
      const StepInfo& info = st.step(u);
      CHECK(!info.fast_path);
      CHECK(info.solver.nu >= info.warm_interval.first - 1e-12);
      CHECK(info.solver.nu <= info.warm_interval.second + 1e-12);
    }
  }

  TEST_CASE("closed-form affine engine matches the grid engine") {
    const Domain S = Domain::interval(0.0, 1.0, 2048);
    const Schedule sch = Schedule::poly(0.7, 0.5);
    for (const auto& pot :
         {Potential::exponential(), Potential::rho_norm(1.5)}) {
      DensityState fast(pot, S, sch, 2.0);
      DensityState grid(pot, S, sch, 2.0);
      Rng rng = Rng::keyed(41, 0);
      for (int t = 1; t <= 25; ++t) {
        AffineForm a;
        a.g = pt1(rng.uniform(-1.5, 1.5));
        a.b = rng.uniform(-0.5, 0.5);
        const auto wrapped = [a](const Point& p) { return a(p); };
        fast.step(RewardFn::affine(a));
        grid.step(RewardFn::generic(wrapped));
        CHECK(fast.on_fast_path());
        CHECK(!grid.on_fast_path());
        CHECK(std::abs(fast.nu() - grid.nu()) < 1e-5);
        for (double x : {0.05, 0.37, 0.92})
          CHECK(std::abs(fast.density_at(pt1(x)) - grid.density_at(pt1(x))) <
                1e-4);
        AffineForm probe;
        probe.g = pt1(0.8);
        probe.b = 0.1;
        CHECK(std::abs(fast.expected_reward(RewardFn::affine(probe)) -
                       grid.expected_reward(RewardFn::affine(probe))) < 1e-5);
      }
      CHECK(fast.cumulative_affine().has_value());
      CHECK(!grid.cumulative_affine().has_value());
    }
  }

  TEST_CASE("expected reward of an affine probe matches quadrature") {
    const Domain S = Domain::interval(0.0, 1.0, 4096);
    DensityState st(Potential::exponential(), S, Schedule::fixed(0.9), 1.0);
    AffineForm a;
    a.g = pt1(1.3);
    a.b = -0.2;
    st.step(RewardFn::affine(a));
    AffineForm probe;
    probe.g = pt1(-0.6);
    probe.b = 0.4;
    const double closed = st.expected_reward(RewardFn::affine(probe));
    const double quad = S.integrate([&](const Point& p) {
      return st.density_at(p) * (probe(p));
    });
    CHECK(closed == doctest::Approx(quad).epsilon(1e-7));
  }

  TEST_CASE("density mass stays normalized along a run") {
    const Domain S = Domain::interval(0.0, 1.0, 1024);
    for (const auto& pot :
         {Potential::exponential(), Potential::rho_norm(1.5)}) {
      DensityState st(pot, S, Schedule::poly(1.0, 0.5), 2.0);
      Rng rng = Rng::keyed(53, 0);
      for (int t = 1; t <= 10; ++t) {
        AffineForm a;
        a.g = pt1(rng.uniform(-2.0, 2.0));
        a.b = 0.0;
        st.step(RewardFn::affine(a));
        CHECK(S.integrate_nodes(st.density_nodes()) ==
              doctest::Approx(1.0).epsilon(1e-4));
      }
    }
  }

  TEST_CASE("sampling follows the tilt and is reproducible") {
    const Domain S = Domain::interval(0.0, 1.0, 512);
    DensityState st(Potential::exponential(), S, Schedule::fixed(1.0), 5.0);
    AffineForm a;
    a.g = pt1(5.0);
    a.b = 0.0;
    st.step(RewardFn::affine(a));

    Rng r1 = Rng::keyed(99, 0);
    Rng r2 = Rng::keyed(99, 0);
    double mean = 0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
      const Point s = st.sample(r1);
      CHECK(S.contains(s));
      CHECK(st.sample(r2) == s);  // same key, same draw
      mean += s[0] / n;
    }
    // Density ~ e^{5s}: mean = 1 - 1/5 + 1/(1-e^5) ~ 0.8067.
    const double expect = 1.0 - 0.2 + 1.0 / (1.0 - std::exp(5.0));
    CHECK(std::abs(mean - expect) < 3.0 * 0.17 / std::sqrt(n));
  }

  TEST_CASE("grid sampler handles a sharply concentrated density") {
    const Domain S = Domain::lshape(60);
    DensityState st(Potential::exponential(), S, Schedule::fixed(40.0), 3.0);
    // Strong pull toward the far corner (2,2) through the generic engine.
    const RewardFn u = RewardFn::generic(
        [](const Point& p) { return p[0] + p[1]; });
    st.step(u);
    st.step(u);
    Rng rng = Rng::keyed(3, 0);
    double m0 = 0, m1 = 0;
    const int n = 800;
    for (int i = 0; i < n; ++i) {
      const Point s = st.sample(rng);
      CHECK(S.contains(s));
      m0 += s[0] / n;
      m1 += s[1] / n;
    }
    CHECK(m0 > 1.9);
    CHECK(m1 > 1.9);
  }

  TEST_CASE("stale multiplier is refused until the next step") {
    const Domain S = Domain::interval(0.0, 1.0, 256);
    DensityState st(Potential::exponential(), S, Schedule::poly(1.0, 0.5), 1.0);
    AffineForm a;
    a.g = pt1(0.4);
    a.b = 0.0;
    st.step(RewardFn::affine(a));
    st.debug_invalidate_nu();
    CHECK_THROWS_AS(st.nu(), StateError);
    CHECK_THROWS_AS(st.density_at(pt1(0.5)), StateError);
    Rng rng = Rng::keyed(1, 0);
    CHECK_THROWS_AS(st.sample(rng), StateError);
    st.step(RewardFn::affine(a));
    CHECK(st.nu() == st.nu());  // valid again
  }

  TEST_CASE("step bookkeeping reports rounds and learning rates") {
    const Domain S = Domain::interval(0.0, 1.0, 256);
    const Schedule sch = Schedule::poly(2.0, 0.5);
    DensityState st(Potential::exponential(), S, sch, 1.0);
    CHECK(st.round() == 0);
    CHECK(st.eta() == doctest::Approx(sch.at(1)));  // eta_0 := eta_1
    AffineForm a;
    a.g = pt1(1.0);
    a.b = 0.0;
    const StepInfo& i1 = st.step(RewardFn::affine(a));
    CHECK(i1.t == 1);
    CHECK(i1.eta_before == doctest::Approx(sch.at(1)));
    CHECK(i1.eta_after == doctest::Approx(sch.at(1)));
    const StepInfo& i2 = st.step(RewardFn::affine(a));
    CHECK(i2.t == 2);
    CHECK(i2.eta_after == doctest::Approx(sch.at(2)));
    CHECK(st.round() == 2);
  }

  TEST_CASE("scaled profiles concentrate mass near the maximizer") {
    const Domain S = Domain::interval(0.0, 1.0, 2048);
    const auto U = [](const Point& p) {
      return -(p[0] - 0.3) * (p[0] - 0.3);
    };
    const double m100 =
        consistency_probe(Potential::exponential(), S, U, 100.0, 0.2);
    const double m2000 =
        consistency_probe(Potential::exponential(), S, U, 2000.0, 0.2);
    CHECK(m100 > 0.9);
    CHECK(m2000 > m100 - 1e-9);
    const double rho_m =
        consistency_probe(Potential::rho_norm(1.5), S, U, 2000.0, 0.2);
    CHECK(rho_m > 0.99);
  }
}
