// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <cmath>
#include <vector>

#include "contreg/potentials.hpp"
#include "doctest.h"

using namespace contreg;

TEST_SUITE("potentials") {
  TEST_CASE("exponential link evaluates exp(z-1)") {
    const Potential p = Potential::exponential();
    CHECK(p.phi(1.0) == doctest::Approx(1.0));
    CHECK(p.phi(0.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(p.phi(0.0) <= 1.0);  // link admissibility
    CHECK(p.phi(3.5) == doctest::Approx(std::exp(2.5)));
    CHECK(p.omega() == 0.0);
  }

  TEST_CASE("rho-norm link evaluates clipped power") {
    const Potential p = Potential::rho_norm(1.5);
    CHECK(p.phi(-2.0) == 0.0);
    CHECK(p.phi(0.0) == 0.0);
    CHECK(p.phi(2.0) == doctest::Approx(4.0));  // exponent 1/(rho-1) = 2
    CHECK(p.phi(0.0) <= 1.0);
    CHECK(p.omega() == 0.0);
  }

  TEST_CASE("link inverse round-trips") {
    const std::vector<Potential> pots = {
        Potential::exponential(), Potential::rho_norm(1.05),
        Potential::rho_norm(1.5), Potential::rho_norm(1.75),
        Potential::rho_norm(3.0)};
    for (const auto& p : pots) {
      for (double y = 0.1; y <= 10.0; y += 0.3)
        CHECK(p.phi(p.phi_inverse(y)) == doctest::Approx(y).epsilon(1e-10));
      for (double z = 0.05; z <= 5.0; z += 0.25)
        CHECK(p.phi_inverse(p.phi(z)) == doctest::Approx(z).epsilon(1e-10));
    }
  }

  TEST_CASE("pointwise regularizer matches closed forms") {
    const Potential e = Potential::exponential();
    CHECK(e.f(1.0) == doctest::Approx(0.0));
    CHECK(e.f(2.0) == doctest::Approx(2.0 * std::log(2.0)));
    CHECK(e.f(0.5) == doctest::Approx(0.5 * std::log(0.5)));

    const Potential r = Potential::rho_norm(1.5);
    CHECK(r.f(1.0) == doctest::Approx(0.0));
    CHECK(r.f(4.0) == doctest::Approx((std::pow(4.0, 1.5) - 1.0) / 1.5));
  }

  TEST_CASE("f_prime is the derivative of f") {
    const std::vector<Potential> pots = {Potential::exponential(),
                                         Potential::rho_norm(1.5),
                                         Potential::rho_norm(1.75)};
    const double h = 1e-6;
    for (const auto& p : pots) {
      for (double x = 0.1; x <= 10.0; x += 0.37) {
        const double num = (p.f(x + h) - p.f(x - h)) / (2 * h);
        CHECK(p.f_prime(x) == doctest::Approx(num).epsilon(1e-5));
      }
    }
  }

  TEST_CASE("growth certificate f(x) <= C x^(1+kappa) for x >= 1") {
    for (const auto& p : {Potential::exponential(), Potential::rho_norm(1.05),
                          Potential::rho_norm(1.5), Potential::rho_norm(1.75)}) {
      const double kappa = p.growth_kappa();
      const double C = p.growth_c();
      for (double lx = 0.0; lx <= std::log(1000.0); lx += 0.05) {
        const double x = std::exp(lx);
        CHECK(p.f(x) <= C * std::pow(x, 1.0 + kappa) + 1e-12);
      }
    }
    // Known certificate constants.
    CHECK(Potential::exponential().growth_kappa() == doctest::Approx(1.0));
    CHECK(Potential::exponential().growth_c() == doctest::Approx(1.0 / std::exp(1.0)));
    CHECK(Potential::rho_norm(1.5).growth_kappa() == doctest::Approx(0.5));
    CHECK(Potential::rho_norm(1.5).growth_c() == doctest::Approx(1.0 / 1.5));
  }

  TEST_CASE("convexity modulus and its inverse") {
    const Potential p = Potential::exponential();
    CHECK(p.gamma(0.4) == doctest::Approx(0.08));
    CHECK(p.gamma_tilde_inv(p.gamma(0.4)) == doctest::Approx(0.16));
  }

  TEST_CASE("parse and config strings") {
    CHECK(Potential::parse("exp").kind() == PotentialKind::Exponential);
    const Potential r = Potential::parse("rho:1.75");
    CHECK(r.kind() == PotentialKind::RhoNorm);
    CHECK(r.rho() == doctest::Approx(1.75));
    CHECK(Potential::parse(Potential::rho_norm(1.5).config_string()).rho() ==
          doctest::Approx(1.5));
    CHECK_THROWS_AS(Potential::parse("banana"), ConfigError);
    CHECK_THROWS_AS(Potential::rho_norm(1.0), ConfigError);
    CHECK_THROWS_AS(Potential::rho_norm(0.5), ConfigError);
  }
}
