// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <cmath>
#include <vector>

#include "contreg/domains.hpp"
#include "contreg/rng.hpp"
#include "doctest.h"

using namespace contreg;

namespace {

Point pt(double x) {
  Point p(1);
  p[0] = x;
  return p;
}

Point pt(double x, double y) {
  Point p(2);
  p[0] = x;
  p[1] = y;
  return p;
}

// Monte-Carlo check of the measure-of-balls sandwich c0 r^Q <= mu(B(s,r))
// <= C0 r^Q on random centers and radii, with 3-sigma slack.
void check_regular(const Domain& S, int centers, int n_mc, uint64_t seed) {
  const Regularity reg = S.regularity();
  Rng rng = Rng::keyed(seed, 0);
  for (int c = 0; c < centers; ++c) {
    const Point s = S.sample_uniform(rng);
    const double r = reg.r0 * (0.15 + 0.85 * rng.uniform01());
    int hits = 0;
    for (int i = 0; i < n_mc; ++i)
      if (S.distance(s, S.sample_uniform(rng)) <= r) ++hits;
    const double p = static_cast<double>(hits) / n_mc;
    const double sigma = std::sqrt(std::max(p * (1 - p), 1e-6) / n_mc);
    CHECK(p >= reg.c0 * std::pow(r, reg.Q) - 3 * sigma);
    CHECK(p <= reg.C0 * std::pow(r, reg.Q) + 3 * sigma);
  }
}

}  // namespace

TEST_SUITE("domains") {
  TEST_CASE("interval basics") {
    const Domain S = Domain::interval(0.0, 1.0);
    CHECK(S.dim() == 1);
    CHECK(S.diameter() == doctest::Approx(1.0));
    CHECK(S.contains(pt(0.0)));
    CHECK(S.contains(pt(1.0)));
    CHECK(!S.contains(pt(1.0 + 1e-9)));
    CHECK_THROWS_AS(S.require_member(pt(-0.5)), MembershipError);
    CHECK(S.project(pt(2.0))[0] == doctest::Approx(1.0));
    CHECK(S.project(pt(-2.0))[0] == doctest::Approx(0.0));
    CHECK(S.distance(pt(0.25), pt(0.875)) == doctest::Approx(0.625));
    const auto [a, b] = S.diameter_endpoints();
    CHECK(S.distance(a, b) == doctest::Approx(S.diameter()));
  }

  TEST_CASE("interval regularity constants") {
    const Regularity r01 = Domain::interval(0.0, 1.0).regularity();
    CHECK(r01.Q == doctest::Approx(1.0));
    CHECK(r01.c0 == doctest::Approx(1.0));
    CHECK(r01.C0 == doctest::Approx(2.0));
    CHECK(r01.r0 == doctest::Approx(0.5));

    const Regularity r25 = Domain::interval(2.0, 5.0).regularity();
    CHECK(r25.c0 == doctest::Approx(1.0 / 3.0));
    CHECK(r25.C0 == doctest::Approx(2.0 / 3.0));
    CHECK(r25.r0 == doctest::Approx(1.5));

    const Regularity raw = Domain::interval(2.0, 5.0).regularity_raw();
    CHECK(raw.c0 == doctest::Approx(1.0));
    CHECK(raw.C0 == doctest::Approx(2.0));
  }

  TEST_CASE("quadrature integrates and refines") {
    const Domain S = Domain::interval(0.0, 1.0, 256);
    const double exact = 1.0 - std::cos(1.0);
    const double i256 = S.integrate([](const Point& s) { return std::sin(s[0]); });
    const double i1024 =
        S.with_grid(1024).integrate([](const Point& s) { return std::sin(s[0]); });
    CHECK(std::abs(i256 - exact) < 2e-6);
    CHECK(std::abs(i1024 - exact) < 2e-7);
    // Midpoint rule is second order: refining 4x gains ~16x.
    CHECK(std::abs(i1024 - exact) * 8 < std::abs(i256 - exact));

    double wsum = 0;
    for (double w : S.grid().weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("integrate_nodes matches integrate") {
    const Domain S = Domain::hypercube(2, 0.5, 32);
    std::vector<double> vals(S.grid().size());
    for (size_t i = 0; i < vals.size(); ++i) {
      const Point& p = S.grid().nodes[i];
      vals[i] = p[0] * p[0] + 0.3 * p[1];
    }
    const double a = S.integrate_nodes(vals);
    const double b =
        S.integrate([](const Point& p) { return p[0] * p[0] + 0.3 * p[1]; });
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }

  TEST_CASE("hypercube basics") {
    const Domain S = Domain::hypercube(2, 0.5);
    CHECK(S.dim() == 2);
    CHECK(S.diameter() == doctest::Approx(std::sqrt(2.0)));
    CHECK(S.contains(pt(0.5, -0.5)));
    CHECK(!S.contains(pt(0.51, 0.0)));
    const Point pr = S.project(pt(3.0, -0.2));
    CHECK(pr[0] == doctest::Approx(0.5));
    CHECK(pr[1] == doctest::Approx(-0.2));
    const Regularity reg = S.regularity();
    CHECK(reg.Q == doctest::Approx(2.0));
    // Unit area, so raw and normalized constants coincide.
    CHECK(reg.c0 == doctest::Approx(M_PI / 4.0));
    CHECK(reg.C0 == doctest::Approx(M_PI));
    CHECK(reg.r0 == doctest::Approx(0.5));
  }

  TEST_CASE("regularity sandwich holds empirically") {
    check_regular(Domain::interval(0.0, 1.0, 512), 8, 4000, 11);
    check_regular(Domain::hypercube(2, 0.5, 64), 8, 4000, 12);
    check_regular(Domain::lshape(60), 6, 4000, 13);
  }

  TEST_CASE("lshape geometry") {
    const Domain S = Domain::lshape();
    CHECK(S.dim() == 2);
    CHECK(S.contains(pt(0.2, 0.2)));
    CHECK(S.contains(pt(1.5, 1.5)));
    CHECK(!S.contains(pt(0.7, 0.7)));  // inside the hole
    CHECK(S.contains(pt(0.4, 0.7)));   // hole boundary belongs to the set
    CHECK_THROWS_AS(S.project(pt(0.7, 0.7)), UnsupportedError);

    // Straight-line visible pair: Euclidean distance.
    CHECK(S.distance(pt(0.1, 0.1), pt(0.3, 0.3)) ==
          doctest::Approx(std::sqrt(0.08)));
    // Pair blocked by the hole: shortest path bends around a hole corner.
    CHECK(S.distance(pt(0.2, 0.2), pt(1.2, 1.2)) ==
          doctest::Approx(1.6492422502470643));
    CHECK(S.diameter() == doctest::Approx(2.9638291878382215));
    const auto [a, b] = S.diameter_endpoints();
    CHECK(S.distance(a, b) == doctest::Approx(S.diameter()));
  }

  TEST_CASE("lshape metric axioms on random triples") {
    const Domain S = Domain::lshape(80);
    Rng rng = Rng::keyed(21, 0);
    for (int i = 0; i < 150; ++i) {
      const Point a = S.sample_uniform(rng);
      const Point b = S.sample_uniform(rng);
      const Point c = S.sample_uniform(rng);
      const double ab = S.distance(a, b);
      CHECK(ab == doctest::Approx(S.distance(b, a)).epsilon(1e-12));
      CHECK(ab <= S.distance(a, c) + S.distance(c, b) + 1e-9);
      // Geodesic dominates the straight-line distance.
      CHECK(ab + 1e-12 >= norm2(a - b));
      CHECK(S.distance(a, a) == 0.0);
    }
  }

  TEST_CASE("lshape grid mass and midpoint nodes") {
    const Domain S = Domain::lshape(250);
    const Grid& g = S.grid();
    CHECK(g.size() == 56875);  // 250^2 minus the 75x75 masked block
    CHECK(g.raw_total == doctest::Approx(3.64).epsilon(1e-12));
    for (size_t i = 0; i < g.size(); i += 997) CHECK(S.contains(g.nodes[i]));
  }

  TEST_CASE("uniform sampling stays inside and centers correctly") {
    const Domain S = Domain::lshape(100);
    Rng rng = Rng::keyed(31, 0);
    double mx = 0, my = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const Point p = S.sample_uniform(rng);
      CHECK(S.contains(p));
      mx += p[0] / n;
      my += p[1] / n;
    }
    // Uniform mean on the L-shape: (4 - 0.42*0.6) / 3.64 per axis by symmetry.
    const double expect = (4.0 - 0.252) / 3.64;
    const double sigma3 = 3 * 0.6 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mx - expect) < sigma3);
    CHECK(std::abs(my - expect) < sigma3);
  }

  TEST_CASE("parse round trips and rejects junk") {
    CHECK(Domain::parse("interval:lo=2,hi=5").diameter() == doctest::Approx(3.0));
    CHECK(Domain::parse("hypercube:n=3,w=0.5").dim() == 3);
    CHECK(Domain::parse("lshape:m=50").grid().size() > 0);
    CHECK_THROWS_AS(Domain::parse("torus"), ConfigError);
  }
}
