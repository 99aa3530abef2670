// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <cmath>
#include <vector>

#include "contreg/baselines.hpp"
#include "contreg/regret.hpp"
#include "doctest.h"

using namespace contreg;

namespace {

Point pt2(double x, double y) {
  Point p(2);
  p[0] = x;
  p[1] = y;
  return p;
}

std::vector<double> nodes_of(const Domain& S, const RewardFn& u) {
  std::vector<double> v(S.grid().size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = u(S.grid().nodes[i]);
  return v;
}

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("greedy argmax breaks ties toward the lowest node index") {
    const Domain S = Domain::interval(0.0, 1.0, 64);
    std::vector<double> U(S.grid().size(), 0.0);
    CHECK(greedy_step(U, S) == S.grid().nodes[0]);
    U[10] = 1.0;
    U[20] = 1.0;
    CHECK(greedy_step(U, S) == S.grid().nodes[10]);
  }

  TEST_CASE("greedy chases the previous argmax on the alternating stream") {
    const Domain S = Domain::hypercube(2, 0.5, 50);
    auto stream = make_alternating_affine(S, 5.0);
    auto greedy = make_greedy(S);
    // Round 1: zero profile, lowest-index node (the lower-left corner cell).
    CHECK(greedy->current()[0] == doctest::Approx(-0.49));
    const RewardFn u1 = stream->next();
    greedy->absorb(u1, nodes_of(S, u1));
    // Cumulative slope is negative, so the argmax pins to the left face.
    CHECK(greedy->current()[0] == doctest::Approx(-0.49));
    const RewardFn u2 = stream->next();  // slope +5
    greedy->absorb(u2, nodes_of(S, u2));
    CHECK(greedy->current()[0] == doctest::Approx(0.49));
    const RewardFn u3 = stream->next();  // slope -5
    greedy->absorb(u3, nodes_of(S, u3));
    CHECK(greedy->current()[0] == doctest::Approx(-0.49));
  }

  TEST_CASE("projected-gradient step: frozen example") {
    const Domain S = Domain::hypercube(2, 0.5, 16);
    const Point next = gp_step(pt2(0.4, 0.0), pt2(0.4, 0.0), 0.5, S);
    CHECK(next[0] == doctest::Approx(0.2));
    CHECK(next[1] == doctest::Approx(0.0));
    // Projection clamps to the box.
    const Point clamped = gp_step(pt2(0.4, 0.0), pt2(-4.0, 0.0), 0.5, S);
    CHECK(clamped[0] == doctest::Approx(0.5));
  }

  TEST_CASE("second-order surrogate step: frozen example") {
    const Domain S = Domain::hypercube(2, 0.5, 16);
    FtalState st(2);
    const Point next = ftal_step(st, pt2(1.0, 0.0), pt2(0.0, 0.0), 1.0, S);
    CHECK(next[0] == doctest::Approx(-0.5));
    CHECK(next[1] == doctest::Approx(0.0));  // Euclidean tie-break on the flat axis
    // Zero gradients leave the iterate unchanged.
    const Point same = ftal_step(st, pt2(0.0, 0.0), pt2(0.3, 0.1), 1.0, S);
    CHECK(same[0] == doctest::Approx(0.3));
    CHECK(same[1] == doctest::Approx(0.1));
  }

  TEST_CASE("exponential-weights mean: uniform center and sharpening") {
    const Domain S = Domain::hypercube(2, 0.5, 64);
    const std::vector<double> zero(S.grid().size(), 0.0);
    const Point center = ewoo_step(zero, 1.0, S);
    CHECK(std::abs(center[0]) < 1e-12);
    CHECK(std::abs(center[1]) < 1e-12);

    // Quadratic loss centered at (0.3, 0.2): larger concentration pulls the
    // mean monotonically toward the minimizer.
    std::vector<double> L(S.grid().size());
    for (size_t i = 0; i < L.size(); ++i) {
      const Point& p = S.grid().nodes[i];
      L[i] = (p[0] - 0.3) * (p[0] - 0.3) + (p[1] - 0.2) * (p[1] - 0.2);
    }
    double prev = 10.0;
    for (double alpha : {0.5, 2.0, 8.0, 32.0}) {
      const Point m = ewoo_step(L, alpha, S);
      const double d = std::hypot(m[0] - 0.3, m[1] - 0.2);
      CHECK(d < prev + 1e-12);
      prev = d;
    }
  }

  TEST_CASE("baseline construction enforces declared stream structure") {
    const Domain S = Domain::hypercube(2, 0.5, 32);
    StreamTags affine_tags;  // alternating-affine style: no curvature
    affine_tags.affine = true;
    affine_tags.convex_loss = true;
    affine_tags.grad_bound_G = 5.0;
    CHECK(make_baseline("greedy", S, affine_tags) != nullptr);
    CHECK(make_baseline("gp", S, affine_tags) != nullptr);
    CHECK_THROWS_AS(make_baseline("ogd", S, affine_tags), ConfigError);
    CHECK_THROWS_AS(make_baseline("ewoo", S, affine_tags), ConfigError);
    CHECK_THROWS_AS(make_baseline("ftal", S, affine_tags), ConfigError);
    CHECK_THROWS_AS(make_baseline("sgd", S, affine_tags), ConfigError);

    StreamTags quad_tags = affine_tags;
    quad_tags.affine = false;
    quad_tags.strong_convexity_H = 0.4;
    quad_tags.exp_concavity_alpha = 0.016;
    CHECK(make_baseline("ogd", S, quad_tags) != nullptr);
    CHECK(make_baseline("ewoo", S, quad_tags) != nullptr);
    CHECK(make_baseline("ftal", S, quad_tags) != nullptr);
  }

  TEST_CASE("per-round guarantee formulas: frozen examples") {
    CHECK(baseline_bound_gp(1.0, 2.0, 4) == doctest::Approx(1.75));
    CHECK(baseline_bound_ogd(1.0, 2.0, 1) == doctest::Approx(2.0));
    CHECK(baseline_bound_ftal(2, 0.5, 2.0, 1.0, 1) == doctest::Approx(512.0));
    CHECK(baseline_bound_ewoo(2, 0.5, 1) ==
          doctest::Approx(4.0 * (1.0 + std::log(2.0))));
  }

  TEST_CASE("strongly-convex gradient descent meets its guarantee each round") {
    const Domain S = Domain::hypercube(2, 0.5, 64);
    auto stream = make_random_quadratic(S, 400, Rng::keyed(71, 0));
    const StreamTags tags = stream->tags();
    auto ogd = make_ogd_strongly_convex(S, tags);
    auto ftal = make_ftal(S, tags);
    RegretLedger lg_ogd(S), lg_ftal(S);
    FtalState spectrum_probe(2);
    for (int t = 1; t <= 400; ++t) {
      const RewardFn u = stream->next();
      const auto u_nodes = nodes_of(S, u);
      const Point s_ogd = ogd->current();
      const Point s_ftal = ftal->current();
      lg_ogd.record(u_nodes, u(s_ogd), u(s_ogd), 0.0);
      lg_ftal.record(u_nodes, u(s_ftal), u(s_ftal), 0.0);
      ogd->absorb(u, u_nodes);
      ftal->absorb(u, u_nodes);
      Point g = u.gradient(s_ftal);
      for (int i = 0; i < 2; ++i) g[i] = -g[i];  // loss gradient
      ftal_step(spectrum_probe, g, s_ftal, 0.05, S);

      const double D = std::sqrt(2.0) * 0.5 * 2.0;
      CHECK(lg_ogd.worst_case_realized() / t <=
            baseline_bound_ogd(tags.strong_convexity_H, tags.grad_bound_G, t) +
                1e-9);
      CHECK(lg_ftal.worst_case_realized() / t <=
            baseline_bound_ftal(2, tags.exp_concavity_alpha, tags.grad_bound_G,
                                D, t) +
                1e-9);
      // Accumulated curvature stays positive semidefinite.
      CHECK(spectrum_probe.eigenvalues()[0] >= -1e-10);
    }
  }

  TEST_CASE("all baselines stay inside the domain on a long run") {
    const Domain S = Domain::hypercube(2, 0.5, 48);
    auto stream = make_random_quadratic(S, 200, Rng::keyed(83, 0));
    const StreamTags tags = stream->tags();
    std::vector<std::unique_ptr<Baseline>> bs;
    for (const char* n : {"greedy", "gp", "ogd", "ewoo", "ftal"})
      bs.push_back(make_baseline(n, S, tags));
    for (int t = 1; t <= 200; ++t) {
      const RewardFn u = stream->next();
      const auto u_nodes = nodes_of(S, u);
      for (auto& b : bs) {
        CHECK(S.contains(b->current()));
        b->absorb(u, u_nodes);
      }
    }
  }
}
