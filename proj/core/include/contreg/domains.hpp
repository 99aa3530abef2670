// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contreg/common.hpp"
#include "contreg/rng.hpp"

namespace contreg {

// Doubling/regularity certificate for the normalized measure:
//   c0 * r^Q <= mu(B(s,r)) <= C0 * r^Q  for all s in S, r <= r0.
struct Regularity {
  double Q = 1;
  double c0 = 1;
  double C0 = 1;
  double r0 = 0.5;
};

// Midpoint quadrature grid over S. Nodes carry normalized weights
// (sum = 1, uniform over unmasked cells); raw_total is the unnormalized
// measure of S so raw integrals are raw_total * normalized integral.
struct Grid {
  int dim = 1;
  std::array<int, kMaxDim> m{1, 1, 1};    // cells per axis
  std::array<double, kMaxDim> lo{0, 0, 0};
  std::array<double, kMaxDim> step{0, 0, 0};
  std::vector<Point> nodes;               // cell midpoints, masked cells removed
  std::vector<double> weights;            // normalized, sum to 1 within 1e-12
  double raw_total = 1.0;
  double cell_diameter = 0.0;             // diam of one cell
  // Maps flattened (i + m0*(j + m1*k)) cell index to node index, -1 if masked.
  std::vector<int> cell_to_node;

  size_t size() const { return nodes.size(); }
};

class DomainImpl;

enum class DomainKind { Interval, Hypercube, LShape };

// Compact metric probability space (S, d, mu): ground set, geodesic metric,
// normalized reference measure, quadrature grid, and regularity constants.
//
// Built-ins:
//   Interval(lo, hi)        : [lo,hi], Euclidean metric.
//   Hypercube(n, w)         : [-w,w]^n, Euclidean metric, n <= 3.
//   LShape()                : [0,2]^2 minus the open square (0.4,1)^2,
//                             geodesic (shortest-path) metric around the hole.
class Domain {
 public:
  static Domain interval(double lo, double hi, int grid_m = 4096);
  static Domain hypercube(int n, double half_width, int grid_m_per_axis = 256);
  static Domain lshape(int grid_m_per_axis = 250);
  // "interval:lo=0,hi=1" | "hypercube:n=2,w=0.5" | "lshape"; optional ",m=<k>".
  static Domain parse(std::string_view config);

  DomainKind kind() const;
  int dim() const;
  std::string config_string() const;

  bool contains(const Point& s) const;
  // Throws MembershipError with the offending point formatted in.
  void require_member(const Point& s) const;

  // Geodesic distance; both arguments must be members.
  double distance(const Point& a, const Point& b) const;
  double diameter() const;
  // A pair realizing the diameter (used by adversarial reward construction).
  std::pair<Point, Point> diameter_endpoints() const;

  // Euclidean projection onto S. Throws UnsupportedError for non-convex S.
  Point project(const Point& s) const;

  Point sample_uniform(Rng& rng) const;

  const Grid& grid() const;
  // Quadrature of f against the normalized measure. Throws NumericError if a
  // node value is non-finite (message names the node).
  double integrate(const std::function<double(const Point&)>& f) const;
  // Same but with precomputed node values (size must match grid().size()).
  double integrate_nodes(const std::vector<double>& node_values) const;

  Regularity regularity() const;       // for the normalized measure
  Regularity regularity_raw() const;   // for the raw (Lebesgue-like) measure

  // Axis-aligned bounding box; for Interval/Hypercube this is S itself.
  bool is_box() const;
  Point box_lo() const;
  Point box_hi() const;

  // Rebuild with a different grid resolution (same ground set).
  Domain with_grid(int m_per_axis) const;

 private:
  explicit Domain(std::shared_ptr<const DomainImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const DomainImpl> impl_;
};

}  // namespace contreg
