// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/domains.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>
#include <map>

namespace contreg {

namespace {

constexpr double kHoleLo = 0.4;
constexpr double kHoleHi = 1.0;
constexpr double kOuter = 2.0;
constexpr double kLShapeArea = 4.0 - 0.36;  // 3.64

// Unit-ball volumes for n = 1..3.
constexpr double kBallVol[4] = {0, 2.0, M_PI, 4.0 * M_PI / 3.0};

bool in_open_hole(double x, double y) {
  return x > kHoleLo && x < kHoleHi && y > kHoleLo && y < kHoleHi;
}

// True if the open segment a-b meets the open hole interior (Liang-Barsky
// clip to the closed square, then an open-interior midpoint test so paths
// running along the hole boundary count as clear).
bool segment_blocked(const Point& a, const Point& b) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      if (r > t0) t0 = r;
    } else {
      if (r < t0) return false;
      if (r < t1) t1 = r;
    }
    return true;
  };
  if (!clip(-dx, a[0] - kHoleLo)) return false;
  if (!clip(dx, kHoleHi - a[0])) return false;
  if (!clip(-dy, a[1] - kHoleLo)) return false;
  if (!clip(dy, kHoleHi - a[1])) return false;
  if (t0 >= t1) return false;
  const double tm = 0.5 * (t0 + t1);
  return in_open_hole(a[0] + tm * dx, a[1] + tm * dy);
}

double euclid(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

class DomainImpl {
 public:
  DomainKind kind;
  int dim = 1;
  Point lo, hi;          // bounding box
  int grid_m = 0;        // per axis
  Grid grid;
  Regularity reg_raw, reg_norm;
  double diam = 0;
  Point diam_a, diam_b;

  // LShape corner shortest-path table.
  std::array<Point, 4> corners;
  double corner_dist[4][4] = {};

  bool contains(const Point& s) const {
    if (s.n != dim) return false;
    for (int i = 0; i < dim; ++i) {
      if (!std::isfinite(s[i]) || s[i] < lo[i] || s[i] > hi[i]) return false;
    }
    if (kind == DomainKind::LShape && in_open_hole(s[0], s[1])) return false;
    return true;
  }

  double geodesic(const Point& a, const Point& b) const {
    if (kind != DomainKind::LShape || !segment_blocked(a, b)) return euclid(a, b);
    // Route around the hole: enter at a visible corner, run along the corner
    // graph, leave from a corner visible to b.
    double av[4], bv[4];
    for (int i = 0; i < 4; ++i) {
      av[i] = segment_blocked(a, corners[i]) ? -1 : euclid(a, corners[i]);
      bv[i] = segment_blocked(b, corners[i]) ? -1 : euclid(b, corners[i]);
    }
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
      if (av[i] < 0) continue;
      for (int j = 0; j < 4; ++j) {
        if (bv[j] < 0) continue;
        best = std::min(best, av[i] + corner_dist[i][j] + bv[j]);
      }
    }
    if (!std::isfinite(best)) throw NumericError("geodesic routing failed");
    return best;
  }

  void build_grid();
  void finalize();
};

void DomainImpl::build_grid() {
  Grid g;
  g.dim = dim;
  int64_t cells = 1;
  double cell_d2 = 0;
  for (int i = 0; i < dim; ++i) {
    g.m[i] = grid_m;
    g.lo[i] = lo[i];
    g.step[i] = (hi[i] - lo[i]) / grid_m;
    cells *= grid_m;
    cell_d2 += g.step[i] * g.step[i];
  }
  g.cell_diameter = std::sqrt(cell_d2);
  g.cell_to_node.assign(static_cast<size_t>(cells), -1);
  const double cell_vol = [&] {
    double v = 1;
    for (int i = 0; i < dim; ++i) v *= g.step[i];
    return v;
  }();
  for (int64_t c = 0; c < cells; ++c) {
    int64_t rem = c;
    Point p(dim);
    for (int i = 0; i < dim; ++i) {
      const int64_t idx = rem % g.m[i];
      rem /= g.m[i];
      p[i] = g.lo[i] + (static_cast<double>(idx) + 0.5) * g.step[i];
    }
    if (kind == DomainKind::LShape && in_open_hole(p[0], p[1])) continue;
    g.cell_to_node[static_cast<size_t>(c)] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(p);
  }
  g.raw_total = cell_vol * static_cast<double>(g.nodes.size());
  g.weights.assign(g.nodes.size(), 1.0 / static_cast<double>(g.nodes.size()));
  grid = std::move(g);
}

void DomainImpl::finalize() {
  build_grid();
  switch (kind) {
    case DomainKind::Interval: {
      const double len = hi[0] - lo[0];
      diam = len;
      diam_a = Point::of(lo[0]);
      diam_b = Point::of(hi[0]);
      reg_raw = {1, 1, 2, len / 2};
      reg_norm = {1, 1 / len, 2 / len, len / 2};
      break;
    }
    case DomainKind::Hypercube: {
      const double w = hi[0];
      diam = 2 * w * std::sqrt(static_cast<double>(dim));
      diam_a = lo;
      diam_b = hi;
      const double vol = std::pow(2 * w, dim);
      const double vn = kBallVol[dim];
      reg_raw = {static_cast<double>(dim), vn / std::pow(2.0, dim), vn, w};
      reg_norm = {static_cast<double>(dim), reg_raw.c0 / vol, reg_raw.C0 / vol, w};
      break;
    }
    case DomainKind::LShape: {
      corners[0] = Point::of(kHoleLo, kHoleLo);
      corners[1] = Point::of(kHoleHi, kHoleLo);
      corners[2] = Point::of(kHoleHi, kHoleHi);
      corners[3] = Point::of(kHoleLo, kHoleHi);
      // Adjacent corners see each other along the hole edges; diagonals are
      // blocked, so the opposite-corner path wraps two sides.
      const double side = kHoleHi - kHoleLo;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const int d = std::abs(i - j);
          corner_dist[i][j] = (d == 0) ? 0 : (d == 2 ? 2 * side : side);
        }
      diam_a = Point::of(0, 0);
      diam_b = Point::of(kOuter, kOuter);
      diam = geodesic(diam_a, diam_b);
      // Worst sandwich constants for the geodesic balls: quarter disks at the
      // convex outer corners (pi/4 r^2), full disk upper bound; certified for
      // r <= 0.4 (strip width between hole and outer boundary).
      reg_raw = {2, M_PI / 4, M_PI, 0.4};
      reg_norm = {2, M_PI / (4 * kLShapeArea), M_PI / kLShapeArea, 0.4};
      break;
    }
  }
}

namespace {

std::shared_ptr<const DomainImpl> make_impl(DomainKind kind, int dim, Point lo,
                                            Point hi, int m) {
  auto impl = std::make_shared<DomainImpl>();
  impl->kind = kind;
  impl->dim = dim;
  impl->lo = lo;
  impl->hi = hi;
  impl->grid_m = m;
  impl->finalize();
  return impl;
}

}  // namespace

Domain Domain::interval(double lo, double hi, int grid_m) {
  if (!(hi > lo)) throw ConfigError("interval requires hi > lo");
  if (grid_m < 2) throw ConfigError("interval grid needs >= 2 cells");
  return Domain(make_impl(DomainKind::Interval, 1, Point::of(lo), Point::of(hi), grid_m));
}

Domain Domain::hypercube(int n, double half_width, int grid_m_per_axis) {
  if (n < 1 || n > kMaxDim) throw ConfigError("hypercube dimension must be 1..3");
  if (!(half_width > 0)) throw ConfigError("hypercube needs half_width > 0");
  if (grid_m_per_axis < 2) throw ConfigError("hypercube grid needs >= 2 cells per axis");
  Point lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = -half_width;
    hi[i] = half_width;
  }
  return Domain(make_impl(DomainKind::Hypercube, n, lo, hi, grid_m_per_axis));
}

Domain Domain::lshape(int grid_m_per_axis) {
  if (grid_m_per_axis < 10) throw ConfigError("lshape grid needs >= 10 cells per axis");
  return Domain(make_impl(DomainKind::LShape, 2, Point::of(0, 0),
                          Point::of(kOuter, kOuter), grid_m_per_axis));
}

namespace {

std::map<std::string, double> parse_kv(std::string_view s) {
  std::map<std::string, double> kv;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    const std::string_view item = s.substr(pos, comma - pos);
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("bad domain parameter '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const std::string_view val = item.substr(eq + 1);
    double v = 0;
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || p != val.data() + val.size())
      throw ConfigError("bad numeric value in '" + std::string(item) + "'");
    kv[std::string(key)] = v;
    pos = comma + 1;
  }
  return kv;
}

}  // namespace

Domain Domain::parse(std::string_view config) {
  const size_t colon = config.find(':');
  const std::string_view head = config.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string_view::npos) kv = parse_kv(config.substr(colon + 1));
  auto take = [&](const char* k, double dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  };
  if (head == "interval") {
    const int m = static_cast<int>(take("m", 4096));
    return interval(take("lo", 0.0), take("hi", 1.0), m);
  }
  if (head == "hypercube") {
    const int m = static_cast<int>(take("m", 256));
    return hypercube(static_cast<int>(take("n", 2)), take("w", 0.5), m);
  }
  if (head == "lshape") {
    const int m = static_cast<int>(take("m", 250));
    return lshape(m);
  }
  throw ConfigError("unknown domain '" + std::string(config) + "'");
}

DomainKind Domain::kind() const { return impl_->kind; }
int Domain::dim() const { return impl_->dim; }

std::string Domain::config_string() const {
  switch (impl_->kind) {
    case DomainKind::Interval:
      return "interval:lo=" + fmt17(impl_->lo[0]) + ",hi=" + fmt17(impl_->hi[0]) +
             ",m=" + std::to_string(impl_->grid_m);
    case DomainKind::Hypercube:
      return "hypercube:n=" + std::to_string(impl_->dim) +
             ",w=" + fmt17(impl_->hi[0]) + ",m=" + std::to_string(impl_->grid_m);
    case DomainKind::LShape:
      return "lshape:m=" + std::to_string(impl_->grid_m);
  }
  return "";
}

bool Domain::contains(const Point& s) const { return impl_->contains(s); }

void Domain::require_member(const Point& s) const {
  if (!impl_->contains(s))
    throw MembershipError("point " + to_string(s) + " is not in " + config_string());
}

double Domain::distance(const Point& a, const Point& b) const {
  require_member(a);
  require_member(b);
  return impl_->geodesic(a, b);
}

double Domain::diameter() const { return impl_->diam; }

std::pair<Point, Point> Domain::diameter_endpoints() const {
  return {impl_->diam_a, impl_->diam_b};
}

Point Domain::project(const Point& s) const {
  if (impl_->kind == DomainKind::LShape)
    throw UnsupportedError("Euclidean projection is not defined on a non-convex set");
  if (s.n != impl_->dim) throw MembershipError("projection argument has wrong dimension");
  Point r = s;
  for (int i = 0; i < impl_->dim; ++i) {
    require_finite(s[i], "project");
    r[i] = std::clamp(s[i], impl_->lo[i], impl_->hi[i]);
  }
  return r;
}

Point Domain::sample_uniform(Rng& rng) const {
  Point p(impl_->dim);
  for (int tries = 0; tries < 1000; ++tries) {
    for (int i = 0; i < impl_->dim; ++i)
      p[i] = rng.uniform(impl_->lo[i], impl_->hi[i]);
    if (impl_->kind != DomainKind::LShape || !in_open_hole(p[0], p[1])) return p;
  }
  throw NumericError("uniform rejection sampler starved");  // unreachable
}

const Grid& Domain::grid() const { return impl_->grid; }

double Domain::integrate(const std::function<double(const Point&)>& f) const {
  const Grid& g = impl_->grid;
  double acc = 0;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const double v = f(g.nodes[i]);
    if (!std::isfinite(v))
      throw NumericError("integrand is not finite at node " + std::to_string(i) +
                         " = " + to_string(g.nodes[i]));
    acc += g.weights[i] * v;
  }
  return acc;
}

double Domain::integrate_nodes(const std::vector<double>& node_values) const {
  const Grid& g = impl_->grid;
  if (node_values.size() != g.nodes.size())
    throw DomainError("node value count " + std::to_string(node_values.size()) +
                      " does not match grid size " + std::to_string(g.nodes.size()));
  double acc = 0;
  for (size_t i = 0; i < node_values.size(); ++i) {
    if (!std::isfinite(node_values[i]))
      throw NumericError("integrand is not finite at node " + std::to_string(i) +
                         " = " + to_string(g.nodes[i]));
    acc += g.weights[i] * node_values[i];
  }
  return acc;
}

Regularity Domain::regularity() const { return impl_->reg_norm; }
Regularity Domain::regularity_raw() const { return impl_->reg_raw; }

bool Domain::is_box() const { return impl_->kind != DomainKind::LShape; }
Point Domain::box_lo() const { return impl_->lo; }
Point Domain::box_hi() const { return impl_->hi; }

Domain Domain::with_grid(int m_per_axis) const {
  switch (impl_->kind) {
    case DomainKind::Interval:
      return interval(impl_->lo[0], impl_->hi[0], m_per_axis);
    case DomainKind::Hypercube:
      return hypercube(impl_->dim, impl_->hi[0], m_per_axis);
    case DomainKind::LShape:
      return lshape(m_per_axis);
  }
  throw ConfigError("unreachable");
}

}  // namespace contreg
