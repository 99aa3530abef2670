// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/rewards.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace contreg {

double QuadraticForm::operator()(const Point& s) const {
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) row += Q[i * kMaxDim + j] * (s[j] - mu[j]);
    acc += (s[i] - mu[i]) * row;
  }
  return -0.5 * acc - c;
}

Point QuadraticForm::gradient(const Point& s) const {
  Point g(n);
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) row += Q[i * kMaxDim + j] * (s[j] - mu[j]);
    g[i] = -row;
  }
  return g;
}

RewardFn RewardFn::affine(AffineForm a) {
  RewardFn r;
  r.affine_ = a;
  r.f_ = [a](const Point& s) { return a(s); };
  r.grad_ = [a](const Point&) { return a.g; };
  return r;
}

RewardFn RewardFn::quadratic(QuadraticForm q) {
  RewardFn r;
  r.quad_ = q;
  r.f_ = [q](const Point& s) { return q(s); };
  r.grad_ = [q](const Point& s) { return q.gradient(s); };
  return r;
}

RewardFn RewardFn::generic(std::function<double(const Point&)> f,
                           std::function<Point(const Point&)> grad) {
  RewardFn r;
  r.f_ = std::move(f);
  r.grad_ = std::move(grad);
  return r;
}

double RewardFn::operator()(const Point& s) const { return f_(s); }
bool RewardFn::has_gradient() const { return static_cast<bool>(grad_); }

Point RewardFn::gradient(const Point& s) const {
  if (!grad_) throw UnsupportedError("reward carries no gradient tag");
  return grad_(s);
}

double HoelderModulus::operator()(double r) const {
  if (r < 0) throw DomainError("modulus argument must be >= 0");
  return C * std::pow(r, alpha);
}

namespace {

class AlternatingAffineStream final : public RewardStream {
 public:
  AlternatingAffineStream(const Domain& S, double L) : L_(L) {
    if (!S.is_box()) throw ConfigError("alternating affine stream needs a box domain");
    const Point lo = S.box_lo(), hi = S.box_hi();
    // sup |u| over the box; the first round is smaller but L dominates.
    M_ = 0;
    for (int i = 0; i < S.dim(); ++i)
      M_ = std::max(M_, std::max(std::abs(lo[i]), std::abs(hi[i])));
    M_ = L_ * M_ + L_ / 2;
    dim_ = S.dim();
  }

  RewardFn next() override {
    ++round_;
    AffineForm a;
    a.g = Point(dim_);
    if (round_ == 1) {
      a.g[0] = -L_ / 2;
      a.b = -L_ / 4;
    } else {
      a.g[0] = (round_ % 2 == 0) ? L_ : -L_;
      a.b = -L_ / 2;
    }
    return RewardFn::affine(a);
  }

  double bound_M() const override { return M_; }
  HoelderModulus modulus() const override { return {1.0, L_}; }
  StreamTags tags() const override {
    StreamTags t;
    t.affine = true;
    t.convex_loss = true;
    t.grad_bound_G = L_;
    return t;
  }

 private:
  double L_;
  double M_;
  int dim_ = 2;
};

// 5-point Gauss-Legendre rule on [-1,1]; exact through degree 9 per axis,
// enough to integrate u^4 of a quadratic exactly.
constexpr double kGL5x[5] = {-0.906179845938663992797626878299,
                             -0.538469310105683091036314420700, 0.0,
                             0.538469310105683091036314420700,
                             0.906179845938663992797626878299};
constexpr double kGL5w[5] = {0.236926885056189087514264040720,
                             0.478628670499366468041291514836,
                             0.568888888888888888888888888889,
                             0.478628670499366468041291514836,
                             0.236926885056189087514264040720};

class RandomQuadraticStream final : public RewardStream {
 public:
  RandomQuadraticStream(const Domain& S, int64_t horizon, Rng rng) : S_(S) {
    if (!S.is_box()) throw ConfigError("quadratic stream needs a box domain");
    const int n = S.dim();
    fns_.reserve(static_cast<size_t>(horizon));
    H_ = std::numeric_limits<double>::infinity();
    alpha_ = std::numeric_limits<double>::infinity();
    for (int64_t t = 0; t < horizon; ++t) {
      Eigen::MatrixXd R = random_rotation(n, rng);
      Eigen::VectorXd lam(n);
      for (int i = 0; i < n; ++i)
        lam[i] = std::exp(rng.uniform(std::log(0.2), std::log(2.0)));
      Eigen::MatrixXd Q = R * lam.asDiagonal() * R.transpose();
      QuadraticForm q;
      q.n = n;
      q.mu = S.sample_uniform(rng);
      q.c = rng.uniform01();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q.Q[i * kMaxDim + j] = Q(i, j);
      const double zeta =
          std::min({kLip / lipschitz(q), kSup / sup_abs(q), kNorm4 / norm4(q)});
      // Exact exp-concavity of the loss l = -u on S: the Hessian zeta*Q
      // dominates alpha * (grad l)(grad l)' iff alpha (s-mu)'zeta Q(s-mu) <= 1
      // everywhere, so the largest valid alpha is the reciprocal of the sup.
      alpha_ = std::min(alpha_, 1.0 / (zeta * quad_part_max(q)));
      // Rescale u -> zeta u: scales Q, c, gradients and all norms linearly.
      for (auto& v : q.Q) v *= zeta;
      q.c *= zeta;
      H_ = std::min(H_, zeta * lam.minCoeff());
      fns_.push_back(q);
    }
  }

  RewardFn next() override {
    if (round_ >= static_cast<int64_t>(fns_.size()))
      throw StreamContractError("quadratic stream exhausted its horizon");
    return RewardFn::quadratic(fns_[static_cast<size_t>(round_++)]);
  }

  double bound_M() const override { return kSup; }
  HoelderModulus modulus() const override { return {1.0, kLip}; }
  StreamTags tags() const override {
    StreamTags t;
    t.convex_loss = true;
    t.grad_bound_G = kLip;
    t.strong_convexity_H = H_;
    t.exp_concavity_alpha = alpha_;
    return t;
  }

  static constexpr double kLip = 5.0;
  static constexpr double kSup = 3.75;
  static constexpr double kNorm4 = 1.6;

 private:
  static Eigen::MatrixXd random_rotation(int n, Rng& rng) {
    if (n == 1) return Eigen::MatrixXd::Identity(1, 1);
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Qm = qr.householderQ();
    // Fix signs so the factorization is unique given G.
    Eigen::MatrixXd Rm = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (Rm(j, j) < 0) Qm.col(j) *= -1;
    return Qm;
  }

  // ||grad u|| and |u| are convex in s, so box suprema sit at vertices.
  double lipschitz(const QuadraticForm& q) const {
    double best = 0;
    for_corners([&](const Point& s) { best = std::max(best, norm2(q.gradient(s))); });
    return best;
  }
  double sup_abs(const QuadraticForm& q) const {
    double best = 0;
    for_corners([&](const Point& s) { best = std::max(best, std::abs(q(s))); });
    return best;
  }
  // sup over S of (s-mu)'Q(s-mu); convex in s, so the box sup is a vertex.
  double quad_part_max(const QuadraticForm& q) const {
    double best = 0;
    for_corners([&](const Point& s) {
      double acc = 0;
      for (int i = 0; i < q.n; ++i) {
        double row = 0;
        for (int j = 0; j < q.n; ++j)
          row += q.Q[i * kMaxDim + j] * (s[j] - q.mu[j]);
        acc += (s[i] - q.mu[i]) * row;
      }
      best = std::max(best, acc);
    });
    return best;
  }
  double norm4(const QuadraticForm& q) const {
    // (int u^4 dmu)^{1/4} by tensorized Gauss-Legendre (exact: degree 8).
    const int n = S_.dim();
    const Point lo = S_.box_lo(), hi = S_.box_hi();
    int idx[kMaxDim] = {0, 0, 0};
    double acc = 0;
    while (true) {
      Point s(n);
      double w = 1;
      for (int i = 0; i < n; ++i) {
        s[i] = 0.5 * (lo[i] + hi[i]) + 0.5 * (hi[i] - lo[i]) * kGL5x[idx[i]];
        w *= 0.5 * kGL5w[idx[i]];  // normalized measure on the box
      }
      const double u = q(s);
      acc += w * u * u * u * u;
      int i = 0;
      while (i < n && ++idx[i] == 5) idx[i++] = 0;
      if (i == n) break;
    }
    return std::pow(acc, 0.25);
  }

  template <typename F>
  void for_corners(F&& f) const {
    const int n = S_.dim();
    const Point lo = S_.box_lo(), hi = S_.box_hi();
    for (int mask = 0; mask < (1 << n); ++mask) {
      Point s(n);
      for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? hi[i] : lo[i];
      f(s);
    }
  }

  Domain S_;
  std::vector<QuadraticForm> fns_;
  double H_ = 0;
  double alpha_ = 0;
};

class RademacherProfileStream final : public RewardStream {
 public:
  RademacherProfileStream(const Domain& S, double M, double alpha, double C_alpha,
                          double q, Rng rng)
      : S_(S), alpha_(alpha), rng_(rng) {
    const auto [sa, sb] = S.diameter_endpoints();
    sb_ = sb;
    const double dual_norm = std::pow(
        S.integrate([&](const Point& s) {
          return std::pow(S.distance(s, sb_), alpha * q);
        }),
        1.0 / q);
    cap_ = std::min(std::pow(C_alpha, 1.0 / alpha), M / dual_norm);
    w_diam_ = cap_ * std::pow(S.diameter(), alpha);
  }

  RewardFn next() override {
    ++round_;
    const double V = rng_.rademacher();
    const double cap = cap_;
    const double alpha = alpha_;
    const Point sb = sb_;
    const Domain S = S_;
    return RewardFn::generic([V, cap, alpha, sb, S](const Point& s) {
      return V * cap * std::pow(S.distance(s, sb), alpha);
    });
  }

  double bound_M() const override { return w_diam_; }  // sup |u| = w(diam)
  HoelderModulus modulus() const override { return {alpha_, cap_}; }

 private:
  Domain S_;
  double alpha_;
  Rng rng_;
  Point sb_;
  double cap_ = 1;
  double w_diam_ = 1;
};

std::map<std::string, double> parse_params(std::string_view s) {
  std::map<std::string, double> kv;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    const std::string_view item = s.substr(pos, comma - pos);
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("bad stream parameter '" + std::string(item) + "'");
    double v = 0;
    const std::string_view val = item.substr(eq + 1);
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || p != val.data() + val.size())
      throw ConfigError("bad numeric value in '" + std::string(item) + "'");
    kv[std::string(item.substr(0, eq))] = v;
    pos = comma + 1;
  }
  return kv;
}

}  // namespace

std::unique_ptr<RewardStream> make_alternating_affine(const Domain& S, double L) {
  return std::make_unique<AlternatingAffineStream>(S, L);
}

std::unique_ptr<RewardStream> make_random_quadratic(const Domain& S, int64_t horizon,
                                                    Rng rng) {
  return std::make_unique<RandomQuadraticStream>(S, horizon, rng);
}

std::unique_ptr<RewardStream> make_rademacher_profile(const Domain& S, double M,
                                                      double alpha, double C_alpha,
                                                      double q, Rng rng) {
  return std::make_unique<RademacherProfileStream>(S, M, alpha, C_alpha, q, rng);
}

std::unique_ptr<RewardStream> make_stream(std::string_view config, const Domain& S,
                                          int64_t horizon, Rng rng) {
  const size_t colon = config.find(':');
  const std::string_view head = config.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string_view::npos) kv = parse_params(config.substr(colon + 1));
  auto take = [&](const char* k, double dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  };
  if (head == "altaffine") return make_alternating_affine(S, take("L", 5.0));
  if (head == "quad") return make_random_quadratic(S, horizon, rng);
  if (head == "rademacher")
    return make_rademacher_profile(S, take("M", 1.0), take("alpha", 1.0),
                                   take("C", 1.0), take("q", 2.0), rng);
  throw ConfigError("unknown stream '" + std::string(config) + "'");
}

void audit_bound(const RewardFn& u, const Domain& S, double M, double tol) {
  const Grid& g = S.grid();
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const double v = u(g.nodes[i]);
    if (!std::isfinite(v) || std::abs(v) > M + tol)
      throw StreamContractError("reward bound violated at " + to_string(g.nodes[i]) +
                                ": |" + fmt17(v) + "| > " + fmt17(M));
  }
}

void audit_hoelder(const RewardFn& u, const Domain& S, const HoelderModulus& chi,
                   int pairs, Rng& rng, double tol) {
  for (int k = 0; k < pairs; ++k) {
    const Point a = S.sample_uniform(rng);
    const Point b = S.sample_uniform(rng);
    const double lhs = std::abs(u(a) - u(b));
    const double rhs = chi(S.distance(a, b));
    if (lhs > rhs + tol)
      throw StreamContractError("Hoelder modulus violated: |u(a)-u(b)| = " +
                                fmt17(lhs) + " > chi(d) = " + fmt17(rhs) + " at a=" +
                                to_string(a) + " b=" + to_string(b));
  }
}

}  // namespace contreg
