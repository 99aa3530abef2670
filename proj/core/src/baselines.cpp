// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace contreg {

Point greedy_step(const std::vector<double>& U_nodes, const Domain& S) {
  const Grid& g = S.grid();
  if (U_nodes.size() != g.size())
    throw DomainError("greedy_step: node count does not match grid");
  size_t arg = 0;
  for (size_t i = 1; i < U_nodes.size(); ++i)
    if (U_nodes[i] > U_nodes[arg]) arg = i;  // strict keeps lowest index
  return g.nodes[arg];
}

Point gp_step(const Point& s, const Point& grad, double eta, const Domain& S) {
  return S.project(s - eta * grad);  // throws UnsupportedError on non-convex S
}

Point ewoo_step(const std::vector<double>& L_nodes, double alpha, const Domain& S) {
  const Grid& g = S.grid();
  if (L_nodes.size() != g.size())
    throw DomainError("ewoo_step: node count does not match grid");
  if (!(alpha > 0)) throw ConfigError("ewoo_step needs alpha > 0");
  double amin = std::numeric_limits<double>::infinity();
  for (const double l : L_nodes) amin = std::min(amin, l);
  double z = 0;
  Point mean(S.dim());
  for (size_t i = 0; i < g.size(); ++i) {
    const double w = g.weights[i] * std::exp(-alpha * (L_nodes[i] - amin));
    z += w;
    for (int k = 0; k < S.dim(); ++k) mean[k] += w * g.nodes[i][k];
  }
  for (int k = 0; k < S.dim(); ++k) mean[k] /= z;
  return mean;
}

std::array<double, kMaxDim> FtalState::eigenvalues() const {
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = A[i * kMaxDim + j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
  std::array<double, kMaxDim> out{0, 0, 0};
  for (int i = 0; i < kMaxDim; ++i) out[static_cast<size_t>(i)] = es.eigenvalues()[i];
  return out;
}

namespace {

// Minimize (s - target)' M (s - target) over the box by enumerating all
// 3^n active-set patterns (lo / free / hi per coordinate); n <= 3 keeps this
// exact and cheap. M must be positive definite.
Point box_qp(const Eigen::MatrixXd& M, const Eigen::VectorXd& target,
             const Point& lo, const Point& hi, int n) {
  double best_obj = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = target;
  int pattern[kMaxDim] = {0, 0, 0};
  const int total = static_cast<int>(std::pow(3, n));
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int i = 0; i < n; ++i) {
      pattern[i] = c % 3;
      c /= 3;
    }
    std::vector<int> free_idx;
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) {
      if (pattern[i] == 0)
        s[i] = lo[i];
      else if (pattern[i] == 2)
        s[i] = hi[i];
      else
        free_idx.push_back(i);
    }
    if (!free_idx.empty()) {
      const int nf = static_cast<int>(free_idx.size());
      Eigen::MatrixXd Mff(nf, nf);
      Eigen::VectorXd r(nf);
      for (int a = 0; a < nf; ++a) {
        double acc = 0;
        for (int j = 0; j < n; ++j) {
          if (pattern[j] == 1) continue;
          acc += M(free_idx[a], j) * (s[j] - target[j]);
        }
        r[a] = -acc;
        for (int b = 0; b < nf; ++b) Mff(a, b) = M(free_idx[a], free_idx[b]);
      }
      const Eigen::VectorXd sf = Mff.ldlt().solve(r);
      bool feasible = true;
      for (int a = 0; a < nf; ++a) {
        const double v = target[free_idx[a]] + sf[a];
        if (v < lo[free_idx[a]] - 1e-12 || v > hi[free_idx[a]] + 1e-12) {
          feasible = false;
          break;
        }
        s[free_idx[a]] = std::clamp(v, lo[free_idx[a]], hi[free_idx[a]]);
      }
      if (!feasible) continue;
    }
    const Eigen::VectorXd d = s - target;
    const double obj = d.dot(M * d);
    // Margin keeps the earliest pattern on ties; it must be zero while
    // best_obj is still infinite (inf - inf is NaN and rejects everything).
    const double margin =
        std::isfinite(best_obj) ? 1e-15 * std::max(1.0, std::abs(best_obj)) : 0.0;
    if (obj < best_obj - margin) {
      best_obj = obj;
      best = s;
    }
  }
  Point out(n);
  for (int i = 0; i < n; ++i) out[i] = best[i];
  return out;
}

}  // namespace

Point ftal_step(FtalState& st, const Point& g, const Point& s_played, double beta,
                const Domain& S) {
  if (!S.is_box()) throw UnsupportedError("ftal_step needs a convex box domain");
  if (!(beta > 0)) throw ConfigError("ftal_step needs beta > 0");
  const int n = st.n;
  if (norm2(g) == 0.0) return s_played;
  const double gs = dot(g, s_played);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) st.A[i * kMaxDim + j] += g[i] * g[j];
    st.rhs[i] += g[i] * gs - g[i] / beta;
  }
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = st.rhs[i];
    for (int j = 0; j < n; ++j) A(i, j) = st.A[i * kMaxDim + j];
  }
  // Pseudoinverse with relative eigenvalue cutoff; A is tiny and symmetric.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  const double cutoff = 1e-10 * std::max(lmax, 1e-300);
  Eigen::VectorXd inv_l(n);
  for (int i = 0; i < n; ++i)
    inv_l[i] = es.eigenvalues()[i] > cutoff ? 1.0 / es.eigenvalues()[i] : 0.0;
  const Eigen::VectorXd target =
      es.eigenvectors() * inv_l.asDiagonal() * es.eigenvectors().transpose() * b;
  // Epsilon-regularized seminorm projection: primary A-distance, Euclidean
  // tie-break among minimizers in the null directions.
  Eigen::MatrixXd M = A + cutoff * Eigen::MatrixXd::Identity(n, n);
  return box_qp(M, target, S.box_lo(), S.box_hi(), n);
}

namespace {

class GreedyBaseline final : public Baseline {
 public:
  explicit GreedyBaseline(const Domain& S) : S_(S), cum_(S.grid().size(), 0.0) {}
  Point current() const override { return greedy_step(cum_, S_); }
  void absorb(const RewardFn&, const std::vector<double>& u_nodes) override {
    if (u_nodes.size() != cum_.size())
      throw DomainError("greedy baseline needs reward node values");
    for (size_t i = 0; i < cum_.size(); ++i) cum_[i] += u_nodes[i];
  }
  std::string name() const override { return "greedy"; }

 private:
  Domain S_;
  std::vector<double> cum_;
};

Point box_center(const Domain& S) {
  Point c(S.dim());
  for (int i = 0; i < S.dim(); ++i) c[i] = 0.5 * (S.box_lo()[i] + S.box_hi()[i]);
  return c;
}

class GpBaseline final : public Baseline {
 public:
  GpBaseline(const Domain& S, bool strongly_convex, double H)
      : S_(S), strongly_convex_(strongly_convex), H_(H), s_(box_center(S)) {
    if (strongly_convex_ && !(H > 0))
      throw ConfigError("ogd baseline needs a declared strong convexity constant");
  }
  Point current() const override { return s_; }
  void absorb(const RewardFn& u, const std::vector<double>&) override {
    if (!u.has_gradient())
      throw ConfigError("gradient baseline needs gradient-tagged rewards");
    ++t_;
    const Point grad_loss = -1.0 * u.gradient(s_);  // loss = -reward
    const double eta = strongly_convex_ ? 1.0 / (H_ * static_cast<double>(t_))
                                        : 1.0 / std::sqrt(static_cast<double>(t_));
    s_ = gp_step(s_, grad_loss, eta, S_);
    S_.require_member(s_);
  }
  std::string name() const override { return strongly_convex_ ? "ogd" : "gp"; }

 private:
  Domain S_;
  bool strongly_convex_;
  double H_;
  Point s_;
  int64_t t_ = 0;
};

class EwooBaseline final : public Baseline {
 public:
  EwooBaseline(const Domain& S, double alpha)
      : S_(S), alpha_(alpha), cumL_(S.grid().size(), 0.0) {
    if (!(alpha > 0))
      throw ConfigError("ewoo baseline needs a declared exp-concavity constant");
  }
  Point current() const override {
    if (!cache_valid_) {
      cache_ = ewoo_step(cumL_, alpha_, S_);
      cache_valid_ = true;
    }
    return cache_;
  }
  void absorb(const RewardFn&, const std::vector<double>& u_nodes) override {
    if (u_nodes.size() != cumL_.size())
      throw DomainError("ewoo baseline needs reward node values");
    for (size_t i = 0; i < cumL_.size(); ++i) cumL_[i] -= u_nodes[i];
    cache_valid_ = false;
  }
  std::string name() const override { return "ewoo"; }

 private:
  Domain S_;
  double alpha_;
  std::vector<double> cumL_;
  mutable Point cache_;
  mutable bool cache_valid_ = false;
};

class FtalBaseline final : public Baseline {
 public:
  FtalBaseline(const Domain& S, double G, double alpha)
      : S_(S), st_(S.dim()), s_(box_center(S)) {
    if (!(G > 0) || !(alpha > 0))
      throw ConfigError("ftal baseline needs declared G and exp-concavity alpha");
    const double D = norm2(S.box_hi() - S.box_lo());
    beta_ = std::min(1.0 / (8.0 * G * D), alpha / 2.0);
  }
  Point current() const override { return s_; }
  void absorb(const RewardFn& u, const std::vector<double>&) override {
    if (!u.has_gradient())
      throw ConfigError("ftal baseline needs gradient-tagged rewards");
    const Point grad_loss = -1.0 * u.gradient(s_);
    s_ = ftal_step(st_, grad_loss, s_, beta_, S_);
    S_.require_member(s_);
  }
  std::string name() const override { return "ftal"; }
  const FtalState& state() const { return st_; }

 private:
  Domain S_;
  FtalState st_;
  Point s_;
  double beta_ = 1;
};

}  // namespace

std::unique_ptr<Baseline> make_greedy(const Domain& S) {
  return std::make_unique<GreedyBaseline>(S);
}

std::unique_ptr<Baseline> make_gradient_projection(const Domain& S,
                                                   const StreamTags&) {
  return std::make_unique<GpBaseline>(S, false, 0.0);
}

std::unique_ptr<Baseline> make_ogd_strongly_convex(const Domain& S,
                                                   const StreamTags& tags) {
  return std::make_unique<GpBaseline>(S, true, tags.strong_convexity_H);
}

std::unique_ptr<Baseline> make_ewoo(const Domain& S, const StreamTags& tags) {
  return std::make_unique<EwooBaseline>(S, tags.exp_concavity_alpha);
}

std::unique_ptr<Baseline> make_ftal(const Domain& S, const StreamTags& tags) {
  return std::make_unique<FtalBaseline>(S, tags.grad_bound_G, tags.exp_concavity_alpha);
}

std::unique_ptr<Baseline> make_baseline(std::string_view name, const Domain& S,
                                        const StreamTags& tags) {
  if (name == "greedy") return make_greedy(S);
  if (name == "gp") return make_gradient_projection(S, tags);
  if (name == "ogd") return make_ogd_strongly_convex(S, tags);
  if (name == "ewoo") return make_ewoo(S, tags);
  if (name == "ftal") return make_ftal(S, tags);
  throw ConfigError("unknown baseline '" + std::string(name) + "'");
}

double baseline_bound_gp(double D, double G, int64_t t) {
  const double td = static_cast<double>(t);
  return (D * D / 2 + G * G) / std::sqrt(td) - G * G / (2 * td);
}

double baseline_bound_ogd(double H, double G, int64_t t) {
  const double td = static_cast<double>(t);
  return G * G / (2 * H) * (1 + std::log(td)) / td;
}

double baseline_bound_ftal(int n, double alpha, double G, double D, int64_t t) {
  const double td = static_cast<double>(t);
  return 64.0 * n * (1.0 / alpha + G * D) * (1 + std::log(td)) / td;
}

double baseline_bound_ewoo(int n, double alpha, int64_t t) {
  const double td = static_cast<double>(t);
  return n / alpha * (1 + std::log1p(td)) / td;
}

}  // namespace contreg
