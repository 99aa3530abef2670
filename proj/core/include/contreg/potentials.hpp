// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <string>
#include <string_view>

#include "contreg/common.hpp"

namespace contreg {

enum class PotentialKind { Exponential, RhoNorm };

// Link function phi and the induced pointwise regularizer
//   f(x) = integral_1^x phi^{-1}(z) dz,
// which defines the density regularizer h(x) = int f(x(s)) dmu(s).
//
// Two built-in families:
//   Exponential : phi(z) = exp(z-1); f(x) = x log x (negative entropy).
//   RhoNorm(r)  : phi(z) = max(z,0)^{1/(r-1)}, r > 1; f(x) = (x^r - 1)/r.
// Both have floor omega = 0, upper limit a = +inf, and working convexity
// modulus gamma(r) = r^2/2 for the induced mirror map on densities, hence
// gamma_tilde_inv(y) = 2y in regret evaluation.
class Potential {
 public:
  static Potential exponential();
  static Potential rho_norm(double rho);
  // "exp" or "rho:<value>", e.g. "rho:1.5".
  static Potential parse(std::string_view config);

  PotentialKind kind() const { return kind_; }
  double rho() const { return rho_; }

  // Floor omega = lim_{z -> -inf} phi(z); both families give 0.
  double omega() const { return 0.0; }

  double phi(double z) const;
  // Requires y > 0 for Exponential, y >= 0 for RhoNorm; throws DomainError.
  double phi_inverse(double y) const;
  // Pointwise regularizer; requires x >= 0 (x=0 allowed: limit value).
  double f(double x) const;
  // Derivative f'(x) = phi^{-1}(x) for x in the interior.
  double f_prime(double x) const { return phi_inverse(x); }

  // Convexity modulus gamma(r) = K r^2 / 2 and its inverse-tilde
  // gamma_tilde_inv(y) = y / ... = 2y/K used by the generic regret bound.
  double gamma(double r) const { return 0.5 * r * r; }
  double gamma_tilde_inv(double y) const { return 2.0 * y; }

  // Growth certificate: f(x) <= growth_c() * x^(1 + growth_kappa()) for all
  // x >= 1. Exponential: kappa=1, C=1/e. RhoNorm: kappa=rho-1, C=1/rho.
  double growth_kappa() const;
  double growth_c() const;

  std::string config_string() const;

 private:
  Potential(PotentialKind k, double rho) : kind_(k), rho_(rho) {}
  PotentialKind kind_;
  double rho_;  // only meaningful for RhoNorm
};

}  // namespace contreg
