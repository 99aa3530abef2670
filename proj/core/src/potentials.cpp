// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/potentials.hpp"

#include <cmath>
#include <charconv>

namespace contreg {

Potential Potential::exponential() { return Potential(PotentialKind::Exponential, 0.0); }

Potential Potential::rho_norm(double rho) {
  if (!(rho > 1.0) || !std::isfinite(rho))
    throw ConfigError("rho_norm requires rho > 1, got " + std::to_string(rho));
  return Potential(PotentialKind::RhoNorm, rho);
}

Potential Potential::parse(std::string_view config) {
  if (config == "exp") return exponential();
  constexpr std::string_view prefix = "rho:";
  if (config.substr(0, prefix.size()) == prefix) {
    const std::string_view num = config.substr(prefix.size());
    double rho = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), rho);
    if (ec != std::errc{} || p != num.data() + num.size())
      throw ConfigError("bad potential config '" + std::string(config) + "'");
    return rho_norm(rho);
  }
  throw ConfigError("unknown potential '" + std::string(config) +
                    "' (expected \"exp\" or \"rho:<value>\")");
}

double Potential::phi(double z) const {
  if (kind_ == PotentialKind::Exponential) return std::exp(z - 1.0);
  if (z <= 0.0) return 0.0;
  const double p = 1.0 / (rho_ - 1.0);
  return p == 2.0 ? z * z : std::pow(z, p);
}

double Potential::phi_inverse(double y) const {
  if (kind_ == PotentialKind::Exponential) {
    if (!(y > 0.0))
      throw DomainError("phi_inverse: y must exceed the floor 0, got " + fmt17(y));
    return 1.0 + std::log(y);
  }
  if (y < 0.0) throw DomainError("phi_inverse: y must be >= 0, got " + fmt17(y));
  return std::pow(y, rho_ - 1.0);
}

double Potential::f(double x) const {
  if (x < 0.0) throw DomainError("f: density value must be >= 0, got " + fmt17(x));
  if (kind_ == PotentialKind::Exponential) return x == 0.0 ? 0.0 : x * std::log(x);
  return (std::pow(x, rho_) - 1.0) / rho_;
}

double Potential::growth_kappa() const {
  return kind_ == PotentialKind::Exponential ? 1.0 : rho_ - 1.0;
}

double Potential::growth_c() const {
  // Exponential: sup_{x>=1} x log x / x^2 = sup log(x)/x = 1/e.
  // RhoNorm: (x^rho - 1)/rho <= x^rho / rho.
  return kind_ == PotentialKind::Exponential ? 1.0 / M_E : 1.0 / rho_;
}

std::string Potential::config_string() const {
  if (kind_ == PotentialKind::Exponential) return "exp";
  return "rho:" + fmt17(rho_);
}

}  // namespace contreg
