// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <string>

#include "contreg/domains.hpp"
#include "contreg/potentials.hpp"

namespace contreg {

// Non-increasing learning-rate schedule eta_t = scale * t^{-beta}, optionally
// times sqrt(log(max(t,3))) (clamped so the factor is positive and the whole
// schedule non-increasing from t=1). By convention eta_0 := eta_1.
struct Schedule {
  double scale = 1.0;
  double beta = 0.5;
  bool log_factor = false;

  double at(int64_t t) const;

  static Schedule fixed(double eta) { return {eta, 0.0, false}; }
  static Schedule poly(double eta, double beta, bool log_factor = false) {
    return {eta, beta, log_factor};
  }

  // Tuned schedule for the entropy regularizer on a (Q, c0, C0, r0)-regular
  // space with reward bound M and Hoelder exponent alpha; resolution
  // parameter vartheta defaults to r0/2. beta = 1/2 with the log factor.
  static Schedule entropy_tuned(const Regularity& reg, double M, double alpha,
                                double vartheta = -1);

  // Tuned schedule for a potential with growth (kappa, C): beta =
  // 1/(2 + kappa Q / alpha), no log factor.
  static Schedule growth_tuned(const Regularity& reg, const Potential& pot,
                               double M, double alpha, double vartheta = -1);

  // Parses "fixed:<eta>" or "poly:scale=<v>,beta=<v>[,log=<0|1>]".
  static Schedule parse(const std::string& config);

  std::string config_string() const;
};

}  // namespace contreg
