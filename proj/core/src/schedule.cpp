// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace contreg {

double Schedule::at(int64_t t) const {
  if (t < 0) throw DomainError("schedule index must be >= 0");
  if (t == 0) t = 1;  // eta_0 := eta_1
  double v = scale * std::pow(static_cast<double>(t), -beta);
  if (log_factor) {
    // log clamped at 3 below so the factor is positive at t=1,2 and the
    // product stays non-increasing; equals sqrt(log t) for t >= 3.
    v *= std::sqrt(std::log(static_cast<double>(std::max<int64_t>(t, 3))));
  }
  require_finite(v, "Schedule::at");
  if (v <= 0) throw NumericError("schedule produced non-positive eta");
  return v;
}

static double resolve_vartheta(const Regularity& reg, double vartheta) {
  if (vartheta <= 0) return reg.r0 / 2;
  return vartheta;
}

Schedule Schedule::entropy_tuned(const Regularity& reg, double M, double alpha,
                                 double vartheta) {
  const double v = resolve_vartheta(reg, vartheta);
  // Capacity of a ball comparator at resolution v under the entropy
  // regularizer, traded against the sqrt(log t / t) drift.
  const double logterm =
      std::max(std::log(std::pow(v, -reg.Q / alpha) / reg.c0), 0.0);
  const double inner = (reg.C0 * reg.Q / (2.0 * reg.c0)) * logterm +
                       reg.Q / (2.0 * alpha);
  const double eta = (1.0 / M) * std::sqrt(std::max(inner, 1e-12));
  return Schedule{eta, 0.5, true};
}

Schedule Schedule::growth_tuned(const Regularity& reg, const Potential& pot,
                                double M, double alpha, double vartheta) {
  const double v = resolve_vartheta(reg, vartheta);
  const double kappa = pot.growth_kappa();
  const double C = pot.growth_c();
  const double kQa = kappa * reg.Q / alpha;
  const double beta = 1.0 / (2.0 + kQa);
  const double num = (1.0 + kQa) / (2.0 + kQa) * reg.C0 * C;
  const double den = std::pow(reg.c0, 1.0 + kappa) * std::pow(v, kappa * reg.Q);
  const double eta = (1.0 / M) * std::sqrt(num / den);
  return Schedule{eta, beta, false};
}

static double parse_number(const std::string& val, const std::string& config) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(val, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad number in schedule: " + config);
  }
  if (used != val.size()) throw ConfigError("bad number in schedule: " + config);
  return x;
}

Schedule Schedule::parse(const std::string& config) {
  const auto colon = config.find(':');
  const std::string head = config.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : config.substr(colon + 1);
  if (head == "fixed") {
    const double eta = parse_number(rest, config);
    if (eta <= 0) throw ConfigError("fixed schedule needs a positive eta: " + config);
    return fixed(eta);
  }
  if (head != "poly") throw ConfigError("unknown schedule: " + config);
  Schedule s = poly(1.0, 0.5);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto end = rest.find(',', pos);
    if (end == std::string::npos) end = rest.size();
    const std::string item = rest.substr(pos, end - pos);
    pos = end + 1;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value in schedule: " + config);
    const std::string key = item.substr(0, eq);
    const double x = parse_number(item.substr(eq + 1), config);
    if (key == "scale") {
      s.scale = x;
    } else if (key == "beta") {
      s.beta = x;
    } else if (key == "log") {
      s.log_factor = x != 0.0;
    } else {
      throw ConfigError("unknown schedule key '" + key + "' in: " + config);
    }
  }
  if (s.scale <= 0 || s.beta < 0 || s.beta > 1)
    throw ConfigError("schedule needs scale > 0 and beta in [0,1]: " + config);
  return s;
}

std::string Schedule::config_string() const {
  std::string s = "eta=" + fmt17(scale) + ",beta=" + fmt17(beta);
  if (log_factor) s += ",logfactor";
  return s;
}

}  // namespace contreg
