// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace contreg {

// Error taxonomy. Every throwing precondition in the library uses one of
// these so callers (and tests) can distinguish failure classes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (e.g. phi^{-1}(y)
// with y below the potential floor).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Point not a member of the ground set S.
class MembershipError : public Error {
 public:
  using Error::Error;
};

// Iterative solver failed to certify its tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on stale or inconsistent state (e.g. density queried
// after the underlying multiplier was invalidated).
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration string / file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Reward stream violated a declared contract (bound, smoothness tag, ...).
class StreamContractError : public Error {
 public:
  using Error::Error;
};

// Non-finite value where a finite one is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Rejection-sampling envelope was observed to be invalid or useless.
class EnvelopeError : public Error {
 public:
  using Error::Error;
};

// Unsupported operation for this domain kind (e.g. Euclidean projection on a
// non-convex set).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

constexpr int kMaxDim = 3;

// Small fixed-capacity point in R^n, n <= 3. Value type, trivially copyable;
// unused coordinates are zero so arithmetic can loop over kMaxDim safely.
struct Point {
  std::array<double, kMaxDim> c{0.0, 0.0, 0.0};
  int n = 1;

  Point() = default;
  explicit Point(int dim) : n(dim) {}
  static Point of(double a) {
    Point p(1);
    p.c[0] = a;
    return p;
  }
  static Point of(double a, double b) {
    Point p(2);
    p.c[0] = a;
    p.c[1] = b;
    return p;
  }
  static Point of(double a, double b, double d) {
    Point p(3);
    p.c[0] = a;
    p.c[1] = b;
    p.c[2] = d;
    return p;
  }

  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }
};

inline Point operator+(Point a, const Point& b) {
  for (int i = 0; i < a.n; ++i) a[i] += b[i];
  return a;
}
inline Point operator-(Point a, const Point& b) {
  for (int i = 0; i < a.n; ++i) a[i] -= b[i];
  return a;
}
inline Point operator*(double s, Point a) {
  for (int i = 0; i < a.n; ++i) a[i] *= s;
  return a;
}
inline double dot(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const Point& a) { return std::sqrt(dot(a, a)); }
inline bool operator==(const Point& a, const Point& b) {
  if (a.n != b.n) return false;
  for (int i = 0; i < a.n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::string to_string(const Point& p);

// Format with 17 significant digits (round-trips double exactly).
std::string fmt17(double v);

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericError(std::string("non-finite value in ") + what);
}

}  // namespace contreg
