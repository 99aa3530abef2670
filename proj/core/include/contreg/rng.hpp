// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>

namespace contreg {

// Deterministic xoshiro256** generator with splitmix64 seeding and
// hand-written uniform/normal transforms. std::mt19937_64 would be portable
// but the std distributions are not; experiment replays must be
// bitwise-identical across compilers, so everything here is explicit.
class Rng {
 public:
  explicit Rng(uint64_t seed) { reseed(seed); }

  // Independent stream keyed by (seed, stream, substream). Used to give each
  // repetition / player / module its own decorrelated generator while staying
  // reproducible under any worker scheduling.
  static Rng keyed(uint64_t seed, uint64_t stream, uint64_t substream = 0);

  void reseed(uint64_t seed);
  uint64_t next_u64();

  // Uniform on [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  // Uniform on {0,...,n-1} via rejection-free Lemire reduction.
  uint64_t uniform_index(uint64_t n);
  // Standard normal (polar Marsaglia, cached spare).
  double normal();
  // +1 or -1 with equal probability.
  double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

 private:
  uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace contreg
