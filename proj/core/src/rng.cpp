// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/rng.hpp"

#include <cmath>

namespace contreg {

namespace {

inline uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

void Rng::reseed(uint64_t seed) {
  uint64_t x = seed;
  for (auto& w : s_) w = splitmix64(x);
  has_spare_ = false;
  // A few warmup rounds decorrelate near-equal seeds.
  for (int i = 0; i < 8; ++i) next_u64();
}

Rng Rng::keyed(uint64_t seed, uint64_t stream, uint64_t substream) {
  // Mix the key tuple through splitmix so (seed, k, 0) and (seed, 0, k)
  // land in unrelated states.
  uint64_t x = seed;
  uint64_t a = splitmix64(x);
  x ^= 0x6a09e667f3bcc909ULL + stream;
  uint64_t b = splitmix64(x);
  x ^= 0xbb67ae8584caa73bULL + substream;
  uint64_t c = splitmix64(x);
  return Rng(a ^ rotl(b, 17) ^ rotl(c, 41));
}

uint64_t Rng::next_u64() {
  uint64_t* s = s_;
  const uint64_t result = rotl(s[1] * 5, 7) * 9;
  const uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = rotl(s[3], 45);
  return result;
}

uint64_t Rng::uniform_index(uint64_t n) {
  // Lemire's multiply-shift with rejection for exact uniformity.
  uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  uint64_t l = static_cast<uint64_t>(m);
  if (l < n) {
    uint64_t floor = (0 - n) % n;
    while (l < floor) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * n;
      l = static_cast<uint64_t>(m);
    }
  }
  return static_cast<uint64_t>(m >> 64);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, q;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  const double f = std::sqrt(-2.0 * std::log(q) / q);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

}  // namespace contreg
