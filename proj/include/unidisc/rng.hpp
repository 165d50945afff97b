#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "unidisc/common.hpp"

namespace unidisc {

/// Counter-based 64-bit generator (SplitMix64 finalizer over a keyed
/// counter). Output i of a stream is mix(key + (i+1)*GAMMA) where the key
/// is derived from (seed, stream). Distinct (seed, stream) pairs give
/// independent, reproducible sequences, so parallel trials can each own a
/// stream without sharing state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed) ^ mix(stream * 0x9E3779B97F4A7C15ULL + 1))) {}

  /// Derives a child seed; used to split one logical seed into named
  /// substreams (e.g. per-trial, per-m) without coupling their outputs.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) ^ mix(stream * 0x9E3779B97F4A7C15ULL + 1));
  }

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return mix(key_ + counter_);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, n).
  std::uint64_t next_index(std::uint64_t n) {
    // rejection-free modulo is fine here; n is tiny relative to 2^64
    return next_u64() % n;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Complex with independent N(0,1) real and imaginary parts.
  cplx next_complex_gaussian() {
    double re = next_gaussian();
    double im = next_gaussian();
    return {re, im};
  }

  /// Sorted sample of k distinct indices from {0..n-1}.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    // Floyd's algorithm
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t j = n - k; j < n; ++j) {
      std::size_t t = static_cast<std::size_t>(next_index(j + 1));
      bool present = false;
      for (std::size_t x : out) {
        if (x == t) {
          present = true;
          break;
        }
      }
      out.push_back(present ? j : t);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace unidisc
