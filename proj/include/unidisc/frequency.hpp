#pragma once

#include <cstdint>
#include <vector>

#include "unidisc/common.hpp"

namespace unidisc {

inline constexpr std::size_t kDefaultSizeCap = 100000;

/// An ordered list of integer frequency vectors in Z^d. The canonical
/// ordering is lexicographic; all enumeration functions produce it, which
/// fixes tie-breaking everywhere downstream.
struct FrequencyGrid {
  int dimension = 1;
  std::vector<std::vector<int>> vectors;

  std::size_t size() const { return vectors.size(); }
  /// Position of k in the grid, or npos.
  std::size_t index_of(const std::vector<int>& k) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool operator==(const FrequencyGrid&) const = default;
};

/// All k in [-M, M]^d, lexicographic. Cardinality (2M+1)^d.
FrequencyGrid box_grid(int M, int d, std::size_t cap = kDefaultSizeCap);

/// The hyperbolic cross: k in Z^d with prod_j max(|k_j|, 1) <= N.
FrequencyGrid hyperbolic_cross(int N, int d, std::size_t cap = kDefaultSizeCap);

/// The dyadic block rho(s): k with floor(2^(s_j - 1)) <= |k_j| < 2^(s_j)
/// per coordinate. Blocks for distinct s are disjoint and tile Z^d.
FrequencyGrid dyadic_block(const std::vector<int>& s);

/// Block index of a single coordinate: 0 for k=0, floor(log2 |k|)+1 else.
int dyadic_level(int k);

/// Componentwise block vector s(k), so that k lies in rho(s(k)).
std::vector<int> dyadic_block_of(const std::vector<int>& k);

}  // namespace unidisc
