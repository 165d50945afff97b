#include "unidisc/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace unidisc {

std::size_t FrequencyGrid::index_of(const std::vector<int>& k) const {
  auto it = std::lower_bound(vectors.begin(), vectors.end(), k);
  if (it != vectors.end() && *it == k)
    return static_cast<std::size_t>(it - vectors.begin());
  return npos;
}

FrequencyGrid box_grid(int M, int d, std::size_t cap) {
  if (M < 0) throw validation_error("box_grid: M must be nonnegative");
  if (d < 1) throw validation_error("box_grid: d must be positive");
  double total = std::pow(2.0 * M + 1.0, d);
  if (total > static_cast<double>(cap))
    throw cap_exceeded_error("box_grid: (2M+1)^d exceeds the size cap");

  FrequencyGrid g;
  g.dimension = d;
  std::vector<int> k(d, -M);
  while (true) {
    g.vectors.push_back(k);
    int i = d - 1;
    while (i >= 0 && k[i] == M) {
      k[i] = -M;
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  return g;
}

namespace {

void cross_recurse(int N, int d, int coord, std::int64_t prod,
                   std::vector<int>& k, std::size_t cap, FrequencyGrid& out) {
  if (coord == d) {
    if (out.vectors.size() >= cap)
      throw cap_exceeded_error("hyperbolic_cross: cardinality exceeds cap");
    out.vectors.push_back(k);
    return;
  }
  for (int kj = -N; kj <= N; ++kj) {
    std::int64_t f = std::max(std::abs(kj), 1);
    if (prod * f > N) continue;
    k[coord] = kj;
    cross_recurse(N, d, coord + 1, prod * f, k, cap, out);
  }
}

}  // namespace

FrequencyGrid hyperbolic_cross(int N, int d, std::size_t cap) {
  if (N < 1) throw validation_error("hyperbolic_cross: N must be positive");
  if (d < 1) throw validation_error("hyperbolic_cross: d must be positive");
  FrequencyGrid g;
  g.dimension = d;
  std::vector<int> k(d, 0);
  cross_recurse(N, d, 0, 1, k, cap, g);
  // lexicographic by construction for d = 1; the recursion visits
  // coordinates left to right in increasing order, so it holds generally
  return g;
}

int dyadic_level(int k) {
  if (k == 0) return 0;
  int a = std::abs(k);
  int s = 1;
  while ((1 << s) <= a) ++s;
  return s;  // floor(2^(s-1)) <= a < 2^s
}

std::vector<int> dyadic_block_of(const std::vector<int>& k) {
  std::vector<int> s(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) s[i] = dyadic_level(k[i]);
  return s;
}

FrequencyGrid dyadic_block(const std::vector<int>& s) {
  int d = static_cast<int>(s.size());
  if (d < 1) throw validation_error("dyadic_block: empty block vector");
  for (int sj : s)
    if (sj < 0) throw validation_error("dyadic_block: negative block index");

  // per-coordinate admissible values, ascending
  std::vector<std::vector<int>> axis(d);
  for (int j = 0; j < d; ++j) {
    int lo = s[j] == 0 ? 0 : (1 << (s[j] - 1));  // floor(2^(s_j-1))
    int hi = 1 << s[j];
    if (s[j] == 0) {
      axis[j] = {0};
      continue;
    }
    for (int a = -(hi - 1); a <= -(lo); ++a) axis[j].push_back(a);
    for (int a = lo; a <= hi - 1; ++a) axis[j].push_back(a);
  }

  FrequencyGrid g;
  g.dimension = d;
  std::vector<std::size_t> pos(d, 0);
  std::vector<int> k(d);
  while (true) {
    for (int j = 0; j < d; ++j) k[j] = axis[j][pos[j]];
    g.vectors.push_back(k);
    int i = d - 1;
    while (i >= 0 && pos[i] + 1 == axis[i].size()) {
      pos[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++pos[i];
  }
  return g;
}

}  // namespace unidisc
