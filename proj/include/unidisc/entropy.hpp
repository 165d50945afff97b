#pragma once

#include "unidisc/dictionary.hpp"

namespace unidisc {

/// Grid-sampled members of the unit L_p ball of v-sparse functions, each
/// normalized to grid p-norm 1, plus the generation metadata needed to
/// reproduce them.
struct FunctionCloud {
  QuadratureRule grid;
  Eigen::MatrixXcd members;  // grid nodes x members
  std::size_t v = 0;
  double p = 2.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return static_cast<std::size_t>(members.cols()); }
};

/// Random supports and coefficients normalized in the grid p-norm,
/// preceded by structured extremal members (single atoms and the
/// equal-coefficient combination).
FunctionCloud generate_cloud(const Dictionary& d, std::size_t v, double p,
                             std::size_t n_members, std::uint64_t seed,
                             int grid_points = 2048);

/// Greedy farthest-point net size in the grid sup distance: an estimate
/// of the covering number from below (the cloud is finite). Ties resolve
/// to the lowest member index.
std::size_t covering_estimate(const FunctionCloud& cloud, double eps);

struct EntropyEstimate {
  std::vector<double> eps_k;    // k = 0 .. k_max
  std::vector<double> radii;    // greedy net radius after t centers, t >= 1
};

/// Entropy numbers of the cloud: eps_k is the smallest radius at which a
/// greedy net of at most 2^k members covers the cloud. Computed from one
/// farthest-point sweep, whose radius profile also answers every covering
/// query.
EntropyEstimate entropy_numbers(const FunctionCloud& cloud, std::size_t k_max);

}  // namespace unidisc
