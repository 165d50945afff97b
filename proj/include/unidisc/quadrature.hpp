#pragma once

#include <vector>

#include "unidisc/domain.hpp"

namespace unidisc {

inline constexpr int kDefaultQuadPointsPerDim = 4096;

/// Equal-weight tensor-grid reference quadrature. On the torus the nodes
/// are equispaced, which integrates trigonometric polynomials of
/// per-coordinate degree below the resolution exactly; on [0,1] the
/// midpoint rule is used.
class QuadratureRule {
 public:
  QuadratureRule() = default;
  static QuadratureRule build(const Domain& domain,
                              int points_per_dim = kDefaultQuadPointsPerDim);

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return count_; }
  double weight() const { return weight_; }
  int points_per_dim() const { return points_per_dim_; }

  /// Pointer to the d coordinates of node i.
  const double* node(std::size_t i) const {
    return coords_.data() + i * domain_.dimension;
  }

  /// Integral of a scalar function given its per-node values.
  template <typename T>
  T integrate(const std::vector<T>& values) const {
    T acc{};
    for (const T& v : values) acc += v;
    return acc * weight_;
  }

 private:
  Domain domain_;
  int points_per_dim_ = 0;
  std::size_t count_ = 0;
  double weight_ = 0.0;
  std::vector<double> coords_;  // count * dimension, row-major
};

}  // namespace unidisc
