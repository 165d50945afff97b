#include "unidisc/quadrature.hpp"

#include <cmath>

namespace unidisc {

QuadratureRule QuadratureRule::build(const Domain& domain, int points_per_dim) {
  if (points_per_dim < 1)
    throw validation_error("quadrature resolution must be positive");
  int d = domain.dimension;
  double total = std::pow(static_cast<double>(points_per_dim), d);
  if (total > 1.7e7)
    throw cap_exceeded_error("quadrature grid too large; lower the resolution");

  QuadratureRule q;
  q.domain_ = domain;
  q.points_per_dim_ = points_per_dim;
  q.count_ = static_cast<std::size_t>(total);
  q.weight_ = 1.0 / total;
  q.coords_.resize(q.count_ * d);

  double extent = domain.extent();
  double shift = domain.kind == DomainKind::UnitInterval ? 0.5 : 0.0;
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t i = 0; i < q.count_; ++i) {
    for (int j = 0; j < d; ++j)
      q.coords_[i * d + j] =
          (static_cast<double>(idx[j]) + shift) * extent / points_per_dim;
    int j = d - 1;
    while (j >= 0 && ++idx[j] == static_cast<std::size_t>(points_per_dim)) {
      idx[j] = 0;
      --j;
    }
  }
  return q;
}

}  // namespace unidisc
