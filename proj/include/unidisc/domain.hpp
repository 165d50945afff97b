#pragma once

#include <numbers>
#include <span>
#include <string>

#include "unidisc/common.hpp"

namespace unidisc {

enum class DomainKind {
  Torus,         // [0, 2*pi)^d with normalized Lebesgue measure
  UnitInterval,  // [0, 1] with Lebesgue measure
};

/// A probability space on which dictionaries live. Total measure is 1 in
/// both cases; points are kept inside the fundamental domain.
struct Domain {
  DomainKind kind = DomainKind::Torus;
  int dimension = 1;

  static Domain torus(int d) {
    if (d < 1) throw validation_error("domain dimension must be positive");
    return Domain{DomainKind::Torus, d};
  }
  static Domain unit_interval() { return Domain{DomainKind::UnitInterval, 1}; }

  /// Length of the fundamental interval per coordinate.
  double extent() const {
    return kind == DomainKind::Torus ? 2.0 * std::numbers::pi : 1.0;
  }

  bool contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension) return false;
    double hi = extent();
    for (double c : x) {
      if (!(c >= 0.0 && c <= hi)) return false;
    }
    return true;
  }

  bool operator==(const Domain& o) const {
    return kind == o.kind && dimension == o.dimension;
  }

  std::string name() const {
    if (kind == DomainKind::Torus)
      return "torus-" + std::to_string(dimension);
    return "unit-interval";
  }
};

}  // namespace unidisc
