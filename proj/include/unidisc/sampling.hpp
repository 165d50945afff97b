#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "unidisc/dictionary.hpp"
#include "unidisc/domain.hpp"
#include "unidisc/quadrature.hpp"

namespace unidisc {

enum class SamplingMode { IidUniform, Stratified, Equispaced, Explicit };

/// m sampling points with enough provenance metadata to regenerate the
/// set bit-exactly from the seed.
struct PointSet {
  Domain domain;
  SamplingMode mode = SamplingMode::Explicit;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  std::vector<double> coords;  // m * dimension, row-major

  const double* point(std::size_t j) const {
    return coords.data() + j * domain.dimension;
  }
  std::span<const double> point_span(std::size_t j) const {
    return {point(j), static_cast<std::size_t>(domain.dimension)};
  }
};

/// Generates sampling points.
///   iid-uniform: independent uniform draws from the domain measure.
///   stratified:  one uniform draw per cell of an m-cell equal-measure
///                partition (axis-aligned; a full tensor split when m is a
///                perfect d-th power, else slabs of the first coordinate).
///   equispaced:  x_j = (j-1)/m scaled to the domain, 1-D only.
PointSet draw_points(std::size_t m, const Domain& domain, SamplingMode mode,
                     std::uint64_t seed = 0);

PointSet explicit_points(const Domain& domain, std::vector<double> coords);

/// The m x N evaluation table Phi[j,i] = phi_i(xi^j).
Eigen::MatrixXcd sample_matrix(const Dictionary& d, const PointSet& points);

/// Columns scaled by m^{-1/2} so the column Gram matches the normalized
/// counting measure.
Eigen::MatrixXcd normalized_system(const Eigen::MatrixXcd& phi);

/// ((1/m) sum |z_j|^p)^{1/p}; max for p = inf.
double discrete_norm(const Eigen::VectorXcd& z, double p);

/// Norm in L2 of the half-continuous, half-empirical measure
/// mu_xi = mu/2 + (1/2m) sum delta_{xi^j}:
/// sqrt( (1/2)||f||_{L2(mu)}^2 + (1/2)(1/m) sum |f(xi^j)|^2 ).
double mixed_norm(const std::function<cplx(const double*)>& f,
                  const PointSet& points, const QuadratureRule& quad);

}  // namespace unidisc
