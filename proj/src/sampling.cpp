#include "unidisc/sampling.hpp"

#include <cmath>

#include "unidisc/rng.hpp"

namespace unidisc {

PointSet draw_points(std::size_t m, const Domain& domain, SamplingMode mode,
                     std::uint64_t seed) {
  if (m == 0) throw validation_error("draw_points: m must be positive");
  const int d = domain.dimension;
  const double extent = domain.extent();

  PointSet ps;
  ps.domain = domain;
  ps.mode = mode;
  ps.seed = seed;
  ps.m = m;
  ps.coords.resize(m * d);

  switch (mode) {
    case SamplingMode::IidUniform: {
      CounterRng rng(seed, 0);
      for (std::size_t j = 0; j < m; ++j)
        for (int c = 0; c < d; ++c)
          ps.coords[j * d + c] = rng.next_double() * extent;
      break;
    }
    case SamplingMode::Stratified: {
      CounterRng rng(seed, 1);
      // full tensor split when m is a perfect d-th power
      std::size_t r = 0;
      if (d > 1) {
        r = static_cast<std::size_t>(
            std::llround(std::pow(static_cast<double>(m), 1.0 / d)));
        std::size_t check = 1;
        for (int c = 0; c < d; ++c) check *= r;
        if (check != m) r = 0;
      }
      if (d == 1 || r == 0) {
        // slabs of the first coordinate: cell j is [(j)/m, (j+1)/m)
        for (std::size_t j = 0; j < m; ++j) {
          ps.coords[j * d] =
              (static_cast<double>(j) + rng.next_double()) / m * extent;
          for (int c = 1; c < d; ++c)
            ps.coords[j * d + c] = rng.next_double() * extent;
        }
      } else {
        // row-major boxes, r per axis
        std::vector<std::size_t> cell(d, 0);
        for (std::size_t j = 0; j < m; ++j) {
          for (int c = 0; c < d; ++c)
            ps.coords[j * d + c] =
                (static_cast<double>(cell[c]) + rng.next_double()) / r * extent;
          int c = d - 1;
          while (c >= 0 && ++cell[c] == r) {
            cell[c] = 0;
            --c;
          }
        }
      }
      break;
    }
    case SamplingMode::Equispaced: {
      if (d != 1)
        throw validation_error("draw_points: equispaced mode is 1-D only");
      for (std::size_t j = 0; j < m; ++j)
        ps.coords[j] = static_cast<double>(j) / m * extent;
      break;
    }
    case SamplingMode::Explicit:
      throw validation_error("draw_points: explicit mode needs coordinates");
  }
  return ps;
}

PointSet explicit_points(const Domain& domain, std::vector<double> coords) {
  const int d = domain.dimension;
  if (coords.empty() || coords.size() % d != 0)
    throw validation_error("explicit_points: coordinate count mismatch");
  PointSet ps;
  ps.domain = domain;
  ps.mode = SamplingMode::Explicit;
  ps.m = coords.size() / d;
  ps.coords = std::move(coords);
  for (std::size_t j = 0; j < ps.m; ++j)
    if (!domain.contains(ps.point_span(j)))
      throw validation_error("explicit_points: point outside the domain");
  return ps;
}

Eigen::MatrixXcd sample_matrix(const Dictionary& d, const PointSet& points) {
  if (!(d.domain() == points.domain))
    throw validation_error("sample_matrix: dictionary/point domain mismatch");
  const auto m = static_cast<Eigen::Index>(points.m);
  const auto n = static_cast<Eigen::Index>(d.size());
  const double bound = d.uniform_bound() + 1e-12;
  Eigen::MatrixXcd phi(m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      cplx val = d.evaluate(static_cast<std::size_t>(i),
                            points.point(static_cast<std::size_t>(j)));
      if (std::abs(val) > bound)
        throw validation_error(
            "sample_matrix: atom exceeds its declared uniform bound");
      phi(j, i) = val;
    }
  }
  return phi;
}

Eigen::MatrixXcd normalized_system(const Eigen::MatrixXcd& phi) {
  return phi / std::sqrt(static_cast<double>(phi.rows()));
}

double discrete_norm(const Eigen::VectorXcd& z, double p) {
  if (z.size() == 0) throw validation_error("discrete_norm: empty vector");
  if (!(p >= 1.0)) throw validation_error("discrete_norm: p must be >= 1");
  if (std::isinf(p)) return z.cwiseAbs().maxCoeff();
  const double m = static_cast<double>(z.size());
  if (p == 2.0) return z.norm() / std::sqrt(m);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    acc += std::pow(std::abs(z[j]), p);
  return std::pow(acc / m, 1.0 / p);
}

double mixed_norm(const std::function<cplx(const double*)>& f,
                  const PointSet& points, const QuadratureRule& quad) {
  double cont_sq = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q)
    cont_sq += std::norm(f(quad.node(q)));
  cont_sq *= quad.weight();
  double disc_sq = 0.0;
  for (std::size_t j = 0; j < points.m; ++j)
    disc_sq += std::norm(f(points.point(j)));
  disc_sq /= static_cast<double>(points.m);
  return std::sqrt(0.5 * cont_sq + 0.5 * disc_sq);
}

}  // namespace unidisc
