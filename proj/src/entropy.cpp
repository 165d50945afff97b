#include "unidisc/entropy.hpp"

#include <cmath>

#include "unidisc/rng.hpp"

namespace unidisc {

namespace {

/// Squared sup distance between two grid-sampled functions.
double sup_dist_sq(const Eigen::MatrixXcd& members, Eigen::Index a,
                   Eigen::Index b) {
  return (members.col(a) - members.col(b)).cwiseAbs2().maxCoeff();
}

/// Farthest-point (greedy net) sweep. Returns the net radius after each
/// center; the first center is member 0 and ties resolve to the lowest
/// member index. Stops once `t_max` centers are placed or the radius
/// reaches zero.
std::vector<double> greedy_radii(const FunctionCloud& cloud,
                                 std::size_t t_max) {
  const auto n = static_cast<Eigen::Index>(cloud.size());
  if (n == 0) return {};
  std::vector<double> mind_sq(static_cast<std::size_t>(n),
                              std::numeric_limits<double>::infinity());
  std::vector<double> radii;
  Eigen::Index center = 0;
  for (std::size_t t = 1; t <= std::min<std::size_t>(t_max, n); ++t) {
    double worst = -1.0;
    Eigen::Index next = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = sup_dist_sq(cloud.members, i, center);
      if (d < mind_sq[static_cast<std::size_t>(i)])
        mind_sq[static_cast<std::size_t>(i)] = d;
      if (mind_sq[static_cast<std::size_t>(i)] > worst) {
        worst = mind_sq[static_cast<std::size_t>(i)];
        next = i;
      }
    }
    radii.push_back(std::sqrt(std::max(0.0, worst)));
    if (worst <= 0.0) break;
    center = next;
  }
  return radii;
}

}  // namespace

FunctionCloud generate_cloud(const Dictionary& d, std::size_t v, double p,
                             std::size_t n_members, std::uint64_t seed,
                             int grid_points) {
  if (n_members == 0)
    throw validation_error("generate_cloud: need at least one member");
  if (v == 0 || v > d.size())
    throw validation_error("generate_cloud: need 1 <= v <= N");
  if (!(p >= 1.0)) throw validation_error("generate_cloud: p must be >= 1");

  FunctionCloud cloud;
  cloud.grid = QuadratureRule::build(d.domain(), grid_points);
  cloud.v = v;
  cloud.p = p;
  cloud.seed = seed;

  Eigen::MatrixXcd atoms = atom_grid_matrix(d, cloud.grid);
  const auto nodes = static_cast<Eigen::Index>(cloud.grid.size());
  cloud.members.resize(nodes, static_cast<Eigen::Index>(n_members));

  CounterRng rng(seed, 0xC1000D);
  std::size_t filled = 0;
  auto push = [&](const Eigen::VectorXcd& values) {
    if (filled >= n_members) return;
    double norm = continuous_norm_grid(values, p, cloud.grid);
    if (!(norm > 0.0)) return;
    cloud.members.col(static_cast<Eigen::Index>(filled)) = values / norm;
    ++filled;
  };

  // structured extremal members: one atom alone, then the
  // equal-coefficient combination on the first support
  push(atoms.col(0));
  {
    Eigen::VectorXcd eq = Eigen::VectorXcd::Zero(nodes);
    for (std::size_t i = 0; i < v; ++i)
      eq += atoms.col(static_cast<Eigen::Index>(i));
    push(eq / std::sqrt(static_cast<double>(v)));
  }

  while (filled < n_members) {
    std::vector<std::size_t> support =
        rng.sample_without_replacement(d.size(), v);
    Eigen::VectorXcd values = Eigen::VectorXcd::Zero(nodes);
    for (std::size_t i : support)
      values += rng.next_complex_gaussian() *
                atoms.col(static_cast<Eigen::Index>(i));
    push(values);
  }
  return cloud;
}

std::size_t covering_estimate(const FunctionCloud& cloud, double eps) {
  if (!(eps > 0.0)) throw validation_error("covering_estimate: eps > 0");
  std::vector<double> radii = greedy_radii(cloud, cloud.size());
  for (std::size_t t = 0; t < radii.size(); ++t)
    if (radii[t] <= eps) return t + 1;
  return radii.size();  // radius hit zero at the last center
}

EntropyEstimate entropy_numbers(const FunctionCloud& cloud,
                                std::size_t k_max) {
  if (k_max < 1) throw validation_error("entropy_numbers: k_max >= 1");
  std::size_t t_max = cloud.size();
  if (k_max < 60) t_max = std::min<std::size_t>(t_max, std::size_t{1} << k_max);

  EntropyEstimate est;
  est.radii = greedy_radii(cloud, t_max);
  est.eps_k.resize(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    // the sweep only ends before 2^k centers once its radius reaches
    // zero, so clamping the index keeps the value exact
    std::size_t target =
        k < 60 ? std::min<std::size_t>(std::size_t{1} << k, est.radii.size())
               : est.radii.size();
    est.eps_k[k] = est.radii[target - 1];
  }
  return est;
}

}  // namespace unidisc
