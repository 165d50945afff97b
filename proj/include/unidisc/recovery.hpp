#pragma once

#include "unidisc/dictionary.hpp"
#include "unidisc/sampling.hpp"

namespace unidisc {

struct WompConfig {
  double weakness = 1.0;          // t in (0, 1]; 1 is plain OMP
  std::size_t max_iterations = 0;
  double stop_tolerance = 1e-12;  // on the residual discrete norm
};

/// Full iteration history of WOMP in L2 of the normalized counting
/// measure on the sample points. residual_norms[0] is the norm of the
/// input; one entry follows per completed iteration.
struct WompTrace {
  std::vector<std::size_t> selected;
  std::vector<double> residual_norms;
  Eigen::VectorXcd coefficients;  // on `selected`
  Eigen::VectorXcd residual;      // final residual sample vector

  double final_residual_norm() const { return residual_norms.back(); }
};

/// Greedy selection against normalized columns followed by orthogonal
/// projection onto the selected span. Ties and threshold selection both
/// resolve to the lowest column index. Columns with zero discrete norm
/// never compete.
WompTrace womp_run(const Eigen::MatrixXcd& phi, const Eigen::VectorXcd& y,
                   const WompConfig& cfg);

struct LsFit {
  Eigen::VectorXcd coefficients;  // minimum-norm solution on the support
  Eigen::VectorXcd residual;
  double residual_norm = 0.0;  // discrete norm
};

/// Least squares on the given columns under the normalized counting
/// measure; rank deficiency resolves to the minimum-norm coefficients.
LsFit ls_fit(const Eigen::MatrixXcd& phi, std::span<const std::size_t> support,
             const Eigen::VectorXcd& y);

struct RecoveryResult {
  SparseCoefficients approximant;
  double err_discrete = 0.0;    // ||S(f-u, xi)||_2
  double err_continuous = 0.0;  // ||f-u||_{L2(mu)} on the reference grid
  double err_mixed = 0.0;       // ||f-u||_{L2(mu_xi)}
};

/// Fits every v-support by least squares on the samples and keeps the fit
/// with the smallest continuous L2 residual (ties: lexicographically
/// first support).
RecoveryResult ls_universal(const std::function<cplx(const double*)>& f,
                            const Dictionary& d, std::size_t v,
                            const PointSet& points, const QuadratureRule& quad,
                            std::uint64_t support_cap = kDefaultSupportCap);

struct LebesgueOptions {
  double weakness = 1.0;
  std::size_t expansion = 3;  // c: run c*v greedy iterations
  double stop_tolerance = 1e-12;
  bool compute_continuous = true;
  int sup_grid_points = 1024;   // grid for the sup-norm sigma_v estimate
  int sup_irls_iterations = 24;
  std::uint64_t support_cap = kDefaultSupportCap;
};

/// Ratios of the greedy residual after c*v iterations against the best
/// v-term error, in the discrete norm and (optionally) the continuous
/// norm with a sup-norm best-term estimate. 0/0 reports as 1.
struct LebesgueReport {
  WompTrace trace;
  double residual_discrete = 0.0;
  double sigma_v_discrete = 0.0;
  double ratio_discrete = 0.0;
  double residual_continuous = 0.0;
  double sigma_v_sup = 0.0;
  double ratio_continuous = 0.0;
};

LebesgueReport lebesgue_report(const std::function<cplx(const double*)>& f,
                               const Dictionary& d, const PointSet& points,
                               std::size_t v, const LebesgueOptions& opt,
                               const QuadratureRule& quad);

/// Output of the dyadic-block greedy construction. Coefficients align
/// with the input frequency grid.
struct BlockGreedyResult {
  std::vector<cplx> coefficients;
  std::size_t term_count = 0;
  double error_mixed = 0.0;
  std::vector<std::size_t> steps_per_level;  // OMP steps from level n up
};

/// Approximant for trigonometric sums grouped by dyadic blocks: the full
/// partial sum below level n plus, per level j >= n, an OMP approximant
/// with floor(2^{n - beta (j-n)} j^{d-1}) terms in the half-continuous,
/// half-empirical inner product.
BlockGreedyResult block_greedy(const FrequencyGrid& grid,
                               const std::vector<cplx>& coefficients,
                               double decay_a, double beta, std::size_t n,
                               const PointSet& points,
                               double stop_tolerance = 1e-12);

/// Lower estimate of the unconditionality constant U of UP(u, D): the
/// worst ratio ||sum_A c_i phi_i|| / dist(sum_A c_i phi_i, V_J) over
/// admissible disjoint (A, J) with |A| <= u and |A| + |J| <= d_cap.
/// Extremal coefficients come from the pencil of the ambient Gram against
/// the Schur complement; a few random draws are sampled as well.
struct UpConstantResult {
  double estimate = 0.0;
  std::vector<std::size_t> witness_a;
  std::vector<std::size_t> witness_j;
};

UpConstantResult up_constant(const Dictionary& d, std::size_t u,
                             std::size_t d_cap,
                             const QuadratureRule* quad = nullptr,
                             std::size_t random_draws = 4,
                             std::uint64_t seed = 0);

}  // namespace unidisc
