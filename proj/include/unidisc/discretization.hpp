#pragma once

#include <optional>

#include "unidisc/dictionary.hpp"
#include "unidisc/sampling.hpp"

namespace unidisc {

struct CheckOptions {
  std::uint64_t support_cap = kDefaultSupportCap;
  double eig_tol = 1e-10;  // relative slack when comparing against C1/C2
  unsigned max_threads = 0;
  /// When nonzero, sample this many supports instead of enumerating; the
  /// result is an estimate, not a certificate.
  std::size_t randomized_supports = 0;
  std::uint64_t randomized_seed = 0;
  /// When nonzero, record the extremes of the first this-many supports
  /// (canonical order) in the certificate; forces a sequential scan.
  std::size_t per_support_cap = 0;
  const QuadratureRule* quad = nullptr;  // custom dictionaries only
};

struct SupportBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extremal generalized eigenvalues of (discrete Gram, continuous Gram)
/// on the span of a single support: the inf/sup over f in V_J of
/// ((1/m) sum |f(xi^j)|^2) / ||f||_2^2.
SupportBounds subspace_ratio_bounds(const Dictionary& d,
                                    std::span<const std::size_t> support,
                                    const PointSet& points,
                                    const QuadratureRule* quad = nullptr);

/// Low-level variant on precomputed Hermitian Grams.
SupportBounds subspace_ratio_bounds(const Eigen::MatrixXcd& discrete_gram,
                                    const Eigen::MatrixXcd& continuous_gram);

struct SupportExtremes {
  std::vector<std::size_t> support;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Result of checking every v-support against [C1, C2] (or C1 alone for
/// the one-sided variant). c1_global/c2_global are the extremes over all
/// supports; a failing certificate carries the lexicographically first
/// violating support as witness.
struct UniversalCertificate {
  std::size_t v = 0;
  double c1 = 0.5;
  double c2 = 1.5;
  bool one_sided = false;
  bool holds = false;
  double c1_global = 0.0;
  double c2_global = 0.0;
  std::vector<std::size_t> witness;
  std::uint64_t supports_checked = 0;
  bool randomized = false;  // estimate, not certificate
  std::vector<SupportExtremes> per_support;  // first per_support_cap only
};

UniversalCertificate universal_check(const Dictionary& d, std::size_t v,
                                     const PointSet& points, double c1 = 0.5,
                                     double c2 = 1.5,
                                     const CheckOptions& opt = {});

UniversalCertificate one_sided_check(const Dictionary& d, std::size_t v,
                                     const PointSet& points, double c1,
                                     const CheckOptions& opt = {});

/// Worst spectral distance to the identity over all v-column sub-Grams of
/// the normalized system. The RIP/discretization equivalence needs the
/// dictionary orthonormal; the flag records whether that held.
struct RIPReport {
  std::size_t v = 0;
  double delta = 0.0;
  std::vector<std::size_t> witness;
  bool dictionary_orthonormal = false;
};

RIPReport rip_delta(const Dictionary& d, std::size_t v, const PointSet& points,
                    const CheckOptions& opt = {});
RIPReport rip_delta_system(const Eigen::MatrixXcd& normalized,
                           std::size_t v, const CheckOptions& opt = {});

/// One row of a success-probability sweep, with a Wilson 95% interval.
struct SweepEntry {
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double estimate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
};

/// Fraction of independent iid point draws whose universal check holds.
/// Trial t at size m uses the stream derived from (seed, m, t), so sweeps
/// are reproducible and extendable.
SweepEntry success_probability(const Dictionary& d, std::size_t v,
                               std::size_t m, double c1, double c2,
                               std::size_t trials, std::uint64_t seed,
                               const CheckOptions& opt = {});

struct MinMResult {
  bool found = false;
  std::size_t m_hat = 0;
  std::size_t m_cap = 0;
  std::vector<SweepEntry> sweep;  // ordered by m
};

/// Smallest m in a doubling-then-bisection schedule whose estimated
/// success probability reaches pi0.
MinMResult empirical_min_m(const Dictionary& d, std::size_t v, double c1,
                           double c2, double pi0, std::size_t trials,
                           std::uint64_t seed, std::size_t m_cap = 65536,
                           const CheckOptions& opt = {});

/// Sampled two-sided L_p ratio over random v-sparse functions plus the
/// structured equal-coefficient family. A lower/upper estimate, not a
/// certificate.
struct LpCheckResult {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t samples = 0;
};

LpCheckResult lp_check_randomized(const Dictionary& d, std::size_t v, double p,
                                  const PointSet& points,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const QuadratureRule* quad = nullptr);

double wilson_low(std::size_t successes, std::size_t trials);
double wilson_high(std::size_t successes, std::size_t trials);

}  // namespace unidisc
