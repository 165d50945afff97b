#pragma once

#include <optional>
#include <span>

#include "unidisc/common.hpp"

namespace unidisc {

/// Simultaneous rational approximation witness: the smallest 1 <= k <= N
/// with max_nu |xi^nu - a_nu/k| <= k^{-1} N^{-1/m}, a_nu = round(k xi^nu).
/// Existence is guaranteed for any inputs; a floating-point violation
/// raises internal_inconsistency_error.
struct DirichletResult {
  int k = 0;
  std::vector<long long> numerators;
  double max_error = 0.0;
  // diagnostics: global minimizer of the scaled error k * max_nu |...|
  int best_scaled_k = 0;
  double best_scaled_error = 0.0;
};

DirichletResult dirichlet_search(std::span<const double> points, int big_n);

/// Witness that a point set cannot give one-sided discretization with
/// constant c1 on the singleton span of the k-th sine atom.
struct FailureCertificate {
  int k = 0;
  std::vector<long long> numerators;
  std::vector<double> point_errors;  // |xi^nu - a_nu/k|
  /// s^2 pi^2 (k max_nu|xi^nu - a_nu/k|)^2, at most s^2 pi^2 N^{-2/m}
  double implied_mean_bound = 0.0;
  double discrete_mean = 0.0;  // exact (1/m) sum |phi_k(xi^nu)|^2
  double threshold = 0.0;      // c1 * ||phi_k||_2^2
  double c1 = 0.0;
  double scale = 0.0;
  int big_n = 0;
};

/// Emits a certificate whenever the achieved simultaneous-approximation
/// error already forces the discrete mean below c1 * ||phi_k||^2, which
/// covers every point set once s^2 pi^2 N^{-2/m} < c1 s^2/2; verified by
/// exact evaluation. Returns nothing when inconclusive for this (m, N).
std::optional<FailureCertificate> sine_failure_certificate(
    std::span<const double> points, int big_n, double c1, double scale);

/// Real threshold below which the construction certifies failure:
/// 2 ln N / ln(2 pi^2 / c1); the scale cancels. For c1 = 1/2 this is
/// ln N / ln(2 pi).
double min_m_threshold(int big_n, double c1, double scale);

}  // namespace unidisc
