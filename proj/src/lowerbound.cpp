#include "unidisc/lowerbound.hpp"

#include <cmath>
#include <numbers>

namespace unidisc {

DirichletResult dirichlet_search(std::span<const double> points, int big_n) {
  if (big_n < 1) throw validation_error("dirichlet_search: N must be >= 1");
  if (points.empty()) throw validation_error("dirichlet_search: no points");
  for (double x : points)
    if (!(x >= 0.0 && x <= 1.0))
      throw validation_error("dirichlet_search: points must lie in [0, 1]");

  const double m = static_cast<double>(points.size());
  const double n_pow = std::pow(static_cast<double>(big_n), -1.0 / m);

  DirichletResult out;
  double best_scaled = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= big_n; ++k) {
    double worst = 0.0;
    for (double x : points) {
      double a = std::round(k * x);
      worst = std::max(worst, std::abs(x - a / k));
    }
    double scaled = k * worst;
    if (scaled < best_scaled) {
      best_scaled = scaled;
      out.best_scaled_k = k;
      out.best_scaled_error = scaled;
    }
    if (out.k == 0 && worst <= n_pow / k) {
      out.k = k;
      out.max_error = worst;
      out.numerators.resize(points.size());
      for (std::size_t i = 0; i < points.size(); ++i)
        out.numerators[i] =
            static_cast<long long>(std::llround(k * points[i]));
    }
  }
  if (out.k == 0)
    throw internal_inconsistency_error(
        "dirichlet_search: no admissible k found; simultaneous "
        "approximation must always succeed");
  return out;
}

std::optional<FailureCertificate> sine_failure_certificate(
    std::span<const double> points, int big_n, double c1, double scale) {
  if (!(c1 > 0.0)) throw validation_error("sine_failure_certificate: c1 > 0");
  if (!(scale > 0.0))
    throw validation_error("sine_failure_certificate: scale > 0");

  const double m = static_cast<double>(points.size());
  const double pi = std::numbers::pi;
  const double atom_norm_sq = scale * scale / 2.0;  // ||s sin(pi k x)||_2^2
  const double threshold = c1 * atom_norm_sq;

  // the best achieved scaled error k * max|xi - a/k| never exceeds the
  // guaranteed N^{-1/m}, so the certificate fires whenever the worst-case
  // arithmetic does, and also on luckier point sets
  DirichletResult dir = dirichlet_search(points, big_n);
  const int k = dir.best_scaled_k;
  const double implied = scale * scale * pi * pi * dir.best_scaled_error *
                         dir.best_scaled_error;
  if (!(implied < threshold)) return std::nullopt;

  FailureCertificate cert;
  cert.k = k;
  cert.implied_mean_bound = implied;
  cert.threshold = threshold;
  cert.c1 = c1;
  cert.scale = scale;
  cert.big_n = big_n;
  cert.numerators.resize(points.size());
  cert.point_errors.resize(points.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    cert.numerators[i] = static_cast<long long>(std::llround(k * points[i]));
    cert.point_errors[i] =
        std::abs(points[i] - static_cast<double>(cert.numerators[i]) / k);
    double val = scale * std::sin(pi * k * points[i]);
    mean += val * val;
  }
  cert.discrete_mean = mean / m;
  if (!(cert.discrete_mean < threshold))
    throw internal_inconsistency_error(
        "sine_failure_certificate: exact evaluation contradicts the bound");
  return cert;
}

double min_m_threshold(int big_n, double c1, double scale) {
  if (big_n < 1) throw validation_error("min_m_threshold: N must be >= 1");
  if (!(c1 > 0.0)) throw validation_error("min_m_threshold: c1 > 0");
  if (!(scale > 0.0)) throw validation_error("min_m_threshold: scale > 0");
  const double pi = std::numbers::pi;
  // s^2 pi^2 N^{-2/m} >= c1 s^2 / 2  <=>  m >= 2 ln N / ln(2 pi^2 / c1)
  double denom = std::log(2.0 * pi * pi / c1);
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * std::log(static_cast<double>(big_n)) / denom;
}

}  // namespace unidisc
