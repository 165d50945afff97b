#include "unidisc/discretization.hpp"

#include <cmath>
#include <map>

#include "unidisc/parallel.hpp"
#include "unidisc/rng.hpp"

namespace unidisc {

namespace {

/// Eigenvalue range of a small Hermitian PSD Gram; closed forms for 1x1
/// and 2x2, Eigen beyond that. Roundoff below zero is clamped.
SupportBounds hermitian_extremes(const Eigen::MatrixXcd& a) {
  SupportBounds b;
  const Eigen::Index k = a.rows();
  if (k == 1) {
    b.lambda_min = b.lambda_max = std::max(0.0, a(0, 0).real());
    return b;
  }
  if (k == 2) {
    double p = a(0, 0).real();
    double q = a(1, 1).real();
    double mean = 0.5 * (p + q);
    double disc = std::sqrt(0.25 * (p - q) * (p - q) + std::norm(a(0, 1)));
    b.lambda_min = std::max(0.0, mean - disc);
    b.lambda_max = mean + disc;
    return b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a,
                                                     Eigen::EigenvaluesOnly);
  b.lambda_min = std::max(0.0, es.eigenvalues().minCoeff());
  b.lambda_max = es.eigenvalues().maxCoeff();
  return b;
}

/// Discrete Gram under the normalized counting measure: Phi^H Phi / m.
Eigen::MatrixXcd discrete_gram(const Eigen::MatrixXcd& phi) {
  Eigen::MatrixXcd g =
      (phi.adjoint() * phi) / static_cast<double>(phi.rows());
  return (g + g.adjoint()) / 2.0;
}

struct ScanResult {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::uint64_t checked = 0;
  std::optional<std::vector<std::size_t>> violation;  // lex-first
  std::vector<SupportExtremes> extremes;              // first few supports
};

template <typename BoundsOf, typename Violate>
void for_each_support_until(std::size_t n, std::size_t v, ScanResult& out,
                            std::size_t record_cap, BoundsOf&& bounds_of,
                            Violate&& violate) {
  bool stop = false;
  for_each_support(n, v, [&](const std::vector<std::size_t>& J) {
    if (stop) return;
    SupportBounds b = bounds_of(J);
    out.lo = std::min(out.lo, b.lambda_min);
    out.hi = std::max(out.hi, b.lambda_max);
    ++out.checked;
    if (out.extremes.size() < record_cap)
      out.extremes.push_back({J, b.lambda_min, b.lambda_max});
    if (violate(b)) {
      out.violation = J;
      stop = true;
    }
  });
}

/// Scans v-supports of a prescaled Hermitian matrix (continuous Gram
/// already whitened away), tracking global eigenvalue extremes. violate()
/// classifies a support; when early_exit is set the scan stops at the
/// first violation (used by Monte Carlo trials, where only pass/fail
/// matters). Chunked supports keep the reduction deterministic.
template <typename Violate>
ScanResult scan_supports(const Eigen::MatrixXcd& gm, std::size_t v,
                         const CheckOptions& opt, bool early_exit,
                         Violate&& violate) {
  const std::size_t n = static_cast<std::size_t>(gm.rows());
  ScanResult out;

  auto bounds_of = [&](const std::vector<std::size_t>& J) {
    if (v == 1) {
      double x = gm(static_cast<Eigen::Index>(J[0]),
                    static_cast<Eigen::Index>(J[0]))
                     .real();
      return SupportBounds{x, x};
    }
    Eigen::MatrixXcd sub(v, v);
    for (std::size_t r = 0; r < v; ++r)
      for (std::size_t c = 0; c < v; ++c)
        sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            gm(static_cast<Eigen::Index>(J[r]),
               static_cast<Eigen::Index>(J[c]));
    return hermitian_extremes(sub);
  };

  if (opt.randomized_supports > 0) {
    CounterRng rng(opt.randomized_seed, 0xD15C);
    for (std::size_t s = 0; s < opt.randomized_supports; ++s) {
      std::vector<std::size_t> J = rng.sample_without_replacement(n, v);
      SupportBounds b = bounds_of(J);
      out.lo = std::min(out.lo, b.lambda_min);
      out.hi = std::max(out.hi, b.lambda_max);
      ++out.checked;
      if (out.extremes.size() < opt.per_support_cap)
        out.extremes.push_back({J, b.lambda_min, b.lambda_max});
      if (violate(b) && !out.violation) {
        out.violation = J;
        if (early_exit) return out;
      }
    }
    return out;
  }

  const std::uint64_t total = binomial(n, v);
  if (total > opt.support_cap)
    throw cap_exceeded_error(
        "support enumeration exceeds the cap; use randomized mode");

  if (early_exit) {
    for_each_support_until(n, v, out, opt.per_support_cap, bounds_of,
                           violate);
    return out;
  }

  unsigned threads = effective_threads(opt.max_threads);
  if (threads <= 1 || total < 1024 || opt.per_support_cap > 0) {
    for_each_support(n, v, [&](const std::vector<std::size_t>& J) {
      SupportBounds b = bounds_of(J);
      out.lo = std::min(out.lo, b.lambda_min);
      out.hi = std::max(out.hi, b.lambda_max);
      ++out.checked;
      if (out.extremes.size() < opt.per_support_cap)
        out.extremes.push_back({J, b.lambda_min, b.lambda_max});
      if (violate(b) && !out.violation) out.violation = J;
    });
    return out;
  }

  // parallel: one contiguous rank chunk per task, deterministic merge
  const std::uint64_t chunk = (total + threads * 8 - 1) / (threads * 8);
  const std::size_t n_chunks =
      static_cast<std::size_t>((total + chunk - 1) / chunk);
  std::vector<ScanResult> parts(n_chunks);
  std::vector<std::uint64_t> first_violation_rank(
      n_chunks, std::numeric_limits<std::uint64_t>::max());
  parallel_for(n_chunks, threads, [&](std::size_t ci) {
    std::uint64_t begin = ci * chunk;
    std::uint64_t end = std::min<std::uint64_t>(total, begin + chunk);
    std::vector<std::size_t> J = support_at_rank(n, v, begin);
    ScanResult& part = parts[ci];
    for (std::uint64_t r = begin; r < end; ++r) {
      SupportBounds b = bounds_of(J);
      part.lo = std::min(part.lo, b.lambda_min);
      part.hi = std::max(part.hi, b.lambda_max);
      ++part.checked;
      if (violate(b) && !part.violation) {
        part.violation = J;
        first_violation_rank[ci] = r;
      }
      // advance to the next combination
      std::size_t i = v;
      while (i > 0) {
        --i;
        if (J[i] != i + n - v) {
          ++J[i];
          for (std::size_t j = i + 1; j < v; ++j) J[j] = J[j - 1] + 1;
          break;
        }
      }
    }
  });
  std::uint64_t best_rank = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t ci = 0; ci < n_chunks; ++ci) {
    out.lo = std::min(out.lo, parts[ci].lo);
    out.hi = std::max(out.hi, parts[ci].hi);
    out.checked += parts[ci].checked;
    if (parts[ci].violation && first_violation_rank[ci] < best_rank) {
      best_rank = first_violation_rank[ci];
      out.violation = parts[ci].violation;
    }
  }
  return out;
}

/// Prescales the discrete Gram by the inverse square roots of the
/// analytic diagonal continuous Gram, turning the generalized problem
/// into an ordinary one.
Eigen::MatrixXcd prescaled_gram(const Dictionary& d,
                                const Eigen::MatrixXcd& phi) {
  Eigen::MatrixXcd gm = discrete_gram(phi);
  if (!d.has_diagonal_gram())
    throw validation_error("prescaled_gram: diagonal Gram required");
  const Eigen::Index n = gm.rows();
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i)
    inv_sqrt[i] =
        1.0 / std::sqrt(d.atom_norm_sq(static_cast<std::size_t>(i)));
  return inv_sqrt.asDiagonal() * gm * inv_sqrt.asDiagonal();
}

UniversalCertificate check_impl(const Dictionary& d, std::size_t v,
                                const PointSet& points, double c1, double c2,
                                bool one_sided, const CheckOptions& opt,
                                bool early_exit) {
  if (v == 0 || v > d.size())
    throw validation_error("universal_check: need 1 <= v <= N");
  Eigen::MatrixXcd phi = sample_matrix(d, points);

  UniversalCertificate cert;
  cert.v = v;
  cert.c1 = c1;
  cert.c2 = c2;
  cert.one_sided = one_sided;
  cert.randomized = opt.randomized_supports > 0;

  // a support fails only if it violates a constant beyond the tolerance
  const double slack_lo = opt.eig_tol * std::max(1.0, c1);
  const double slack_hi = opt.eig_tol * std::max(1.0, std::isfinite(c2) ? c2 : 1.0);
  auto violate = [&](const SupportBounds& b) {
    bool low = b.lambda_min < c1 - slack_lo;
    bool high = !one_sided && b.lambda_max > c2 + slack_hi;
    return low || high;
  };

  ScanResult scan;
  if (d.has_diagonal_gram()) {
    scan = scan_supports(prescaled_gram(d, phi), v, opt, early_exit, violate);
  } else {
    // custom dictionary: whiten by the Cholesky factor of the full
    // continuous Gram, then scan the transformed discrete Gram
    QuadratureRule local;
    const QuadratureRule* quad = opt.quad;
    if (quad == nullptr) {
      local = QuadratureRule::build(d.domain());
      quad = &local;
    }
    Eigen::MatrixXcd gc = d.continuous_gram_full(quad);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gc);
    double gmin = es.eigenvalues().minCoeff();
    double gmax = es.eigenvalues().maxCoeff();
    if (gmin <= 1e-10 * std::max(1.0, gmax))
      throw conditioning_error(
          "universal_check: continuous Gram is numerically singular");
    // Whitening by the full Gram is only valid support-by-support when
    // the Gram is diagonal, so enumerate with per-support pencils here.
    Eigen::MatrixXcd gm = discrete_gram(phi);
    auto bounds_sub = [&](const std::vector<std::size_t>& J) {
      const auto k = static_cast<Eigen::Index>(J.size());
      Eigen::MatrixXcd a(k, k), b(k, k);
      for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) {
          a(r, c) = gm(static_cast<Eigen::Index>(J[static_cast<std::size_t>(r)]),
                       static_cast<Eigen::Index>(J[static_cast<std::size_t>(c)]));
          b(r, c) = gc(static_cast<Eigen::Index>(J[static_cast<std::size_t>(r)]),
                       static_cast<Eigen::Index>(J[static_cast<std::size_t>(c)]));
        }
      return subspace_ratio_bounds(a, b);
    };
    const std::uint64_t total = binomial(d.size(), v);
    if (opt.randomized_supports == 0 && total > opt.support_cap)
      throw cap_exceeded_error(
          "support enumeration exceeds the cap; use randomized mode");
    if (opt.randomized_supports > 0) {
      CounterRng rng(opt.randomized_seed, 0xD15C);
      for (std::size_t s = 0; s < opt.randomized_supports; ++s) {
        auto J = rng.sample_without_replacement(d.size(), v);
        SupportBounds b = bounds_sub(J);
        scan.lo = std::min(scan.lo, b.lambda_min);
        scan.hi = std::max(scan.hi, b.lambda_max);
        ++scan.checked;
        if (scan.extremes.size() < opt.per_support_cap)
          scan.extremes.push_back({J, b.lambda_min, b.lambda_max});
        if (violate(b) && !scan.violation) scan.violation = J;
      }
    } else {
      bool stop = false;
      for_each_support(d.size(), v, [&](const std::vector<std::size_t>& J) {
        if (stop) return;
        SupportBounds b = bounds_sub(J);
        scan.lo = std::min(scan.lo, b.lambda_min);
        scan.hi = std::max(scan.hi, b.lambda_max);
        ++scan.checked;
        if (scan.extremes.size() < opt.per_support_cap)
          scan.extremes.push_back({J, b.lambda_min, b.lambda_max});
        if (violate(b) && !scan.violation) {
          scan.violation = J;
          if (early_exit) stop = true;
        }
      });
    }
  }

  cert.c1_global = scan.lo;
  cert.c2_global = scan.hi;
  cert.supports_checked = scan.checked;
  cert.holds = !scan.violation.has_value();
  if (scan.violation) cert.witness = *scan.violation;
  cert.per_support = std::move(scan.extremes);
  return cert;
}

}  // namespace

SupportBounds subspace_ratio_bounds(const Eigen::MatrixXcd& discrete_gram,
                                    const Eigen::MatrixXcd& continuous_gram) {
  if (discrete_gram.rows() == 0)
    throw validation_error("subspace_ratio_bounds: empty support");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gc(continuous_gram);
  double gmin = gc.eigenvalues().minCoeff();
  double gmax = gc.eigenvalues().maxCoeff();
  if (gmin <= 1e-10 * std::max(1.0, gmax))
    throw conditioning_error(
        "subspace_ratio_bounds: continuous Gram not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(
      discrete_gram, continuous_gram,
      Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  SupportBounds b;
  b.lambda_min = std::max(0.0, ges.eigenvalues().minCoeff());
  b.lambda_max = ges.eigenvalues().maxCoeff();
  return b;
}

SupportBounds subspace_ratio_bounds(const Dictionary& d,
                                    std::span<const std::size_t> support,
                                    const PointSet& points,
                                    const QuadratureRule* quad) {
  if (support.empty())
    throw validation_error("subspace_ratio_bounds: empty support");
  for (std::size_t i : support)
    if (i >= d.size())
      throw validation_error("subspace_ratio_bounds: index out of range");
  const auto k = static_cast<Eigen::Index>(support.size());
  const auto m = static_cast<Eigen::Index>(points.m);
  Eigen::MatrixXcd cols(m, k);
  for (Eigen::Index c = 0; c < k; ++c)
    for (Eigen::Index j = 0; j < m; ++j)
      cols(j, c) = d.evaluate(support[static_cast<std::size_t>(c)],
                              points.point(static_cast<std::size_t>(j)));
  Eigen::MatrixXcd gm = discrete_gram(cols);
  Eigen::MatrixXcd gc = d.continuous_gram(support, quad);
  return subspace_ratio_bounds(gm, gc);
}

UniversalCertificate universal_check(const Dictionary& d, std::size_t v,
                                     const PointSet& points, double c1,
                                     double c2, const CheckOptions& opt) {
  if (!(c1 > 0.0) || !(c2 >= c1))
    throw validation_error("universal_check: need 0 < C1 <= C2");
  return check_impl(d, v, points, c1, c2, /*one_sided=*/false, opt,
                    /*early_exit=*/false);
}

UniversalCertificate one_sided_check(const Dictionary& d, std::size_t v,
                                     const PointSet& points, double c1,
                                     const CheckOptions& opt) {
  if (!(c1 > 0.0)) throw validation_error("one_sided_check: need C1 > 0");
  return check_impl(d, v, points, c1,
                    std::numeric_limits<double>::infinity(),
                    /*one_sided=*/true, opt, /*early_exit=*/false);
}

RIPReport rip_delta_system(const Eigen::MatrixXcd& normalized, std::size_t v,
                           const CheckOptions& opt) {
  if (v == 0 || v > static_cast<std::size_t>(normalized.cols()))
    throw validation_error("rip_delta: need 1 <= v <= N");
  Eigen::MatrixXcd gram = normalized.adjoint() * normalized;
  gram = (gram + gram.adjoint()) / 2.0;

  RIPReport rep;
  rep.v = v;
  double worst = -1.0;
  std::vector<std::size_t> witness;
  const std::size_t n = static_cast<std::size_t>(gram.cols());
  const std::uint64_t total = binomial(n, v);
  if (opt.randomized_supports == 0 && total > opt.support_cap)
    throw cap_exceeded_error("rip_delta: support enumeration exceeds the cap");
  auto consider = [&](const std::vector<std::size_t>& J) {
    Eigen::MatrixXcd sub(v, v);
    for (std::size_t r = 0; r < v; ++r)
      for (std::size_t c = 0; c < v; ++c)
        sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            gram(static_cast<Eigen::Index>(J[r]),
                 static_cast<Eigen::Index>(J[c]));
    SupportBounds b = hermitian_extremes(sub);
    double dist = std::max(1.0 - b.lambda_min, b.lambda_max - 1.0);
    if (dist > worst) {
      worst = dist;
      witness = J;
    }
  };
  if (opt.randomized_supports > 0) {
    CounterRng rng(opt.randomized_seed, 0xD15C);
    for (std::size_t s = 0; s < opt.randomized_supports; ++s)
      consider(rng.sample_without_replacement(n, v));
  } else {
    for_each_support(n, v, consider);
  }
  rep.delta = std::max(worst, 0.0);
  rep.witness = witness;
  return rep;
}

RIPReport rip_delta(const Dictionary& d, std::size_t v, const PointSet& points,
                    const CheckOptions& opt) {
  Eigen::MatrixXcd g = normalized_system(sample_matrix(d, points));
  RIPReport rep = rip_delta_system(g, v, opt);
  rep.dictionary_orthonormal = d.orthonormal();
  return rep;
}

namespace {
constexpr double kWilsonZ = 1.959963984540054;  // 95%

double wilson_center(double phat, double n) {
  double z2 = kWilsonZ * kWilsonZ;
  return (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
}
double wilson_half(double phat, double n) {
  double z2 = kWilsonZ * kWilsonZ;
  return kWilsonZ *
         std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) /
         (1.0 + z2 / n);
}
}  // namespace

double wilson_low(std::size_t successes, std::size_t trials) {
  double n = static_cast<double>(trials);
  double phat = static_cast<double>(successes) / n;
  return std::max(0.0, wilson_center(phat, n) - wilson_half(phat, n));
}

double wilson_high(std::size_t successes, std::size_t trials) {
  double n = static_cast<double>(trials);
  double phat = static_cast<double>(successes) / n;
  return std::min(1.0, wilson_center(phat, n) + wilson_half(phat, n));
}

SweepEntry success_probability(const Dictionary& d, std::size_t v,
                               std::size_t m, double c1, double c2,
                               std::size_t trials, std::uint64_t seed,
                               const CheckOptions& opt) {
  if (trials == 0) throw validation_error("success_probability: no trials");
  if (v == 0 || v > d.size())
    throw validation_error("success_probability: need 1 <= v <= N");
  // feasibility check up front so worker threads never throw
  if (opt.randomized_supports == 0 && binomial(d.size(), v) > opt.support_cap)
    throw cap_exceeded_error("success_probability: support cap exceeded");

  std::vector<char> ok(trials, 0);
  CheckOptions trial_opt = opt;
  trial_opt.max_threads = 1;  // trials are the parallel dimension
  parallel_for(trials, opt.max_threads, [&](std::size_t t) {
    std::uint64_t stream = (static_cast<std::uint64_t>(m) << 32) ^ t;
    PointSet pts = draw_points(m, d.domain(), SamplingMode::IidUniform,
                               CounterRng::derive(seed, stream));
    UniversalCertificate cert = check_impl(d, v, pts, c1, c2,
                                           /*one_sided=*/false, trial_opt,
                                           /*early_exit=*/true);
    ok[t] = cert.holds ? 1 : 0;
  });

  SweepEntry e;
  e.m = m;
  e.trials = trials;
  for (char c : ok) e.successes += c;
  e.estimate = static_cast<double>(e.successes) / static_cast<double>(trials);
  e.wilson_low = wilson_low(e.successes, trials);
  e.wilson_high = wilson_high(e.successes, trials);
  return e;
}

MinMResult empirical_min_m(const Dictionary& d, std::size_t v, double c1,
                           double c2, double pi0, std::size_t trials,
                           std::uint64_t seed, std::size_t m_cap,
                           const CheckOptions& opt) {
  if (!(pi0 > 0.0 && pi0 <= 1.0))
    throw validation_error("empirical_min_m: pi0 must be in (0, 1]");
  MinMResult res;
  res.m_cap = m_cap;
  std::map<std::size_t, SweepEntry> cache;
  auto estimate = [&](std::size_t m) -> const SweepEntry& {
    auto it = cache.find(m);
    if (it == cache.end())
      it = cache.emplace(m, success_probability(d, v, m, c1, c2, trials, seed,
                                                opt))
               .first;
    return it->second;
  };

  std::size_t m = std::max<std::size_t>(v, 1);
  std::size_t last_fail = 0;
  bool found = false;
  while (m <= m_cap) {
    if (estimate(m).estimate >= pi0) {
      found = true;
      break;
    }
    last_fail = m;
    m *= 2;
  }
  if (found) {
    std::size_t lo = last_fail, hi = m;
    while (hi - lo > 1 && lo > 0) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (estimate(mid).estimate >= pi0)
        hi = mid;
      else
        lo = mid;
    }
    res.found = true;
    res.m_hat = hi;
  }
  for (const auto& [mm, entry] : cache) res.sweep.push_back(entry);
  return res;
}

LpCheckResult lp_check_randomized(const Dictionary& d, std::size_t v, double p,
                                  const PointSet& points,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const QuadratureRule* quad) {
  if (!(p >= 1.0 && p <= 2.0))
    throw validation_error("lp_check_randomized: p must be in [1, 2]");
  if (v == 0 || v > d.size())
    throw validation_error("lp_check_randomized: need 1 <= v <= N");
  QuadratureRule local;
  if (quad == nullptr && !(p == 2.0 && d.has_diagonal_gram())) {
    local = QuadratureRule::build(d.domain());
    quad = &local;
  }

  LpCheckResult out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = -std::numeric_limits<double>::infinity();

  auto consider = [&](const SparseCoefficients& f) {
    double disc = 0.0;
    for (std::size_t j = 0; j < points.m; ++j)
      disc += std::pow(std::abs(d.evaluate_sum(f, points.point(j))), p);
    disc /= static_cast<double>(points.m);
    double ref = continuous_norm(d, f, p, quad);
    double ratio = disc / std::pow(ref, p);
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
    ++out.samples;
  };

  CounterRng rng(seed, 0x1bCEC);
  // structured extremal family: equal coefficients v^{-1/2} on a support
  auto structured = [&](const std::vector<std::size_t>& J) {
    SparseCoefficients f;
    f.support = J;
    f.values.assign(J.size(), cplx(1.0 / std::sqrt(static_cast<double>(v)), 0));
    consider(f);
  };
  std::vector<std::size_t> lex_first(v);
  for (std::size_t i = 0; i < v; ++i) lex_first[i] = i;
  structured(lex_first);
  for (int s = 0; s < 8; ++s)
    structured(rng.sample_without_replacement(d.size(), v));

  for (std::size_t s = 0; s < n_samples; ++s) {
    SparseCoefficients f;
    f.support = rng.sample_without_replacement(d.size(), v);
    f.values.resize(v);
    for (std::size_t i = 0; i < v; ++i)
      f.values[i] = rng.next_complex_gaussian();
    consider(f);
  }
  return out;
}

}  // namespace unidisc
