// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// anything fails. Every tolerance is pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "unidisc/discretization.hpp"
#include "unidisc/entropy.hpp"
#include "unidisc/lowerbound.hpp"
#include "unidisc/recovery.hpp"
#include "unidisc/rng.hpp"

using namespace unidisc;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void note(const std::string& what) {
    if (ok) detail = what;
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

SparseCoefficients random_sparse(const Dictionary& d, std::size_t v,
                                 CounterRng& rng) {
  SparseCoefficients c;
  c.support = rng.sample_without_replacement(d.size(), v);
  c.values.resize(v);
  for (std::size_t i = 0; i < v; ++i) c.values[i] = rng.next_complex_gaussian();
  return c;
}

PointSet certified_points(const Dictionary& d, std::size_t u,
                          std::uint64_t seed) {
  for (std::size_t m = 64; m <= (1u << 14); m *= 2) {
    for (std::uint64_t t = 0; t < 8; ++t) {
      PointSet pts = draw_points(m, d.domain(), SamplingMode::IidUniform,
                                 CounterRng::derive(seed, (m << 8) ^ t));
      if (universal_check(d, u, pts).holds) return pts;
    }
  }
  throw std::runtime_error("no certified point set found");
}

// 1. exact certificate from equispaced sampling of the full trig system
void criterion1(Check& c) {
  Dictionary d = Dictionary::trig(2, 1);  // N = 5
  PointSet pts = draw_points(5, d.domain(), SamplingMode::Equispaced);
  for (std::size_t v = 1; v <= 5; ++v) {
    UniversalCertificate cert = universal_check(d, v, pts);
    c.require(cert.holds, "v=" + std::to_string(v) + " does not hold");
    c.require(std::abs(cert.c1_global - 1.0) <= 1e-10,
              "v=" + std::to_string(v) + " c1=" + fmt(cert.c1_global));
    c.require(std::abs(cert.c2_global - 1.0) <= 1e-10,
              "v=" + std::to_string(v) + " c2=" + fmt(cert.c2_global));
  }
  c.note("v=1..5 all hold with c1=c2=1");
}

// 2. RIP and universal discretization agree through the same spectra
void criterion2(Check& c) {
  CounterRng rng(2040, 0);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 4 + rng.next_index(9);  // 4..12
    std::size_t v = 1 + rng.next_index(3);  // 1..3
    std::size_t m = v + 1 + rng.next_index(36);
    Dictionary d = Dictionary::trig_prefix(n, 1);
    PointSet pts = draw_points(m, d.domain(), SamplingMode::IidUniform,
                               rng.next_u64());
    UniversalCertificate cert = universal_check(d, v, pts);
    RIPReport rep = rip_delta(d, v, pts);
    double gap = std::abs(
        rep.delta - std::max(1.0 - cert.c1_global, cert.c2_global - 1.0));
    worst = std::max(worst, gap);
  }
  c.require(worst <= 1e-10, "worst gap " + fmt(worst));
  c.note("50 instances, worst gap " + fmt(worst));
}

// 3. exact sparse recovery by OMP on certified points
void criterion3(Check& c) {
  const std::size_t v = 2, expansion = 3, u = (1 + expansion) * v;  // 8
  Dictionary d = Dictionary::trig_prefix(16, 1);
  PointSet pts = certified_points(d, u, 2030);
  Eigen::MatrixXcd phi = sample_matrix(d, pts);
  CounterRng rng(2032, 0);
  int recovered = 0;
  for (int t = 0; t < 100; ++t) {
    SparseCoefficients f = random_sparse(d, v, rng);
    Eigen::VectorXcd y(phi.rows());
    for (Eigen::Index j = 0; j < phi.rows(); ++j)
      y[j] = d.evaluate_sum(f, pts.point(static_cast<std::size_t>(j)));
    WompConfig cfg;
    cfg.weakness = 1.0;
    cfg.max_iterations = expansion * v;  // cv = 6
    cfg.stop_tolerance = 1e-10;
    WompTrace trace = womp_run(phi, y, cfg);
    if (trace.final_residual_norm() <= 1e-8) ++recovered;
  }
  c.require(recovered == 100,
            std::to_string(recovered) + "/100 targets recovered");
  c.note("100/100 recovered at m=" + std::to_string(pts.m));
}

// 4. minimal m grows at most logarithmically in N, and success rates are
// monotone in m up to interval width
void criterion4(Check& c) {
  std::size_t mhat8 = 0;
  std::ostringstream seen;
  for (std::size_t n : {8, 16, 32, 64}) {
    Dictionary d = Dictionary::trig_prefix(n, 1);
    MinMResult res = empirical_min_m(d, 2, 0.5, 1.5, 0.9, 50, 2031, 65536);
    c.require(res.found, "no m found for N=" + std::to_string(n));
    if (!res.found) return;
    if (n == 8) mhat8 = res.m_hat;
    double bound =
        static_cast<double>(mhat8) *
        (1.0 + std::log(static_cast<double>(n)) / std::log(8.0)) * 2.0;
    c.require(static_cast<double>(res.m_hat) <= bound,
              "N=" + std::to_string(n) + ": m_hat=" +
                  std::to_string(res.m_hat) + " > bound " + fmt(bound));
    seen << " m(" << n << ")=" << res.m_hat;
    // doubling entries of the frozen bank: estimate may not drop by more
    // than the 95% interval width
    for (const SweepEntry& lo : res.sweep)
      for (const SweepEntry& hi : res.sweep)
        if (hi.m == 2 * lo.m) {
          double width = lo.wilson_high - lo.wilson_low;
          c.require(hi.estimate >= lo.estimate - width,
                    "N=" + std::to_string(n) + ": estimate drop at m=" +
                        std::to_string(lo.m) + "->" + std::to_string(hi.m));
        }
  }
  c.note(seen.str());
}

// 5. deterministic failure certificates for two points against N = 64
void criterion5(Check& c) {
  const int n = 64;
  Dictionary d = Dictionary::sine(n);
  CounterRng rng(2033, 0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> xs{rng.next_double(), rng.next_double()};
    auto cert = sine_failure_certificate(xs, n, 0.5, std::sqrt(2.0));
    if (!cert) {
      c.fail("no certificate at trial " + std::to_string(t));
      return;
    }
    if (!(cert->discrete_mean < 0.5 * 1.0)) {  // C1 * ||phi_k||^2 = 1/2
      c.fail("unsound certificate at trial " + std::to_string(t));
      return;
    }
    PointSet pts = explicit_points(Domain::unit_interval(), std::move(xs));
    UniversalCertificate one = one_sided_check(d, 1, pts, 0.5);
    if (one.holds) {
      c.fail("one-sided check disagrees at trial " + std::to_string(t));
      return;
    }
  }
  c.note("1000/1000 certificates produced and confirmed");
}

// 6. greedy residual against the best two-term error stays within the
// frozen factor of 10
void criterion6(Check& c) {
  const std::size_t v = 2, expansion = 3, u = (1 + expansion) * v;
  Dictionary d = Dictionary::trig_prefix(16, 1);
  PointSet pts = certified_points(d, u, 2030);
  QuadratureRule quad = QuadratureRule::build(d.domain(), 1024);
  CounterRng rng(2034, 0);
  double worst = 0.0;
  for (double delta : {1e-6, 1e-3, 1e-1}) {
    for (int t = 0; t < 50; ++t) {
      SparseCoefficients f = random_sparse(d, v, rng);
      SparseCoefficients g = random_sparse(d, d.size(), rng);
      double gnorm = continuous_norm(d, g, 2.0);
      for (cplx& val : g.values) val /= gnorm;
      auto eval = [&](const double* x) {
        return d.evaluate_sum(f, x) + delta * d.evaluate_sum(g, x);
      };
      LebesgueOptions opt;
      opt.expansion = expansion;
      opt.compute_continuous = false;
      LebesgueReport rep = lebesgue_report(eval, d, pts, v, opt, quad);
      worst = std::max(worst, rep.ratio_discrete);
      if (rep.ratio_discrete > 10.0) {
        c.fail("ratio " + fmt(rep.ratio_discrete) + " at delta " + fmt(delta));
        return;
      }
    }
  }
  c.note("150 targets, worst ratio " + fmt(worst));
}

// 7. sup norms of sparse trigonometric sums obey v^{1/p} ||f||_p
void criterion7(Check& c) {
  Dictionary d = Dictionary::trig_prefix(32, 1);
  QuadratureRule quad = QuadratureRule::build(d.domain(), 4096);
  Eigen::MatrixXcd atoms = atom_grid_matrix(d, quad);
  CounterRng rng(2035, 0);
  for (std::size_t v : {1, 2, 4}) {
    for (int t = 0; t < 1000; ++t) {
      SparseCoefficients f = random_sparse(d, v, rng);
      Eigen::VectorXcd g = Eigen::VectorXcd::Zero(atoms.rows());
      for (std::size_t i = 0; i < v; ++i)
        g += f.values[i] * atoms.col(static_cast<Eigen::Index>(f.support[i]));
      double sup = g.cwiseAbs().maxCoeff();
      for (double p : {1.0, 2.0}) {
        double np = p == 2.0 ? continuous_norm(d, f, 2.0)
                             : continuous_norm_grid(g, p, quad);
        if (sup > std::pow(static_cast<double>(v), 1.0 / p) * np *
                      (1.0 + 1e-6)) {
          c.fail("violated at v=" + std::to_string(v) +
                 " p=" + fmt(p) + " trial " + std::to_string(t));
          return;
        }
      }
    }
    // the equal-coefficient witness must reach 0.99 sqrt(v) for p = 2
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(atoms.rows());
    SparseCoefficients wc;
    for (std::size_t i = 0; i < v; ++i) {
      wc.support.push_back(i);
      wc.values.push_back(1.0 / std::sqrt(static_cast<double>(v)));
      w += wc.values.back() * atoms.col(static_cast<Eigen::Index>(i));
    }
    double ratio = w.cwiseAbs().maxCoeff() / continuous_norm(d, wc, 2.0);
    c.require(ratio >= 0.99 * std::sqrt(static_cast<double>(v)),
              "witness ratio " + fmt(ratio) + " at v=" + std::to_string(v));
  }
  c.note("3000 samples within the bound; witnesses attain sqrt(v)");
}

// 8. the half/half measure identity
void criterion8(Check& c) {
  Dictionary d = Dictionary::trig_prefix(12, 1);
  QuadratureRule quad = QuadratureRule::build(d.domain(), 4096);
  CounterRng rng(2036, 0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::size_t m = 1 + rng.next_index(32);
    PointSet pts = draw_points(m, d.domain(), SamplingMode::IidUniform,
                               rng.next_u64());
    SparseCoefficients f = random_sparse(d, 3, rng);
    auto eval = [&](const double* x) { return d.evaluate_sum(f, x); };

    double mixed = mixed_norm(eval, pts, quad);
    Eigen::VectorXcd grid(static_cast<Eigen::Index>(quad.size()));
    for (std::size_t q = 0; q < quad.size(); ++q)
      grid[static_cast<Eigen::Index>(q)] = eval(quad.node(q));
    double cont = continuous_norm_grid(grid, 2.0, quad);
    Eigen::VectorXcd samples(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j)
      samples[static_cast<Eigen::Index>(j)] = eval(pts.point(j));
    double disc = discrete_norm(samples, 2.0);
    double gap =
        std::abs(mixed * mixed - 0.5 * cont * cont - 0.5 * disc * disc);
    worst = std::max(worst, gap);
  }
  c.require(worst <= 1e-10, "worst identity gap " + fmt(worst));
  c.note("100 pairs, worst gap " + fmt(worst));
}

// 9. entropy decay shape on the frozen cloud
void criterion9(Check& c) {
  Dictionary d = Dictionary::trig_prefix(16, 1);
  FunctionCloud cloud = generate_cloud(d, 2, 2.0, 8000, 2029, 512);
  EntropyEstimate est = entropy_numbers(cloud, 10);
  for (std::size_t k = 0; k + 1 < est.eps_k.size(); ++k)
    c.require(est.eps_k[k + 1] <= est.eps_k[k] + 1e-15,
              "not nonincreasing at k=" + std::to_string(k));
  for (std::size_t k = 4; k < 10; ++k)
    c.require(est.eps_k[k + 1] < est.eps_k[k],
              "not strictly decreasing at k=" + std::to_string(k));
  double slope = (std::log(est.eps_k[10]) - std::log(est.eps_k[4])) /
                 (std::log(10.0) - std::log(4.0));
  c.require(slope <= -0.2 && slope >= -0.9, "slope " + fmt(slope));
  c.note("slope " + fmt(slope) + " within [-0.9, -0.2]");
}

// 10. the dyadic-block greedy construction on frozen class instances
void criterion10(Check& c) {
  std::ostringstream seen;
  for (std::uint64_t seed : {2028, 2029, 2030}) {
    ClassInstance inst = generate_class_instance(1, 0.5, 0.0, 6, seed);
    PointSet pts = draw_points(16, Domain::torus(1), SamplingMode::IidUniform,
                               seed + 7);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n : {3, 4, 5, 6}) {
      BlockGreedyResult res =
          block_greedy(inst.grid, inst.coefficients, 0.5, 0.25, n, pts);
      c.require(res.error_mixed < prev,
                "error not strictly decreasing at n=" + std::to_string(n) +
                    " seed=" + std::to_string(seed));
      c.require(res.term_count <= (std::size_t{4} << n),
                "term count " + std::to_string(res.term_count) + " > 4*2^n");
      prev = res.error_mixed;
      if (seed == 2028) seen << " e(" << n << ")=" << fmt(res.error_mixed);
    }
  }
  c.note(seen.str());
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<void(Check&)> run;
    double time_limit;  // seconds; 0 = unbounded
  };
  std::vector<Entry> criteria{
      {1, "exact equispaced certificate", criterion1, 1.0},
      {2, "RIP matches universal discretization", criterion2, 30.0},
      {3, "exact sparse recovery by OMP", criterion3, 120.0},
      {4, "minimal m grows logarithmically", criterion4, 600.0},
      {5, "sine-system failure certificates", criterion5, 30.0},
      {6, "greedy residual vs best two-term error", criterion6, 0.0},
      {7, "sup-norm inequality for sparse sums", criterion7, 0.0},
      {8, "half-continuous half-empirical identity", criterion8, 0.0},
      {9, "entropy decay shape", criterion9, 0.0},
      {10, "dyadic-block greedy construction", criterion10, 0.0},
  };

  int failures = 0;
  for (const Entry& e : criteria) {
    Check check;
    auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(check);
    } catch (const std::exception& ex) {
      check.fail(std::string("exception: ") + ex.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (e.time_limit > 0.0 && secs > e.time_limit)
      check.fail("took " + fmt(secs) + "s, limit " + fmt(e.time_limit) + "s");
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n",
                check.ok ? "PASS" : "FAIL", e.id, e.name, secs,
                check.detail.empty() ? "" : " -- ", check.detail.c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
  }
  if (failures > 0)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
