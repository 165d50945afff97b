#include "unidisc/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "unidisc/rng.hpp"

namespace unidisc {

WompTrace womp_run(const Eigen::MatrixXcd& phi, const Eigen::VectorXcd& y,
                   const WompConfig& cfg) {
  if (!(cfg.weakness > 0.0 && cfg.weakness <= 1.0))
    throw validation_error("womp_run: weakness must be in (0, 1]");
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();
  if (m == 0 || y.size() != m)
    throw validation_error("womp_run: sample size mismatch");
  const double sqrt_m = std::sqrt(static_cast<double>(m));

  Eigen::VectorXd col_norms(n);  // discrete norms of the columns
  bool any = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    col_norms[i] = phi.col(i).norm() / sqrt_m;
    any = any || col_norms[i] > 0.0;
  }
  if (!any) throw validation_error("womp_run: all columns are zero");

  WompTrace trace;
  trace.residual = y;
  trace.residual_norms.push_back(y.norm() / sqrt_m);
  if (trace.residual_norms.back() <= cfg.stop_tolerance) {
    trace.coefficients.resize(0);
    return trace;
  }

  Eigen::MatrixXcd selected_cols(m, 0);
  for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
    // correlations with the normalized columns psi_i = phi_i / ||phi_i||
    Eigen::VectorXcd corr = phi.adjoint() * trace.residual;
    double sup = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (col_norms[i] == 0.0) continue;
      sup = std::max(sup, std::abs(corr[i]) / col_norms[i]);
    }
    if (sup == 0.0) break;  // residual orthogonal to every column

    Eigen::Index pick = -1;
    if (cfg.weakness == 1.0) {
      double best = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (col_norms[i] == 0.0) continue;
        double a = std::abs(corr[i]) / col_norms[i];
        if (a > best) {
          best = a;
          pick = i;
        }
      }
    } else {
      double threshold = cfg.weakness * sup;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (col_norms[i] == 0.0) continue;
        if (std::abs(corr[i]) / col_norms[i] >= threshold) {
          pick = i;
          break;
        }
      }
    }
    // a numerically re-picked column means the residual already lies in
    // the selected span
    if (std::find(trace.selected.begin(), trace.selected.end(),
                  static_cast<std::size_t>(pick)) != trace.selected.end())
      break;

    trace.selected.push_back(static_cast<std::size_t>(pick));
    selected_cols.conservativeResize(Eigen::NoChange, selected_cols.cols() + 1);
    selected_cols.col(selected_cols.cols() - 1) = phi.col(pick);

    trace.coefficients =
        selected_cols.completeOrthogonalDecomposition().solve(y);
    trace.residual = y - selected_cols * trace.coefficients;
    trace.residual_norms.push_back(trace.residual.norm() / sqrt_m);
    if (trace.residual_norms.back() <= cfg.stop_tolerance) break;
  }
  return trace;
}

LsFit ls_fit(const Eigen::MatrixXcd& phi, std::span<const std::size_t> support,
             const Eigen::VectorXcd& y) {
  const Eigen::Index m = phi.rows();
  if (m == 0 || y.size() != m)
    throw validation_error("ls_fit: sample size mismatch");
  LsFit fit;
  if (support.empty()) {
    fit.coefficients.resize(0);
    fit.residual = y;
    fit.residual_norm = y.norm() / std::sqrt(static_cast<double>(m));
    return fit;
  }
  Eigen::MatrixXcd cols(m, static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) {
    if (support[c] >= static_cast<std::size_t>(phi.cols()))
      throw validation_error("ls_fit: support index out of range");
    cols.col(static_cast<Eigen::Index>(c)) =
        phi.col(static_cast<Eigen::Index>(support[c]));
  }
  fit.coefficients = cols.completeOrthogonalDecomposition().solve(y);
  fit.residual = y - cols * fit.coefficients;
  fit.residual_norm = fit.residual.norm() / std::sqrt(static_cast<double>(m));
  return fit;
}

RecoveryResult ls_universal(const std::function<cplx(const double*)>& f,
                            const Dictionary& d, std::size_t v,
                            const PointSet& points, const QuadratureRule& quad,
                            std::uint64_t support_cap) {
  const std::size_t n = d.size();
  if (v > n) v = n;
  if (binomial(n, v) > support_cap)
    throw cap_exceeded_error("ls_universal: C(N,v) exceeds the support cap");

  const auto m = static_cast<Eigen::Index>(points.m);
  Eigen::VectorXcd y(m);
  for (Eigen::Index j = 0; j < m; ++j)
    y[j] = f(points.point(static_cast<std::size_t>(j)));
  const auto nodes = static_cast<Eigen::Index>(quad.size());
  Eigen::VectorXcd f_grid(nodes);
  for (Eigen::Index q = 0; q < nodes; ++q)
    f_grid[q] = f(quad.node(static_cast<std::size_t>(q)));

  RecoveryResult out;
  if (v == 0) {
    out.err_discrete = discrete_norm(y, 2.0);
    out.err_continuous = continuous_norm_grid(f_grid, 2.0, quad);
    out.err_mixed = std::sqrt(0.5 * out.err_continuous * out.err_continuous +
                              0.5 * out.err_discrete * out.err_discrete);
    return out;
  }

  Eigen::MatrixXcd phi = sample_matrix(d, points);
  Eigen::MatrixXcd a = atom_grid_matrix(d, quad);

  double best_cont = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_support;
  Eigen::VectorXcd best_coeffs;
  double best_disc = 0.0;
  for_each_support(n, v, [&](const std::vector<std::size_t>& J) {
    LsFit fit = ls_fit(phi, J, y);
    Eigen::VectorXcd approx_grid = Eigen::VectorXcd::Zero(nodes);
    for (std::size_t c = 0; c < J.size(); ++c)
      approx_grid += fit.coefficients[static_cast<Eigen::Index>(c)] *
                     a.col(static_cast<Eigen::Index>(J[c]));
    double cont = continuous_norm_grid(f_grid - approx_grid, 2.0, quad);
    if (cont < best_cont) {
      best_cont = cont;
      best_support = J;
      best_coeffs = fit.coefficients;
      best_disc = fit.residual_norm;
    }
  });

  out.approximant.support = best_support;
  out.approximant.values.assign(best_coeffs.data(),
                                best_coeffs.data() + best_coeffs.size());
  out.err_discrete = best_disc;
  out.err_continuous = best_cont;
  out.err_mixed = std::sqrt(0.5 * best_cont * best_cont +
                            0.5 * best_disc * best_disc);
  return out;
}

LebesgueReport lebesgue_report(const std::function<cplx(const double*)>& f,
                               const Dictionary& d, const PointSet& points,
                               std::size_t v, const LebesgueOptions& opt,
                               const QuadratureRule& quad) {
  Eigen::MatrixXcd phi = sample_matrix(d, points);
  const auto m = static_cast<Eigen::Index>(points.m);
  Eigen::VectorXcd y(m);
  for (Eigen::Index j = 0; j < m; ++j)
    y[j] = f(points.point(static_cast<std::size_t>(j)));

  WompConfig cfg;
  cfg.weakness = opt.weakness;
  cfg.max_iterations = opt.expansion * v;
  cfg.stop_tolerance = opt.stop_tolerance;

  LebesgueReport rep;
  rep.trace = womp_run(phi, y, cfg);
  rep.residual_discrete = rep.trace.final_residual_norm();
  rep.sigma_v_discrete =
      best_v_term_discrete(phi, y, v, opt.support_cap).error;
  if (rep.sigma_v_discrete == 0.0 && rep.residual_discrete == 0.0)
    rep.ratio_discrete = 1.0;
  else
    rep.ratio_discrete = rep.residual_discrete / rep.sigma_v_discrete;

  if (opt.compute_continuous) {
    const auto nodes = static_cast<Eigen::Index>(quad.size());
    Eigen::VectorXcd f_grid(nodes);
    for (Eigen::Index q = 0; q < nodes; ++q)
      f_grid[q] = f(quad.node(static_cast<std::size_t>(q)));
    Eigen::MatrixXcd a = atom_grid_matrix(d, quad);
    Eigen::VectorXcd resid_grid = f_grid;
    for (std::size_t c = 0; c < rep.trace.selected.size(); ++c)
      resid_grid -= rep.trace.coefficients[static_cast<Eigen::Index>(c)] *
                    a.col(static_cast<Eigen::Index>(rep.trace.selected[c]));
    rep.residual_continuous = continuous_norm_grid(resid_grid, 2.0, quad);

    // sup-norm best-term estimate on its own (coarser) grid
    QuadratureRule sup_quad =
        QuadratureRule::build(d.domain(), opt.sup_grid_points);
    const auto sn = static_cast<Eigen::Index>(sup_quad.size());
    Eigen::VectorXcd f_sup(sn);
    for (Eigen::Index q = 0; q < sn; ++q)
      f_sup[q] = f(sup_quad.node(static_cast<std::size_t>(q)));
    rep.sigma_v_sup = best_v_term_grid(d, f_sup, v, sup_quad, ErrorNorm::Sup,
                                       opt.support_cap)
                          .error;
    if (rep.sigma_v_sup == 0.0 && rep.residual_continuous == 0.0)
      rep.ratio_continuous = 1.0;
    else
      rep.ratio_continuous = rep.residual_continuous / rep.sigma_v_sup;
  }
  return rep;
}

namespace {

/// v_j = floor(2^{n - beta (j - n)} j^{d-1}), with j^0 = 1.
std::size_t block_budget(std::size_t j, std::size_t n, double beta, int d) {
  double levels = std::pow(2.0, static_cast<double>(n) -
                                    beta * (static_cast<double>(j) -
                                            static_cast<double>(n)));
  double poly = d == 1 ? 1.0 : std::pow(static_cast<double>(j), d - 1);
  double v = std::floor(levels * poly);
  if (v < 0.0) return 0;
  return static_cast<std::size_t>(v);
}

}  // namespace

BlockGreedyResult block_greedy(const FrequencyGrid& grid,
                               const std::vector<cplx>& coefficients,
                               double decay_a, double beta, std::size_t n,
                               const PointSet& points,
                               double stop_tolerance) {
  if (coefficients.size() != grid.size())
    throw validation_error("block_greedy: coefficient count mismatch");
  if (!(beta > 0.0 && beta < decay_a))
    throw validation_error("block_greedy: beta must lie in (0, a)");
  const int d = grid.dimension;
  if (points.domain.kind != DomainKind::Torus || points.domain.dimension != d)
    throw validation_error("block_greedy: points must live on the d-torus");

  // levels and coverage: every block holding a nonzero coefficient must
  // be fully contained in the grid
  const std::size_t size = grid.size();
  std::vector<std::size_t> level(size);
  std::size_t max_level = 0;
  for (std::size_t i = 0; i < size; ++i) {
    std::vector<int> s = dyadic_block_of(grid.vectors[i]);
    std::size_t l = 0;
    for (int sj : s) l += static_cast<std::size_t>(sj);
    level[i] = l;
    max_level = std::max(max_level, l);
  }
  std::set<std::vector<int>> nonzero_blocks;
  for (std::size_t i = 0; i < size; ++i)
    if (std::abs(coefficients[i]) > 0.0)
      nonzero_blocks.insert(dyadic_block_of(grid.vectors[i]));
  for (const auto& s : nonzero_blocks) {
    FrequencyGrid block = dyadic_block(s);
    for (const auto& k : block.vectors)
      if (grid.index_of(k) == FrequencyGrid::npos)
        throw coverage_error(
            "block_greedy: grid truncates a block with nonzero coefficients");
  }

  const std::size_t m = points.m;
  Eigen::MatrixXcd atom_pts;  // per-level evaluations, rebuilt each level
  Dictionary trig_all = Dictionary::trig_grid(grid);

  BlockGreedyResult res;
  res.coefficients.assign(size, cplx(0.0, 0.0));

  // partial sum: everything below level n
  for (std::size_t i = 0; i < size; ++i)
    if (level[i] < n) res.coefficients[i] = coefficients[i];

  for (std::size_t j = n; j <= max_level; ++j) {
    std::size_t vj = block_budget(j, n, beta, d);
    res.steps_per_level.push_back(0);
    if (vj == 0) continue;
    std::vector<std::size_t> idx;  // grid indices at this level
    for (std::size_t i = 0; i < size; ++i)
      if (level[i] == j) idx.push_back(i);
    if (idx.empty()) continue;
    bool has_signal = false;
    for (std::size_t i : idx)
      if (std::abs(coefficients[i]) > 0.0) has_signal = true;
    if (!has_signal) continue;

    const auto b = static_cast<Eigen::Index>(idx.size());
    Eigen::VectorXcd c_block(b);
    atom_pts.resize(static_cast<Eigen::Index>(m), b);
    for (Eigen::Index col = 0; col < b; ++col) {
      std::size_t gi = idx[static_cast<std::size_t>(col)];
      c_block[col] = coefficients[gi];
      for (std::size_t p = 0; p < m; ++p)
        atom_pts(static_cast<Eigen::Index>(p), col) =
            trig_all.evaluate(gi, points.point(p));
    }
    Eigen::VectorXcd fj_pts = atom_pts * c_block;

    // OMP in the mu_xi inner product. Atoms are orthonormal under mu and
    // unimodular, so they have unit mu_xi norm and the Gram is
    // I/2 + (1/2m) E^H E; everything stays in coefficient space.
    Eigen::VectorXcd beta_vec =
        0.5 * c_block +
        (0.5 / static_cast<double>(m)) * (atom_pts.adjoint() * fj_pts);
    double fj_norm_sq = 0.5 * c_block.squaredNorm() +
                        (0.5 / static_cast<double>(m)) * fj_pts.squaredNorm();

    std::vector<Eigen::Index> sel;
    Eigen::VectorXcd sol;
    std::size_t steps = std::min<std::size_t>(vj, idx.size());
    for (std::size_t k = 0; k < steps; ++k) {
      Eigen::VectorXcd ga = Eigen::VectorXcd::Zero(b);
      if (!sel.empty()) {
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
        Eigen::VectorXcd a_full = Eigen::VectorXcd::Zero(b);
        for (std::size_t s = 0; s < sel.size(); ++s)
          a_full[sel[s]] = sol[static_cast<Eigen::Index>(s)];
        w = atom_pts * a_full;
        ga = 0.5 * a_full +
             (0.5 / static_cast<double>(m)) * (atom_pts.adjoint() * w);
      }
      Eigen::VectorXcd corr = beta_vec - ga;
      Eigen::Index pick = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < b; ++i) {
        double mag = std::abs(corr[i]);
        if (mag > best) {
          best = mag;
          pick = i;
        }
      }
      if (pick < 0 ||
          std::find(sel.begin(), sel.end(), pick) != sel.end())
        break;
      sel.push_back(pick);
      // projection: solve the selected sub-Gram
      const auto k1 = static_cast<Eigen::Index>(sel.size());
      Eigen::MatrixXcd es(static_cast<Eigen::Index>(m), k1);
      Eigen::VectorXcd bs(k1);
      for (Eigen::Index s = 0; s < k1; ++s) {
        es.col(s) = atom_pts.col(sel[static_cast<std::size_t>(s)]);
        bs[s] = beta_vec[sel[static_cast<std::size_t>(s)]];
      }
      Eigen::MatrixXcd gs =
          0.5 * Eigen::MatrixXcd::Identity(k1, k1) +
          (0.5 / static_cast<double>(m)) * (es.adjoint() * es);
      sol = gs.ldlt().solve(bs);
      double res_sq = fj_norm_sq - bs.dot(sol).real();
      res.steps_per_level.back() = sel.size();
      if (res_sq <= stop_tolerance * stop_tolerance) break;
    }
    for (std::size_t s = 0; s < sel.size(); ++s)
      res.coefficients[idx[static_cast<std::size_t>(sel[s])]] =
          sol[static_cast<Eigen::Index>(s)];
  }

  // total error in the mu_xi norm, from the coefficient difference
  double cont_sq = 0.0;
  Eigen::VectorXcd err_pts = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < size; ++i) {
    cplx e = coefficients[i] - res.coefficients[i];
    if (e == cplx(0.0, 0.0)) continue;
    cont_sq += std::norm(e);
    for (std::size_t p = 0; p < m; ++p)
      err_pts[static_cast<Eigen::Index>(p)] +=
          e * trig_all.evaluate(i, points.point(p));
  }
  res.error_mixed =
      std::sqrt(0.5 * cont_sq +
                (0.5 / static_cast<double>(m)) * err_pts.squaredNorm());
  for (const cplx& c : res.coefficients)
    if (c != cplx(0.0, 0.0)) ++res.term_count;
  return res;
}

UpConstantResult up_constant(const Dictionary& d, std::size_t u,
                             std::size_t d_cap, const QuadratureRule* quad,
                             std::size_t random_draws, std::uint64_t seed) {
  const std::size_t n = d.size();
  if (n > 10)
    throw cap_exceeded_error("up_constant: brute-force scope is N <= 10");
  if (u == 0 || u > d_cap || d_cap > n)
    throw validation_error("up_constant: need 1 <= u <= D <= N");

  Eigen::MatrixXcd gram = d.continuous_gram_full(quad);
  CounterRng rng(seed, 0x0bff);

  UpConstantResult out;
  out.estimate = 0.0;

  auto submatrix = [&](const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols) {
    Eigen::MatrixXcd s(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c)
        s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            gram(static_cast<Eigen::Index>(rows[r]),
                 static_cast<Eigen::Index>(cols[c]));
    return s;
  };

  for (std::size_t asz = 1; asz <= u; ++asz) {
    for_each_support(n, asz, [&](const std::vector<std::size_t>& A) {
      // complement of A
      std::vector<std::size_t> comp;
      for (std::size_t i = 0; i < n; ++i)
        if (!std::binary_search(A.begin(), A.end(), i)) comp.push_back(i);
      std::size_t max_j = std::min(d_cap - asz, comp.size());
      for (std::size_t jsz = 0; jsz <= max_j; ++jsz) {
        for_each_support(comp.size(), jsz,
                         [&](const std::vector<std::size_t>& jidx) {
          std::vector<std::size_t> J(jsz);
          for (std::size_t i = 0; i < jsz; ++i) J[i] = comp[jidx[i]];

          Eigen::MatrixXcd gaa = submatrix(A, A);
          double ratio;
          std::vector<Eigen::VectorXcd> draws;
          if (jsz == 0) {
            ratio = 1.0;  // distance to the empty span is the norm itself
          } else {
            Eigen::MatrixXcd gjj = submatrix(J, J);
            Eigen::MatrixXcd gaj = submatrix(A, J);
            Eigen::MatrixXcd schur =
                gaa - gaj * gjj.ldlt().solve(gaj.adjoint());
            schur = (schur + schur.adjoint()) / 2.0;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sc(schur);
            double smin = sc.eigenvalues().minCoeff();
            double smax = sc.eigenvalues().maxCoeff();
            if (smin <= 1e-12 * std::max(1.0, smax)) {
              // spans overlap: the ratio is unbounded
              out.estimate = std::numeric_limits<double>::infinity();
              out.witness_a = A;
              out.witness_j = J;
              return;
            }
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(
                gaa, schur, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
            ratio = std::sqrt(std::max(0.0, ges.eigenvalues().maxCoeff()));
            // sampled draws; always dominated by the extremal one
            for (std::size_t t = 0; t < random_draws; ++t) {
              Eigen::VectorXcd c(static_cast<Eigen::Index>(asz));
              for (Eigen::Index i = 0; i < c.size(); ++i)
                c[i] = rng.next_complex_gaussian();
              double num = (c.adjoint() * gaa * c)(0, 0).real();
              double den = (c.adjoint() * schur * c)(0, 0).real();
              if (den > 0.0)
                ratio = std::max(ratio, std::sqrt(num / den));
            }
          }
          if (ratio > out.estimate) {
            out.estimate = ratio;
            out.witness_a = A;
            out.witness_j = J;
          }
        });
      }
    });
  }
  return out;
}

}  // namespace unidisc
