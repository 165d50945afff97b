#include "unidisc/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "unidisc/rng.hpp"

namespace unidisc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void SparseCoefficients::validate(std::size_t dictionary_size) const {
  if (support.size() != values.size())
    throw validation_error("sparse coefficients: support/value size mismatch");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] >= dictionary_size)
      throw validation_error("sparse coefficients: index out of range");
    if (i > 0 && support[i - 1] >= support[i])
      throw validation_error("sparse coefficients: support not sorted");
  }
}

Dictionary Dictionary::trig(int M, int d, std::size_t cap) {
  return trig_grid(box_grid(M, d, cap));
}

Dictionary Dictionary::trig_prefix(std::size_t N, int d, std::size_t cap) {
  if (N == 0) throw validation_error("trig_prefix: N must be positive");
  if (N > cap) throw cap_exceeded_error("trig_prefix: N exceeds the size cap");
  int M = 0;
  while (std::pow(2.0 * M + 1.0, d) < static_cast<double>(N)) ++M;
  // the covering box is at most a constant factor larger than N
  FrequencyGrid g = box_grid(M, d, static_cast<std::size_t>(2e7));
  g.vectors.resize(N);
  return trig_grid(std::move(g));
}

Dictionary Dictionary::trig_grid(FrequencyGrid grid) {
  Dictionary dict;
  dict.family_ = DictionaryFamily::Trig;
  dict.domain_ = Domain::torus(grid.dimension);
  dict.uniform_bound_ = 1.0;
  dict.field_ = ScalarField::Complex;
  dict.n_ = grid.size();
  dict.freqs_ = std::move(grid);
  if (dict.n_ == 0) throw validation_error("trig dictionary: empty grid");
  return dict;
}

Dictionary Dictionary::sine(std::size_t N, double scale) {
  if (N == 0) throw validation_error("sine system: N must be positive");
  if (!(scale > 0.0)) throw validation_error("sine system: scale must be > 0");
  Dictionary dict;
  dict.family_ = DictionaryFamily::Sine;
  dict.domain_ = Domain::unit_interval();
  dict.uniform_bound_ = scale;
  dict.field_ = ScalarField::Real;
  dict.n_ = N;
  dict.sine_scale_ = scale;
  return dict;
}

Dictionary Dictionary::custom(Domain domain, std::vector<AtomFn> atoms,
                              double uniform_bound, ScalarField field) {
  if (atoms.empty()) throw validation_error("custom dictionary: no atoms");
  if (!(uniform_bound > 0.0))
    throw validation_error("custom dictionary: uniform bound must be > 0");
  Dictionary dict;
  dict.family_ = DictionaryFamily::Custom;
  dict.domain_ = domain;
  dict.uniform_bound_ = uniform_bound;
  dict.field_ = field;
  dict.n_ = atoms.size();
  dict.custom_atoms_ = std::move(atoms);
  return dict;
}

bool Dictionary::orthonormal() const {
  if (family_ == DictionaryFamily::Trig) return true;
  if (family_ == DictionaryFamily::Sine)
    return std::abs(sine_scale_ * sine_scale_ / 2.0 - 1.0) < 1e-14;
  return false;
}

double Dictionary::atom_norm_sq(std::size_t) const {
  switch (family_) {
    case DictionaryFamily::Trig:
      return 1.0;
    case DictionaryFamily::Sine:
      return sine_scale_ * sine_scale_ / 2.0;
    case DictionaryFamily::Custom:
      throw validation_error("atom_norm_sq: analytic families only");
  }
  return 0.0;
}

cplx Dictionary::evaluate(std::size_t i, const double* x) const {
  switch (family_) {
    case DictionaryFamily::Trig: {
      const std::vector<int>& k = freqs_.vectors[i];
      double theta = 0.0;
      for (std::size_t j = 0; j < k.size(); ++j) theta += k[j] * x[j];
      // argument reduction keeps the phase accurate for large |k|
      theta = std::remainder(theta, kTwoPi);
      return {std::cos(theta), std::sin(theta)};
    }
    case DictionaryFamily::Sine: {
      double k = static_cast<double>(i + 1);
      return {sine_scale_ * std::sin(std::numbers::pi * k * x[0]), 0.0};
    }
    case DictionaryFamily::Custom:
      return custom_atoms_[i](x);
  }
  return {};
}

cplx Dictionary::evaluate_sum(const SparseCoefficients& c,
                              const double* x) const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < c.support.size(); ++i)
    acc += c.values[i] * evaluate(c.support[i], x);
  return acc;
}

const FrequencyGrid& Dictionary::frequencies() const {
  if (family_ != DictionaryFamily::Trig)
    throw validation_error("frequencies: trig dictionaries only");
  return freqs_;
}

double Dictionary::sine_scale() const {
  if (family_ != DictionaryFamily::Sine)
    throw validation_error("sine_scale: sine system only");
  return sine_scale_;
}

Eigen::MatrixXcd Dictionary::continuous_gram(
    std::span<const std::size_t> support, const QuadratureRule* quad) const {
  const auto k = static_cast<Eigen::Index>(support.size());
  if (has_diagonal_gram()) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      g(i, i) = atom_norm_sq(support[static_cast<std::size_t>(i)]);
    return g;
  }
  if (quad == nullptr)
    throw validation_error(
        "continuous_gram: reference quadrature required for custom atoms");
  const std::size_t nodes = quad->size();
  Eigen::MatrixXcd vals(static_cast<Eigen::Index>(nodes), k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (std::size_t q = 0; q < nodes; ++q)
      vals(static_cast<Eigen::Index>(q), j) =
          evaluate(support[static_cast<std::size_t>(j)], quad->node(q));
  Eigen::MatrixXcd g = (vals.adjoint() * vals) * quad->weight();
  return (g + g.adjoint()) / 2.0;  // symmetrize roundoff
}

Eigen::MatrixXcd Dictionary::continuous_gram_full(
    const QuadratureRule* quad) const {
  std::vector<std::size_t> all(n_);
  for (std::size_t i = 0; i < n_; ++i) all[i] = i;
  return continuous_gram(all, quad);
}

std::string Dictionary::descriptor() const {
  std::ostringstream os;
  switch (family_) {
    case DictionaryFamily::Trig:
      os << "trig(d=" << domain_.dimension << ",N=" << n_ << ")";
      break;
    case DictionaryFamily::Sine:
      os << "sine(N=" << n_ << ",scale=" << sine_scale_ << ")";
      break;
    case DictionaryFamily::Custom:
      os << "custom(N=" << n_ << "," << domain_.name() << ")";
      break;
  }
  return os.str();
}

RieszReport riesz_bounds(const Dictionary& d, const QuadratureRule* quad) {
  Eigen::MatrixXcd g = d.continuous_gram_full(quad);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (lo < -1e-10 * std::max(1.0, hi))
    throw conditioning_error("riesz_bounds: Gram is not positive semidefinite");
  lo = std::max(lo, 0.0);
  RieszReport r;
  r.r1 = std::sqrt(lo);
  r.r2 = std::sqrt(hi);
  r.k = r.r1 > 0.0 ? 1.0 / (r.r1 * r.r1)
                   : std::numeric_limits<double>::infinity();
  return r;
}

double continuous_norm_grid(const Eigen::VectorXcd& values, double p,
                            const QuadratureRule& quad) {
  if (!(p >= 1.0)) throw validation_error("continuous_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
      m = std::max(m, std::abs(values[i]));
    return m;
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    acc += std::pow(std::abs(values[i]), p);
  return std::pow(acc * quad.weight(), 1.0 / p);
}

double continuous_norm(const Dictionary& d, const SparseCoefficients& c,
                       double p, const QuadratureRule* quad) {
  c.validate(d.size());
  if (p == 2.0 && d.has_diagonal_gram()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i)
      acc += std::norm(c.values[i]) * d.atom_norm_sq(c.support[i]);
    return std::sqrt(acc);
  }
  QuadratureRule local;
  if (quad == nullptr) {
    local = QuadratureRule::build(d.domain());
    quad = &local;
  }
  return continuous_norm_grid(synthesize_grid(d, c, *quad), p, *quad);
}

double wiener_norm(std::span<const cplx> coefficients) {
  double acc = 0.0;
  for (const cplx& v : coefficients) acc += std::abs(v);
  return acc;
}

Eigen::MatrixXcd atom_grid_matrix(const Dictionary& d,
                                  const QuadratureRule& quad) {
  if (!(quad.domain() == d.domain()))
    throw validation_error("atom_grid_matrix: quadrature domain mismatch");
  const auto nodes = static_cast<Eigen::Index>(quad.size());
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXcd a(nodes, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index q = 0; q < nodes; ++q)
      a(q, j) = d.evaluate(static_cast<std::size_t>(j),
                           quad.node(static_cast<std::size_t>(q)));
  return a;
}

Eigen::VectorXcd synthesize_grid(const Dictionary& d,
                                 const SparseCoefficients& c,
                                 const QuadratureRule& quad) {
  const auto nodes = static_cast<Eigen::Index>(quad.size());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(nodes);
  for (std::size_t i = 0; i < c.support.size(); ++i)
    for (Eigen::Index q = 0; q < nodes; ++q)
      out[q] += c.values[i] *
                d.evaluate(c.support[i], quad.node(static_cast<std::size_t>(q)));
  return out;
}

namespace {

void check_support_cap(std::size_t n, std::size_t v, std::uint64_t cap) {
  if (binomial(n, v) > cap)
    throw cap_exceeded_error("best_v_term: C(N,v) exceeds the support cap");
}

/// Weighted LS fit on the grid, then residual sup norm; Lawson-style
/// reweighting drives the fit toward the Chebyshev minimizer.
double sup_fit_irls(const Eigen::MatrixXcd& cols, const Eigen::VectorXcd& f,
                    Eigen::VectorXcd& coeffs, int iterations) {
  const Eigen::Index n = f.size();
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd best_coeffs;
  for (int it = 0; it < iterations; ++it) {
    Eigen::MatrixXcd wc = w.asDiagonal() * cols;
    Eigen::VectorXcd wf = w.asDiagonal() * f;
    Eigen::VectorXcd a =
        wc.completeOrthogonalDecomposition().solve(wf);
    Eigen::VectorXcd r = f - cols * a;
    double sup = r.cwiseAbs().maxCoeff();
    if (sup < best) {
      best = sup;
      best_coeffs = a;
    }
    // Lawson update; renormalize to keep weights bounded
    Eigen::VectorXd wn = w.cwiseProduct(r.cwiseAbs());
    double s = wn.sum();
    if (s <= 0.0) break;
    w = wn * (static_cast<double>(n) / s);
  }
  coeffs = best_coeffs;
  return best;
}

}  // namespace

BestTermResult best_v_term_grid(const Dictionary& d,
                                const Eigen::VectorXcd& f_grid, std::size_t v,
                                const QuadratureRule& quad, ErrorNorm norm,
                                std::uint64_t support_cap) {
  if (norm == ErrorNorm::DiscreteL2)
    throw validation_error("best_v_term_grid: use best_v_term_discrete");
  const std::size_t n = d.size();
  if (v > n) v = n;
  check_support_cap(n, v, support_cap);

  if (v == 0) {
    BestTermResult r;
    r.error = norm == ErrorNorm::Sup
                  ? continuous_norm_grid(f_grid, std::numeric_limits<double>::infinity(), quad)
                  : continuous_norm_grid(f_grid, 2.0, quad);
    return r;
  }

  Eigen::MatrixXcd a = atom_grid_matrix(d, quad);
  BestTermResult best;
  best.error = std::numeric_limits<double>::infinity();

  if (norm == ErrorNorm::ContinuousL2) {
    Eigen::MatrixXcd gram = (a.adjoint() * a) * quad.weight();
    Eigen::VectorXcd beta = (a.adjoint() * f_grid) * quad.weight();
    double fnorm_sq = f_grid.squaredNorm() * quad.weight();
    Eigen::MatrixXcd gj(v, v);
    Eigen::VectorXcd bj(v);
    for_each_support(n, v, [&](const std::vector<std::size_t>& J) {
      for (std::size_t r = 0; r < v; ++r) {
        bj[static_cast<Eigen::Index>(r)] = beta[static_cast<Eigen::Index>(J[r])];
        for (std::size_t c = 0; c < v; ++c)
          gj(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              gram(static_cast<Eigen::Index>(J[r]),
                   static_cast<Eigen::Index>(J[c]));
      }
      Eigen::VectorXcd sol = gj.ldlt().solve(bj);
      double res_sq = fnorm_sq - bj.dot(sol).real();
      double err = std::sqrt(std::max(res_sq, 0.0));
      if (err < best.error) {
        best.error = err;
        best.support = J;
        best.coefficients = sol;
      }
    });
    return best;
  }

  // sup norm: IRLS estimate per support
  Eigen::MatrixXcd cols(a.rows(), static_cast<Eigen::Index>(v));
  for_each_support(n, v, [&](const std::vector<std::size_t>& J) {
    for (std::size_t c = 0; c < v; ++c)
      cols.col(static_cast<Eigen::Index>(c)) =
          a.col(static_cast<Eigen::Index>(J[c]));
    Eigen::VectorXcd coeffs;
    double err = sup_fit_irls(cols, f_grid, coeffs, 24);
    if (err < best.error) {
      best.error = err;
      best.support = J;
      best.coefficients = coeffs;
    }
  });
  return best;
}

BestTermResult best_v_term_discrete(const Eigen::MatrixXcd& phi,
                                    const Eigen::VectorXcd& y, std::size_t v,
                                    std::uint64_t support_cap) {
  const std::size_t n = static_cast<std::size_t>(phi.cols());
  const double m = static_cast<double>(phi.rows());
  if (v > n) v = n;
  check_support_cap(n, v, support_cap);
  if (v == 0) {
    BestTermResult r;
    r.error = y.norm() / std::sqrt(m);
    return r;
  }
  BestTermResult best;
  best.error = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd cols(phi.rows(), static_cast<Eigen::Index>(v));
  for_each_support(n, v, [&](const std::vector<std::size_t>& J) {
    for (std::size_t c = 0; c < v; ++c)
      cols.col(static_cast<Eigen::Index>(c)) =
          phi.col(static_cast<Eigen::Index>(J[c]));
    Eigen::VectorXcd sol = cols.completeOrthogonalDecomposition().solve(y);
    double err = (y - cols * sol).norm() / std::sqrt(m);
    if (err < best.error) {
      best.error = err;
      best.support = J;
      best.coefficients = sol;
    }
  });
  return best;
}

BestTermResult best_v_term(const Dictionary& d, const SparseCoefficients& f,
                           std::size_t v, const QuadratureRule* quad,
                           ErrorNorm norm, std::uint64_t support_cap) {
  f.validate(d.size());
  const std::size_t n = d.size();
  if (v > n) v = n;
  if (norm == ErrorNorm::ContinuousL2 && d.has_diagonal_gram()) {
    check_support_cap(n, v, support_cap);
    // Parseval route: the best support keeps the v heaviest coefficients
    BestTermResult best;
    best.error = std::numeric_limits<double>::infinity();
    for_each_support(n, v, [&](const std::vector<std::size_t>& J) {
      double res_sq = 0.0;
      for (std::size_t i = 0; i < f.support.size(); ++i) {
        bool in = std::binary_search(J.begin(), J.end(), f.support[i]);
        if (!in) res_sq += std::norm(f.values[i]) * d.atom_norm_sq(f.support[i]);
      }
      double err = std::sqrt(res_sq);
      if (err < best.error) {
        best.error = err;
        best.support = J;
      }
    });
    // coefficients: matching entries of f on the winning support
    best.coefficients =
        Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(best.support.size()));
    for (std::size_t i = 0; i < best.support.size(); ++i) {
      auto it = std::lower_bound(f.support.begin(), f.support.end(),
                                 best.support[i]);
      if (it != f.support.end() && *it == best.support[i])
        best.coefficients[static_cast<Eigen::Index>(i)] =
            f.values[static_cast<std::size_t>(it - f.support.begin())];
    }
    return best;
  }
  QuadratureRule local;
  if (quad == nullptr) {
    local = QuadratureRule::build(d.domain());
    quad = &local;
  }
  return best_v_term_grid(d, synthesize_grid(d, f, *quad), v, *quad, norm,
                          support_cap);
}

ClassInstance generate_class_instance(int d, double decay_a, double decay_b,
                                      std::size_t j_max, std::uint64_t seed,
                                      bool full_support) {
  if (d < 1) throw validation_error("class instance: d must be positive");
  if (!(decay_a > 0.0))
    throw validation_error("class instance: decay must be positive");
  if (j_max > 20)
    throw cap_exceeded_error("class instance: j_max too large");

  ClassInstance inst;
  const int box = (1 << j_max) - 1;
  inst.grid = box_grid(box, d, static_cast<std::size_t>(2e7));

  const std::size_t size = inst.grid.size();
  inst.coefficients.assign(size, cplx(0.0, 0.0));
  std::vector<std::size_t> level(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::vector<int> s = dyadic_block_of(inst.grid.vectors[i]);
    std::size_t l = 0;
    for (int sj : s) l += static_cast<std::size_t>(sj);
    level[i] = l;
  }

  CounterRng rng(seed, 0xAB10C);
  inst.level_a_norms.resize(j_max + 1);
  for (std::size_t j = 0; j <= j_max; ++j) {
    double declared = std::pow(2.0, -decay_a * static_cast<double>(j)) *
                      std::pow(static_cast<double>(j) + 1.0,
                               (d - 1) * decay_b);
    inst.level_a_norms[j] = declared;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < size; ++i)
      if (level[i] == j) idx.push_back(i);
    if (idx.empty()) continue;
    if (!full_support && idx.size() > 4) {
      // keep a sparse random subset per level
      std::vector<std::size_t> pick =
          rng.sample_without_replacement(idx.size(), 4);
      std::vector<std::size_t> sub;
      for (std::size_t p : pick) sub.push_back(idx[p]);
      idx = std::move(sub);
    }
    double total = 0.0;
    std::vector<cplx> draws(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) {
      draws[t] = rng.next_complex_gaussian();
      total += std::abs(draws[t]);
    }
    if (total == 0.0) continue;
    for (std::size_t t = 0; t < idx.size(); ++t)
      inst.coefficients[idx[t]] = draws[t] * (declared / total);
  }
  return inst;
}

}  // namespace unidisc
