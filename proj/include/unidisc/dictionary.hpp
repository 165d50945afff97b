#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>

#include "unidisc/domain.hpp"
#include "unidisc/frequency.hpp"
#include "unidisc/quadrature.hpp"

namespace unidisc {

enum class ScalarField { Real, Complex };
enum class DictionaryFamily { Trig, Sine, Custom };

/// A v-sparse element: sorted 0-based support into a dictionary plus one
/// complex value per support index.
struct SparseCoefficients {
  std::vector<std::size_t> support;
  std::vector<cplx> values;

  std::size_t sparsity() const { return support.size(); }
  void validate(std::size_t dictionary_size) const;
};

/// Extremal singular values of the continuous Gram factor. r1 <= r2 and
/// k = r1^{-2} when r1 > 0 (the lower-constant form).
struct RieszReport {
  double r1 = 0.0;
  double r2 = 0.0;
  double k = 0.0;
};

/// An indexed family of N evaluable bounded functions on a domain with
/// declared normalization metadata. Immutable after construction and safe
/// to share across threads.
class Dictionary {
 public:
  using AtomFn = std::function<cplx(const double*)>;

  /// Exponentials e^{i<k,x>} for k in [-M,M]^d, canonical order.
  /// Orthonormal under the normalized Lebesgue measure on the d-torus.
  static Dictionary trig(int M, int d, std::size_t cap = kDefaultSizeCap);

  /// First N frequencies, canonical order, of the smallest centered box
  /// holding at least N. Lets experiments use sizes that are not (2M+1)^d.
  static Dictionary trig_prefix(std::size_t N, int d,
                                std::size_t cap = kDefaultSizeCap);

  /// Exponentials for an explicit frequency set.
  static Dictionary trig_grid(FrequencyGrid grid);

  /// scale * sin(pi k x), k = 1..N on [0,1]. The default scale sqrt(2)
  /// makes the system orthonormal under Lebesgue measure.
  static Dictionary sine(std::size_t N, double scale = 1.4142135623730951);

  /// User-supplied atoms with a declared sup-norm bound.
  static Dictionary custom(Domain domain, std::vector<AtomFn> atoms,
                           double uniform_bound, ScalarField field);

  std::size_t size() const { return n_; }
  const Domain& domain() const { return domain_; }
  double uniform_bound() const { return uniform_bound_; }
  ScalarField scalar_field() const { return field_; }
  DictionaryFamily family() const { return family_; }

  /// True when the continuous Gram is known analytically to be diagonal.
  bool has_diagonal_gram() const { return family_ != DictionaryFamily::Custom; }
  /// True when the system is orthonormal in L2(domain).
  bool orthonormal() const;
  /// ||phi_i||_{L2}^2, analytic families only.
  double atom_norm_sq(std::size_t i) const;

  cplx evaluate(std::size_t i, const double* x) const;
  cplx evaluate(std::size_t i, std::span<const double> x) const {
    return evaluate(i, x.data());
  }
  cplx evaluate_sum(const SparseCoefficients& c, const double* x) const;

  /// Frequency vectors backing a trig dictionary.
  const FrequencyGrid& frequencies() const;
  double sine_scale() const;

  /// Hermitian continuous Gram on a support; analytic for trig/sine,
  /// otherwise computed with the supplied reference quadrature.
  Eigen::MatrixXcd continuous_gram(std::span<const std::size_t> support,
                                   const QuadratureRule* quad = nullptr) const;
  Eigen::MatrixXcd continuous_gram_full(
      const QuadratureRule* quad = nullptr) const;

  std::string descriptor() const;

 private:
  Dictionary() = default;
  DictionaryFamily family_ = DictionaryFamily::Custom;
  Domain domain_;
  double uniform_bound_ = 1.0;
  ScalarField field_ = ScalarField::Complex;
  std::size_t n_ = 0;
  FrequencyGrid freqs_;
  double sine_scale_ = 0.0;
  std::vector<AtomFn> custom_atoms_;
};

/// Square roots of the extremal eigenvalues of the continuous Gram.
RieszReport riesz_bounds(const Dictionary& d,
                         const QuadratureRule* quad = nullptr);

/// L_p(domain) norm of a coefficient vector. Exact (Parseval/diagonal
/// Gram) for p = 2 on analytic families, quadrature otherwise; p = inf is
/// the grid sup.
double continuous_norm(const Dictionary& d, const SparseCoefficients& c,
                       double p, const QuadratureRule* quad = nullptr);

/// L_p norm of a function given by its values on the quadrature grid.
double continuous_norm_grid(const Eigen::VectorXcd& values, double p,
                            const QuadratureRule& quad);

/// Sum of coefficient moduli (the A-norm).
double wiener_norm(std::span<const cplx> coefficients);
inline double wiener_norm(const SparseCoefficients& c) {
  return wiener_norm(std::span<const cplx>(c.values));
}

/// Evaluations of every atom at every quadrature node; nodes x atoms.
Eigen::MatrixXcd atom_grid_matrix(const Dictionary& d,
                                  const QuadratureRule& quad);
Eigen::VectorXcd synthesize_grid(const Dictionary& d,
                                 const SparseCoefficients& c,
                                 const QuadratureRule& quad);

enum class ErrorNorm { ContinuousL2, DiscreteL2, Sup };

inline constexpr std::uint64_t kDefaultSupportCap = 2000000;

struct BestTermResult {
  std::vector<std::size_t> support;
  Eigen::VectorXcd coefficients;  // on the support
  double error = 0.0;
};

/// Exhaustive best v-term approximation of f (grid samples) in the
/// continuous-L2 or sup norm. Ties go to the lexicographically first
/// support. The sup-norm fit uses iteratively reweighted least squares on
/// the grid and is an estimate.
BestTermResult best_v_term_grid(const Dictionary& d,
                                const Eigen::VectorXcd& f_grid, std::size_t v,
                                const QuadratureRule& quad, ErrorNorm norm,
                                std::uint64_t support_cap = kDefaultSupportCap);

/// Exhaustive best v-term approximation of a sample vector y in the
/// discrete norm of the sample matrix columns.
BestTermResult best_v_term_discrete(const Eigen::MatrixXcd& phi,
                                    const Eigen::VectorXcd& y, std::size_t v,
                                    std::uint64_t support_cap = kDefaultSupportCap);

/// Coefficient-input variant; uses Parseval when the Gram is diagonal.
BestTermResult best_v_term(const Dictionary& d, const SparseCoefficients& f,
                           std::size_t v, const QuadratureRule* quad = nullptr,
                           ErrorNorm norm = ErrorNorm::ContinuousL2,
                           std::uint64_t support_cap = kDefaultSupportCap);

/// A synthesized member of the geometric A-norm class: the coefficients
/// in dyadic level j carry block A-norm exactly 2^{-a j} (j+1)^{(d-1) b}
/// for j = 0..j_max, zero beyond. The hosting grid is the centered box
/// [-(2^{j_max}-1), 2^{j_max}-1]^d, which contains only complete blocks.
struct ClassInstance {
  FrequencyGrid grid;
  std::vector<cplx> coefficients;       // aligned with grid
  std::vector<double> level_a_norms;    // declared values, level 0..j_max
};

ClassInstance generate_class_instance(int d, double decay_a, double decay_b,
                                      std::size_t j_max, std::uint64_t seed,
                                      bool full_support = true);

}  // namespace unidisc
