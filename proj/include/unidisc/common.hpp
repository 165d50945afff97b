#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace unidisc {

using cplx = std::complex<double>;

inline constexpr std::string_view kVersion = "0.1.0";

/// Configuration/input problems: bad parameters, malformed configs,
/// mismatched domains. CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A combinatorial or size cap was exceeded. CLI exit code 3.
class cap_exceeded_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that must be positive (semi)definite is not, beyond tolerance.
class conditioning_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested dyadic blocks are not contained in the frequency grid.
class coverage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematically guaranteed condition failed at runtime (reserved for
/// the simultaneous-approximation existence check). CLI exit code 4.
class internal_inconsistency_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// C(n, k), saturating at std::numeric_limits<std::uint64_t>::max().
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::uint64_t q = r / i;  // exact up to the multiply below
    std::uint64_t rem = r % i;
    std::uint64_t add = rem * (n - k + i) / i;
    if (q > (kMax - add) / (n - k + i)) return kMax;
    r = q * (n - k + i) + add;
  }
  return r;
}

/// Visits every sorted k-subset of {0,...,n-1} in lexicographic order.
/// The callback receives the current subset; it must not retain the span.
template <typename Fn>
void for_each_support(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(const_cast<const std::vector<std::size_t>&>(idx));
    if (k == 0) return;
    // advance to the next combination
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

/// Support of given lexicographic rank among sorted k-subsets of {0..n-1}.
inline std::vector<std::size_t> support_at_rank(std::size_t n, std::size_t k,
                                                std::uint64_t rank) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t next = 0;
  std::size_t remaining = k;
  while (remaining > 0) {
    std::uint64_t block = binomial(n - next - 1, remaining - 1);
    if (rank < block) {
      out.push_back(next);
      --remaining;
    } else {
      rank -= block;
    }
    ++next;
  }
  return out;
}

}  // namespace unidisc
