#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "unidisc/rng.hpp"

using namespace unidisc;

TEST_SUITE("rng") {

TEST_CASE("identical seed and stream reproduce the sequence") {
  CounterRng a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams decorrelate") {
  CounterRng a(42, 0), b(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("uniform doubles live in [0,1) with the right mean") {
  CounterRng rng(1234, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double x = rng.next_double();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("gaussian moments") {
  CounterRng rng(99, 3);
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double g = rng.next_gaussian();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sq / n - 1.0) < 0.03);
}

TEST_CASE("sample_without_replacement gives sorted distinct indices") {
  CounterRng rng(5, 0);
  for (int t = 0; t < 200; ++t) {
    auto s = rng.sample_without_replacement(10, 4);
    REQUIRE(s.size() == 4);
    std::set<std::size_t> uniq(s.begin(), s.end());
    CHECK(uniq.size() == 4);
    for (std::size_t i : s) CHECK(i < 10);
    CHECK(std::is_sorted(s.begin(), s.end()));
  }
}

}  // TEST_SUITE
