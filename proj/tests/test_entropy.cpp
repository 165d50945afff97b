#include <doctest.h>

#include <cmath>

#include "unidisc/entropy.hpp"
#include "unidisc/rng.hpp"

using namespace unidisc;

TEST_SUITE("entropy") {

TEST_CASE("cloud members are normalized and reproducible") {
  Dictionary d = Dictionary::trig_prefix(8, 1);
  FunctionCloud a = generate_cloud(d, 2, 2.0, 50, 99, 256);
  FunctionCloud b = generate_cloud(d, 2, 2.0, 50, 99, 256);
  REQUIRE(a.size() == 50);
  CHECK(a.members == b.members);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double norm = continuous_norm_grid(
        a.members.col(static_cast<Eigen::Index>(i)), 2.0, a.grid);
    CHECK(norm >= 1.0 - 1e-6);
    CHECK(norm <= 1.0 + 1e-6);
  }
}

TEST_CASE("cloud members obey the sup-norm bound sqrt(Kv)") {
  Dictionary d = Dictionary::trig_prefix(8, 1);
  FunctionCloud cloud = generate_cloud(d, 3, 2.0, 100, 7, 512);
  double bound = std::sqrt(3.0) * (1.0 + 1e-6);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double sup = cloud.members.col(static_cast<Eigen::Index>(i))
                     .cwiseAbs()
                     .maxCoeff();
    CHECK(sup <= bound);
  }
}

TEST_CASE("unimodular constants collapse to one net point") {
  Dictionary d = Dictionary::trig(0, 1);  // single constant atom
  FunctionCloud cloud = generate_cloud(d, 1, 2.0, 8, 3, 64);
  // all members are unimodular multiples of the constant; distances can
  // reach 2 but the cloud covers itself at its diameter
  std::size_t n1 = covering_estimate(cloud, 2.0 + 1e-12);
  CHECK(n1 == 1);
}

TEST_CASE("covering a singleton cloud always takes one element") {
  Dictionary d = Dictionary::trig(1, 1);
  FunctionCloud cloud = generate_cloud(d, 1, 2.0, 1, 5, 128);
  for (double eps : {1e-6, 0.1, 10.0})
    CHECK(covering_estimate(cloud, eps) == 1);
  EntropyEstimate est = entropy_numbers(cloud, 5);
  for (double e : est.eps_k) CHECK(e == 0.0);
}

TEST_CASE("two functions within eps are covered by one") {
  // hand-built cloud: distance between the two members is 0.5
  Dictionary d = Dictionary::trig(0, 1);
  FunctionCloud cloud = generate_cloud(d, 1, 2.0, 1, 5, 32);
  FunctionCloud two = cloud;
  two.members.conservativeResize(Eigen::NoChange, 2);
  two.members.col(1) = 0.5 * two.members.col(0);
  // sup distance is 0.5 exactly
  CHECK(covering_estimate(two, 0.6) == 1);
  CHECK(covering_estimate(two, 0.4) == 2);
}

TEST_CASE("shrinking eps separates all distinct members") {
  Dictionary d = Dictionary::trig_prefix(6, 1);
  FunctionCloud cloud = generate_cloud(d, 2, 2.0, 40, 12, 256);
  CHECK(covering_estimate(cloud, 1e-9) == cloud.size());
}

TEST_CASE("entropy numbers are nonincreasing and scale-equivariant") {
  Dictionary d = Dictionary::trig_prefix(8, 1);
  FunctionCloud cloud = generate_cloud(d, 2, 2.0, 120, 21, 256);
  EntropyEstimate est = entropy_numbers(cloud, 6);
  for (std::size_t k = 0; k + 1 < est.eps_k.size(); ++k)
    CHECK(est.eps_k[k + 1] <= est.eps_k[k] + 1e-15);

  FunctionCloud scaled = cloud;
  scaled.members *= 2.5;
  EntropyEstimate est2 = entropy_numbers(scaled, 6);
  for (std::size_t k = 0; k < est.eps_k.size(); ++k)
    CHECK(est2.eps_k[k] == doctest::Approx(2.5 * est.eps_k[k]).epsilon(1e-12));
}

TEST_CASE("entropy numbers agree with covering queries") {
  Dictionary d = Dictionary::trig_prefix(6, 1);
  FunctionCloud cloud = generate_cloud(d, 2, 2.0, 60, 8, 128);
  EntropyEstimate est = entropy_numbers(cloud, 4);
  for (std::size_t k = 1; k <= 4; ++k) {
    double eps = est.eps_k[k];
    if (eps <= 0.0) continue;
    // at the reported radius the greedy net needs at most 2^k members,
    // and just below it needs more
    CHECK(covering_estimate(cloud, eps + 1e-12) <= (1u << k));
    CHECK(covering_estimate(cloud, eps * (1.0 - 1e-9)) > (1u << k));
  }
}

TEST_CASE("decay shape on the frozen cloud") {
  // the acceptance suite runs the larger frozen instance; this one keeps
  // the net well below cloud saturation so the tail estimate is honest
  Dictionary d = Dictionary::trig_prefix(16, 1);
  FunctionCloud cloud = generate_cloud(d, 2, 2.0, 2000, 2029, 512);
  EntropyEstimate est = entropy_numbers(cloud, 8);
  for (std::size_t k = 4; k < 8; ++k)
    CHECK(est.eps_k[k + 1] < est.eps_k[k]);
  double x0 = std::log(4.0), x1 = std::log(8.0);
  double y0 = std::log(est.eps_k[4]), y1 = std::log(est.eps_k[8]);
  double slope = (y1 - y0) / (x1 - x0);
  CHECK(slope <= -0.2);
  CHECK(slope >= -0.9);
}

}  // TEST_SUITE
