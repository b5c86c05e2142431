#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "relpoly/estimator.hpp"

using namespace relpoly;

namespace {

const std::vector<double> toy_truth{ 0, 0, 1.0 / 21, 0.2, 18.0 / 35, 19.0 / 21, 1, 1 };

PartialCoefficients toy_partial()
{
  return PartialCoefficients(7, { 2, 1.0 / 21, 0.0 }, { 5, 19.0 / 21, 0.0 });
}

} // namespace

TEST_CASE("toy anchors-only estimate")
{
  auto pc = toy_partial();
  CHECK(pc.interior_count() == 2);
  CHECK(pc.unknown_count() == 2);
  CHECK(pc.unknown_indices() == std::vector<std::size_t>{ 3, 4 });
  BernsteinPoly est = interpolate(pc);
  CHECK(est[0] == 0.0);
  CHECK(est[1] == 0.0);
  CHECK(est[3] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(est[4] == doctest::Approx(13.0 / 21).epsilon(1e-15));
  CHECK(est[6] == 1.0);
  CHECK(l2_norm_diff(toy_truth, est.coefficients()) ==
        doctest::Approx(0.0380355287).epsilon(1e-9));
  CHECK(bound_gap(pc) == doctest::Approx(0.27372445072567947).epsilon(1e-12));
}

TEST_CASE("toy estimate after measuring k=3")
{
  auto pc = toy_partial();
  pc.add_measurement(3, 0.2);
  BernsteinPoly est = interpolate(pc);
  CHECK(est[4] == doctest::Approx(58.0 / 105).epsilon(1e-15));
  CHECK(l2_norm_diff(toy_truth, est.coefficients()) ==
        doctest::Approx(0.0062822533).epsilon(1e-8));
  CHECK(bound_gap(pc) == doctest::Approx(0.1162216854728361).epsilon(1e-12));
  CHECK(pc.unknown_count() == 1);

  auto other = toy_partial();
  other.add_measurement(4, 18.0 / 35);
  CHECK(l2_norm_diff(toy_truth, interpolate(other).coefficients()) ==
        doctest::Approx(0.0133497882).epsilon(1e-8));
}

TEST_CASE("input validation")
{
  CHECK_THROWS(PartialCoefficients(7, { 5, 0.5, 0 }, { 2, 0.6, 0 }));
  CHECK_THROWS(PartialCoefficients(7, { 2, 0.0, 0 }, { 5, 0.6, 0 }));
  CHECK_THROWS(PartialCoefficients(7, { 2, 0.2, 0 }, { 5, 1.0, 0 }));
  CHECK_THROWS(PartialCoefficients(7, { 2, 0.2, 0 }, { 8, 0.6, 0 }));
  CHECK_THROWS(PartialCoefficients(7, { 2, 0.7, 0 }, { 5, 0.6, 0 }));
  CHECK_NOTHROW(PartialCoefficients(7, { 2, 0.7, 0 }, { 5, 0.6, 0 }, false));

  auto pc = toy_partial();
  CHECK_THROWS(pc.add_measurement(2, 0.1));
  CHECK_THROWS(pc.add_measurement(6, 1.0));
  CHECK_THROWS(pc.add_measurement(3, 1.5));
  CHECK_THROWS(pc.add_measurement(3, 0.01)); // below beta_kmin
  pc.add_measurement(3, 0.2);
  CHECK_THROWS(pc.add_measurement(3, 0.2));
  CHECK_THROWS(pc.add_measurement(4, 0.1)); // not monotone

  PartialCoefficients loose(7, { 2, 0.7, 0 }, { 5, 0.6, 0 }, false);
  CHECK_THROWS_AS(bounds(loose), UnsupportedError);
  CHECK_NOTHROW(interpolate(loose));
}

TEST_CASE("bounds contain every monotone completion")
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 25;
    std::vector<double> beta(n + 1);
    for (auto& b : beta)
      b = u(rng);
    std::sort(beta.begin(), beta.end());
    const std::size_t lo = 1 + rng() % (n / 2);
    const std::size_t hi = lo + 2 + rng() % (n - lo - 1);
    for (std::size_t k = 0; k < lo; ++k)
      beta[k] = 0.0;
    for (std::size_t k = hi + 1; k <= n; ++k)
      beta[k] = 1.0;
    beta[lo] = std::max(beta[lo], 1e-6);
    beta[hi] = std::min(beta[hi], 1 - 1e-6);
    PartialCoefficients pc(n, { lo, beta[lo], 0 }, { hi, beta[hi], 0 });
    double gap = bound_gap(pc);
    for (std::size_t k = lo + 1; k < hi; ++k) {
      if (u(rng) < 0.4) {
        pc.add_measurement(k, beta[k]);
        double g = bound_gap(pc);
        CHECK(g <= gap + 1e-15);
        gap = g;
      }
    }
    BoundsPair b = bounds(pc);
    for (int i = 0; i <= 200; ++i) {
      double x = i / 200.0;
      double f = oracle::bernstein_eval(beta, x);
      if (eval_de_casteljau(b.lower, x) > f + 1e-12 || eval_de_casteljau(b.upper, x) < f - 1e-12)
        ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("widen_by_error loosens the envelope")
{
  auto pc = toy_partial();
  pc.add_measurement(3, 0.2);
  BoundsPair tight = bounds(pc);
  BoundsPair wide = widen_by_error(pc, 0.05);
  for (std::size_t k = 0; k <= 7; ++k) {
    CHECK(wide.lower[k] <= tight.lower[k]);
    CHECK(wide.upper[k] >= tight.upper[k]);
    CHECK(wide.lower[k] >= 0.0);
    CHECK(wide.upper[k] <= 1.0);
  }
  CHECK(wide.lower[3] == doctest::Approx(0.15));
  CHECK(wide.upper[3] == doctest::Approx(0.25));
  CHECK(wide.lower[1] == 0.0);
  CHECK(wide.upper[6] == 1.0);
}
