#include <cmath>

#include "doctest.h"
#include "osclab/kernel.hpp"
#include "osclab/rng.hpp"

using namespace osclab;

TEST_CASE("mean vanishes for harmonic kernels") {
  KernelOmega cosu({{1, 1.0, 0.0}});
  CHECK(std::abs(cosu.mean(256)) < 1e-12);

  KernelOmega mixed({{3, 1.0, 0.0}, {1, 0.0, 1.0}});
  CHECK(std::abs(mixed.mean(256)) < 1e-12);
}

TEST_CASE("constant kernels cannot be constructed") {
  CHECK_THROWS_AS(KernelOmega({{0, 1.0, 0.0}}), Error);
  CHECK_THROWS_AS(KernelOmega({}), Error);
  CHECK_THROWS_AS(KernelOmega({{1, 0.0, 0.0}}), Error);
  CHECK_THROWS_AS((void)KernelOmega::from_json({{"harmonics", {{{"k", 0}, {"a", 1.0}}}}}), Error);
}

TEST_CASE("rotated-frame evaluation") {
  KernelOmega cosu({{1, 1.0, 0.0}});
  CHECK(cosu.eval_rotated({1.0, 0.0}, 0.0, +1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cosu.eval_rotated({0.0, 1.0}, pi / 2, +1) == doctest::Approx(-1.0).epsilon(1e-12));

  KernelOmega sin2u({{2, 0.0, 1.0}});
  CHECK(sin2u.eval_rotated({1.0, 1.0}, pi / 3, -1) == doctest::Approx(-0.5).epsilon(1e-12));

  CHECK_THROWS_AS((void)cosu.eval_rotated({0.0, 0.0}, 0.3, +1), Error);
}

TEST_CASE("sup bound holds pointwise") {
  KernelOmega k({{1, 0.7, -0.4}, {2, 0.0, 1.1}, {5, -0.3, 0.2}});
  double bound = k.sup_bound();
  CHECK(bound == doctest::Approx(2.7).epsilon(1e-14));
  for (int i = 0; i < 1000; ++i) {
    double u = two_pi * i / 1000.0;
    CHECK(std::abs(k.eval(u)) <= bound + 1e-12);
  }
}

TEST_CASE("rotational consistency: angular average in the rotated frame is the mean") {
  KernelOmega k({{1, 0.8, 0.3}, {3, -0.5, 0.9}});
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 2> xi{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    if (std::hypot(xi[0], xi[1]) < 1e-3) continue;
    // Integrate over theta in [0, pi] and both sigma with uniform weight:
    // this sweeps the whole circle, so it must reproduce the (zero) mean.
    const int n = 4096;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double theta = pi * (i + 0.5) / n;
      acc += (k.eval_rotated(xi, theta, +1) + k.eval_rotated(xi, theta, -1)) * (pi / n);
    }
    CHECK(std::abs(acc) < 1e-10);
  }
}

TEST_CASE("rotation helper shifts the argument") {
  KernelOmega k({{1, 1.0, 0.0}, {2, 0.5, -0.25}});
  KernelOmega rot = k.rotated(0.7);
  for (double u : {0.0, 0.4, 2.0, 5.5}) {
    CHECK(rot.eval(u) == doctest::Approx(k.eval(u - 0.7)).epsilon(1e-12));
  }
}

TEST_CASE("axis cosine coefficients match the sigma-sum") {
  KernelOmega k({{1, 0.9, -0.2}, {4, 0.3, 0.6}});
  double nu = 1.1;
  auto c = k.axis_cosine_coeffs(nu);
  for (double theta : {0.1, 0.9, 2.2}) {
    double lhs = k.eval(nu + theta) + k.eval(nu - theta);
    double rhs = 0.0;
    for (std::size_t q = 1; q < c.size(); ++q) rhs += 2.0 * c[q] * std::cos(double(q) * theta);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("kernel json round trip") {
  auto k = KernelOmega::from_json({{"harmonics", {{{"k", 1}, {"a", 1.0}, {"b", 0.0}}}}});
  CHECK(k.eval(0.0) == doctest::Approx(1.0));
  auto k2 = KernelOmega::from_json(k.to_json());
  CHECK(k2.eval(0.5) == doctest::Approx(k.eval(0.5)));
}
