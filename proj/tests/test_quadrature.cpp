#include <cmath>

#include "doctest.h"
#include "osclab/quadrature.hpp"
#include "osclab/rng.hpp"

using namespace osclab;

TEST_CASE("constant integrand gives the domain area") {
  auto one = [](double, double) { return cplx(1.0, 0.0); };
  QuadratureResult q = integrate_oscillatory(one, 0.0, 1e-10);
  CHECK(std::abs(q.value - cplx(1.5 * pi, 0.0)) < 1e-12);
  CHECK(q.error_estimate < 1e-12);
  CHECK(q.panels_used >= 1);

  QuadratureResult o = brute_force_oracle(one, 256, 256);
  CHECK(std::abs(o.value - cplx(1.5 * pi, 0.0)) < 1e-12);
  CHECK(o.oracle);
}

TEST_CASE("separable exponential matches its closed form") {
  const double f = 50.0;
  auto g = [&](double r, double) { return std::exp(cplx(0.0, -two_pi * f * r)); };
  cplx closed = (std::exp(cplx(0.0, -two_pi * f * 2.0)) - std::exp(cplx(0.0, -two_pi * f * 0.5))) /
                cplx(0.0, -two_pi * f) * pi;
  QuadratureResult q = integrate_oscillatory(g, two_pi * f, 1e-8);
  CHECK(std::abs(q.value - closed) < 1e-8);
}

TEST_CASE("bessel-type oscillation matches the oracle") {
  auto g = [](double r, double theta) {
    return std::exp(cplx(0.0, -two_pi * 40.0 * r * std::cos(theta))) * std::sin(theta);
  };
  QuadratureResult q = integrate_oscillatory(g, two_pi * 40.0, 1e-6);
  QuadratureResult ref = brute_force_oracle(g, 4097, 4097);
  CHECK(std::abs(q.value - ref.value) <= 1e-6 * std::max(1.0, std::abs(ref.value)));
}

TEST_CASE("oracle basics: symmetry zero and 4th-order refinement") {
  auto g = [](double r, double theta) { return cplx(r * std::cos(theta), 0.0); };
  QuadratureResult q = brute_force_oracle(g, 513, 513);
  CHECK(std::abs(q.value) < 1e-12);

  auto smooth = [](double r, double theta) {
    return cplx(std::exp(r) * std::cos(3.0 * theta) * std::sin(r), 0.0);
  };
  cplx v256 = brute_force_oracle(smooth, 257, 257).value;
  cplx v512 = brute_force_oracle(smooth, 513, 513).value;
  cplx v1024 = brute_force_oracle(smooth, 1025, 1025).value;
  double e1 = std::abs(v512 - v256), e2 = std::abs(v1024 - v512);
  CHECK(e2 < 0.35 * e1);  // at least ~4th order: refinement shrinks the update
}

TEST_CASE("agreement with the oracle on random oscillatory integrands") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    double ar = rng.uniform(-30.0, 30.0);
    double at = rng.uniform(-8.0, 8.0);
    double br = rng.uniform(0.3, 3.0);
    double c = rng.uniform(-1.0, 1.0);
    auto g = [&](double r, double theta) {
      double phase = ar * r + at * theta * r + br * std::cos(theta);
      return std::exp(cplx(0.0, phase)) * (c + std::sin(theta) + 0.2 * r);
    };
    double pgb = std::abs(ar) + std::abs(at) * (2.0 + pi) + std::abs(br) + 5.0;
    const double tol = 1e-6;
    QuadratureResult q = integrate_oscillatory(g, pgb, tol);
    long n = std::max<long>(2049, long(64.0 * pgb));
    QuadratureResult ref = brute_force_oracle(g, n, n);
    CHECK(std::abs(q.value - ref.value) <= 10.0 * tol);
  }
}

TEST_CASE("linearity and conjugation") {
  auto f = [](double r, double theta) {
    return std::exp(cplx(0.0, -7.0 * r + 2.0 * theta)) * r;
  };
  auto g = [](double r, double theta) { return cplx(std::cos(theta) * r * r, 0.3 * r); };
  const double a = 1.7, b = -0.6;
  auto combo = [&](double r, double theta) { return a * f(r, theta) + b * g(r, theta); };
  QuadratureResult qf = integrate_oscillatory(f, 10.0, 1e-10);
  QuadratureResult qg = integrate_oscillatory(g, 10.0, 1e-10);
  QuadratureResult qc = integrate_oscillatory(combo, 10.0, 1e-10);
  CHECK(std::abs(qc.value - (a * qf.value + b * qg.value)) <
        1e-10 * std::max(1.0, std::abs(qc.value)));

  auto fconj = [&](double r, double theta) { return std::conj(f(r, theta)); };
  QuadratureResult qfc = integrate_oscillatory(fconj, 10.0, 1e-10);
  CHECK(std::abs(qfc.value - std::conj(qf.value)) < 1e-12);
}

TEST_CASE("panel budget is enforced") {
  auto f = [](double r, double) { return std::exp(cplx(0.0, 1e7 * r)); };
  QuadratureLimits lim;
  lim.panel_cap = 1024;
  CHECK_THROWS_AS((void)integrate_oscillatory(f, 1e7, 1e-9, lim), Error);
}

TEST_CASE("argument validation") {
  auto one = [](double, double) { return cplx(1.0, 0.0); };
  CHECK_THROWS_AS((void)integrate_oscillatory(one, -1.0, 1e-8), Error);
  CHECK_THROWS_AS((void)integrate_oscillatory(one, 1.0, 0.0), Error);
  CHECK_THROWS_AS((void)brute_force_oracle(one, 1, 512), Error);
}

TEST_CASE("1d panel engine resolves a linear-phase integral") {
  const double w = 300.0;
  auto f = [&](double r) { return std::exp(cplx(0.0, w * r)); };
  QuadratureResult q = integrate_panels_1d(f, 0.5, 2.0, w * 1.5, 1e-10);
  cplx closed = (std::exp(cplx(0.0, 2.0 * w)) - std::exp(cplx(0.0, 0.5 * w))) / cplx(0.0, w);
  CHECK(std::abs(q.value - closed) < 1e-10);
}
