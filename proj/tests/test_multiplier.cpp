#include <cmath>

#include "doctest.h"
#include "osclab/multiplier.hpp"
#include "osclab/rng.hpp"
#include "support/oracles.hpp"

using namespace osclab;

namespace {

Frequency make_xi(double a, double b, double c) {
  Frequency xi;
  xi.xi_prime = {a, b};
  xi.xi_last = c;
  return xi;
}

const OperatorParams kParams(2, 0.25, 1.0);
const RadialProfile kProfile = RadialProfile::monomial(3.0);
const KernelOmega kCos({{1, 1.0, 0.0}});

}  // namespace

TEST_CASE("pieces vanish identically at xi' = 0") {
  MlOptions opts;
  opts.tol = 1e-8;
  for (int l : {-5, 0, 5}) {
    MlEval e = m_l(kParams, kProfile, kCos, make_xi(0, 0, 0), l, opts);
    CHECK(e.value == cplx(0.0, 0.0));
    MlEval ez = m_l(kParams, kProfile, kCos, make_xi(0, 0, 3.0), l, opts);
    CHECK(ez.value == cplx(0.0, 0.0));
  }
  // The quadrature path sees the same cancellation numerically.
  MlOptions q = opts;
  q.method = MlOptions::Method::polar2d;
  for (int l : {-2, 0, 2}) {
    MlEval e = m_l(kParams, kProfile, kCos, make_xi(0, 0, 0), l, q);
    CHECK(std::abs(e.value) <= 10.0 * q.tol);
  }
}

TEST_CASE("reduced radial path agrees with the 2d polar quadrature") {
  MlOptions plain;
  plain.tol = 1e-10;
  plain.method = MlOptions::Method::plain;
  MlOptions polar;
  polar.tol = 1e-10;
  polar.method = MlOptions::Method::polar2d;

  KernelOmega mixed({{1, 0.8, 0.3}, {2, -0.4, 0.5}});
  for (auto xi : {make_xi(3, 0, 2), make_xi(-1.5, 2.0, 0.0), make_xi(0.3, 0.4, -4.0)}) {
    for (int l : {-1, 0, 2}) {
      MlEval a = m_l(kParams, kProfile, mixed, xi, l, plain);
      MlEval b = m_l(kParams, kProfile, mixed, xi, l, polar);
      CHECK(std::abs(a.value - b.value) < 1e-8);
    }
  }
}

TEST_CASE("linear-phase path agrees with plain panels where both are viable") {
  MlOptions plain;
  plain.tol = 1e-11;
  plain.method = MlOptions::Method::plain;
  MlOptions lin;
  lin.tol = 1e-11;
  lin.method = MlOptions::Method::linear_phase;

  // Monotone radial phase: positive l (steep oscillation term) and an
  // axial-frequency dominated negative l.
  for (auto [xi, l] : {std::pair{make_xi(1, 0, 1), 8}, std::pair{make_xi(2, 1, 30), -2},
                       std::pair{make_xi(0.5, 0, 120), -1}}) {
    MlEval a = m_l(kParams, kProfile, kCos, xi, l, plain);
    MlEval b = m_l(kParams, kProfile, kCos, xi, l, lin);
    CHECK(std::abs(a.value - b.value) <= 1e-8 * std::max(1.0, std::abs(a.value)));
  }
}

TEST_CASE("pieces match the unrotated brute-force reference") {
  MlOptions opts;
  opts.tol = 1e-9;
  KernelOmega mixed({{1, 1.0, 0.0}, {2, 0.0, 0.7}});
  for (auto [xi, l] : {std::pair{make_xi(2.0, 0.0, 0.0), 0}, std::pair{make_xi(1.0, 1.5, 2.0), 1},
                       std::pair{make_xi(0.0, 3.0, -1.0), -1}}) {
    auto [n_s, n_u] = oracles::ml_cartesian_grid(kParams, kProfile, xi, l);
    cplx ref = oracles::ml_cartesian(kParams, kProfile, mixed, xi, l, n_s, n_u);
    MlEval e = m_l(kParams, kProfile, mixed, xi, l, opts);
    CHECK(std::abs(e.value - ref) <= 1e-4 * std::max(std::abs(ref), 1e-3));
  }
}

TEST_CASE("rotation invariance of the polar formula") {
  MlOptions opts;
  opts.tol = 1e-10;
  KernelOmega k({{1, 1.0, 0.0}, {3, 0.2, -0.6}});
  double rho = 2.5;
  double delta = pi / 4.0;
  KernelOmega k_rot = k.rotated(delta);
  for (int l : {-1, 0, 2}) {
    for (double xl : {0.0, 1.5}) {
      MlEval a = m_l(kParams, kProfile, k, make_xi(rho, 0, xl), l, opts);
      MlEval b = m_l(kParams, kProfile, k_rot,
                     make_xi(rho * std::cos(delta), rho * std::sin(delta), xl), l, opts);
      CHECK(std::abs(a.value - b.value) < 1e-8);
    }
  }
}

TEST_CASE("certified skip bounds dominate the computed pieces") {
  MlOptions opts;
  opts.tol = 1e-10;
  Rng rng(41);
  int bounded = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Frequency xi = make_xi(rng.uniform(-8, 8), rng.uniform(-8, 8), rng.uniform(-40, 40));
    int l = int(rng.uniform_int(-4, 10));
    double bound = m_l_skip_bound(kParams, kProfile, kCos, xi, l);
    if (!std::isfinite(bound)) continue;
    ++bounded;
    MlEval e = m_l(kParams, kProfile, kCos, xi, l, opts);
    CHECK(std::abs(e.value) <= bound + 1e-12);
  }
  CHECK(bounded > 10);  // the bound machinery must actually engage
}

TEST_CASE("skipping accounts pieces in the tail bound") {
  MlOptions opts;
  opts.tol = 1e-8;
  opts.skip_tol = 1e-7;
  Frequency xi = make_xi(2, 0, 300);
  MTotalResult with_skip = m_total(kParams, kProfile, kCos, xi, -3, 12, opts);
  MlOptions noskip = opts;
  noskip.skip_tol = 0.0;
  MTotalResult exact = m_total(kParams, kProfile, kCos, xi, -3, 12, noskip);
  bool any_skipped = false;
  for (const auto& piece : with_skip.pieces) any_skipped = any_skipped || piece.skipped;
  CHECK(any_skipped);
  CHECK(std::abs(with_skip.value - exact.value) <= with_skip.skipped_bound + 1e-12);
  CHECK(with_skip.tail_bound >= with_skip.skipped_bound);
}

TEST_CASE("window widening changes the total by less than the reported tail") {
  MlOptions opts;
  opts.tol = 1e-9;
  opts.skip_tol = 1e-9;
  Frequency xi = make_xi(1.5, -0.5, 2.0);
  MTotalResult narrow = m_total(kParams, kProfile, kCos, xi, -6, 10, opts);
  MTotalResult wide = m_total(kParams, kProfile, kCos, xi, -10, 14, opts);
  CHECK(std::abs(narrow.value - wide.value) <= narrow.tail_bound);
  CHECK(narrow.l_min == -6);
  CHECK(narrow.l_max == 10);
  CHECK(int(narrow.pieces.size()) == 17);
  CHECK_THROWS_AS((void)m_total(kParams, kProfile, kCos, xi, 1, 10, opts), Error);
}

TEST_CASE("every piece obeys the coarse size bound") {
  // |m_l| <= 4 pi sup|Omega| 2^(alpha+1) (3/2) 2^(alpha l): quadrature can
  // never exceed the integrable mass of the piece.
  MlOptions opts;
  opts.tol = 1e-9;
  KernelOmega k({{1, 0.5, 0.5}, {2, 0.3, 0.0}});
  double c = 4.0 * pi * k.sup_bound() * std::pow(2.0, kParams.alpha + 1.0) * 1.5;
  Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    Frequency xi = make_xi(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20));
    int l = int(rng.uniform_int(-6, 6));
    MlEval e = m_l(kParams, kProfile, k, xi, l, opts);
    CHECK(std::abs(e.value) <= c * std::pow(2.0, kParams.alpha * l));
  }
}

TEST_CASE("decay fit on both windows") {
  MlOptions opts;
  opts.tol = 1e-9;
  DecayFit pos = decay_fit(kParams, kProfile, kCos, make_xi(1, 0, 1), 2, 10, opts);
  CHECK(pos.predicted_slope == doctest::Approx(-0.25));
  CHECK(pos.max_ratio_excess <= 3.0);
  CHECK(pos.l_values.size() + pos.n_excluded == 9);

  DecayFit neg = decay_fit(kParams, kProfile, kCos, make_xi(1, 0, 0), -10, -2, opts);
  CHECK(neg.predicted_slope == doctest::Approx(0.25));
  CHECK(neg.max_ratio_excess <= 3.0);

  OperatorParams p2(2, 0.4, 1.0);
  DecayFit f2 = decay_fit(p2, kProfile, kCos, make_xi(1, 0, 1), 2, 10, opts);
  CHECK(f2.predicted_slope == doctest::Approx(-0.1));
  CHECK(f2.max_ratio_excess <= 3.0);

  CHECK_THROWS_AS((void)decay_fit(kParams, kProfile, kCos, make_xi(1, 0, 0), -3, 3, opts), Error);
  CHECK_THROWS_AS((void)decay_fit(kParams, kProfile, kCos, make_xi(1, 0, 0), 1, 3, opts), Error);
}

TEST_CASE("budget propagates") {
  MlOptions opts;
  opts.tol = 1e-9;
  opts.panel_cap = 64;
  opts.method = MlOptions::Method::plain;
  CHECK_THROWS_AS((void)m_l(kParams, kProfile, kCos, make_xi(5e4, 0, 0), -2, opts), Error);
}

TEST_CASE("zonal evaluation in higher dimension uses the sphere factor") {
  // For n = 3 the angular weight is sin(theta) and the S^(n-2) factor is 2 pi.
  OperatorParams p3(3, 0.25, 1.0);
  MlOptions opts;
  opts.tol = 1e-9;
  KernelOmega zonal({{1, 1.0, 0.0}});  // cos(theta), mean-zero under sin weight
  Frequency xi = make_xi(1.0, 0.0, 2.0);
  MlEval e = m_l(p3, kProfile, zonal, xi, 0, opts);
  // Reference: direct 2d Simpson of the zonal polar form.
  auto f = [&](double r, double theta) {
    double g = 1.0 * r * std::cos(theta) + 2.0 * kProfile.eval(r).phi + std::pow(r, -1.0);
    return std::exp(cplx(0.0, -two_pi * g)) * std::cos(theta) * std::sin(theta) *
           eta(r) * std::pow(r, -1.25);
  };
  QuadratureResult ref = brute_force_oracle(f, 4097, 4097);
  CHECK(std::abs(e.value - 2.0 * pi * ref.value) < 1e-6);
}
