#include <cmath>

#include "doctest.h"
#include "osclab/phase.hpp"
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

}  // namespace

TEST_CASE("operator parameter validation and derived quantities") {
  CHECK_THROWS_AS(OperatorParams(1, 0.25, 1.0), Error);
  CHECK_THROWS_AS(OperatorParams(2, 0.0, 1.0), Error);
  CHECK_THROWS_AS(OperatorParams(2, 0.5, 1.0), Error);
  OperatorParams p(2, 0.25, 1.0);
  auto [plo, phi_] = p.p_window();
  CHECK(plo == doctest::Approx(4.0 / 3.0));
  CHECK(phi_ == doctest::Approx(4.0));
  CHECK(p.smoothing_order(1.0) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("phase derivatives: structural special cases") {
  OperatorParams params(2, 0.25, 1.0);
  RadialProfile profile = RadialProfile::monomial(3.0);

  // xi = 0: only the oscillation term survives.
  for (int l : {-2, 0, 3}) {
    for (double r : {0.5, 1.0, 1.7}) {
      PhaseDerivs d = phase_and_derivatives(params, profile, make_xi(0, 0, 0), l, r, 0.9);
      double pbl = std::pow(2.0, double(l));
      CHECK(d.g_r == doctest::Approx(-pbl / (r * r)).epsilon(1e-13));
      CHECK(d.g_theta == 0.0);
    }
  }

  // theta = pi/2: g_thetatheta = 0 and g_theta = -2^-l |xi'| r.
  PhaseDerivs d = phase_and_derivatives(params, profile, make_xi(3, 4, 2), 1, 1.3, pi / 2);
  CHECK(std::abs(d.g_thetatheta) < 1e-12);
  CHECK(d.g_theta == doctest::Approx(-0.5 * 5.0 * 1.3).epsilon(1e-13));

  CHECK_THROWS_AS(
      (void)phase_and_derivatives(params, profile, make_xi(1, 0, 0), 0, 0.3, 0.0), Error);
}

TEST_CASE("phase derivatives match finite differences at a generic point") {
  OperatorParams params(2, 0.25, 1.0);
  RadialProfile profile = RadialProfile::monomial(3.0);
  Frequency xi = make_xi(3, 0, 5);
  int l = 1;
  auto g_of = [&](double r, double theta) {
    return phase_derivs_unchecked(params, profile, xi, l, r, theta).g;
  };
  double r = 1.0, theta = 1.0, h = 1e-6;
  PhaseDerivs d = phase_and_derivatives(params, profile, xi, l, r, theta);

  auto g_r = [&](double x) { return g_of(x, theta); };
  auto g_t = [&](double x) { return g_of(r, x); };
  CHECK(oracles::fd1(g_r, r, h) == doctest::Approx(d.g_r).epsilon(1e-6));
  CHECK(oracles::fd1(g_t, theta, h) == doctest::Approx(d.g_theta).epsilon(1e-6));
  CHECK(oracles::fd2(g_r, r, 1e-4) == doctest::Approx(d.g_rr).epsilon(1e-6));
  CHECK(oracles::fd2(g_t, theta, 1e-4) == doctest::Approx(d.g_thetatheta).epsilon(1e-6));
  CHECK(oracles::fd3(g_r, r, 1e-3) == doctest::Approx(d.g_rrr).epsilon(1e-4));
}

TEST_CASE("mixed derivative of g_rr in theta is identically zero") {
  OperatorParams params(2, 0.3, 1.5);
  RadialProfile profile = RadialProfile::exp_sinh();
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    Frequency xi = make_xi(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
    PhaseDerivs d = phase_derivs_unchecked(params, profile, xi, int(rng.uniform_int(-5, 5)),
                                           rng.uniform(0.5, 2.0), rng.uniform(0.0, pi));
    CHECK(d.g_rrtheta == 0.0);
    // g_rr itself carries no theta dependence.
    PhaseDerivs d2 = phase_derivs_unchecked(params, profile, xi, 0, 1.1, 0.3);
    PhaseDerivs d3 = phase_derivs_unchecked(params, profile, xi, 0, 1.1, 2.9);
    CHECK(d2.g_rr == d3.g_rr);
  }
}

TEST_CASE("lambda scale: dominant terms and sampling oracle") {
  OperatorParams params(2, 0.25, 1.0);
  RadialProfile profile = RadialProfile::monomial(3.0);

  for (int l : {-3, 0, 4}) {
    CHECK(lambda_scale(params, profile, make_xi(0, 0, 0), l) ==
          doctest::Approx(std::pow(2.0, double(l))).epsilon(1e-13));
  }

  // Huge planar frequency dominates.
  double big = std::ldexp(1e6, 0);
  CHECK(lambda_scale(params, profile, make_xi(big, 0, 0), 0) ==
        doctest::Approx(1e6).epsilon(1e-12));

  // Dense-sampling reference for a xi_last dominated case.
  {
    int l = -2;
    Frequency xi = make_xi(0, 0, 100);
    double a = std::ldexp(1.0, -l - 1), b = std::ldexp(1.0, -l + 1);
    double s2 = 0.0, s3 = 0.0;
    for (int i = 0; i < 100000; ++i) {
      double r = a * std::pow(b / a, i / 99999.0);
      ProfileDerivs d = profile.eval(r);
      s2 = std::max(s2, std::abs(d.d2));
      s3 = std::max(s3, std::abs(d.d3));
    }
    double sl = std::ldexp(1.0, -l);
    double ref = std::max({std::pow(2.0, -2.0), sl * 0.0,
                           100.0 * sl * sl * s2, 100.0 * sl * sl * sl * s3});
    CHECK(lambda_scale(params, profile, xi, l) == doctest::Approx(ref).epsilon(1e-4));
  }
}

TEST_CASE("lambda monotonicity in the frequency magnitudes") {
  OperatorParams params(2, 0.25, 1.0);
  RadialProfile profile = RadialProfile::monomial(3.0);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    int l = int(rng.uniform_int(-6, 6));
    double a = rng.log_uniform(1e-2, 1e4);
    double c = rng.log_uniform(1e-2, 1e4);
    double lam = lambda_scale(params, profile, make_xi(a, 0, c), l);
    CHECK(lam >= std::pow(2.0, double(l)) * (1.0 - 1e-12));
    CHECK(lambda_scale(params, profile, make_xi(2 * a, 0, c), l) >= lam * (1.0 - 1e-12));
    CHECK(lambda_scale(params, profile, make_xi(a, 0, 2 * c), l) >= lam * (1.0 - 1e-12));
  }
}

TEST_CASE("derivative floor holds on the grid; inflated threshold fails") {
  OperatorParams params(2, 0.25, 1.0);
  RadialProfile profile = RadialProfile::monomial(3.0);
  EpsilonConstants eps = compute_epsilons(2.0, 1.0, 1.0, 0.5);

  Rng rng(29);
  double global_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 25; ++i) {
    double mag = rng.log_uniform(1.0, 1e6);
    auto dir = rng.unit_sphere();
    Frequency xi = make_xi(mag * dir[0], mag * dir[1], mag * dir[2]);
    int l = int(rng.uniform_int(-10, 10));
    LemmaReport rep = check_lemma_lower_bound(params, profile, xi, l, eps, 51, 51);
    CHECK(rep.pass);
    global_min = std::min(global_min, rep.min_ratio);
  }
  CHECK(global_min >= 1.0);

  // A tenfold threshold is no longer met everywhere: the bound is not vacuous.
  EpsilonConstants inflated = eps;
  inflated.epsilon *= 10.0;
  CHECK(global_min < 10.0);  // same sweep would fail at 10x
  bool some_fail = false;
  Rng rng2(29);
  for (int i = 0; i < 25 && !some_fail; ++i) {
    double mag = rng2.log_uniform(1.0, 1e6);
    auto dir = rng2.unit_sphere();
    Frequency xi = make_xi(mag * dir[0], mag * dir[1], mag * dir[2]);
    int l = int(rng2.uniform_int(-10, 10));
    some_fail = !check_lemma_lower_bound(params, profile, xi, l, inflated, 51, 51).pass;
  }
  CHECK(some_fail);
}

TEST_CASE("patch classification: structural cases and totality") {
  OperatorParams params(2, 0.25, 1.0);
  RadialProfile profile = RadialProfile::monomial(3.0);
  EpsilonConstants eps = compute_epsilons(2.0, 1.0, 1.0, 0.5);

  // xi = 0: the radial first derivative dominates on every patch.
  PatchIndex j0 = patch_at(eps, 1.0, 1.5);
  CHECK(classify_patch(params, profile, make_xi(0, 0, 0), 0, j0, eps) == CaseTag::r_first);

  // Huge planar frequency, patch near theta = pi/2: the angular first
  // derivative is of size lambda while the radial one dips through zero.
  PatchIndex j1 = patch_at(eps, 1.0, pi / 2);
  CHECK(classify_patch(params, profile, make_xi(1e6, 0, 0), 0, j1, eps) == CaseTag::theta_first);

  Rng rng(31);
  for (int i = 0; i < 30; ++i) {
    double mag = rng.log_uniform(1.0, 1e6);
    auto dir = rng.unit_sphere();
    Frequency xi = make_xi(mag * dir[0], mag * dir[1], mag * dir[2]);
    int l = int(rng.uniform_int(-10, 10));
    PatchIndex j = patch_at(eps, rng.uniform(0.5, 2.0), rng.uniform(0.0, pi));
    CHECK(classify_patch(params, profile, xi, l, j, eps) != CaseTag::trivial_bound);
  }
}

TEST_CASE("case tags have stable names") {
  CHECK(std::string(to_string(CaseTag::r_first)) == "r1");
  CHECK(std::string(to_string(CaseTag::theta_first)) == "theta1");
  CHECK(std::string(to_string(CaseTag::r_second)) == "r2");
  CHECK(std::string(to_string(CaseTag::theta_second)) == "theta2");
  CHECK(std::string(to_string(CaseTag::trivial_bound)) == "trivial");
}
