#include "support/oracles.hpp"

#include <cmath>
#include <vector>

#include "osclab/bumps.hpp"
#include "osclab/special.hpp"

namespace osclab::oracles {

std::pair<long, long> ml_cartesian_grid(const OperatorParams& params, const RadialProfile& profile,
                                        const Frequency& xi, int l, double per_cycle,
                                        long n_floor) {
  const double a = std::ldexp(1.0, -l - 1), b = std::ldexp(1.0, -l + 1);
  double dphi = std::abs(xi.xi_last) > 0.0 ? std::abs(profile.eval(b).d1) : 0.0;
  double cycles_s = (xi.xi_prime_norm() + std::abs(xi.xi_last) * dphi) * (b - a) +
                    std::pow(a, -params.beta);
  double cycles_u = 2.0 * xi.xi_prime_norm() * b + 8.0;
  long n_s = std::max<long>(n_floor, long(per_cycle * cycles_s));
  long n_u = std::max<long>(1024, long(per_cycle * cycles_u));
  return {n_s | 1, n_u};
}

cplx ml_cartesian(const OperatorParams& params, const RadialProfile& profile,
                  const KernelOmega& omega, const Frequency& xi, int l, long n_s, long n_u) {
  const double a = std::ldexp(1.0, -l - 1), b = std::ldexp(1.0, -l + 1);
  if (n_s % 2 == 0) ++n_s;
  const double hs = (b - a) / double(n_s - 1);
  const double hu = two_pi / double(n_u);  // periodic trapezoid in the angle
  const double alpha = params.alpha, beta = params.beta;

  std::vector<cplx> s_terms(n_s);
  std::vector<cplx> u_terms(n_u);
  for (long i = 0; i < n_s; ++i) {
    double s = a + hs * double(i);
    double window = eta(std::ldexp(s, l));
    if (window == 0.0) {
      s_terms[i] = 0.0;
      continue;
    }
    double radial_phase = xi.xi_last * profile.eval(s).phi + std::pow(s, -beta);
    double amp = window * std::pow(s, -alpha - 1.0);
    for (long k = 0; k < n_u; ++k) {
      double u = hu * double(k);
      double phase = xi.xi_prime[0] * s * std::cos(u) + xi.xi_prime[1] * s * std::sin(u) +
                     radial_phase;
      double arg = -two_pi * phase;
      u_terms[k] = cplx(std::cos(arg), std::sin(arg)) * omega.eval(u);
    }
    double w = (i == 0 || i == n_s - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s_terms[i] = tree_sum(std::span<const cplx>(u_terms)) * hu * amp * w;
  }
  return tree_sum(std::span<const cplx>(s_terms)) * (hs / 3.0);
}

double fd1(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double fd2(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

double fd3(const std::function<double(double)>& f, double x, double h) {
  return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) / (2.0 * h * h * h);
}

std::array<double, 4> exp_sinh_series(double r) {
  // r^2 e^-r sinh r expanded to degree 8.
  const double c[9] = {0, 0, 0, 1.0, -1.0, 2.0 / 3.0, -1.0 / 3.0, 2.0 / 15.0, -2.0 / 45.0};
  std::array<double, 4> out{0, 0, 0, 0};
  for (int k = 3; k <= 8; ++k) {
    double pk = std::pow(r, k);
    out[0] += c[k] * pk;
    out[1] += c[k] * k * pk / r;
    out[2] += c[k] * k * (k - 1) * pk / (r * r);
    out[3] += c[k] * k * (k - 1) * (k - 2) * pk / (r * r * r);
  }
  return out;
}

}  // namespace osclab::oracles
