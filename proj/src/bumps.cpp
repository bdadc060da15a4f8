#include "osclab/bumps.hpp"

#include <algorithm>
#include <cmath>

namespace osclab {

double zeta(double x) {
  double ax = std::abs(x);
  if (ax >= 1.0) return 0.0;
  // IEEE handles the removable singularities: at x = 0 the second exponential
  // underflows to 0, near |x| = 1 the first does.
  double e1 = std::exp(1.0 / (ax - 1.0));
  double e2 = std::exp(-1.0 / ax);
  return e1 / (e1 + e2);
}

double eta(double r) {
  require(r > 0.0 && std::isfinite(r), errc::non_positive_radius,
          "eta requires a positive radius");
  return zeta(std::log2(r));
}

double psi_shift(double x) {
  const double w = 4.0 / 3.0;
  if (x <= 0.0 || x >= w) return 0.0;
  return std::exp(-1.0 / (x * (w - x)));
}

double kappa(double x) {
  const double step = 4.0 / 3.0;
  double num = psi_shift(x);
  if (num == 0.0) return 0.0;
  double den = 0.0;
  long z0 = long(std::floor(-x / step));
  for (long z = z0 - 1; z <= z0 + 2; ++z) den += psi_shift(x + step * double(z));
  if (den == 0.0) return 0.0;
  return num / den;
}

double eta_window_sum(double r, int l_lo, int l_hi) {
  double s = 0.0;
  // eta(2^l r) is nonzero only for l with 2^l r in (1/2, 2).
  int l_min = std::max(l_lo, int(std::floor(-std::log2(r))) - 1);
  int l_max = std::min(l_hi, int(std::ceil(-std::log2(r))) + 1);
  for (int l = l_min; l <= l_max; ++l) s += eta(std::ldexp(r, l));
  return s;
}

EpsilonConstants compute_epsilons(double k2, double k3, double beta, double safety) {
  require(k2 > 0.0 && k3 > 0.0 && beta > 0.0, errc::invalid_argument,
          "compute_epsilons requires positive k2, k3, beta");
  require(safety > 0.0 && safety < 1.0, errc::invalid_argument,
          "safety factor must lie strictly in (0, 1)");
  double p2b = std::pow(2.0, beta);
  double m = std::min({1.0 / (2.0 * std::sqrt(2.0)), 1.0 / (4.0 * k2 * (3.0 * beta + 7.0)),
                       beta / ((4.0 + 3.0 * k2) * p2b),
                       1.0 / (8.0 * k2 * k3 * (3.0 * beta + 7.0))});
  double eps = safety * m;
  double e1 = std::min({eps / (6.0 * beta * (beta + 1.0) * p2b * 4.0),
                        eps / (4.0 * beta * (beta + 1.0) * (beta + 2.0) * p2b * 8.0),
                        eps / 8.0});
  return {eps, e1, eps / 8.0, k2, k3, beta};
}

nlohmann::json EpsilonConstants::to_json() const {
  return {{"epsilon", epsilon}, {"epsilon1", epsilon1}, {"epsilon2", epsilon2},
          {"k2", k2},           {"k3", k3},             {"beta", beta}};
}

double chi(PatchIndex j, const EpsilonConstants& eps, double r, double theta) {
  double xr = 4.0 * (r - eps.epsilon1 * double(j.j1)) / (3.0 * eps.epsilon1);
  double xt = 4.0 * (theta - eps.epsilon2 * double(j.j2)) / (3.0 * eps.epsilon2);
  return kappa(xr) * kappa(xt);
}

Interval patch_support_r(PatchIndex j, const EpsilonConstants& eps) {
  double c = eps.epsilon1 * double(j.j1);
  return {c, c + eps.epsilon1};
}

Interval patch_support_theta(PatchIndex j, const EpsilonConstants& eps) {
  double c = eps.epsilon2 * double(j.j2);
  return {c, c + eps.epsilon2};
}

PatchRange patch_range(const EpsilonConstants& eps) {
  PatchRange pr;
  pr.j1_lo = long(std::floor(0.5 / eps.epsilon1)) - 1;
  pr.j1_hi = long(std::ceil(2.0 / eps.epsilon1)) + 1;
  pr.j2_lo = -1;
  pr.j2_hi = long(std::ceil(pi / eps.epsilon2)) + 1;
  return pr;
}

PatchIndex patch_at(const EpsilonConstants& eps, double r, double theta) {
  return {long(std::floor(r / eps.epsilon1)), long(std::floor(theta / eps.epsilon2))};
}

double chi_partition_sum(const EpsilonConstants& eps, double r, double theta) {
  PatchIndex c = patch_at(eps, r, theta);
  double s = 0.0;
  for (long j1 = c.j1 - 1; j1 <= c.j1 + 1; ++j1)
    for (long j2 = c.j2 - 1; j2 <= c.j2 + 1; ++j2) s += chi({j1, j2}, eps, r, theta);
  return s;
}

}  // namespace osclab
