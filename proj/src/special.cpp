#include "osclab/special.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace osclab {

namespace {

GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1.0);
    rule.nodes[i] = t;
    rule.weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
  return it->second;
}

void bessel_jn_array(int kmax, double z, double* out) {
  if (z < 1e-12) {
    out[0] = 1.0;
    for (int k = 1; k <= kmax; ++k) out[k] = 0.0;
    return;
  }
  double mu_max = 4.0 * double(kmax) * double(kmax);
  if (z > std::max(25.0, 1.2 * mu_max)) {
    // Large-argument expansion: J_k(z) ~ sqrt(2/(pi z)) (P cos w - Q sin w),
    // w = z - k pi/2 - pi/4, with P, Q the leading correction polynomials.
    double amp = std::sqrt(2.0 / (pi * z));
    double z8 = 8.0 * z;
    for (int k = 0; k <= kmax; ++k) {
      double mu = 4.0 * double(k) * double(k);
      double a1 = mu - 1.0;
      double P = 1.0 - a1 * (mu - 9.0) / (2.0 * z8 * z8) +
                 a1 * (mu - 9.0) * (mu - 25.0) * (mu - 49.0) / (24.0 * z8 * z8 * z8 * z8);
      double Q = a1 / z8 - a1 * (mu - 9.0) * (mu - 25.0) / (6.0 * z8 * z8 * z8);
      double w = z - 0.5 * k * pi - 0.25 * pi;
      out[k] = amp * (P * std::cos(w) - Q * std::sin(w));
    }
    return;
  }
  // Downward (Miller) recurrence normalized by J_0 + 2 J_2 + 2 J_4 + ... = 1.
  int m = kmax + 16 + int(1.4 * z + 10.0 * std::sqrt(std::max(1.0, z)));
  m += m & 1;
  for (int k = 0; k <= kmax; ++k) out[k] = 0.0;
  double jp = 0.0, jc = 1e-300, sum = 0.0;
  for (int k = m; k >= 1; --k) {
    double jm = (2.0 * k / z) * jc - jp;
    jp = jc;
    jc = jm;
    if (k - 1 <= kmax) out[k - 1] = jc;
    if (((k - 1) & 1) == 0 && k - 1 > 0) sum += 2.0 * jc;
    if (std::abs(jc) > 1e250) {
      const double s = 1e-250;
      jc *= s;
      jp *= s;
      sum *= s;
      for (int q = 0; q <= kmax; ++q) out[q] *= s;
    }
  }
  sum += jc;  // adds J_0
  double scale = 1.0 / sum;
  for (int k = 0; k <= kmax; ++k) out[k] *= scale;
}

void sph_bessel_array(int kmax, double z, double* out) {
  double az = std::abs(z);
  if (az < 1e-8) {
    // j_k(z) ~ z^k / (2k+1)!!
    out[0] = 1.0 - z * z / 6.0;
    double dfact = 1.0;
    double p = 1.0;
    for (int k = 1; k <= kmax; ++k) {
      p *= z;
      dfact *= (2 * k + 1);
      out[k] = p / dfact;
    }
    return;
  }
  // Upward recurrence, stable for k < z. Our use sites guarantee az >> kmax;
  // for small az fall back to a short downward pass.
  if (az > kmax + 10) {
    out[0] = std::sin(az) / az;
    if (kmax >= 1) out[1] = out[0] / az - std::cos(az) / az;
    for (int k = 1; k < kmax; ++k) out[k + 1] = (2 * k + 1) / az * out[k] - out[k - 1];
  } else {
    int m = kmax + 20 + int(az);
    double jp = 0.0, jc = 1e-280;
    std::vector<double> tmp(kmax + 1, 0.0);
    for (int k = m; k >= 1; --k) {
      double jm = (2 * k + 1) / az * jc - jp;
      jp = jc;
      jc = jm;
      if (k - 1 <= kmax) tmp[k - 1] = jc;
      if (std::abs(jc) > 1e250) {
        const double s = 1e-250;
        jc *= s;
        jp *= s;
        for (auto& t : tmp) t *= s;
      }
    }
    double scale = (std::sin(az) / az) / tmp[0];
    for (int k = 0; k <= kmax; ++k) out[k] = tmp[k] * scale;
  }
  if (z < 0) {
    for (int k = 1; k <= kmax; k += 2) out[k] = -out[k];
  }
}

void legendre_array(int kmax, double x, double* out) {
  out[0] = 1.0;
  if (kmax >= 1) out[1] = x;
  for (int k = 1; k < kmax; ++k)
    out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1);
}

namespace {

template <class T>
T tree_sum_impl(std::span<const T> v) {
  if (v.empty()) return T{};
  std::vector<T> acc(v.begin(), v.end());
  std::size_t n = acc.size();
  while (n > 1) {
    std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) acc[i] = acc[2 * i] + acc[2 * i + 1];
    if (n & 1) {
      acc[half] = acc[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return acc[0];
}

}  // namespace

cplx tree_sum(std::span<const cplx> values) { return tree_sum_impl(values); }
double tree_sum(std::span<const double> values) { return tree_sum_impl(values); }

}  // namespace osclab
