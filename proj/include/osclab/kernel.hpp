#ifndef OSCLAB_KERNEL_HPP
#define OSCLAB_KERNEL_HPP

#include <array>
#include <vector>

#include "json.hpp"
#include "osclab/common.hpp"

namespace osclab {

struct Harmonic {
  int k;
  double a;
  double b;
};

/// Sphere kernel factor for n = 2: a finite trigonometric polynomial
/// Omega(u) = sum_k a_k cos(ku) + b_k sin(ku) in the polar angle u, with no
/// constant term. Mean zero and boundedness hold by construction.
class KernelOmega {
 public:
  explicit KernelOmega(std::vector<Harmonic> harmonics);

  static KernelOmega from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

  double eval(double u) const;

  /// sum |a_k| + |b_k|, a sup-norm bound.
  double sup_bound() const { return sup_bound_; }

  /// Trapezoid quadrature of Omega over the circle; ~0 for every valid kernel.
  double mean(int n_quad = 256) const;

  /// Omega at the circle point whose coordinates in the frame with pole
  /// xi'/|xi'| are (sigma sin theta, cos theta), i.e. Omega(angle(xi') + sigma theta).
  double eval_rotated(const std::array<double, 2>& xi_prime, double theta, int sigma) const;

  /// Kernel rotated by delta: (rotated Omega)(u) = Omega(u - delta).
  KernelOmega rotated(double delta) const;

  int max_order() const { return max_order_; }
  const std::vector<Harmonic>& harmonics() const { return harmonics_; }

  /// Coefficients of sum_sigma Omega(nu + sigma theta) = 2 sum_k c_k(nu) cos(k theta):
  /// c_k(nu) = a_k cos(k nu) + b_k sin(k nu), returned for k = 0..max_order
  /// (index 0 unused, zero).
  std::vector<double> axis_cosine_coeffs(double nu) const;

 private:
  std::vector<Harmonic> harmonics_;
  double sup_bound_ = 0;
  int max_order_ = 0;
};

}  // namespace osclab

#endif
