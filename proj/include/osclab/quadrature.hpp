#ifndef OSCLAB_QUADRATURE_HPP
#define OSCLAB_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "osclab/common.hpp"
#include "osclab/special.hpp"

namespace osclab {

struct QuadratureResult {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;
  long panels_used = 0;
  bool oracle = false;
};

struct QuadratureLimits {
  long panel_cap = 1l << 22;
};

namespace detail {

/// Panels are refined while the two-level difference exceeds their share of
/// the tolerance; each split halves the budget. Evaluation order is a fixed
/// depth-first traversal, and panel values are tree-summed in that order, so
/// results do not depend on timing or worker counts.
template <class F>
class AdaptivePanels1D {
 public:
  AdaptivePanels1D(F& f, const QuadratureLimits& lim) : f_(f), lim_(lim) {}

  void run(double a, double b, long n_base, double tol) {
    n_base = std::max<long>(n_base, 1);
    double h = (b - a) / double(n_base);
    for (long i = 0; i < n_base; ++i)
      process(a + h * double(i), (i + 1 == n_base) ? b : a + h * double(i + 1),
              tol / double(n_base), 0);
  }

  cplx total() const { return tree_sum(std::span<const cplx>(values_)); }
  double error() const { return err_; }
  long panels() const { return panels_; }

 private:
  cplx gl16(double a, double b) {
    const GaussRule& rule = gauss_legendre(16);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx s = 0.0;
    for (int i = 0; i < 16; ++i) s += rule.weights[i] * f_(mid + half * rule.nodes[i]);
    return half * s;
  }

  void process(double a, double b, double budget, int depth) {
    if (++panels_ > lim_.panel_cap)
      fail(errc::budget_exceeded, "1d quadrature exceeded its panel budget");
    cplx coarse = gl16(a, b);
    cplx fine = gl16(a, 0.5 * (a + b)) + gl16(0.5 * (a + b), b);
    double err = std::abs(coarse - fine);
    if (err <= budget || depth >= 48 || (b - a) < 1e-14 * std::abs(b)) {
      values_.push_back(fine);
      err_ += err;
      return;
    }
    process(a, 0.5 * (a + b), 0.5 * budget, depth + 1);
    process(0.5 * (a + b), b, 0.5 * budget, depth + 1);
  }

  F& f_;
  const QuadratureLimits& lim_;
  std::vector<cplx> values_;
  double err_ = 0.0;
  long panels_ = 0;
};

template <class F>
class AdaptivePanels2D {
 public:
  AdaptivePanels2D(F& f, const QuadratureLimits& lim) : f_(f), lim_(lim) {}

  void run(double ax, double bx, double ay, double by, long nx, long ny, double rad_x,
           double rad_y, double tol) {
    nx = std::max<long>(nx, 1);
    ny = std::max<long>(ny, 1);
    double hx = (bx - ax) / double(nx), hy = (by - ay) / double(ny);
    double budget = tol / double(nx * ny);
    for (long i = 0; i < nx; ++i)
      for (long k = 0; k < ny; ++k)
        process(ax + hx * double(i), ax + hx * double(i + 1), ay + hy * double(k),
                ay + hy * double(k + 1), rad_x / double(nx), rad_y / double(ny), budget, 0);
  }

  cplx total() const { return tree_sum(std::span<const cplx>(values_)); }
  double error() const { return err_; }
  long panels() const { return panels_; }

 private:
  cplx gl16x16(double ax, double bx, double ay, double by) {
    const GaussRule& rule = gauss_legendre(16);
    double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
    double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
    cplx s = 0.0;
    for (int i = 0; i < 16; ++i) {
      cplx row = 0.0;
      double x = mx + hx * rule.nodes[i];
      for (int k = 0; k < 16; ++k) row += rule.weights[k] * f_(x, my + hy * rule.nodes[k]);
      s += rule.weights[i] * row;
    }
    return hx * hy * s;
  }

  void process(double ax, double bx, double ay, double by, double rad_x, double rad_y,
               double budget, int depth) {
    if (++panels_ > lim_.panel_cap)
      fail(errc::budget_exceeded, "2d quadrature exceeded its panel budget");
    cplx coarse = gl16x16(ax, bx, ay, by);
    cplx fine;
    bool split_x = rad_x >= rad_y;
    if (split_x) {
      double m = 0.5 * (ax + bx);
      fine = gl16x16(ax, m, ay, by) + gl16x16(m, bx, ay, by);
    } else {
      double m = 0.5 * (ay + by);
      fine = gl16x16(ax, bx, ay, m) + gl16x16(ax, bx, m, by);
    }
    double err = std::abs(coarse - fine);
    if (err <= budget || depth >= 40) {
      values_.push_back(fine);
      err_ += err;
      return;
    }
    if (split_x) {
      double m = 0.5 * (ax + bx);
      process(ax, m, ay, by, 0.5 * rad_x, rad_y, 0.5 * budget, depth + 1);
      process(m, bx, ay, by, 0.5 * rad_x, rad_y, 0.5 * budget, depth + 1);
    } else {
      double m = 0.5 * (ay + by);
      process(ax, bx, ay, m, rad_x, 0.5 * rad_y, 0.5 * budget, depth + 1);
      process(ax, bx, m, by, rad_x, 0.5 * rad_y, 0.5 * budget, depth + 1);
    }
  }

  F& f_;
  const QuadratureLimits& lim_;
  std::vector<cplx> values_;
  double err_ = 0.0;
  long panels_ = 0;
};

}  // namespace detail

/// 1D oscillation-resolved panels on [a, b]. phase_radians bounds the total
/// phase variation across the interval; base panels are sized to ~12 radians
/// each (16-point Gauss resolves that to machine precision).
template <class F>
QuadratureResult integrate_panels_1d(F&& f, double a, double b, double phase_radians, double tol,
                                     const QuadratureLimits& lim = {}) {
  long n_base = std::max<long>(8, long(std::ceil(phase_radians / 12.0)));
  require(n_base <= lim.panel_cap, errc::budget_exceeded,
          "1d quadrature base panel count exceeds the budget");
  detail::AdaptivePanels1D<std::remove_reference_t<F>> engine(f, lim);
  engine.run(a, b, n_base, tol);
  return {engine.total(), engine.error(), engine.panels(), false};
}

/// 2D tensor panels on [ax,bx] x [ay,by] with per-axis phase bounds (radians
/// across the full extent of each axis).
template <class F>
QuadratureResult integrate_panels_2d(F&& f, double ax, double bx, double ay, double by,
                                     double rad_x, double rad_y, double tol,
                                     const QuadratureLimits& lim = {}) {
  long nx = std::max<long>(8, long(std::ceil(rad_x / 12.0)));
  long ny = std::max<long>(8, long(std::ceil(rad_y / 12.0)));
  require(nx <= lim.panel_cap / ny, errc::budget_exceeded,
          "2d quadrature base panel count exceeds the budget");
  detail::AdaptivePanels2D<std::remove_reference_t<F>> engine(f, lim);
  engine.run(ax, bx, ay, by, nx, ny, rad_x, rad_y, tol);
  return {engine.total(), engine.error(), engine.panels(), false};
}

using Integrand2D = std::function<cplx(double r, double theta)>;

/// Phase-resolved Gauss panels over [1/2, 2] x [0, pi] with panel count per
/// axis at least max(8, ceil(phase_gradient_bound / 2)), followed by adaptive
/// two-level bisection. phase_gradient_bound is the caller's bound on
/// |grad phase| (radians per unit) over the domain.
QuadratureResult integrate_oscillatory(const Integrand2D& f, double phase_gradient_bound,
                                       double tol, const QuadratureLimits& lim = {});

/// Composite Simpson rule on a uniform grid over [1/2, 2] x [0, pi]; the slow
/// reference the adaptive rule is validated against.
QuadratureResult brute_force_oracle(const Integrand2D& f, long n_r, long n_theta);

/// Simpson oracle on a general rectangle (test support).
QuadratureResult brute_force_oracle_rect(const Integrand2D& f, double ax, double bx, double ay,
                                         double by, long n_x, long n_y);

}  // namespace osclab

#endif
