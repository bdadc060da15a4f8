#include "osclab/quadrature.hpp"

namespace osclab {

QuadratureResult integrate_oscillatory(const Integrand2D& f, double phase_gradient_bound,
                                       double tol, const QuadratureLimits& lim) {
  require(tol > 0.0, errc::invalid_argument, "tolerance must be positive");
  require(phase_gradient_bound >= 0.0, errc::invalid_argument,
          "phase gradient bound must be nonnegative");
  long n_axis = std::max<long>(8, long(std::ceil(phase_gradient_bound / 2.0)));
  require(n_axis <= lim.panel_cap / n_axis, errc::budget_exceeded,
          "base panel count exceeds the budget");
  // Per-axis phase extents implied by the gradient bound.
  double rad_x = phase_gradient_bound * 1.5;
  double rad_y = phase_gradient_bound * pi;
  detail::AdaptivePanels2D<const Integrand2D> engine(f, lim);
  engine.run(0.5, 2.0, 0.0, pi, n_axis, n_axis, rad_x, rad_y, tol);
  return {engine.total(), engine.error(), engine.panels(), false};
}

namespace {

std::vector<double> simpson_weights(long n) {
  // n points, n odd (n - 1 intervals, even count).
  std::vector<double> w(n, 1.0);
  for (long i = 1; i + 1 < n; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
  return w;
}

}  // namespace

QuadratureResult brute_force_oracle_rect(const Integrand2D& f, double ax, double bx, double ay,
                                         double by, long n_x, long n_y) {
  require(n_x >= 2 && n_y >= 2, errc::invalid_argument, "oracle grid must be at least 2x2");
  if (n_x % 2 == 0) ++n_x;
  if (n_y % 2 == 0) ++n_y;
  double hx = (bx - ax) / double(n_x - 1);
  double hy = (by - ay) / double(n_y - 1);
  std::vector<double> wx = simpson_weights(n_x), wy = simpson_weights(n_y);
  std::vector<cplx> rows(n_x);
  std::vector<cplx> row(n_y);
  for (long i = 0; i < n_x; ++i) {
    double x = ax + hx * double(i);
    for (long k = 0; k < n_y; ++k) row[k] = wy[k] * f(x, ay + hy * double(k));
    rows[i] = wx[i] * tree_sum(std::span<const cplx>(row));
  }
  cplx total = tree_sum(std::span<const cplx>(rows)) * (hx / 3.0) * (hy / 3.0);
  return {total, 0.0, n_x * n_y, true};
}

QuadratureResult brute_force_oracle(const Integrand2D& f, long n_r, long n_theta) {
  return brute_force_oracle_rect(f, 0.5, 2.0, 0.0, pi, n_r, n_theta);
}

}  // namespace osclab
