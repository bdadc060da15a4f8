#include "osclab/kernel.hpp"

#include <cmath>

namespace osclab {

KernelOmega::KernelOmega(std::vector<Harmonic> harmonics) : harmonics_(std::move(harmonics)) {
  require(!harmonics_.empty(), errc::invalid_argument, "kernel needs at least one harmonic");
  for (const auto& h : harmonics_) {
    require(h.k >= 1, errc::invalid_argument,
            "kernel harmonics must have order k >= 1 (no constant term)");
    require(std::isfinite(h.a) && std::isfinite(h.b), errc::invalid_argument,
            "kernel coefficients must be finite");
    sup_bound_ += std::abs(h.a) + std::abs(h.b);
    max_order_ = std::max(max_order_, h.k);
  }
  require(sup_bound_ > 0.0, errc::invalid_argument, "kernel is identically zero");
}

KernelOmega KernelOmega::from_json(const nlohmann::json& spec) {
  require(spec.is_object() && spec.contains("harmonics"), errc::parse_error,
          "kernel spec must be an object with a \"harmonics\" array");
  std::vector<Harmonic> hs;
  try {
    for (const auto& h : spec.at("harmonics"))
      hs.push_back({h.at("k").get<int>(), h.value("a", 0.0), h.value("b", 0.0)});
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("kernel spec: ") + e.what());
  }
  return KernelOmega(std::move(hs));
}

nlohmann::json KernelOmega::to_json() const {
  nlohmann::json hs = nlohmann::json::array();
  for (const auto& h : harmonics_) hs.push_back({{"k", h.k}, {"a", h.a}, {"b", h.b}});
  return {{"harmonics", hs}};
}

double KernelOmega::eval(double u) const {
  double s = 0.0;
  for (const auto& h : harmonics_) s += h.a * std::cos(h.k * u) + h.b * std::sin(h.k * u);
  return s;
}

double KernelOmega::mean(int n_quad) const {
  require(n_quad >= 16, errc::invalid_argument, "mean quadrature needs n_quad >= 16");
  // Trapezoid on the periodic interval (all nodes equal weight).
  double s = 0.0;
  for (int i = 0; i < n_quad; ++i) s += eval(two_pi * i / n_quad);
  return s * two_pi / n_quad;
}

double KernelOmega::eval_rotated(const std::array<double, 2>& xi_prime, double theta,
                                 int sigma) const {
  double norm = std::hypot(xi_prime[0], xi_prime[1]);
  require(norm > 0.0, errc::zero_frequency, "rotated evaluation needs xi' != 0");
  double nu = std::atan2(xi_prime[1], xi_prime[0]);
  return eval(nu + sigma * theta);
}

KernelOmega KernelOmega::rotated(double delta) const {
  std::vector<Harmonic> hs;
  hs.reserve(harmonics_.size());
  for (const auto& h : harmonics_) {
    double c = std::cos(h.k * delta), s = std::sin(h.k * delta);
    hs.push_back({h.k, h.a * c - h.b * s, h.a * s + h.b * c});
  }
  return KernelOmega(std::move(hs));
}

std::vector<double> KernelOmega::axis_cosine_coeffs(double nu) const {
  std::vector<double> c(max_order_ + 1, 0.0);
  for (const auto& h : harmonics_)
    c[h.k] += h.a * std::cos(h.k * nu) + h.b * std::sin(h.k * nu);
  return c;
}

}  // namespace osclab
