#include "osclab/profiles.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace osclab {

namespace {

void check_radius(double r) {
  require(r > 0.0 && std::isfinite(r), errc::non_positive_radius,
          "radius must be positive and finite");
}

ProfileDerivs eval_monomial(double gamma, double r) {
  double p = std::pow(r, gamma);
  return {p, gamma * p / r, gamma * (gamma - 1) * p / (r * r),
          gamma * (gamma - 1) * (gamma - 2) * p / (r * r * r)};
}

// phi = u v with u = r^g1, v = (1 - e^-r)^g2.
ProfileDerivs eval_monomial_saturating(double g1, double g2, double r) {
  ProfileDerivs u = eval_monomial(g1, r);
  double e = std::exp(-r);
  double s = -std::expm1(-r);  // 1 - e^-r, accurate near 0
  double s1 = e, s2 = -e, s3 = e;
  // v = s^g2 via chain rule
  double v, v1, v2, v3;
  if (g2 == 0.0) {
    v = 1.0;
    v1 = v2 = v3 = 0.0;
  } else {
    double sp0 = std::pow(s, g2);
    double sp1 = g2 * sp0 / s;
    double sp2 = g2 * (g2 - 1) * sp0 / (s * s);
    double sp3 = g2 * (g2 - 1) * (g2 - 2) * sp0 / (s * s * s);
    v = sp0;
    v1 = sp1 * s1;
    v2 = sp2 * s1 * s1 + sp1 * s2;
    v3 = sp3 * s1 * s1 * s1 + 3.0 * sp2 * s1 * s2 + sp1 * s3;
  }
  return {u.phi * v, u.d1 * v + u.phi * v1, u.d2 * v + 2.0 * u.d1 * v1 + u.phi * v2,
          u.d3 * v + 3.0 * u.d2 * v1 + 3.0 * u.d1 * v2 + u.phi * v3};
}

// phi = r^2 e^-r sinh r = r^2 (1 - e^-2r)/2.
ProfileDerivs eval_exp_sinh(double r) {
  double w = std::exp(-2.0 * r);
  double one_minus_w = -std::expm1(-2.0 * r);
  double phi = 0.5 * r * r * one_minus_w;
  double d1 = r + w * (r * r - r);
  double d2 = 1.0 + w * (-2.0 * r * r + 4.0 * r - 1.0);
  double d3 = w * (4.0 * r * r - 12.0 * r + 6.0);
  return {phi, d1, d2, d3};
}

ProfileDerivs eval_monomial_sum(const std::vector<double>& params, double r) {
  ProfileDerivs acc{0, 0, 0, 0};
  for (std::size_t i = 0; i + 1 < params.size(); i += 2) {
    double a = params[i];
    double q = 1.0 + params[i + 1];
    ProfileDerivs t = eval_monomial(q, r);
    acc.phi += a * t.phi;
    acc.d1 += a * t.d1;
    acc.d2 += a * t.d2;
    acc.d3 += a * t.d3;
  }
  return acc;
}

}  // namespace

RadialProfile RadialProfile::monomial(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0, errc::invalid_argument,
          "monomial exponent must be positive");
  return RadialProfile(Family::monomial, {gamma});
}

RadialProfile RadialProfile::monomial_saturating(double gamma1, double gamma2) {
  require(gamma1 > 1.0 && gamma2 >= 0.0, errc::invalid_argument,
          "monomial_saturating requires gamma1 > 1 and gamma2 >= 0");
  return RadialProfile(Family::monomial_saturating, {gamma1, gamma2});
}

RadialProfile RadialProfile::exp_sinh() { return RadialProfile(Family::exp_sinh, {}); }

RadialProfile RadialProfile::monomial_sum(std::vector<std::pair<double, double>> terms) {
  require(!terms.empty(), errc::invalid_argument, "monomial_sum needs at least one term");
  std::vector<double> params;
  for (auto& [a, g] : terms) {
    require(a > 0.0 && g > 0.0, errc::invalid_argument,
            "monomial_sum requires a_j > 0 and gamma_j > 0");
    params.push_back(a);
    params.push_back(g);
  }
  return RadialProfile(Family::monomial_sum, std::move(params));
}

RadialProfile RadialProfile::from_json(const nlohmann::json& spec) {
  require(spec.is_object() && spec.contains("kind"), errc::parse_error,
          "profile spec must be an object with a \"kind\" key");
  std::string kind = spec.at("kind").get<std::string>();
  try {
    if (kind == "monomial") return monomial(spec.at("gamma").get<double>());
    if (kind == "monomial_saturating")
      return monomial_saturating(spec.at("gamma1").get<double>(), spec.at("gamma2").get<double>());
    if (kind == "exp_sinh") return exp_sinh();
    if (kind == "monomial_sum") {
      std::vector<std::pair<double, double>> terms;
      for (const auto& t : spec.at("terms"))
        terms.emplace_back(t.at("a").get<double>(), t.at("gamma").get<double>());
      return monomial_sum(std::move(terms));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("profile spec: ") + e.what());
  }
  fail(errc::parse_error, "unknown profile kind \"" + kind + "\"");
}

nlohmann::json RadialProfile::to_json() const {
  nlohmann::json j;
  switch (family_) {
    case Family::monomial:
      j = {{"kind", "monomial"}, {"gamma", params_[0]}};
      break;
    case Family::monomial_saturating:
      j = {{"kind", "monomial_saturating"}, {"gamma1", params_[0]}, {"gamma2", params_[1]}};
      break;
    case Family::exp_sinh:
      j = {{"kind", "exp_sinh"}};
      break;
    case Family::monomial_sum: {
      nlohmann::json terms = nlohmann::json::array();
      for (std::size_t i = 0; i + 1 < params_.size(); i += 2)
        terms.push_back({{"a", params_[i]}, {"gamma", params_[i + 1]}});
      j = {{"kind", "monomial_sum"}, {"terms", terms}};
      break;
    }
  }
  return j;
}

std::string RadialProfile::describe() const { return to_json().dump(); }

ProfileDerivs RadialProfile::eval(double r) const {
  check_radius(r);
  switch (family_) {
    case Family::monomial:
      return eval_monomial(params_[0], r);
    case Family::monomial_saturating:
      return eval_monomial_saturating(params_[0], params_[1], r);
    case Family::exp_sinh:
      return eval_exp_sinh(r);
    case Family::monomial_sum:
      return eval_monomial_sum(params_, r);
  }
  fail(errc::internal_error, "unreachable profile family");
}

double RadialProfile::gaussian_curvature(double r) const {
  check_radius(r);
  ProfileDerivs d = eval(r);
  double slope2 = d.d1 * d.d1;
  return d.d1 * d.d2 / (r * (1.0 + slope2) * (1.0 + slope2));
}

AdmissibilityCertificate certify_admissibility(const RadialProfile& profile, double r_min,
                                               double r_max, long n_samples) {
  require(r_min > 0.0 && r_min < r_max, errc::invalid_argument, "need 0 < r_min < r_max");
  require(n_samples >= 2, errc::invalid_argument, "need at least two samples");

  AdmissibilityCertificate cert;
  cert.r_min = r_min;
  cert.r_max = r_max;
  cert.n_samples = n_samples;
  cert.sign_ok = true;

  double inf_ratio = std::numeric_limits<double>::infinity();
  double sup_ratio = -std::numeric_limits<double>::infinity();
  double sup_k3 = 0.0;
  const double log_ratio = std::log(r_max / r_min);

  for (long i = 0; i < n_samples; ++i) {
    double t = (n_samples == 1) ? 0.0 : double(i) / double(n_samples - 1);
    double r = r_min * std::exp(log_ratio * t);
    ProfileDerivs d = profile.eval(r);
    if (!(d.d1 * d.d2 > 0.0)) {
      if (cert.sign_ok) cert.violation_r = r;
      cert.sign_ok = false;
    }
    if (std::abs(d.d1) < 1e-300) {
      ++cert.n_skipped;
      continue;
    }
    double q = r * d.d2 / d.d1;
    inf_ratio = std::min(inf_ratio, q);
    sup_ratio = std::max(sup_ratio, q);
    if (std::abs(d.d2) < 1e-30) {
      ++cert.n_skipped;
      continue;
    }
    sup_k3 = std::max(sup_k3, std::abs(r * d.d3 / d.d2));
  }

  cert.k1_hat = inf_ratio;
  cert.k2_hat = sup_ratio;
  cert.k3_hat = sup_k3;
  cert.origin_ok = std::abs(profile.eval(1e-8).phi) < 1e-6;
  return cert;
}

nlohmann::json AdmissibilityCertificate::to_json() const {
  return {{"k1_hat", k1_hat},
          {"k2_hat", k2_hat},
          {"k3_hat", k3_hat},
          {"r_min", r_min},
          {"r_max", r_max},
          {"n_samples", n_samples},
          {"sign_ok", sign_ok},
          {"origin_ok", origin_ok},
          {"n_skipped", n_skipped},
          {"violation_r", violation_r},
          {"admissible", admissible()}};
}

}  // namespace osclab
