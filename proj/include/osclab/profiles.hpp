#ifndef OSCLAB_PROFILES_HPP
#define OSCLAB_PROFILES_HPP

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "osclab/common.hpp"

namespace osclab {

/// Value of a radial profile and its first three derivatives at one radius.
struct ProfileDerivs {
  double phi;
  double d1;
  double d2;
  double d3;
};

/// A radial graph profile from one of the built-in families, with exact
/// closed-form derivatives up to third order. All families are increasing
/// and convex on (0, inf) for admissible parameters, with phi(0+) = 0.
class RadialProfile {
 public:
  enum class Family { monomial, monomial_saturating, exp_sinh, monomial_sum };

  static RadialProfile monomial(double gamma);
  static RadialProfile monomial_saturating(double gamma1, double gamma2);
  static RadialProfile exp_sinh();
  /// phi(r) = sum a_j r^(1+gamma_j), a_j > 0, gamma_j > 0.
  static RadialProfile monomial_sum(std::vector<std::pair<double, double>> terms);

  static RadialProfile from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

  /// Closed-form (phi, phi', phi'', phi''') at r > 0.
  ProfileDerivs eval(double r) const;

  /// Gaussian curvature of the rotational graph z = phi(|x|) in R^3:
  /// K(r) = phi' phi'' / (r (1 + phi'^2)^2).
  double gaussian_curvature(double r) const;

  Family family() const { return family_; }
  std::string describe() const;

 private:
  RadialProfile(Family f, std::vector<double> params) : family_(f), params_(std::move(params)) {}

  Family family_;
  std::vector<double> params_;  // family-specific; monomial_sum stores a0,g0,a1,g1,...
};

/// Observed bounds for the growth ratios r phi''/phi' and |r phi'''/phi''|
/// over a sampled radius range. The range is recorded: the conditions are
/// for all r > 0 and a finite sample can only witness them on [r_min, r_max].
struct AdmissibilityCertificate {
  double k1_hat = 0;  // observed inf of r phi''/phi'
  double k2_hat = 0;  // observed sup
  double k3_hat = 0;  // observed sup of |r phi'''/phi''|
  double r_min = 0;
  double r_max = 0;
  long n_samples = 0;
  bool sign_ok = false;    // phi' phi'' > 0 at every sample
  bool origin_ok = false;  // |phi(1e-8)| < 1e-6
  long n_skipped = 0;      // samples skipped by the |phi''| division guard
  double violation_r = 0;  // first radius where the sign condition failed (0 if none)

  bool admissible() const { return sign_ok && origin_ok && k1_hat > 0; }
  nlohmann::json to_json() const;
};

/// Samples log-uniformly on [r_min, r_max] and records the observed ratio
/// bounds. Sign violations are reported in the certificate, not thrown.
AdmissibilityCertificate certify_admissibility(const RadialProfile& profile, double r_min,
                                               double r_max, long n_samples);

}  // namespace osclab

#endif
