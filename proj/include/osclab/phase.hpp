#ifndef OSCLAB_PHASE_HPP
#define OSCLAB_PHASE_HPP

#include <array>
#include <cmath>
#include <utility>

#include "json.hpp"
#include "osclab/bumps.hpp"
#include "osclab/common.hpp"
#include "osclab/profiles.hpp"

namespace osclab {

/// Frequency xi = (xi', xi_last) in R^(n+1); for n > 2 only |xi'| matters and
/// callers pass (|xi'|, 0).
struct Frequency {
  std::array<double, 2> xi_prime{0.0, 0.0};
  double xi_last = 0.0;

  double xi_prime_norm() const { return std::hypot(xi_prime[0], xi_prime[1]); }
  double norm() const { return std::hypot(xi_prime_norm(), xi_last); }
  double angle() const { return std::atan2(xi_prime[1], xi_prime[0]); }
};

/// Operator parameters (n, alpha, beta) with beta > 2 alpha, the standing
/// hypothesis for boundedness.
struct OperatorParams {
  int n;
  double alpha;
  double beta;

  OperatorParams(int n_, double alpha_, double beta_) : n(n_), alpha(alpha_), beta(beta_) {
    require(n >= 2, errc::invalid_argument, "ambient surface dimension n must be >= 2");
    require(alpha > 0.0, errc::invalid_argument, "alpha must be positive");
    require(beta > 2.0 * alpha, errc::invalid_argument, "need beta > 2 alpha");
  }

  /// Exponent window (beta/(beta-alpha), beta/alpha); always contains 2.
  std::pair<double, double> p_window() const {
    return {beta / (beta - alpha), beta / alpha};
  }

  /// L2 -> L2_s smoothing order s0 = (beta/2 - alpha)/(beta + k3 + 2).
  double smoothing_order(double k3) const { return (0.5 * beta - alpha) / (beta + k3 + 2.0); }

  nlohmann::json to_json() const { return {{"n", n}, {"alpha", alpha}, {"beta", beta}}; }
};

/// Rescaled phase on the reference annulus:
///   g(r,theta) = 2^-l |xi'| r cos(theta) + xi_last phi(2^-l r) + 2^(beta l) r^-beta
/// together with the partial derivatives used by the lower-bound machinery.
struct PhaseDerivs {
  double g;
  double g_r;
  double g_theta;
  double g_rr;
  double g_thetatheta;
  double g_rrr;
  double g_rrtheta;  // identically zero: g_rr does not depend on theta
};

/// Closed-form evaluation; r is restricted to [1/2, 2].
PhaseDerivs phase_and_derivatives(const OperatorParams& params, const RadialProfile& profile,
                                  const Frequency& xi, int l, double r, double theta);

/// Same evaluation without the domain restriction (patch supports may poke
/// slightly past the annulus); for internal and test use.
PhaseDerivs phase_derivs_unchecked(const OperatorParams& params, const RadialProfile& profile,
                                   const Frequency& xi, int l, double r, double theta);

/// Suprema of |phi'|, |phi''|, |phi'''| over [a, b] by dense log-uniform
/// sampling plus golden-section refinement around the sampled maximum.
double sup_abs_phi1(const RadialProfile& profile, double a, double b, int n_samples);
double sup_abs_phi2(const RadialProfile& profile, double a, double b, int n_samples);
double sup_abs_phi3(const RadialProfile& profile, double a, double b, int n_samples);

/// lambda = max{ 2^(beta l), 2^-l |xi'|,
///               |xi_last| 2^-2l sup |phi''|, |xi_last| 2^-3l sup |phi'''| },
/// suprema over [2^(-l-1), 2^(-l+1)].
double lambda_scale(const OperatorParams& params, const RadialProfile& profile,
                    const Frequency& xi, int l, int n_sup_samples = 4096);

/// Brute-force check that max{|g_r|, |g_theta|, |g_rr|, |g_thetatheta|}
/// >= epsilon * lambda on an (n_r x n_theta) grid of [1/2,2] x [0,pi].
struct LemmaReport {
  double min_ratio;  // min over the grid of (max of the four) / (epsilon lambda)
  double worst_r;
  double worst_theta;
  double lambda;
  double epsilon;
  int n_r;
  int n_theta;
  bool pass;  // min_ratio >= 1
  nlohmann::json to_json() const;
};

LemmaReport check_lemma_lower_bound(const OperatorParams& params, const RadialProfile& profile,
                                    const Frequency& xi, int l, const EpsilonConstants& eps,
                                    int n_r = 101, int n_theta = 101);

/// Which derivative is uniformly large on a patch, in the fixed priority
/// order (g_r, g_theta, g_rr, g_thetatheta). trivial_bound means none was.
enum class CaseTag { r_first, theta_first, r_second, theta_second, trivial_bound };
const char* to_string(CaseTag tag);

CaseTag classify_patch(const OperatorParams& params, const RadialProfile& profile,
                       const Frequency& xi, int l, PatchIndex j, const EpsilonConstants& eps,
                       int n_check = 9);

}  // namespace osclab

#endif
