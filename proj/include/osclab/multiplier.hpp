#ifndef OSCLAB_MULTIPLIER_HPP
#define OSCLAB_MULTIPLIER_HPP

#include <string>
#include <vector>

#include "osclab/kernel.hpp"
#include "osclab/phase.hpp"
#include "osclab/quadrature.hpp"

namespace osclab {

struct MlOptions {
  double tol = 1e-8;        // absolute quadrature tolerance per piece
  long panel_cap = 1l << 22;
  int n_sup_samples = 4096;

  /// Evaluation path. automatic picks per piece:
  ///  - plain: oscillation-resolved Gauss panels on the reduced radial
  ///    integral (angular integral done analytically for n = 2);
  ///  - linear_phase: exact phase substitution s = G(r) with Legendre-moment
  ///    panels, for monotone-phase pieces whose oscillation count makes
  ///    plain panels expensive;
  ///  - polar2d: direct 2D quadrature of the polar form (always used for
  ///    n >= 3; for n = 2 mainly a cross-check).
  enum class Method { automatic, plain, linear_phase, polar2d };
  Method method = Method::automatic;

  /// When positive, pieces whose certified integration-by-parts bound falls
  /// below this threshold are skipped and accounted in the tail bound.
  double skip_tol = 0.0;
};

struct MlEval {
  cplx value{0.0, 0.0};
  double lambda = 0.0;
  long panels = 0;
  bool skipped = false;
  double skip_bound = 0.0;  // certified bound on |m_l| when skipped
  std::string method;       // "plain" | "linphase" | "polar2d" | "skip" | "zero"
};

/// One dyadic multiplier piece:
///   m_l(xi) = 2^(alpha l) sum_sigma int_0^pi int_{1/2}^2 e^{-2 pi i g(r,theta)}
///             Omega_rot(theta, sigma) sin^(n-2)(theta) eta(r) r^(-alpha-1) dr dtheta
/// (for n >= 3 the sigma sum is replaced by the |S^(n-2)| factor and a zonal
/// kernel). For n = 2 and xi' = 0 the angular integral vanishes exactly.
MlEval m_l(const OperatorParams& params, const RadialProfile& profile, const KernelOmega& omega,
           const Frequency& xi, int l, const MlOptions& opts = {});

/// Certified upper bound on |m_l| by integration by parts in r (first order),
/// or 0 if no useful bound applies. Used for skipping and tested against the
/// computed values.
double m_l_skip_bound(const OperatorParams& params, const RadialProfile& profile,
                      const KernelOmega& omega, const Frequency& xi, int l,
                      int n_sup_samples = 512);

struct MTotalResult {
  cplx value{0.0, 0.0};
  double tail_bound = 0.0;      // geometric extrapolation beyond the window
  double skipped_bound = 0.0;   // certified mass of skipped pieces (included in tail_bound)
  int l_min = 0, l_max = 0;
  long panels = 0;
  double max_abs_ml = 0.0;
  std::vector<MlEval> pieces;   // indexed l_min..l_max
};

/// Sum of the window pieces plus a tail bound
///   C ( 2^((alpha-beta/2)(l_max+1)) / (1 - 2^(alpha-beta/2))
///     + 2^(alpha(l_min-1)) / (1 - 2^-alpha) )
/// with C the largest observed |m_l| / reference ratio in the window.
MTotalResult m_total(const OperatorParams& params, const RadialProfile& profile,
                     const KernelOmega& omega, const Frequency& xi, int l_min, int l_max,
                     const MlOptions& opts = {});

struct DecayFit {
  std::vector<int> l_values;
  std::vector<double> log2_abs_ml;
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
  double predicted_slope = 0.0;
  double max_ratio_excess = 0.0;  // max_l (|m_l| / 2^(predicted l)) normalized at the window start
  int n_excluded = 0;             // pieces below the underflow floor, left out of the fit
  nlohmann::json to_json() const;
};

/// Least-squares decay fit over a window entirely inside l >= 1 (predicted
/// slope alpha - beta/2) or entirely inside l <= -1 (predicted slope alpha).
DecayFit decay_fit(const OperatorParams& params, const RadialProfile& profile,
                   const KernelOmega& omega, const Frequency& xi, int l0, int l1,
                   const MlOptions& opts = {});

struct EnvelopeSample {
  Frequency xi;
  double xi_norm = 0.0;
  double abs_m = 0.0;
  double tail_bound = 0.0;
};

struct EnvelopeGroup {
  std::string name;
  double predicted_exponent = 0.0;
  double fitted_exponent = 0.0;
  double bound_constant = 0.0;    // C fixed from the smallest-|xi| sample
  double max_ratio_vs_bound = 0.0;  // max |m| / (C |xi|^predicted)
  std::vector<EnvelopeSample> samples;
  bool pass(double slack = 10.0) const { return max_ratio_vs_bound <= slack; }
};

struct EnvelopeResult {
  EnvelopeGroup radial;  // |xi'| >= |xi_last|, exponent (alpha - beta/2)/(1 + beta)
  EnvelopeGroup axial;   // |xi'| <  |xi_last|, exponent (alpha - beta/2)/(beta + k3 + 2)
};

/// One-sided large-frequency envelope of |m_total| along the supplied
/// samples, split into the two dominance groups.
EnvelopeResult sobolev_envelope(const OperatorParams& params, const RadialProfile& profile,
                                double k3, const KernelOmega& omega,
                                const std::vector<Frequency>& xi_samples,
                                const MlOptions& opts = {});

/// Window heuristic for near-converged m_total at one frequency.
std::pair<int, int> default_window_for(const Frequency& xi);

}  // namespace osclab

#endif
