#ifndef OSCLAB_BUMPS_HPP
#define OSCLAB_BUMPS_HPP

#include "json.hpp"
#include "osclab/common.hpp"

namespace osclab {

/// zeta(x) = e^{1/(|x|-1)} / (e^{1/(|x|-1)} + e^{-1/|x|}) for |x| < 1, else 0.
/// Satisfies zeta(x) + zeta(x-1) = 1 on [0,1], hence sum_l zeta(x+l) = 1.
double zeta(double x);

/// eta(r) = zeta(log2 r); support [1/2, 2]; sum_l eta(2^l r) = 1 for r > 0.
double eta(double r);

/// The shift bump ingredient: psi(x) = e^{-1/(x(4/3-x))} on (0, 4/3), else 0.
double psi_shift(double x);

/// kappa(x) = psi(x) / sum_z psi(x + 4z/3). The shifted supports tile the
/// line, so kappa is 1 on the interior of (0, 4/3), 0 elsewhere, and the
/// shifted sum identity sum_z kappa(x + 4z/3) = 1 holds off the lattice
/// points 4Z/3 (where all terms vanish; 0/0 is mapped to 0).
double kappa(double x);

/// Sum of eta(2^l r) over a finite window l in [l_lo, l_hi]; equals 1 on
/// [2^-l_hi, 2^-l_lo] and tapers smoothly to 0 one octave beyond each end.
/// Used to match truncations between the spectral and direct operator paths.
double eta_window_sum(double r, int l_lo, int l_hi);

/// The patch-size constants derived from the derivative-floor threshold.
struct EpsilonConstants {
  double epsilon;
  double epsilon1;
  double epsilon2;
  double k2;
  double k3;
  double beta;
  nlohmann::json to_json() const;
};

/// epsilon = safety * min{ 1/(2 sqrt 2), 1/(4 k2 (3 beta + 7)),
///                         beta/((4 + 3 k2) 2^beta), 1/(8 k2 k3 (3 beta + 7)) },
/// epsilon1 = min{ eps/(6 beta (beta+1) 2^(beta+2)),
///                 eps/(4 beta (beta+1)(beta+2) 2^(beta+3)), eps/8 },
/// epsilon2 = eps/8. The threshold inequality is strict, so safety < 1.
EpsilonConstants compute_epsilons(double k2, double k3, double beta, double safety = 0.5);

/// Integer patch indices; the patch center is (eps1*j1, eps2*j2).
struct PatchIndex {
  long j1;
  long j2;
};

/// chi_j(r, theta) = kappa(4(r - eps1 j1)/(3 eps1)) * kappa(4(theta - eps2 j2)/(3 eps2)).
double chi(PatchIndex j, const EpsilonConstants& eps, double r, double theta);

struct Interval {
  double lo;
  double hi;
};

/// Support of chi_j (from the actual support of kappa).
Interval patch_support_r(PatchIndex j, const EpsilonConstants& eps);
Interval patch_support_theta(PatchIndex j, const EpsilonConstants& eps);

/// Index rectangle of the patches meeting [1/2, 2] x [0, pi]. Depends only
/// on the epsilon constants, never on the dyadic scale.
struct PatchRange {
  long j1_lo, j1_hi;
  long j2_lo, j2_hi;
  long count() const { return (j1_hi - j1_lo + 1) * (j2_hi - j2_lo + 1); }
};
PatchRange patch_range(const EpsilonConstants& eps);

/// The patch containing (r, theta) (almost every point lies in exactly one).
PatchIndex patch_at(const EpsilonConstants& eps, double r, double theta);

/// sum_j chi_j(r, theta) over all patches near (r, theta).
double chi_partition_sum(const EpsilonConstants& eps, double r, double theta);

}  // namespace osclab

#endif
