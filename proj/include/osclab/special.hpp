#ifndef OSCLAB_SPECIAL_HPP
#define OSCLAB_SPECIAL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "osclab/common.hpp"

namespace osclab {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computed once per order via Newton iteration on the Legendre polynomial,
/// accurate to machine precision. Cached; thread-safe.
const GaussRule& gauss_legendre(int n);

/// J_0..J_kmax at z >= 0 in one pass (power series / downward recurrence /
/// large-argument expansion). Relative-or-absolute accuracy ~1e-12 against
/// the C++17 special functions, at a fraction of their cost.
void bessel_jn_array(int kmax, double z, double* out);

/// Spherical Bessel j_0..j_kmax(z) for real z (any sign, via parity).
void sph_bessel_array(int kmax, double z, double* out);

/// Legendre polynomials P_0..P_kmax(x).
void legendre_array(int kmax, double x, double* out);

/// Pairwise (tree) summation in index order; deterministic and accurate.
cplx tree_sum(std::span<const cplx> values);
double tree_sum(std::span<const double> values);

}  // namespace osclab

#endif
