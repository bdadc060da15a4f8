#ifndef OSCLAB_GRIDOP_HPP
#define OSCLAB_GRIDOP_HPP

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "osclab/multiplier.hpp"

namespace osclab {

/// Complex samples on the periodic box [-L/2, L/2)^3, row-major in the index
/// order (i1, i2, i3). Discrete frequencies are integer multiples of 1/L.
class GridFunction {
 public:
  GridFunction(std::array<long, 3> dims, double box_length);

  const std::array<long, 3>& dims() const { return dims_; }
  double box_length() const { return box_; }
  std::vector<cplx>& samples() { return data_; }
  const std::vector<cplx>& samples() const { return data_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(long i1, long i2, long i3) const {
    return (std::size_t(i1) * dims_[1] + i2) * dims_[2] + i3;
  }
  double spacing(int axis) const { return box_ / double(dims_[axis]); }
  double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
  /// Sample coordinate along one axis.
  double coord(int axis, long i) const { return -0.5 * box_ + spacing(axis) * double(i); }
  /// Signed integer frequency index of DFT bin i along one axis.
  long freq_index(int axis, long i) const { return (i <= dims_[axis] / 2 - 1) ? i : i - dims_[axis]; }
  /// Physical frequency of DFT bin i along one axis.
  double freq(int axis, long i) const { return double(freq_index(axis, i)) / box_; }

  /// Fill from a closed-form function of position.
  void fill(const std::function<cplx(double, double, double)>& f);

 private:
  std::array<long, 3> dims_;
  double box_;
  std::vector<cplx> data_;
};

/// f(x) = e^{-pi |x - center|^2 / width^2} e^{2 pi i carrier . x}.
GridFunction modulated_gaussian(std::array<long, 3> dims, double box_length, double width,
                                std::array<double, 3> carrier, std::array<double, 3> center = {0, 0, 0});

/// Unnormalized forward / inverse DFT of the sample array (FFTW backend).
void dft3(const GridFunction& in, std::vector<cplx>& out, int sign);

/// Riemann-sum L^p norm, p in [1, 16].
double lp_norm(const GridFunction& f, double p);

/// Sobolev norm: L^2 norm of ((1 + |xi|^2)^(s/2) fhat)^check on the lattice,
/// evaluated by discrete Parseval. |s| <= 4. s = 0 reduces to lp_norm(f, 2).
double sobolev_norm(const GridFunction& f, double s);

/// Inner product <f, g> = sum f conj(g) * cell volume.
cplx inner_product(const GridFunction& f, const GridFunction& g);

/// Multiplier values over the frequency lattice of one grid, for the dyadic
/// window [l_min, l_max] (the window sum of m_l at every lattice frequency).
struct MultiplierTable {
  std::array<long, 3> dims;
  double box_length = 0;
  int l_min = 0, l_max = 0;
  double tol = 0;
  std::string content_hash;  // 64 hex chars
  std::vector<cplx> values;  // DFT-bin row-major order
  double max_abs = 0;
};

struct TableConfig {
  int l_min = -2;
  int l_max = 2;
  MlOptions ml;
  int threads = 1;
  /// Optional cache file; loaded when present and matching, else written.
  std::string cache_path;
};

std::shared_ptr<const MultiplierTable> build_multiplier_table(
    const OperatorParams& params, const RadialProfile& profile, const KernelOmega& omega,
    std::array<long, 3> dims, double box_length, const TableConfig& cfg);

/// Binary cache round-trip ("OSCM" header + little-endian f64 re/im pairs).
void save_multiplier_table(const MultiplierTable& table, const std::string& path);
std::shared_ptr<MultiplierTable> load_multiplier_table(const std::string& path);

struct SpectralDiagnostics {
  double leakage = 0;  // energy fraction of fhat in the outer eighth of each axis
};

/// R f = inverse DFT of (table value x fhat); the discrete realization of the
/// operator on the periodic grid.
GridFunction apply_spectral(const GridFunction& f, const MultiplierTable& table,
                            SpectralDiagnostics* diag = nullptr);

/// Adjoint: multiplies by the conjugate table; <R f, g> = <f, R* g> exactly.
GridFunction adjoint_apply_spectral(const GridFunction& g, const MultiplierTable& table,
                                    SpectralDiagnostics* diag = nullptr);

/// Dyadic window whose taper W(r) = sum_{l in window} eta(2^l r) equals 1 on
/// [r_inner, r_outer].
std::pair<int, int> window_for_truncation(double r_inner, double r_outer);

/// Truncated operator applied directly in physical space by polar quadrature
/// of the kernel against the closed-form f, at arbitrary probe points. The
/// radial taper matches the dyadic window so the spectral and direct paths
/// realize the same truncated operator.
std::vector<cplx> apply_direct(const std::function<cplx(double, double, double)>& f,
                               const std::vector<std::array<double, 3>>& points,
                               const OperatorParams& params, const RadialProfile& profile,
                               const KernelOmega& omega, int l_lo, int l_hi,
                               int quad_density = 32, long panel_cap = 1l << 22);

/// Spectral application without a precomputed table: multiplier values are
/// evaluated only at bins where |fhat| >= rel_threshold x max |fhat| (the
/// rest of the spectrum is treated as zero). Suited to sharply band-limited
/// inputs on grids too large for a full table.
GridFunction apply_spectral_masked(const GridFunction& f, const OperatorParams& params,
                                   const RadialProfile& profile, const KernelOmega& omega,
                                   int l_lo, int l_hi, const MlOptions& ml,
                                   double rel_threshold = 1e-7, int threads = 1,
                                   double* max_abs_m = nullptr);

/// ||R f_k||_{L^2_s} / ||f_k||_{L^2} across a carrier ladder of modulated
/// Gaussians. Multiplier values are computed only where |fhat| exceeds
/// rel_threshold x max |fhat| (the remainder of the spectrum is negligible
/// by construction).
struct SmoothingLadderResult {
  std::vector<double> carriers;
  std::vector<double> ratios;
  bool pass = false;  // max ratio <= slack x ratio at the first carrier
};

SmoothingLadderResult sobolev_smoothing_check(const OperatorParams& params,
                                              const RadialProfile& profile,
                                              const KernelOmega& omega,
                                              std::array<long, 3> dims, double box_length,
                                              double width, const std::vector<double>& carriers,
                                              std::array<double, 3> carrier_dir, double s,
                                              const MlOptions& ml, double rel_threshold = 1e-4,
                                              double slack = 10.0, int threads = 1);

}  // namespace osclab

#endif
