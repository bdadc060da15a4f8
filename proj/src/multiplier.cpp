#include "osclab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace osclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

cplx minus_i_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

cplx i_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// sup |eta(r) r^(-a-1)| and sup |d/dr (eta(r) r^(-a-1))| over [1/2, 2],
/// sampled once per alpha with a safety factor; used only in skip bounds.
struct AmplitudeBounds {
  double u0;
  double u1;
};

AmplitudeBounds radial_amplitude_bounds(double alpha) {
  static std::mutex mtx;
  static std::map<double, AmplitudeBounds> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(alpha);
  if (it != cache.end()) return it->second;
  auto u = [alpha](double r) { return eta(r) * std::pow(r, -alpha - 1.0); };
  double u0 = 0.0, u1 = 0.0;
  const int n = 4096;
  const double h = 1e-6;
  for (int i = 0; i <= n; ++i) {
    double r = 0.5 + 1.5 * double(i) / n;
    u0 = std::max(u0, std::abs(u(r)));
    double lo = std::max(r - h, 0.5 + 1e-12), hi = std::min(r + h, 2.0 - 1e-12);
    u1 = std::max(u1, std::abs(u(hi) - u(lo)) / (hi - lo));
  }
  AmplitudeBounds b{1.05 * u0, 1.3 * u1};
  cache.emplace(alpha, b);
  return b;
}

/// Geometry of the theta-reduced radial phase
///   G(r) = xi_last phi(2^-l r) + 2^(beta l) r^-beta on [1/2, 2].
struct RadialPhase {
  const RadialProfile* profile;
  double beta;
  double sl;   // 2^-l
  double pbl;  // 2^(beta l)
  double xl;   // xi_last

  double value(double r) const {
    double p = (xl != 0.0) ? profile->eval(sl * r).phi : 0.0;
    return xl * p + pbl * std::pow(r, -beta);
  }
  double deriv(double r) const {
    double p1 = (xl != 0.0) ? profile->eval(sl * r).d1 : 0.0;
    return xl * sl * p1 - beta * pbl * std::pow(r, -beta - 1.0);
  }
};

struct PhaseBounds {
  double sup_g1;      // analytic bound on sup |G'|
  double min_abs_g1;  // grid minimum of |G'| minus a Lipschitz slack; 0 if sign changes
  double sup_g2;      // analytic bound on sup |G''|
  double tv_log_g1;   // total variation of log |G'| along the grid
};

PhaseBounds radial_phase_bounds(const RadialPhase& G, const RadialProfile& profile,
                                const OperatorParams& params, int n_sup) {
  PhaseBounds b;
  double mphi1 = 0.0, mphi2 = 0.0;
  if (G.xl != 0.0) {
    mphi1 = sup_abs_phi1(profile, 0.5 * G.sl, 2.0 * G.sl, n_sup);
    mphi2 = sup_abs_phi2(profile, 0.5 * G.sl, 2.0 * G.sl, n_sup);
  }
  const double beta = params.beta;
  double beta_term1 = beta * G.pbl * std::pow(2.0, beta + 1.0);
  double beta_term2 = beta * (beta + 1.0) * G.pbl * std::pow(2.0, beta + 2.0);
  b.sup_g1 = std::abs(G.xl) * G.sl * mphi1 + beta_term1;
  b.sup_g2 = std::abs(G.xl) * G.sl * G.sl * mphi2 + beta_term2;

  const int n = 129;
  const double dr = 1.5 / (n - 1);
  double gmin = kInf, gmax = -kInf, amin = kInf, tv = 0.0, prev_log = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = G.deriv(0.5 + dr * i);
    gmin = std::min(gmin, g);
    gmax = std::max(gmax, g);
    amin = std::min(amin, std::abs(g));
    double lg = std::log(std::max(std::abs(g), 1e-300));
    if (i > 0) tv += std::abs(lg - prev_log);
    prev_log = lg;
  }
  b.tv_log_g1 = tv;
  if (gmin < 0.0 && gmax > 0.0) {
    b.min_abs_g1 = 0.0;
  } else {
    b.min_abs_g1 = std::max(0.0, amin - b.sup_g2 * dr);
  }
  return b;
}

/// First-order integration-by-parts bound for the reduced piece when G is
/// monotone with margin. All quantities are in cycle units.
double bound_monotone_ibp(double alpha, int l, double coeff_sum, double A,
                          const PhaseBounds& pb, const AmplitudeBounds& ab) {
  double M = pb.min_abs_g1;
  if (M <= 0.0) return kInf;
  double jb = (A > 1.0) ? std::min(1.0, 1.15 * std::sqrt(2.0 / (pi * pi * A))) : 1.0;
  double jdb = std::min(0.6, 1.5 / std::sqrt(std::max(1.0, pi * A)));
  double amp0 = two_pi * coeff_sum * jb * ab.u0;
  double amp1 = two_pi * coeff_sum * (two_pi * A * jdb * ab.u0 + jb * ab.u1);
  double bound = std::pow(2.0, alpha * l) * (1.5 / two_pi) *
                 (amp1 / M + amp0 * pb.sup_g2 / (M * M));
  return 2.0 * bound;  // slop
}

/// Integration-by-parts bound splitting J_k into its two large-argument
/// half-waves; applies when the Bessel oscillation dominates the phase.
double bound_bessel_halfwaves(double alpha, int l, const std::vector<double>& coeffs, double A,
                              int kmax, const PhaseBounds& pb, const AmplitudeBounds& ab) {
  double zmin = pi * A;  // smallest Bessel argument 2 pi A r at r = 1/2
  double mu_max = 4.0 * double(kmax) * double(kmax);
  if (zmin < std::max(60.0, 3.0 * mu_max)) return kInf;
  if (A < 2.0 * pb.sup_g1) return kInf;
  double m_rad = two_pi * (A - pb.sup_g1);  // min |Phi'| for both half-waves
  double hb = 0.625 * std::sqrt(2.0 / (pi * zmin));
  double hd = hb * (1.0 + mu_max * mu_max / (16.0 * zmin));
  double per_halfwave =
      (1.5 / m_rad) * (hd * ab.u0 + hb * ab.u1 + hb * ab.u0 * two_pi * pb.sup_g2 / m_rad);
  double rem = (mu_max * mu_max * mu_max * mu_max / (24.0 * std::pow(8.0 * zmin, 4)) +
                mu_max * mu_max * mu_max / (6.0 * std::pow(8.0 * zmin, 3))) *
               std::sqrt(2.0 / (pi * zmin));
  double coeff_sum = 0.0;
  for (double c : coeffs) coeff_sum += std::abs(c);
  double bound = std::pow(2.0, alpha * l) * two_pi * coeff_sum *
                 (2.0 * per_halfwave + 1.5 * rem * ab.u0);
  return 2.0 * bound;  // slop
}

/// Linear-phase panels: substitute s = G(r) so the oscillation is exactly
/// e^{-2 pi i s}, interpolate the slow factor w(s) = amp(r(s))/G'(r(s)) in a
/// Legendre basis per panel, and integrate against the exact moments
/// int P_k(tau) e^{iZ tau} dtau = 2 i^k j_k(Z).
template <class Amp>
class LinearPhasePanels {
 public:
  LinearPhasePanels(const RadialPhase& G, Amp& amp, double tol, long panel_cap)
      : G_(G), amp_(amp), tol_(tol), cap_(panel_cap) {
    const GaussRule& rule = gauss_legendre(16);
    for (int k = 0; k < 16; ++k) {
      legendre_array(15, rule.nodes[k], pk_.data() + 16 * k);  // pk_[16k + j] = P_j(node k)
    }
  }

  cplx run(long n_base) {
    n_base = std::max<long>(n_base, 1);
    double h = 1.5 / double(n_base);
    for (long i = 0; i < n_base; ++i)
      process(0.5 + h * double(i), (i + 1 == n_base) ? 2.0 : 0.5 + h * double(i + 1),
              tol_ / double(n_base), 0);
    return tree_sum(std::span<const cplx>(values_));
  }

  long panels() const { return panels_; }
  double error() const { return err_; }

 private:
  cplx gl16_r(double a, double b) {
    const GaussRule& rule = gauss_legendre(16);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx s = 0.0;
    for (int i = 0; i < 16; ++i) {
      double r = mid + half * rule.nodes[i];
      s += rule.weights[i] * std::exp(cplx(0.0, -two_pi * G_.value(r))) * amp_(r);
    }
    return half * s;
  }

  double invert(double s_target, double lo, double hi, double glo, double ghi) const {
    // Newton with a bisection bracket; G is strictly monotone on [lo, hi].
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
      double g = G_.value(r);
      if ((g - s_target) * (ghi - glo) > 0.0)
        hi = r;
      else
        lo = r;
      double d = G_.deriv(r);
      double step = (g - s_target) / d;
      double rn = r - step;
      if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
      if (std::abs(rn - r) < 1e-15 * std::max(1.0, std::abs(r))) return rn;
      r = rn;
    }
    return r;
  }

  void process(double ra, double rb, double budget, int depth) {
    if (++panels_ > cap_) fail(errc::budget_exceeded, "linear-phase panels exceeded the budget");
    double sa = G_.value(ra), sb = G_.value(rb);
    double ds = sb - sa;
    if (std::abs(ds) * two_pi < 60.0 || depth >= 40) {
      // Few oscillations: plain two-level Gauss on this panel.
      double m = 0.5 * (ra + rb);
      cplx coarse = gl16_r(ra, rb);
      cplx fine = gl16_r(ra, m) + gl16_r(m, rb);
      double err = std::abs(coarse - fine);
      if (err <= budget || depth >= 40 || (rb - ra) < 1e-13) {
        values_.push_back(fine);
        err_ += err;
        return;
      }
      process(ra, m, 0.5 * budget, depth + 1);
      process(m, rb, 0.5 * budget, depth + 1);
      return;
    }

    const GaussRule& rule = gauss_legendre(16);
    double s_mid = 0.5 * (sa + sb), s_half = 0.5 * ds;
    std::array<double, 16> w_re, w_im;
    for (int i = 0; i < 16; ++i) {
      double s = s_mid + s_half * rule.nodes[i];
      double r = invert(s, ra, rb, sa, sb);
      cplx w = amp_(r) / G_.deriv(r);
      w_re[i] = w.real();
      w_im[i] = w.imag();
    }
    // Legendre coefficients of the degree-15 expansion of w(tau).
    std::array<cplx, 16> what;
    for (int j = 0; j < 16; ++j) {
      double cr = 0.0, ci = 0.0;
      for (int i = 0; i < 16; ++i) {
        double p = rule.weights[i] * pk_[16 * i + j];
        cr += p * w_re[i];
        ci += p * w_im[i];
      }
      what[j] = cplx(cr, ci) * (0.5 * (2.0 * j + 1.0));
    }
    double tail = (std::abs(what[14]) + std::abs(what[15])) * std::abs(ds) * 3.0;
    if (tail > budget && depth < 40) {
      double m = 0.5 * (ra + rb);
      process(ra, m, 0.5 * budget, depth + 1);
      process(m, rb, 0.5 * budget, depth + 1);
      return;
    }
    double Z = -pi * ds;
    std::array<double, 16> jv;
    sph_bessel_array(15, Z, jv.data());
    cplx acc = 0.0;
    for (int j = 0; j < 16; ++j) acc += what[j] * (2.0 * jv[j]) * i_pow(j);
    cplx val = 0.5 * ds * std::exp(cplx(0.0, -two_pi * s_mid)) * acc;
    values_.push_back(val);
    err_ += tail;
  }

  const RadialPhase& G_;
  Amp& amp_;
  double tol_;
  long cap_;
  std::array<double, 16 * 16> pk_;
  std::vector<cplx> values_;
  double err_ = 0.0;
  long panels_ = 0;
};

double surface_area_sn(int dim) {
  // |S^dim|, dim >= 0.
  return 2.0 * std::pow(pi, 0.5 * (dim + 1)) / std::tgamma(0.5 * (dim + 1));
}

/// Direct 2D quadrature of the polar form.
cplx polar2d_value(const OperatorParams& params, const RadialProfile& profile,
                   const KernelOmega& omega, const Frequency& xi, int l, double tol_inner,
                   const QuadratureLimits& lim, long* panels_out) {
  const double sl = std::ldexp(1.0, -l);
  const double pbl = std::pow(2.0, params.beta * l);
  const double xp = xi.xi_prime_norm();
  const double xl = xi.xi_last;
  const double A = sl * xp;
  const double nu = (xp > 0.0) ? xi.angle() : 0.0;
  const double beta = params.beta;
  const double alpha = params.alpha;

  double mphi1 = (xl != 0.0) ? sup_abs_phi1(profile, 0.5 * sl, 2.0 * sl, 512) : 0.0;
  double sup_gr = std::abs(xl) * sl * mphi1 + beta * pbl * std::pow(2.0, beta + 1.0) + A;
  double rad_r = two_pi * sup_gr * 1.5;
  double rad_t = two_pi * (2.0 * A) * pi;

  auto g_of = [&](double r, double theta) {
    double p = (xl != 0.0) ? profile.eval(sl * r).phi : 0.0;
    return A * r * std::cos(theta) + xl * p + pbl * std::pow(r, -beta);
  };

  long panels = 0;
  cplx total = 0.0;
  if (params.n == 2) {
    for (int sigma : {+1, -1}) {
      auto f = [&](double r, double theta) -> cplx {
        return std::exp(cplx(0.0, -two_pi * g_of(r, theta))) * omega.eval(nu + sigma * theta) *
               eta(r) * std::pow(r, -alpha - 1.0);
      };
      QuadratureResult q = integrate_panels_2d(f, 0.5, 2.0, 0.0, pi, rad_r, rad_t,
                                               0.5 * tol_inner, lim);
      total += q.value;
      panels += q.panels_used;
    }
  } else {
    double sphere = surface_area_sn(params.n - 2);
    int pw = params.n - 2;
    auto f = [&](double r, double theta) -> cplx {
      return std::exp(cplx(0.0, -two_pi * g_of(r, theta))) * omega.eval(theta) *
             std::pow(std::sin(theta), pw) * eta(r) * std::pow(r, -alpha - 1.0);
    };
    QuadratureResult q = integrate_panels_2d(f, 0.5, 2.0, 0.0, pi, rad_r, rad_t,
                                             tol_inner / sphere, lim);
    total = sphere * q.value;
    panels = q.panels_used;
  }
  if (panels_out) *panels_out = panels;
  return total;
}

}  // namespace

double m_l_skip_bound(const OperatorParams& params, const RadialProfile& profile,
                      const KernelOmega& omega, const Frequency& xi, int l, int n_sup_samples) {
  if (params.n != 2) return kInf;
  double xp = xi.xi_prime_norm();
  if (xp == 0.0) return 0.0;  // piece vanishes exactly
  RadialPhase G{&profile, params.beta, std::ldexp(1.0, -l), std::pow(2.0, params.beta * l),
                xi.xi_last};
  PhaseBounds pb = radial_phase_bounds(G, profile, params, n_sup_samples);
  AmplitudeBounds ab = radial_amplitude_bounds(params.alpha);
  double A = G.sl * xp;
  std::vector<double> coeffs = omega.axis_cosine_coeffs(xi.angle());
  double coeff_sum = 0.0;
  for (double c : coeffs) coeff_sum += std::abs(c);
  double b1 = bound_monotone_ibp(params.alpha, l, coeff_sum, A, pb, ab);
  double b2 = bound_bessel_halfwaves(params.alpha, l, coeffs, A, omega.max_order(), pb, ab);
  return std::min(b1, b2);
}

MlEval m_l(const OperatorParams& params, const RadialProfile& profile, const KernelOmega& omega,
           const Frequency& xi, int l, const MlOptions& opts) {
  require(opts.tol > 0.0, errc::invalid_argument, "tolerance must be positive");
  MlEval out;
  out.lambda = lambda_scale(params, profile, xi, l, opts.n_sup_samples);

  const double alpha = params.alpha;
  const double prefactor = std::pow(2.0, alpha * l);
  const double tol_inner = opts.tol / prefactor;
  QuadratureLimits lim{opts.panel_cap};

  if (params.n != 2 || opts.method == MlOptions::Method::polar2d) {
    long panels = 0;
    out.value = prefactor * polar2d_value(params, profile, omega, xi, l, tol_inner, lim, &panels);
    out.panels = panels;
    out.method = "polar2d";
    return out;
  }

  const double xp = xi.xi_prime_norm();
  if (xp == 0.0) {
    // The angular integral of the mean-zero kernel vanishes for every r.
    out.method = "zero";
    return out;
  }

  RadialPhase G{&profile, params.beta, std::ldexp(1.0, -l), std::pow(2.0, params.beta * l),
                xi.xi_last};
  const double A = G.sl * xp;
  const double nu = xi.angle();
  std::vector<double> coeffs = omega.axis_cosine_coeffs(nu);
  const int kmax = omega.max_order();
  PhaseBounds pb = radial_phase_bounds(G, profile, params, 512);

  if (opts.skip_tol > 0.0 && opts.method == MlOptions::Method::automatic) {
    AmplitudeBounds ab = radial_amplitude_bounds(alpha);
    double coeff_sum = 0.0;
    for (double c : coeffs) coeff_sum += std::abs(c);
    double bound = std::min(bound_monotone_ibp(alpha, l, coeff_sum, A, pb, ab),
                            bound_bessel_halfwaves(alpha, l, coeffs, A, kmax, pb, ab));
    if (bound <= opts.skip_tol) {
      out.skipped = true;
      out.skip_bound = bound;
      out.method = "skip";
      return out;
    }
  }

  // Theta-reduced amplitude: 2 pi sum_k (-i)^k c_k(nu) J_k(2 pi A r) eta(r) r^(-alpha-1).
  std::vector<double> jbuf(kmax + 1, 0.0);
  auto amp = [&](double r) -> cplx {
    bessel_jn_array(kmax, two_pi * A * r, jbuf.data());
    cplx s = 0.0;
    for (int k = 1; k <= kmax; ++k)
      if (coeffs[k] != 0.0) s += minus_i_pow(k) * (coeffs[k] * jbuf[k]);
    return two_pi * s * eta(r) * std::pow(r, -alpha - 1.0);
  };

  double plain_radians = two_pi * (pb.sup_g1 + A) * 1.5;
  long panels_plain = std::max<long>(8, long(std::ceil(plain_radians / 12.0)));

  bool use_linphase;
  switch (opts.method) {
    case MlOptions::Method::plain: use_linphase = false; break;
    case MlOptions::Method::linear_phase:
      require(pb.min_abs_g1 > 0.0, errc::invalid_argument,
              "linear-phase path requires a monotone radial phase");
      use_linphase = true;
      break;
    default: use_linphase = (panels_plain > 600) && (pb.min_abs_g1 > 0.0); break;
  }

  if (use_linphase) {
    long n_base = std::max<long>({24, long(std::ceil(two_pi * A * 1.5 / 6.0)),
                                  std::min<long>(2048, long(std::ceil(1.5 * pb.tv_log_g1)) + 8)});
    LinearPhasePanels<decltype(amp)> engine(G, amp, tol_inner, opts.panel_cap);
    out.value = prefactor * engine.run(n_base);
    out.panels = engine.panels();
    out.method = "linphase";
  } else {
    auto f = [&](double r) -> cplx {
      return std::exp(cplx(0.0, -two_pi * G.value(r))) * amp(r);
    };
    QuadratureResult q = integrate_panels_1d(f, 0.5, 2.0, plain_radians, tol_inner, lim);
    out.value = prefactor * q.value;
    out.panels = q.panels_used;
    out.method = "plain";
  }
  return out;
}

MTotalResult m_total(const OperatorParams& params, const RadialProfile& profile,
                     const KernelOmega& omega, const Frequency& xi, int l_min, int l_max,
                     const MlOptions& opts) {
  require(l_min < 0 && 0 < l_max, errc::invalid_argument,
          "the dyadic window must contain scales on both sides of l = 0");
  MTotalResult res;
  res.l_min = l_min;
  res.l_max = l_max;
  res.pieces.reserve(l_max - l_min + 1);
  std::vector<cplx> values;
  double ratio_max = 0.0;
  const double alpha = params.alpha, beta = params.beta;
  for (int l = l_min; l <= l_max; ++l) {
    MlEval piece = m_l(params, profile, omega, xi, l, opts);
    res.panels += piece.panels;
    double mag = piece.skipped ? piece.skip_bound : std::abs(piece.value);
    res.max_abs_ml = std::max(res.max_abs_ml, std::abs(piece.value));
    double ref = (l >= 0) ? std::pow(2.0, (alpha - 0.5 * beta) * l) : std::pow(2.0, alpha * l);
    ratio_max = std::max(ratio_max, mag / ref);
    if (piece.skipped) res.skipped_bound += piece.skip_bound;
    values.push_back(piece.value);
    res.pieces.push_back(std::move(piece));
  }
  res.value = tree_sum(std::span<const cplx>(values));
  double rpos = std::pow(2.0, alpha - 0.5 * beta);
  double rneg = std::pow(2.0, -alpha);
  res.tail_bound = ratio_max * (std::pow(2.0, (alpha - 0.5 * beta) * (l_max + 1)) / (1.0 - rpos) +
                                std::pow(2.0, alpha * (l_min - 1)) / (1.0 - rneg)) +
                   res.skipped_bound;
  return res;
}

DecayFit decay_fit(const OperatorParams& params, const RadialProfile& profile,
                   const KernelOmega& omega, const Frequency& xi, int l0, int l1,
                   const MlOptions& opts) {
  require(l1 - l0 >= 4, errc::invalid_argument, "decay window needs at least five scales");
  require(l0 >= 1 || l1 <= -1, errc::invalid_argument,
          "decay window must lie entirely in l >= 1 or l <= -1");
  DecayFit fit;
  fit.predicted_slope = (l0 >= 1) ? params.alpha - 0.5 * params.beta : params.alpha;

  double base_ratio = 0.0;
  for (int l = l0; l <= l1; ++l) {
    MlEval piece = m_l(params, profile, omega, xi, l, opts);
    double a = std::abs(piece.value);
    if (a < 1e-30) {
      ++fit.n_excluded;
      continue;
    }
    double ratio = a / std::pow(2.0, fit.predicted_slope * l);
    if (fit.l_values.empty()) base_ratio = ratio;
    fit.max_ratio_excess = std::max(fit.max_ratio_excess, ratio / base_ratio);
    fit.l_values.push_back(l);
    fit.log2_abs_ml.push_back(std::log2(a));
  }
  // Least-squares line log2 |m_l| = slope * l + intercept.
  std::size_t n = fit.l_values.size();
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = fit.l_values[i], y = fit.log2_abs_ml[i];
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double det = n * sxx - sx * sx;
    fit.fitted_slope = (n * sxy - sx * sy) / det;
    fit.fitted_intercept = (sy * sxx - sx * sxy) / det;
  }
  return fit;
}

nlohmann::json DecayFit::to_json() const {
  return {{"l_values", l_values},
          {"log2_abs_ml", log2_abs_ml},
          {"fitted_slope", fitted_slope},
          {"fitted_intercept", fitted_intercept},
          {"predicted_slope", predicted_slope},
          {"max_ratio_excess", max_ratio_excess},
          {"n_excluded", n_excluded}};
}

std::pair<int, int> default_window_for(const Frequency& xi) {
  int l_max = std::max(14, int(std::ceil(std::log2(1.0 + xi.norm()))) + 12);
  return {-3, l_max};
}

EnvelopeResult sobolev_envelope(const OperatorParams& params, const RadialProfile& profile,
                                double k3, const KernelOmega& omega,
                                const std::vector<Frequency>& xi_samples,
                                const MlOptions& opts) {
  EnvelopeResult res;
  res.radial.name = "xi_prime_dominant";
  res.radial.predicted_exponent = (params.alpha - 0.5 * params.beta) / (1.0 + params.beta);
  res.axial.name = "xi_last_dominant";
  res.axial.predicted_exponent = (params.alpha - 0.5 * params.beta) / (params.beta + k3 + 2.0);

  for (const Frequency& xi : xi_samples) {
    auto [l_lo, l_hi] = default_window_for(xi);
    MTotalResult mt = m_total(params, profile, omega, xi, l_lo, l_hi, opts);
    EnvelopeSample s{xi, xi.norm(), std::abs(mt.value), mt.tail_bound};
    if (xi.xi_prime_norm() >= std::abs(xi.xi_last))
      res.radial.samples.push_back(s);
    else
      res.axial.samples.push_back(s);
  }

  for (EnvelopeGroup* g : {&res.radial, &res.axial}) {
    if (g->samples.empty()) continue;
    std::sort(g->samples.begin(), g->samples.end(),
              [](const EnvelopeSample& a, const EnvelopeSample& b) { return a.xi_norm < b.xi_norm; });
    const EnvelopeSample& first = g->samples.front();
    g->bound_constant = first.abs_m / std::pow(first.xi_norm, g->predicted_exponent);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const EnvelopeSample& s : g->samples) {
      double rhs = g->bound_constant * std::pow(s.xi_norm, g->predicted_exponent);
      g->max_ratio_vs_bound = std::max(g->max_ratio_vs_bound, s.abs_m / rhs);
      double x = std::log(s.xi_norm), y = std::log(std::max(s.abs_m, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double n = double(g->samples.size());
    double det = n * sxx - sx * sx;
    if (det > 0) g->fitted_exponent = (n * sxy - sx * sy) / det;
  }
  return res;
}

}  // namespace osclab
