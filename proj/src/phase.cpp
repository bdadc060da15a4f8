#include "osclab/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace osclab {

PhaseDerivs phase_derivs_unchecked(const OperatorParams& params, const RadialProfile& profile,
                                   const Frequency& xi, int l, double r, double theta) {
  const double beta = params.beta;
  const double sl = std::ldexp(1.0, -l);       // 2^-l
  const double pbl = std::pow(2.0, beta * l);  // 2^(beta l)
  const double xp = xi.xi_prime_norm();
  const double xl = xi.xi_last;
  ProfileDerivs d = profile.eval(sl * r);

  const double ct = std::cos(theta), st = std::sin(theta);
  const double rp = std::pow(r, -beta);

  PhaseDerivs out;
  out.g = sl * xp * r * ct + xl * d.phi + pbl * rp;
  out.g_r = -beta * pbl * rp / r + sl * xp * ct + sl * xl * d.d1;
  out.g_theta = -sl * xp * r * st;
  out.g_rr = beta * (beta + 1.0) * pbl * rp / (r * r) + sl * sl * xl * d.d2;
  out.g_thetatheta = -sl * xp * r * ct;
  out.g_rrr = -beta * (beta + 1.0) * (beta + 2.0) * pbl * rp / (r * r * r) +
              sl * sl * sl * xl * d.d3;
  out.g_rrtheta = 0.0;
  return out;
}

PhaseDerivs phase_and_derivatives(const OperatorParams& params, const RadialProfile& profile,
                                  const Frequency& xi, int l, double r, double theta) {
  require(r >= 0.5 && r <= 2.0, errc::domain_error, "r must lie in [1/2, 2]");
  return phase_derivs_unchecked(params, profile, xi, l, r, theta);
}

namespace {

template <class F>
double sup_abs_sampled(F&& f, double a, double b, int n_samples) {
  n_samples = std::max(n_samples, 64);
  const double log_ratio = std::log(b / a);
  double best = 0.0, best_t = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    double t = double(i) / double(n_samples - 1);
    double v = std::abs(f(a * std::exp(log_ratio * t)));
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  // Golden-section refinement of |f| around the sampled maximum.
  double lo = std::max(0.0, best_t - 1.0 / (n_samples - 1));
  double hi = std::min(1.0, best_t + 1.0 / (n_samples - 1));
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = std::abs(f(a * std::exp(log_ratio * x1)));
  double f2 = std::abs(f(a * std::exp(log_ratio * x2)));
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = std::abs(f(a * std::exp(log_ratio * x2)));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = std::abs(f(a * std::exp(log_ratio * x1)));
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

double sup_abs_phi1(const RadialProfile& profile, double a, double b, int n_samples) {
  return sup_abs_sampled([&](double r) { return profile.eval(r).d1; }, a, b, n_samples);
}

double sup_abs_phi2(const RadialProfile& profile, double a, double b, int n_samples) {
  return sup_abs_sampled([&](double r) { return profile.eval(r).d2; }, a, b, n_samples);
}

double sup_abs_phi3(const RadialProfile& profile, double a, double b, int n_samples) {
  return sup_abs_sampled([&](double r) { return profile.eval(r).d3; }, a, b, n_samples);
}

double lambda_scale(const OperatorParams& params, const RadialProfile& profile,
                    const Frequency& xi, int l, int n_sup_samples) {
  const double a = std::ldexp(1.0, -l - 1), b = std::ldexp(1.0, -l + 1);
  const double sl = std::ldexp(1.0, -l);
  double lam = std::pow(2.0, params.beta * l);
  lam = std::max(lam, sl * xi.xi_prime_norm());
  const double axl = std::abs(xi.xi_last);
  if (axl > 0.0) {
    lam = std::max(lam, axl * sl * sl * sup_abs_phi2(profile, a, b, n_sup_samples));
    lam = std::max(lam, axl * sl * sl * sl * sup_abs_phi3(profile, a, b, n_sup_samples));
  }
  return lam;
}

LemmaReport check_lemma_lower_bound(const OperatorParams& params, const RadialProfile& profile,
                                    const Frequency& xi, int l, const EpsilonConstants& eps,
                                    int n_r, int n_theta) {
  require(n_r >= 2 && n_theta >= 2, errc::invalid_argument, "grid must be at least 2x2");
  LemmaReport rep;
  rep.lambda = lambda_scale(params, profile, xi, l);
  rep.epsilon = eps.epsilon;
  rep.n_r = n_r;
  rep.n_theta = n_theta;
  double floor = eps.epsilon * rep.lambda;
  double min_ratio = std::numeric_limits<double>::infinity();
  double worst_r = 0.5, worst_theta = 0.0;
  for (int i = 0; i < n_r; ++i) {
    double r = 0.5 + 1.5 * double(i) / double(n_r - 1);
    for (int k = 0; k < n_theta; ++k) {
      double theta = pi * double(k) / double(n_theta - 1);
      PhaseDerivs d = phase_derivs_unchecked(params, profile, xi, l, r, theta);
      double m = std::max({std::abs(d.g_r), std::abs(d.g_theta), std::abs(d.g_rr),
                           std::abs(d.g_thetatheta)});
      double ratio = m / floor;
      if (ratio < min_ratio) {
        min_ratio = ratio;
        worst_r = r;
        worst_theta = theta;
      }
    }
  }
  rep.min_ratio = min_ratio;
  rep.worst_r = worst_r;
  rep.worst_theta = worst_theta;
  rep.pass = min_ratio >= 1.0;
  return rep;
}

nlohmann::json LemmaReport::to_json() const {
  return {{"min_ratio", min_ratio},
          {"worst_point", {worst_r, worst_theta}},
          {"lambda", lambda},
          {"epsilon", epsilon},
          {"grid", {n_r, n_theta}},
          {"pass", pass}};
}

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::r_first: return "r1";
    case CaseTag::theta_first: return "theta1";
    case CaseTag::r_second: return "r2";
    case CaseTag::theta_second: return "theta2";
    case CaseTag::trivial_bound: return "trivial";
  }
  return "?";
}

CaseTag classify_patch(const OperatorParams& params, const RadialProfile& profile,
                       const Frequency& xi, int l, PatchIndex j, const EpsilonConstants& eps,
                       int n_check) {
  n_check = std::max(n_check, 2);
  Interval sr = patch_support_r(j, eps);
  Interval st = patch_support_theta(j, eps);
  double r_lo = std::max(sr.lo, 0.5), r_hi = std::min(sr.hi, 2.0);
  double t_lo = std::max(st.lo, 0.0), t_hi = std::min(st.hi, pi);
  require(r_lo <= r_hi && t_lo <= t_hi, errc::invalid_argument,
          "patch does not meet [1/2,2] x [0,pi]");

  double floor = 0.5 * eps.epsilon * lambda_scale(params, profile, xi, l);
  bool ok_r = true, ok_t = true, ok_rr = true, ok_tt = true;
  for (int i = 0; i < n_check && (ok_r || ok_t || ok_rr || ok_tt); ++i) {
    double r = r_lo + (r_hi - r_lo) * double(i) / double(n_check - 1);
    for (int k = 0; k < n_check; ++k) {
      double theta = t_lo + (t_hi - t_lo) * double(k) / double(n_check - 1);
      PhaseDerivs d = phase_derivs_unchecked(params, profile, xi, l, r, theta);
      ok_r = ok_r && std::abs(d.g_r) >= floor;
      ok_t = ok_t && std::abs(d.g_theta) >= floor;
      ok_rr = ok_rr && std::abs(d.g_rr) >= floor;
      ok_tt = ok_tt && std::abs(d.g_thetatheta) >= floor;
    }
  }
  if (ok_r) return CaseTag::r_first;
  if (ok_t) return CaseTag::theta_first;
  if (ok_rr) return CaseTag::r_second;
  if (ok_tt) return CaseTag::theta_second;
  return CaseTag::trivial_bound;
}

}  // namespace osclab
