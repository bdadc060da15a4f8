#include "osclab/osclab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "osclab/bumps.hpp"
#include "osclab/kernel.hpp"
#include "osclab/multiplier.hpp"
#include "osclab/phase.hpp"
#include "osclab/profiles.hpp"
#include "osclab/studies.hpp"

namespace {

thread_local std::string g_last_error;

osclab_status map_code(osclab::errc code) {
  using osclab::errc;
  switch (code) {
    case errc::ok: return OSCLAB_OK;
    case errc::invalid_argument: return OSCLAB_INVALID_ARGUMENT;
    case errc::non_positive_radius: return OSCLAB_NON_POSITIVE_RADIUS;
    case errc::domain_error: return OSCLAB_DOMAIN_ERROR;
    case errc::sign_violation: return OSCLAB_SIGN_VIOLATION;
    case errc::degenerate_derivative: return OSCLAB_DEGENERATE_DERIVATIVE;
    case errc::zero_frequency: return OSCLAB_ZERO_FREQUENCY;
    case errc::budget_exceeded: return OSCLAB_BUDGET_EXCEEDED;
    case errc::nonconvergent_tail: return OSCLAB_NONCONVERGENT_TAIL;
    case errc::parse_error: return OSCLAB_PARSE_ERROR;
    case errc::io_error: return OSCLAB_IO_ERROR;
    case errc::internal_error: return OSCLAB_INTERNAL_ERROR;
  }
  return OSCLAB_INTERNAL_ERROR;
}

template <class Fn>
osclab_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return OSCLAB_OK;
  } catch (const osclab::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OSCLAB_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return OSCLAB_INTERNAL_ERROR;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_json(const char* text, const char* what) {
  nlohmann::json j = nlohmann::json::parse(text ? text : "", nullptr, false);
  osclab::require(!j.is_discarded(), osclab::errc::parse_error,
                  std::string(what) + " is not valid JSON");
  return j;
}

osclab::Frequency make_xi(double xi1, double xi2, double xi_last) {
  osclab::Frequency xi;
  xi.xi_prime = {xi1, xi2};
  xi.xi_last = xi_last;
  return xi;
}

osclab::EpsilonConstants make_eps(double epsilon, double epsilon1, double epsilon2, double k2,
                                  double k3, double beta) {
  return {epsilon, epsilon1, epsilon2, k2, k3, beta};
}

}  // namespace

struct osclab_profile {
  osclab::RadialProfile value;
};

struct osclab_kernel {
  osclab::KernelOmega value;
};

extern "C" {

const char* osclab_version(void) { return "0.1.0"; }

const char* osclab_last_error(void) { return g_last_error.c_str(); }

void osclab_string_free(char* s) { std::free(s); }

osclab_status osclab_profile_create(const char* json_spec, osclab_profile** out) {
  return guarded([&] {
    osclab::require(out != nullptr, osclab::errc::invalid_argument, "null output pointer");
    auto p = osclab::RadialProfile::from_json(parse_json(json_spec, "profile spec"));
    *out = new osclab_profile{std::move(p)};
  });
}

void osclab_profile_free(osclab_profile* p) { delete p; }

osclab_status osclab_profile_eval(const osclab_profile* p, double r, double out4[4]) {
  return guarded([&] {
    osclab::require(p && out4, osclab::errc::invalid_argument, "null pointer");
    osclab::ProfileDerivs d = p->value.eval(r);
    out4[0] = d.phi;
    out4[1] = d.d1;
    out4[2] = d.d2;
    out4[3] = d.d3;
  });
}

osclab_status osclab_profile_curvature(const osclab_profile* p, double r, double* out) {
  return guarded([&] {
    osclab::require(p && out, osclab::errc::invalid_argument, "null pointer");
    *out = p->value.gaussian_curvature(r);
  });
}

osclab_status osclab_profile_certify(const osclab_profile* p, double r_min, double r_max,
                                     long n_samples, char** json_out) {
  return guarded([&] {
    osclab::require(p && json_out, osclab::errc::invalid_argument, "null pointer");
    auto cert = osclab::certify_admissibility(p->value, r_min, r_max, n_samples);
    *json_out = dup_string(cert.to_json().dump());
  });
}

osclab_status osclab_kernel_create(const char* json_spec, osclab_kernel** out) {
  return guarded([&] {
    osclab::require(out != nullptr, osclab::errc::invalid_argument, "null output pointer");
    auto k = osclab::KernelOmega::from_json(parse_json(json_spec, "kernel spec"));
    *out = new osclab_kernel{std::move(k)};
  });
}

void osclab_kernel_free(osclab_kernel* k) { delete k; }

osclab_status osclab_kernel_eval(const osclab_kernel* k, double u, double* out) {
  return guarded([&] {
    osclab::require(k && out, osclab::errc::invalid_argument, "null pointer");
    *out = k->value.eval(u);
  });
}

osclab_status osclab_kernel_mean(const osclab_kernel* k, int n_quad, double* out) {
  return guarded([&] {
    osclab::require(k && out, osclab::errc::invalid_argument, "null pointer");
    *out = k->value.mean(n_quad);
  });
}

osclab_status osclab_kernel_eval_rotated(const osclab_kernel* k, double xi1, double xi2,
                                         double theta, int sigma, double* out) {
  return guarded([&] {
    osclab::require(k && out, osclab::errc::invalid_argument, "null pointer");
    osclab::require(sigma == 1 || sigma == -1, osclab::errc::invalid_argument,
                    "sigma must be +1 or -1");
    *out = k->value.eval_rotated({xi1, xi2}, theta, sigma);
  });
}

osclab_status osclab_zeta(double x, double* out) {
  return guarded([&] { *out = osclab::zeta(x); });
}

osclab_status osclab_eta(double r, double* out) {
  return guarded([&] { *out = osclab::eta(r); });
}

osclab_status osclab_kappa(double x, double* out) {
  return guarded([&] { *out = osclab::kappa(x); });
}

osclab_status osclab_epsilons(double k2, double k3, double beta, double safety, double out3[3]) {
  return guarded([&] {
    auto eps = osclab::compute_epsilons(k2, k3, beta, safety);
    out3[0] = eps.epsilon;
    out3[1] = eps.epsilon1;
    out3[2] = eps.epsilon2;
  });
}

osclab_status osclab_chi(double epsilon1, double epsilon2, long j1, long j2, double r,
                         double theta, double* out) {
  return guarded([&] {
    osclab::EpsilonConstants eps = make_eps(0.0, epsilon1, epsilon2, 0.0, 0.0, 0.0);
    *out = osclab::chi({j1, j2}, eps, r, theta);
  });
}

osclab_status osclab_phase_derivatives(const osclab_profile* p, int n, double alpha, double beta,
                                       double xi1, double xi2, double xi_last, int l, double r,
                                       double theta, double out7[7]) {
  return guarded([&] {
    osclab::require(p && out7, osclab::errc::invalid_argument, "null pointer");
    osclab::OperatorParams params(n, alpha, beta);
    osclab::PhaseDerivs d = osclab::phase_and_derivatives(params, p->value,
                                                          make_xi(xi1, xi2, xi_last), l, r, theta);
    out7[0] = d.g;
    out7[1] = d.g_r;
    out7[2] = d.g_theta;
    out7[3] = d.g_rr;
    out7[4] = d.g_thetatheta;
    out7[5] = d.g_rrr;
    out7[6] = d.g_rrtheta;
  });
}

osclab_status osclab_lambda_scale(const osclab_profile* p, int n, double alpha, double beta,
                                  double xi1, double xi2, double xi_last, int l,
                                  int n_sup_samples, double* out) {
  return guarded([&] {
    osclab::require(p && out, osclab::errc::invalid_argument, "null pointer");
    osclab::OperatorParams params(n, alpha, beta);
    *out = osclab::lambda_scale(params, p->value, make_xi(xi1, xi2, xi_last), l, n_sup_samples);
  });
}

osclab_status osclab_lemma_check(const osclab_profile* p, int n, double alpha, double beta,
                                 double xi1, double xi2, double xi_last, int l, double epsilon,
                                 double epsilon1, double epsilon2, double k2, double k3, int n_r,
                                 int n_theta, char** json_out) {
  return guarded([&] {
    osclab::require(p && json_out, osclab::errc::invalid_argument, "null pointer");
    osclab::OperatorParams params(n, alpha, beta);
    auto rep = osclab::check_lemma_lower_bound(params, p->value, make_xi(xi1, xi2, xi_last), l,
                                               make_eps(epsilon, epsilon1, epsilon2, k2, k3, beta),
                                               n_r, n_theta);
    *json_out = dup_string(rep.to_json().dump());
  });
}

osclab_status osclab_classify_patch(const osclab_profile* p, int n, double alpha, double beta,
                                    double xi1, double xi2, double xi_last, int l, long j1,
                                    long j2, double epsilon, double epsilon1, double epsilon2,
                                    double k2, double k3, int n_check, int* tag_out) {
  return guarded([&] {
    osclab::require(p && tag_out, osclab::errc::invalid_argument, "null pointer");
    osclab::OperatorParams params(n, alpha, beta);
    osclab::CaseTag tag = osclab::classify_patch(
        params, p->value, make_xi(xi1, xi2, xi_last), l, {j1, j2},
        make_eps(epsilon, epsilon1, epsilon2, k2, k3, beta), n_check);
    *tag_out = int(tag);
  });
}

osclab_status osclab_ml(const osclab_profile* p, const osclab_kernel* k, int n, double alpha,
                        double beta, double xi1, double xi2, double xi_last, int l, double tol,
                        double out2[2]) {
  return guarded([&] {
    osclab::require(p && k && out2, osclab::errc::invalid_argument, "null pointer");
    osclab::OperatorParams params(n, alpha, beta);
    osclab::MlOptions opts;
    opts.tol = tol;
    osclab::MlEval e = osclab::m_l(params, p->value, k->value, make_xi(xi1, xi2, xi_last), l, opts);
    out2[0] = e.value.real();
    out2[1] = e.value.imag();
  });
}

osclab_status osclab_m_total(const osclab_profile* p, const osclab_kernel* k, int n, double alpha,
                             double beta, double xi1, double xi2, double xi_last, int l_min,
                             int l_max, double tol, double skip_tol, double out3[3]) {
  return guarded([&] {
    osclab::require(p && k && out3, osclab::errc::invalid_argument, "null pointer");
    osclab::OperatorParams params(n, alpha, beta);
    osclab::MlOptions opts;
    opts.tol = tol;
    opts.skip_tol = skip_tol;
    osclab::MTotalResult r = osclab::m_total(params, p->value, k->value,
                                             make_xi(xi1, xi2, xi_last), l_min, l_max, opts);
    out3[0] = r.value.real();
    out3[1] = r.value.imag();
    out3[2] = r.tail_bound;
  });
}

osclab_status osclab_run_command(const char* command, const char* config_json, int* exit_code,
                                 char** summary_out) {
  return guarded([&] {
    osclab::require(command && exit_code, osclab::errc::invalid_argument, "null pointer");
    nlohmann::json user = nlohmann::json::object();
    if (config_json && config_json[0] != '\0') user = parse_json(config_json, "run config");
    osclab::RunConfig cfg = osclab::RunConfig::from_json(user);
    osclab::StudyResult res = osclab::run_command(command, cfg);
    *exit_code = res.exit_code;
    if (summary_out) *summary_out = dup_string(res.summary.dump());
  });
}

}  // extern "C"
