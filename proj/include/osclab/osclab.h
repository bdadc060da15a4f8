/* osclab — oscillatory hypersingular operator laboratory.
 *
 * C89-compatible shared-library interface. All functions return a status
 * code; results travel through out-parameters. Objects are opaque handles
 * created from JSON specs and released with the matching _free call.
 * Strings returned through char** are heap-allocated; release them with
 * osclab_string_free. osclab_last_error() describes the most recent failure
 * on the calling thread.
 */

#ifndef OSCLAB_H
#define OSCLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define OSCLAB_API __declspec(dllexport)
#else
#define OSCLAB_API __attribute__((visibility("default")))
#endif

typedef enum osclab_status {
  OSCLAB_OK = 0,
  OSCLAB_INVALID_ARGUMENT = 1,
  OSCLAB_NON_POSITIVE_RADIUS = 2,
  OSCLAB_DOMAIN_ERROR = 3,
  OSCLAB_SIGN_VIOLATION = 4,
  OSCLAB_DEGENERATE_DERIVATIVE = 5,
  OSCLAB_ZERO_FREQUENCY = 6,
  OSCLAB_BUDGET_EXCEEDED = 7,
  OSCLAB_NONCONVERGENT_TAIL = 8,
  OSCLAB_PARSE_ERROR = 9,
  OSCLAB_IO_ERROR = 10,
  OSCLAB_INTERNAL_ERROR = 11
} osclab_status;

typedef struct osclab_profile osclab_profile;
typedef struct osclab_kernel osclab_kernel;

OSCLAB_API const char* osclab_version(void);

/* Message for the last failing call on this thread ("" if none). */
OSCLAB_API const char* osclab_last_error(void);

OSCLAB_API void osclab_string_free(char* s);

/* ---- radial profiles -------------------------------------------------- */

/* spec examples: {"kind":"monomial","gamma":3.0}
 *                {"kind":"monomial_saturating","gamma1":2.0,"gamma2":1.0}
 *                {"kind":"exp_sinh"}
 *                {"kind":"monomial_sum","terms":[{"a":1.0,"gamma":1.0}]}     */
OSCLAB_API osclab_status osclab_profile_create(const char* json_spec, osclab_profile** out);
OSCLAB_API void osclab_profile_free(osclab_profile* p);

/* out4 = { phi, phi', phi'', phi''' } at r > 0. */
OSCLAB_API osclab_status osclab_profile_eval(const osclab_profile* p, double r, double out4[4]);

/* Gaussian curvature of the rotational graph at radius r. */
OSCLAB_API osclab_status osclab_profile_curvature(const osclab_profile* p, double r, double* out);

/* Admissibility certificate as a JSON string (k1_hat, k2_hat, k3_hat, ...). */
OSCLAB_API osclab_status osclab_profile_certify(const osclab_profile* p, double r_min,
                                                double r_max, long n_samples, char** json_out);

/* ---- sphere kernels ---------------------------------------------------- */

/* spec example: {"harmonics":[{"k":1,"a":1.0,"b":0.0}]} */
OSCLAB_API osclab_status osclab_kernel_create(const char* json_spec, osclab_kernel** out);
OSCLAB_API void osclab_kernel_free(osclab_kernel* k);

OSCLAB_API osclab_status osclab_kernel_eval(const osclab_kernel* k, double u, double* out);

/* Trapezoid mean over the circle (n_quad >= 16). */
OSCLAB_API osclab_status osclab_kernel_mean(const osclab_kernel* k, int n_quad, double* out);

/* Kernel value at the circle point with rotated-frame coordinates
 * (sigma sin theta, cos theta), pole xi'/|xi'|. */
OSCLAB_API osclab_status osclab_kernel_eval_rotated(const osclab_kernel* k, double xi1, double xi2,
                                                    double theta, int sigma, double* out);

/* ---- bump functions and patch constants -------------------------------- */

OSCLAB_API osclab_status osclab_zeta(double x, double* out);
OSCLAB_API osclab_status osclab_eta(double r, double* out);
OSCLAB_API osclab_status osclab_kappa(double x, double* out);

/* out3 = { epsilon, epsilon1, epsilon2 }. */
OSCLAB_API osclab_status osclab_epsilons(double k2, double k3, double beta, double safety,
                                         double out3[3]);

/* chi_j at (r, theta) given the two patch scales. */
OSCLAB_API osclab_status osclab_chi(double epsilon1, double epsilon2, long j1, long j2, double r,
                                    double theta, double* out);

/* ---- phase machinery ---------------------------------------------------
 * Frequencies are passed as (xi1, xi2, xi_last). l is the dyadic index.   */

/* out7 = { g, g_r, g_theta, g_rr, g_thetatheta, g_rrr, g_rrtheta },
 * r in [1/2, 2]. */
OSCLAB_API osclab_status osclab_phase_derivatives(const osclab_profile* p, int n, double alpha,
                                                  double beta, double xi1, double xi2,
                                                  double xi_last, int l, double r, double theta,
                                                  double out7[7]);

OSCLAB_API osclab_status osclab_lambda_scale(const osclab_profile* p, int n, double alpha,
                                             double beta, double xi1, double xi2, double xi_last,
                                             int l, int n_sup_samples, double* out);

/* Grid check of the derivative floor; report as JSON
 * {min_ratio, worst_point, lambda, epsilon, grid, pass}. */
OSCLAB_API osclab_status osclab_lemma_check(const osclab_profile* p, int n, double alpha,
                                            double beta, double xi1, double xi2, double xi_last,
                                            int l, double epsilon, double epsilon1,
                                            double epsilon2, double k2, double k3, int n_r,
                                            int n_theta, char** json_out);

/* Patch case tag: 0 g_r, 1 g_theta, 2 g_rr, 3 g_thetatheta, 4 none. */
OSCLAB_API osclab_status osclab_classify_patch(const osclab_profile* p, int n, double alpha,
                                               double beta, double xi1, double xi2,
                                               double xi_last, int l, long j1, long j2,
                                               double epsilon, double epsilon1, double epsilon2,
                                               double k2, double k3, int n_check, int* tag_out);

/* ---- multiplier --------------------------------------------------------- */

/* One dyadic piece m_l(xi); out2 = { re, im }. */
OSCLAB_API osclab_status osclab_ml(const osclab_profile* p, const osclab_kernel* k, int n,
                                   double alpha, double beta, double xi1, double xi2,
                                   double xi_last, int l, double tol, double out2[2]);

/* Window sum with tail bound; out3 = { re, im, tail_bound }. */
OSCLAB_API osclab_status osclab_m_total(const osclab_profile* p, const osclab_kernel* k, int n,
                                        double alpha, double beta, double xi1, double xi2,
                                        double xi_last, int l_min, int l_max, double tol,
                                        double skip_tol, double out3[3]);

/* ---- study runner -------------------------------------------------------
 * command: profile-check | lemma-check | multiplier | decay |
 *          sobolev-envelope | apply | sweep
 * config_json: run configuration (merged over built-in defaults; pass "{}"
 *              or NULL for the defaults).
 * exit_code:   0 pass, 1 usage/parse, 2 inadmissible profile,
 *              3 acceptance failure, 4 budget exceeded.
 * summary_out: optional; JSON summary of the run.                          */
OSCLAB_API osclab_status osclab_run_command(const char* command, const char* config_json,
                                            int* exit_code, char** summary_out);

#ifdef __cplusplus
}
#endif

#endif /* OSCLAB_H */
