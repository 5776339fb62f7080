/* C interface to the gpdps solver library.
 *
 * Objects are opaque handles created by gpdps_*_create-style calls and
 * released with the matching *_free function. Every fallible call returns a
 * gpdps_status; on failure, gpdps_last_error() describes the problem for the
 * calling thread until the next failing call on that thread.
 */
#ifndef GPDPS_GPDPS_H
#define GPDPS_GPDPS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GPDPS_API __declspec(dllexport)
#else
#define GPDPS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpdps_status {
  GPDPS_OK = 0,
  GPDPS_ERR_CONFIG = 1,
  GPDPS_ERR_DIVERGENCE = 2,
  GPDPS_ERR_PRECONDITION = 3,
  GPDPS_ERR_INFEASIBLE = 4,
  GPDPS_ERR_IO = 5,
  GPDPS_ERR_UNSUPPORTED = 6,
  GPDPS_ERR_INVALID_ARGUMENT = 7,
  GPDPS_ERR_INTERNAL = 8
} gpdps_status;

typedef enum gpdps_jump_norm { GPDPS_P1 = 1, GPDPS_PINF = 2 } gpdps_jump_norm;

GPDPS_API const char* gpdps_version(void);
GPDPS_API const char* gpdps_last_error(void);
/* Iteration at which the last divergence error occurred, or -1. */
GPDPS_API int64_t gpdps_last_error_iteration(void);

/* ---- step parameters ---------------------------------------------------- */

typedef struct gpdps_triple {
  double tau;
  double sigma;
  double omega;
} gpdps_triple;

typedef struct gpdps_constants {
  double R_K;
  double L_x_at_yhat;
  double L_y_at_xhat;
  double L_yx;
  double lambda_x;
  double lambda_y;
  double xi_x;
  double xi_y;
  double theta_x;
  double theta_y;
  double gamma_G;
  double gamma_Fstar;
  double gamma_tilde_G;
  double gamma_tilde_Fstar;
  double rho_x;
  double rho_y;
  double delta;
  double mu;
} gpdps_constants;

GPDPS_API void gpdps_constants_default(gpdps_constants* c);
/* Writes "name = value" lines into buf (NUL-terminated, truncated to len).
 * Returns the full length needed excluding the terminator. */
GPDPS_API size_t gpdps_constants_ledger(const gpdps_constants* c, char* buf,
                                        size_t len);

typedef struct gpdps_schedule gpdps_schedule;

GPDPS_API gpdps_status gpdps_schedule_constant(double tau, double sigma,
                                               gpdps_schedule** out);
GPDPS_API gpdps_status gpdps_schedule_accelerated(double tau0, double sigma,
                                                  double gtilde_g,
                                                  gpdps_schedule** out);
GPDPS_API gpdps_status gpdps_schedule_linear_rate(double tau, double gtilde_g,
                                                  double gtilde_f,
                                                  gpdps_schedule** out);
GPDPS_API gpdps_status gpdps_schedule_fixed(gpdps_triple t,
                                            gpdps_schedule** out);
GPDPS_API gpdps_status gpdps_schedule_next(const gpdps_schedule* s, size_t i,
                                           gpdps_triple* out);
GPDPS_API void gpdps_schedule_free(gpdps_schedule* s);

/* Exclusive sup of tau for the constant rule and sigma_max(tau). */
GPDPS_API gpdps_status gpdps_bound_constant(const gpdps_constants* c,
                                            double* tau_sup);
GPDPS_API gpdps_status gpdps_bound_constant_sigma(const gpdps_constants* c,
                                                  double tau,
                                                  double* sigma_max);
GPDPS_API gpdps_status gpdps_bound_accelerated(const gpdps_constants* c,
                                               double* tau0_sup,
                                               double* sigma_tau0_max);
/* Any of the outputs may be NULL. */
GPDPS_API gpdps_status gpdps_bound_linear(const gpdps_constants* c,
                                          double* tau_locality,
                                          double* tau_quadratic,
                                          double* tau_max);

typedef struct gpdps_potts_step_params {
  double alpha;
  double gamma;
  gpdps_jump_norm p;
  double dynamic_range;
  double gamma_bar;
  double delta;
  double mu;                /* NaN selects the default (delta) */
  double gamma_tilde_G;     /* NaN selects 1/(10 alpha) */
  double gamma_tilde_Fstar; /* NaN selects gamma/100 */
  double L;
  double margin;
} gpdps_potts_step_params;

typedef struct gpdps_potts_steps_result {
  gpdps_triple triple;
  gpdps_constants constants;
  double m_x;
  double m_y;
  double tau_bound_locality;
  double tau_bound_quadratic;
} gpdps_potts_steps_result;

GPDPS_API void gpdps_potts_step_params_default(gpdps_potts_step_params* p);
GPDPS_API gpdps_status gpdps_potts_steps(const gpdps_potts_step_params* p,
                                         gpdps_potts_steps_result* out);
/* "paper-p1" or "paper-pinf". */
GPDPS_API gpdps_status gpdps_potts_preset(const char* name, gpdps_triple* out);

/* ---- check reports ------------------------------------------------------ */

typedef struct gpdps_report gpdps_report;

GPDPS_API size_t gpdps_report_size(const gpdps_report* r);
/* Pointers stay valid until gpdps_report_free. Outputs may be NULL. */
GPDPS_API gpdps_status gpdps_report_line(const gpdps_report* r, size_t i,
                                         const char** name, int* passed,
                                         double* margin, const char** detail);
GPDPS_API int gpdps_report_all_passed(const gpdps_report* r);
GPDPS_API void gpdps_report_free(gpdps_report* r);

/* omega_low / omega_high may be NaN to use the min / max of the triples. */
GPDPS_API gpdps_status gpdps_check_testing_conditions(
    const gpdps_constants* c, const gpdps_triple* triples, size_t n,
    double omega_low, double omega_high, gpdps_report** out);

typedef struct gpdps_locality_budget {
  double r_max;
  double nu;
  double r_y;
  double delta_x;
  double delta_y;
} gpdps_locality_budget;

GPDPS_API gpdps_status gpdps_make_locality_budget(
    double dist_x0_sq, double dist_y0_sq, double tau0, double sigma1,
    double omega0, double delta, double r_y, double delta_x, double delta_y,
    gpdps_locality_budget* out);
GPDPS_API gpdps_status gpdps_check_locality(const gpdps_locality_budget* b,
                                            const gpdps_constants* c,
                                            const gpdps_triple* triples,
                                            size_t n, gpdps_report** out);

/* ---- images ------------------------------------------------------------- */

typedef struct gpdps_image gpdps_image;

/* values may be NULL for a zero image; otherwise n1 * n2 row-major samples. */
GPDPS_API gpdps_status gpdps_image_create(size_t n1, size_t n2,
                                          const double* values,
                                          gpdps_image** out);
GPDPS_API gpdps_status gpdps_image_synthetic(size_t n1, size_t n2,
                                             uint64_t seed, size_t n_shapes,
                                             double noise_sigma,
                                             gpdps_image** out);
GPDPS_API gpdps_status gpdps_image_read_pgm(const char* path,
                                            gpdps_image** out);
/* binary != 0 writes P5, otherwise P2; bit_depth is 8 or 16. */
GPDPS_API gpdps_status gpdps_image_write_pgm(const gpdps_image* img,
                                             const char* path, int binary,
                                             int bit_depth,
                                             const char* const* comments,
                                             size_t n_comments);
GPDPS_API void gpdps_image_dims(const gpdps_image* img, size_t* n1, size_t* n2);
GPDPS_API const double* gpdps_image_data(const gpdps_image* img);
GPDPS_API void gpdps_image_free(gpdps_image* img);

/* ---- problems ----------------------------------------------------------- */

typedef struct gpdps_problem gpdps_problem;

GPDPS_API gpdps_status gpdps_problem_potts(const gpdps_image* f, double alpha,
                                           double gamma, gpdps_jump_norm p,
                                           double h, gpdps_problem** out);
/* Two-player game with manufactured data on an n x n grid and the standard
 * profile; the known equilibrium is available via gpdps_problem_solution. */
GPDPS_API gpdps_status gpdps_problem_nash_manufactured(size_t n, double a,
                                                       double b, double alpha1,
                                                       double alpha2,
                                                       gpdps_problem** out);
GPDPS_API void gpdps_problem_dims(const gpdps_problem* p, size_t* primal,
                                  size_t* dual);
GPDPS_API double gpdps_problem_metric_weight(const gpdps_problem* p);
/* Copies the known solution into x (primal_dim) and y (dual_dim).
 * GPDPS_ERR_UNSUPPORTED if the problem has none. */
GPDPS_API gpdps_status gpdps_problem_solution(const gpdps_problem* p, double* x,
                                              double* y);
/* Poisson solves since creation or the last reset (Nash problems only). */
GPDPS_API gpdps_status gpdps_problem_poisson_solves(const gpdps_problem* p,
                                                    uint64_t* count);
GPDPS_API gpdps_status gpdps_problem_reset_poisson_solves(
    const gpdps_problem* p);
/* Primal objective at x, when the problem defines one. */
GPDPS_API gpdps_status gpdps_problem_objective(const gpdps_problem* p,
                                               const double* x, double* out);
GPDPS_API gpdps_status gpdps_problem_fd_grad_check(const gpdps_problem* p,
                                                   const double* x,
                                                   const double* y, double h,
                                                   size_t n_dirs,
                                                   uint64_t seed,
                                                   double* max_rel_err);
GPDPS_API void gpdps_problem_free(gpdps_problem* p);

/* ---- solving ------------------------------------------------------------ */

typedef struct gpdps_solve_options {
  size_t max_iters;
  double step_tol; /* 0 disables the stopping test */
  size_t log_stride;
  int record_objective;
} gpdps_solve_options;

typedef struct gpdps_iteration_record {
  size_t iter;
  double tau;
  double sigma;
  double omega;
  double step_norm;
  int has_dist;
  double dist_to_ref;
  int has_objective;
  double objective;
} gpdps_iteration_record;

typedef struct gpdps_result gpdps_result;

GPDPS_API void gpdps_solve_options_default(gpdps_solve_options* o);
/* x0 / y0 may be NULL for the problem's default start. ref_x / ref_y are an
 * optional reference pair (both or neither) for distance logging. */
GPDPS_API gpdps_status gpdps_solve(const gpdps_problem* p,
                                   const gpdps_schedule* s,
                                   const gpdps_solve_options* o,
                                   const double* x0, const double* y0,
                                   const double* ref_x, const double* ref_y,
                                   gpdps_result** out);
GPDPS_API size_t gpdps_result_iterations(const gpdps_result* r);
GPDPS_API size_t gpdps_result_log_size(const gpdps_result* r);
GPDPS_API gpdps_status gpdps_result_record(const gpdps_result* r, size_t i,
                                           gpdps_iteration_record* out);
GPDPS_API const double* gpdps_result_x(const gpdps_result* r, size_t* n);
GPDPS_API const double* gpdps_result_y(const gpdps_result* r, size_t* n);
GPDPS_API void gpdps_result_free(gpdps_result* r);

/* ---- verification ------------------------------------------------------- */

/* only may be NULL to run every check; three_point_samples 0 means 1e5. */
GPDPS_API gpdps_status gpdps_verify_suite(uint64_t seed, const char* only,
                                          size_t three_point_samples,
                                          gpdps_report** out);
GPDPS_API gpdps_status gpdps_rate_fit(const double* errors, size_t n,
                                      size_t start, size_t end, double* rate,
                                      double* r_squared);

#ifdef __cplusplus
}
#endif

#endif /* GPDPS_GPDPS_H */
