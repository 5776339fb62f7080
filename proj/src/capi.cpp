#include "gpdps/gpdps.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <algorithm>
#include <functional>

#include "gpdps/core.hpp"
#include "gpdps/error.hpp"
#include "gpdps/image_io.hpp"
#include "gpdps/nash.hpp"
#include "gpdps/potts.hpp"
#include "gpdps/schedules.hpp"
#include "gpdps/verify.hpp"

#ifndef GPDPS_VERSION
#define GPDPS_VERSION "0.0.0"
#endif

struct gpdps_schedule {
  gpdps::StepSchedule s;
};

struct gpdps_report {
  gpdps::CheckReport r;
};

struct gpdps_image {
  gpdps::potts::Image img;
};

struct gpdps_problem {
  std::unique_ptr<gpdps::potts::PottsProblem> potts;
  std::unique_ptr<gpdps::nash::NashProblem> nash;
  std::optional<gpdps::PrimalDualState> solution;

  const gpdps::SaddleProblem& base() const {
    if (potts) return *potts;
    return *nash;
  }
};

struct gpdps_result {
  gpdps::SolveResult r;
};

namespace {

thread_local std::string g_last_error;
thread_local std::int64_t g_last_iteration = -1;

gpdps_status set_error(gpdps_status st, const std::string& msg,
                       std::int64_t iter = -1) {
  g_last_error = msg;
  g_last_iteration = iter;
  return st;
}

gpdps_status from_code(gpdps::ErrorCode c) {
  switch (c) {
    case gpdps::ErrorCode::kConfig: return GPDPS_ERR_CONFIG;
    case gpdps::ErrorCode::kDivergence: return GPDPS_ERR_DIVERGENCE;
    case gpdps::ErrorCode::kPrecondition: return GPDPS_ERR_PRECONDITION;
    case gpdps::ErrorCode::kInfeasible: return GPDPS_ERR_INFEASIBLE;
    case gpdps::ErrorCode::kIo: return GPDPS_ERR_IO;
    case gpdps::ErrorCode::kUnsupported: return GPDPS_ERR_UNSUPPORTED;
  }
  return GPDPS_ERR_INTERNAL;
}

template <class F>
gpdps_status guarded(F&& fn) {
  try {
    fn();
    return GPDPS_OK;
  } catch (const gpdps::Error& e) {
    const auto it = e.iteration();
    return set_error(from_code(e.code()), e.what(),
                     it ? static_cast<std::int64_t>(*it) : -1);
  } catch (const std::bad_alloc&) {
    return set_error(GPDPS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(GPDPS_ERR_INTERNAL, e.what());
  }
}

gpdps_status null_arg(const char* what) {
  return set_error(GPDPS_ERR_INVALID_ARGUMENT,
                   std::string(what) + " must not be NULL");
}

gpdps::ProblemConstants to_cpp(const gpdps_constants& c) {
  gpdps::ProblemConstants p;
  p.R_K = c.R_K;
  p.L_x_at_yhat = c.L_x_at_yhat;
  p.L_y_at_xhat = c.L_y_at_xhat;
  p.L_yx = c.L_yx;
  p.lambda_x = c.lambda_x;
  p.lambda_y = c.lambda_y;
  p.xi_x = c.xi_x;
  p.xi_y = c.xi_y;
  p.theta_x = c.theta_x;
  p.theta_y = c.theta_y;
  p.gamma_G = c.gamma_G;
  p.gamma_Fstar = c.gamma_Fstar;
  p.gamma_tilde_G = c.gamma_tilde_G;
  p.gamma_tilde_Fstar = c.gamma_tilde_Fstar;
  p.rho_x = c.rho_x;
  p.rho_y = c.rho_y;
  p.delta = c.delta;
  p.mu = c.mu;
  return p;
}

gpdps_constants to_c(const gpdps::ProblemConstants& p) {
  return {p.R_K,         p.L_x_at_yhat,  p.L_y_at_xhat,   p.L_yx,
          p.lambda_x,    p.lambda_y,     p.xi_x,          p.xi_y,
          p.theta_x,     p.theta_y,      p.gamma_G,       p.gamma_Fstar,
          p.gamma_tilde_G, p.gamma_tilde_Fstar, p.rho_x,  p.rho_y,
          p.delta,       p.mu};
}

gpdps_triple to_c(const gpdps::StepTriple& t) { return {t.tau, t.sigma, t.omega}; }
gpdps::StepTriple to_cpp(const gpdps_triple& t) { return {t.tau, t.sigma, t.omega}; }

std::vector<gpdps::StepTriple> to_cpp(const gpdps_triple* t, std::size_t n) {
  std::vector<gpdps::StepTriple> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = to_cpp(t[i]);
  return v;
}

gpdps::JumpNorm to_cpp(gpdps_jump_norm p) {
  if (p == GPDPS_P1) return gpdps::JumpNorm::kL1;
  if (p == GPDPS_PINF) return gpdps::JumpNorm::kLinf;
  gpdps::fail(gpdps::ErrorCode::kConfig, "jump norm must be GPDPS_P1 or GPDPS_PINF");
}

gpdps_status make_schedule(gpdps_schedule** out,
                           const std::function<gpdps::StepSchedule()>& mk) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new gpdps_schedule{mk()}; });
}

}  // namespace

extern "C" {

const char* gpdps_version(void) { return GPDPS_VERSION; }
const char* gpdps_last_error(void) { return g_last_error.c_str(); }
int64_t gpdps_last_error_iteration(void) { return g_last_iteration; }

// ---- step parameters --------------------------------------------------------

void gpdps_constants_default(gpdps_constants* c) {
  if (c) *c = to_c(gpdps::ProblemConstants{});
}

size_t gpdps_constants_ledger(const gpdps_constants* c, char* buf, size_t len) {
  if (!c) return 0;
  const std::string s = to_cpp(*c).ledger();
  if (buf && len > 0) {
    const std::size_t n = std::min(len - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return s.size();
}

gpdps_status gpdps_schedule_constant(double tau, double sigma,
                                     gpdps_schedule** out) {
  return make_schedule(out,
                       [=] { return gpdps::StepSchedule::constant(tau, sigma); });
}

gpdps_status gpdps_schedule_accelerated(double tau0, double sigma,
                                        double gtilde_g, gpdps_schedule** out) {
  return make_schedule(out, [=] {
    return gpdps::StepSchedule::accelerated(tau0, sigma, gtilde_g);
  });
}

gpdps_status gpdps_schedule_linear_rate(double tau, double gtilde_g,
                                        double gtilde_f, gpdps_schedule** out) {
  return make_schedule(out, [=] {
    return gpdps::StepSchedule::linear_rate(tau, gtilde_g, gtilde_f);
  });
}

gpdps_status gpdps_schedule_fixed(gpdps_triple t, gpdps_schedule** out) {
  return make_schedule(out,
                       [=] { return gpdps::StepSchedule::fixed(to_cpp(t)); });
}

gpdps_status gpdps_schedule_next(const gpdps_schedule* s, size_t i,
                                 gpdps_triple* out) {
  if (!s) return null_arg("schedule");
  if (!out) return null_arg("out");
  return guarded([&] { *out = to_c(s->s.next(i)); });
}

void gpdps_schedule_free(gpdps_schedule* s) { delete s; }

gpdps_status gpdps_bound_constant(const gpdps_constants* c, double* tau_sup) {
  if (!c) return null_arg("constants");
  if (!tau_sup) return null_arg("tau_sup");
  return guarded([&] { *tau_sup = gpdps::bound_constant(to_cpp(*c)).tau_sup; });
}

gpdps_status gpdps_bound_constant_sigma(const gpdps_constants* c, double tau,
                                        double* sigma_max) {
  if (!c) return null_arg("constants");
  if (!sigma_max) return null_arg("sigma_max");
  return guarded([&] {
    *sigma_max = gpdps::bound_constant(to_cpp(*c)).sigma_max(tau);
  });
}

gpdps_status gpdps_bound_accelerated(const gpdps_constants* c, double* tau0_sup,
                                     double* sigma_tau0_max) {
  if (!c) return null_arg("constants");
  return guarded([&] {
    const auto b = gpdps::bound_accelerated(to_cpp(*c));
    if (tau0_sup) *tau0_sup = b.tau0_sup;
    if (sigma_tau0_max) *sigma_tau0_max = b.sigma_tau0_max;
  });
}

gpdps_status gpdps_bound_linear(const gpdps_constants* c, double* tau_locality,
                                double* tau_quadratic, double* tau_max) {
  if (!c) return null_arg("constants");
  return guarded([&] {
    const auto b = gpdps::bound_linear_detail(to_cpp(*c));
    if (tau_locality) *tau_locality = b.tau_locality;
    if (tau_quadratic) *tau_quadratic = b.tau_quadratic;
    if (tau_max) *tau_max = b.tau_max;
  });
}

void gpdps_potts_step_params_default(gpdps_potts_step_params* p) {
  if (!p) return;
  const gpdps::PottsStepParams d;
  p->alpha = d.alpha;
  p->gamma = d.gamma;
  p->p = GPDPS_P1;
  p->dynamic_range = d.dynamic_range;
  p->gamma_bar = d.gamma_bar;
  p->delta = d.delta;
  p->mu = std::nan("");
  p->gamma_tilde_G = std::nan("");
  p->gamma_tilde_Fstar = std::nan("");
  p->L = d.L;
  p->margin = d.margin;
}

gpdps_status gpdps_potts_steps(const gpdps_potts_step_params* p,
                               gpdps_potts_steps_result* out) {
  if (!p) return null_arg("params");
  if (!out) return null_arg("out");
  return guarded([&] {
    gpdps::PottsStepParams q;
    q.alpha = p->alpha;
    q.gamma = p->gamma;
    q.p = to_cpp(p->p);
    q.dynamic_range = p->dynamic_range;
    q.gamma_bar = p->gamma_bar;
    q.delta = p->delta;
    if (!std::isnan(p->mu)) q.mu = p->mu;
    if (!std::isnan(p->gamma_tilde_G)) q.gamma_tilde_G = p->gamma_tilde_G;
    if (!std::isnan(p->gamma_tilde_Fstar))
      q.gamma_tilde_Fstar = p->gamma_tilde_Fstar;
    q.L = p->L;
    q.margin = p->margin;
    const gpdps::PottsSteps s = gpdps::potts_steps(q);
    out->triple = to_c(s.triple);
    out->constants = to_c(s.constants);
    out->m_x = s.m_x;
    out->m_y = s.m_y;
    out->tau_bound_locality = s.tau_bound_locality;
    out->tau_bound_quadratic = s.tau_bound_quadratic;
  });
}

gpdps_status gpdps_potts_preset(const char* name, gpdps_triple* out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  const auto t = gpdps::potts_preset(name);
  if (!t)
    return set_error(GPDPS_ERR_CONFIG, std::string("unknown preset '") + name +
                                           "' (expected paper-p1 or paper-pinf)");
  *out = to_c(*t);
  return GPDPS_OK;
}

// ---- reports ----------------------------------------------------------------

size_t gpdps_report_size(const gpdps_report* r) { return r ? r->r.lines.size() : 0; }

gpdps_status gpdps_report_line(const gpdps_report* r, size_t i,
                               const char** name, int* passed, double* margin,
                               const char** detail) {
  if (!r) return null_arg("report");
  if (i >= r->r.lines.size())
    return set_error(GPDPS_ERR_INVALID_ARGUMENT, "report line out of range");
  const auto& l = r->r.lines[i];
  if (name) *name = l.name.c_str();
  if (passed) *passed = l.passed ? 1 : 0;
  if (margin) *margin = l.margin;
  if (detail) *detail = l.detail.c_str();
  return GPDPS_OK;
}

int gpdps_report_all_passed(const gpdps_report* r) {
  return r && r->r.all_passed() ? 1 : 0;
}

void gpdps_report_free(gpdps_report* r) { delete r; }

gpdps_status gpdps_check_testing_conditions(const gpdps_constants* c,
                                            const gpdps_triple* triples,
                                            size_t n, double omega_low,
                                            double omega_high,
                                            gpdps_report** out) {
  if (!c) return null_arg("constants");
  if (!triples && n > 0) return null_arg("triples");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto t = to_cpp(triples, n);
    gpdps::TestingReport rep =
        std::isnan(omega_low) || std::isnan(omega_high)
            ? gpdps::check_testing_conditions(to_cpp(*c), t)
            : gpdps::check_testing_conditions(to_cpp(*c), t, omega_low,
                                              omega_high);
    *out = new gpdps_report{std::move(rep)};
  });
}

gpdps_status gpdps_make_locality_budget(double dist_x0_sq, double dist_y0_sq,
                                        double tau0, double sigma1,
                                        double omega0, double delta, double r_y,
                                        double delta_x, double delta_y,
                                        gpdps_locality_budget* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto b = gpdps::make_locality_budget(dist_x0_sq, dist_y0_sq, tau0,
                                               sigma1, omega0, delta, r_y,
                                               delta_x, delta_y);
    *out = {b.r_max, b.nu, b.r_y, b.delta_x, b.delta_y};
  });
}

gpdps_status gpdps_check_locality(const gpdps_locality_budget* b,
                                  const gpdps_constants* c,
                                  const gpdps_triple* triples, size_t n,
                                  gpdps_report** out) {
  if (!b) return null_arg("budget");
  if (!c) return null_arg("constants");
  if (!triples && n > 0) return null_arg("triples");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const gpdps::LocalityBudget lb{b->r_max, b->nu, b->r_y, b->delta_x,
                                   b->delta_y};
    *out = new gpdps_report{
        gpdps::check_locality(lb, to_cpp(*c), to_cpp(triples, n))};
  });
}

// ---- images -----------------------------------------------------------------

gpdps_status gpdps_image_create(size_t n1, size_t n2, const double* values,
                                gpdps_image** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    gpdps::require(n1 > 0 && n2 > 0, gpdps::ErrorCode::kConfig,
                   "image dimensions must be positive");
    gpdps::potts::Image img(n1, n2);
    if (values) std::copy(values, values + n1 * n2, img.values.begin());
    *out = new gpdps_image{std::move(img)};
  });
}

gpdps_status gpdps_image_synthetic(size_t n1, size_t n2, uint64_t seed,
                                   size_t n_shapes, double noise_sigma,
                                   gpdps_image** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new gpdps_image{
        gpdps::io::gen_synthetic(n1, n2, seed, n_shapes, noise_sigma)};
  });
}

gpdps_status gpdps_image_read_pgm(const char* path, gpdps_image** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new gpdps_image{gpdps::io::read_pgm(path)}; });
}

gpdps_status gpdps_image_write_pgm(const gpdps_image* img, const char* path,
                                   int binary, int bit_depth,
                                   const char* const* comments,
                                   size_t n_comments) {
  if (!img) return null_arg("image");
  if (!path) return null_arg("path");
  if (!comments && n_comments > 0) return null_arg("comments");
  return guarded([&] {
    gpdps::io::PgmWriteOptions o;
    o.format = binary ? gpdps::io::PgmFormat::kBinary : gpdps::io::PgmFormat::kAscii;
    o.bit_depth = bit_depth;
    for (size_t i = 0; i < n_comments; ++i) o.comments.emplace_back(comments[i]);
    gpdps::io::write_pgm(path, img->img, o);
  });
}

void gpdps_image_dims(const gpdps_image* img, size_t* n1, size_t* n2) {
  if (n1) *n1 = img ? img->img.n1 : 0;
  if (n2) *n2 = img ? img->img.n2 : 0;
}

const double* gpdps_image_data(const gpdps_image* img) {
  return img ? img->img.values.data() : nullptr;
}

void gpdps_image_free(gpdps_image* img) { delete img; }

// ---- problems ---------------------------------------------------------------

gpdps_status gpdps_problem_potts(const gpdps_image* f, double alpha,
                                 double gamma, gpdps_jump_norm p, double h,
                                 gpdps_problem** out) {
  if (!f) return null_arg("image");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    gpdps::potts::PottsConfig cfg;
    cfg.alpha = alpha;
    cfg.gamma = gamma;
    cfg.p = to_cpp(p);
    cfg.f = f->img;
    cfg.h = h;
    auto prob = std::make_unique<gpdps_problem>();
    prob->potts = std::make_unique<gpdps::potts::PottsProblem>(std::move(cfg));
    *out = prob.release();
  });
}

gpdps_status gpdps_problem_nash_manufactured(size_t n, double a, double b,
                                             double alpha1, double alpha2,
                                             gpdps_problem** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto man = gpdps::nash::manufacture(
        n, gpdps::nash::ManufacturedProfile::standard(), a, b, alpha1, alpha2);
    auto prob = std::make_unique<gpdps_problem>();
    prob->solution = man.solution();
    prob->nash = std::make_unique<gpdps::nash::NashProblem>(std::move(man.config));
    *out = prob.release();
  });
}

void gpdps_problem_dims(const gpdps_problem* p, size_t* primal, size_t* dual) {
  if (primal) *primal = p ? p->base().primal_dim() : 0;
  if (dual) *dual = p ? p->base().dual_dim() : 0;
}

double gpdps_problem_metric_weight(const gpdps_problem* p) {
  return p ? p->base().metric_weight() : 0.0;
}

gpdps_status gpdps_problem_solution(const gpdps_problem* p, double* x,
                                    double* y) {
  if (!p) return null_arg("problem");
  if (!p->solution)
    return set_error(GPDPS_ERR_UNSUPPORTED, "problem has no known solution");
  if (x) std::copy(p->solution->x.begin(), p->solution->x.end(), x);
  if (y) std::copy(p->solution->y.begin(), p->solution->y.end(), y);
  return GPDPS_OK;
}

gpdps_status gpdps_problem_poisson_solves(const gpdps_problem* p,
                                          uint64_t* count) {
  if (!p) return null_arg("problem");
  if (!count) return null_arg("count");
  if (!p->nash)
    return set_error(GPDPS_ERR_UNSUPPORTED, "problem performs no Poisson solves");
  *count = p->nash->poisson_solves();
  return GPDPS_OK;
}

gpdps_status gpdps_problem_reset_poisson_solves(const gpdps_problem* p) {
  if (!p) return null_arg("problem");
  if (!p->nash)
    return set_error(GPDPS_ERR_UNSUPPORTED, "problem performs no Poisson solves");
  p->nash->reset_poisson_solves();
  return GPDPS_OK;
}

gpdps_status gpdps_problem_objective(const gpdps_problem* p, const double* x,
                                     double* out) {
  if (!p) return null_arg("problem");
  if (!x) return null_arg("x");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto& b = p->base();
    const auto v = b.primal_objective(std::span<const double>(x, b.primal_dim()));
    gpdps::require(v.has_value(), gpdps::ErrorCode::kUnsupported,
                   "problem defines no primal objective");
    *out = *v;
  });
}

gpdps_status gpdps_problem_fd_grad_check(const gpdps_problem* p,
                                         const double* x, const double* y,
                                         double h, size_t n_dirs, uint64_t seed,
                                         double* max_rel_err) {
  if (!p) return null_arg("problem");
  if (!x || !y) return null_arg("point");
  if (!max_rel_err) return null_arg("max_rel_err");
  return guarded([&] {
    const auto& b = p->base();
    *max_rel_err =
        gpdps::verify::fd_grad_check(b, std::span<const double>(x, b.primal_dim()),
                                     std::span<const double>(y, b.dual_dim()), h,
                                     n_dirs, seed)
            .max_rel_err;
  });
}

void gpdps_problem_free(gpdps_problem* p) { delete p; }

// ---- solving ----------------------------------------------------------------

void gpdps_solve_options_default(gpdps_solve_options* o) {
  if (!o) return;
  const gpdps::SolveOptions d;
  o->max_iters = d.max_iters;
  o->step_tol = d.step_tol;
  o->log_stride = d.log_stride;
  o->record_objective = d.record_objective ? 1 : 0;
}

gpdps_status gpdps_solve(const gpdps_problem* p, const gpdps_schedule* s,
                         const gpdps_solve_options* o, const double* x0,
                         const double* y0, const double* ref_x,
                         const double* ref_y, gpdps_result** out) {
  if (!p) return null_arg("problem");
  if (!s) return null_arg("schedule");
  if (!o) return null_arg("options");
  if (!out) return null_arg("out");
  if ((ref_x == nullptr) != (ref_y == nullptr))
    return set_error(GPDPS_ERR_INVALID_ARGUMENT,
                     "reference needs both ref_x and ref_y");
  *out = nullptr;
  return guarded([&] {
    const auto& b = p->base();
    const std::size_t nx = b.primal_dim(), ny = b.dual_dim();
    gpdps::PrimalDualState init =
        p->potts ? p->potts->initial_state()
                 : gpdps::PrimalDualState::from(gpdps::Vector(nx, 0.0),
                                                gpdps::Vector(ny, 0.0));
    if (x0) init = gpdps::PrimalDualState::from(gpdps::Vector(x0, x0 + nx), init.y);
    if (y0) init.y.assign(y0, y0 + ny);

    gpdps::SolveOptions so;
    so.max_iters = o->max_iters;
    so.step_tol = o->step_tol;
    so.log_stride = o->log_stride;
    so.record_objective = o->record_objective != 0;
    if (ref_x)
      so.reference = gpdps::PrimalDualState::from(
          gpdps::Vector(ref_x, ref_x + nx), gpdps::Vector(ref_y, ref_y + ny));
    *out = new gpdps_result{gpdps::solve(b, s->s, so, std::move(init))};
  });
}

size_t gpdps_result_iterations(const gpdps_result* r) {
  return r ? r->r.state.iter : 0;
}

size_t gpdps_result_log_size(const gpdps_result* r) {
  return r ? r->r.log.size() : 0;
}

gpdps_status gpdps_result_record(const gpdps_result* r, size_t i,
                                 gpdps_iteration_record* out) {
  if (!r) return null_arg("result");
  if (!out) return null_arg("out");
  if (i >= r->r.log.size())
    return set_error(GPDPS_ERR_INVALID_ARGUMENT, "log index out of range");
  const auto& rec = r->r.log[i];
  out->iter = rec.iter;
  out->tau = rec.tau;
  out->sigma = rec.sigma;
  out->omega = rec.omega;
  out->step_norm = rec.step_norm;
  out->has_dist = rec.dist_to_ref ? 1 : 0;
  out->dist_to_ref = rec.dist_to_ref.value_or(0.0);
  out->has_objective = rec.objective ? 1 : 0;
  out->objective = rec.objective.value_or(0.0);
  return GPDPS_OK;
}

const double* gpdps_result_x(const gpdps_result* r, size_t* n) {
  if (n) *n = r ? r->r.state.x.size() : 0;
  return r ? r->r.state.x.data() : nullptr;
}

const double* gpdps_result_y(const gpdps_result* r, size_t* n) {
  if (n) *n = r ? r->r.state.y.size() : 0;
  return r ? r->r.state.y.data() : nullptr;
}

void gpdps_result_free(gpdps_result* r) { delete r; }

// ---- verification -----------------------------------------------------------

gpdps_status gpdps_verify_suite(uint64_t seed, const char* only,
                                size_t three_point_samples,
                                gpdps_report** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    gpdps::verify::SuiteOptions o;
    o.seed = seed;
    if (only) o.only = std::string(only);
    if (three_point_samples > 0) o.three_point_samples = three_point_samples;
    *out = new gpdps_report{gpdps::verify::run_suite(o)};
  });
}

gpdps_status gpdps_rate_fit(const double* errors, size_t n, size_t start,
                            size_t end, double* rate, double* r_squared) {
  if (!errors) return null_arg("errors");
  return guarded([&] {
    const auto f = gpdps::verify::rate_fit(std::span<const double>(errors, n),
                                           start, end);
    if (rate) *rate = f.rate;
    if (r_squared) *r_squared = f.r_squared;
  });
}

}  // extern "C"
