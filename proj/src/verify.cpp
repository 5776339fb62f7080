#include "gpdps/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "gpdps/error.hpp"
#include "gpdps/image_io.hpp"
#include "gpdps/nash.hpp"
#include "gpdps/potts.hpp"

namespace gpdps::verify {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vector random_unit(std::mt19937_64& rng, std::size_t n, double weight) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector d(n);
  for (auto& v : d) v = g(rng);
  const double nrm = weighted_norm(d, weight);
  for (auto& v : d) v /= nrm;
  return d;
}

Vector axpy(std::span<const double> x, double a, std::span<const double> d) {
  Vector out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * d[i];
  return out;
}

double rel_diff(std::span<const double> a, std::span<const double> b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (den == 0) return std::sqrt(num);
  return std::sqrt(num / den);
}

Vector matvec(const std::vector<double>& m, std::span<const double> v) {
  const std::size_t n = v.size();
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += m[i * n + j] * v[j];
  return out;
}

// Uniform draw from the ball B(c, r) by rejection from the enclosing cube.
Vector ball_sample(std::mt19937_64& rng, std::span<const double> c, double r) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector d(c.size());
  for (;;) {
    double s = 0;
    for (auto& v : d) {
      v = u(rng);
      s += v * v;
    }
    if (s <= 1.0) break;
  }
  Vector out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] + r * d[i];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

FdResult fd_grad_check(const SaddleProblem& problem, std::span<const double> x,
                       std::span<const double> y, double h, std::size_t n_dirs,
                       std::uint64_t seed) {
  require(h > 0, ErrorCode::kPrecondition, "finite-difference step must be > 0");
  require(x.size() == problem.primal_dim() && y.size() == problem.dual_dim(),
          ErrorCode::kConfig, "fd_grad_check: point has wrong dimensions");
  const double w = problem.metric_weight();
  // Probe value() first so a missing oracle fails before any work.
  (void)problem.value(x, y);

  Vector gx(problem.primal_dim()), gy(problem.dual_dim());
  problem.grad_x(x, y, gx);
  problem.grad_y(x, y, gy);
  const double gx_norm = weighted_norm(gx, w);
  const double gy_norm = weighted_norm(gy, w);

  std::mt19937_64 rng(seed);
  FdResult r;
  auto rel = [](double an, double fd, double scale) {
    const double den = std::max({std::abs(an), std::abs(fd), scale});
    return den == 0 ? 0.0 : std::abs(an - fd) / den;
  };
  for (std::size_t k = 0; k < n_dirs; ++k) {
    const Vector dx = random_unit(rng, x.size(), w);
    const double an_x = w * dot(gx, dx);
    const double fd_x =
        (problem.value(axpy(x, h, dx), y) - problem.value(axpy(x, -h, dx), y)) /
        (2 * h);
    r.max_rel_err_x = std::max(r.max_rel_err_x, rel(an_x, fd_x, gx_norm));

    const Vector dy = random_unit(rng, y.size(), w);
    const double an_y = w * dot(gy, dy);
    const double fd_y =
        (problem.value(x, axpy(y, h, dy)) - problem.value(x, axpy(y, -h, dy))) /
        (2 * h);
    r.max_rel_err_y = std::max(r.max_rel_err_y, rel(an_y, fd_y, gy_norm));
  }
  r.max_rel_err = std::max(r.max_rel_err_x, r.max_rel_err_y);
  return r;
}

// ---------------------------------------------------------------------------

BilinearProblem::BilinearProblem(LinearMap a, ProxFn prox_g, ProxFn prox_fstar)
    : a_(std::move(a)),
      prox_g_(std::move(prox_g)),
      prox_fstar_(std::move(prox_fstar)) {
  require(a_.apply && a_.adjoint && prox_g_ && prox_fstar_, ErrorCode::kConfig,
          "bilinear problem needs A, A^T and both proximal maps");
}

void BilinearProblem::prox_primal(double tau, std::span<const double> v,
                                  std::span<double> out) const {
  prox_g_(tau, v, out);
}

void BilinearProblem::prox_dual(double sigma, std::span<const double> v,
                                std::span<double> out) const {
  prox_fstar_(sigma, v, out);
}

void BilinearProblem::grad_x(std::span<const double>, std::span<const double> y,
                             std::span<double> out) const {
  a_.adjoint(y, out);
}

void BilinearProblem::grad_y(std::span<const double> x, std::span<const double>,
                             std::span<double> out) const {
  a_.apply(x, out);
}

double BilinearProblem::value(std::span<const double> x,
                              std::span<const double> y) const {
  Vector ax(a_.rows);
  a_.apply(x, ax);
  return dot(ax, y);
}

LinearMap gradient_map(std::size_t n1, std::size_t n2, double h) {
  LinearMap m;
  m.rows = 2 * n1 * n2;
  m.cols = n1 * n2;
  m.apply = [=](std::span<const double> x, std::span<double> out) {
    potts::dh(n1, n2, h, x, out);
  };
  m.adjoint = [=](std::span<const double> y, std::span<double> out) {
    potts::dht(n1, n2, h, y, out);
  };
  return m;
}

BilinearProblem tv_huber_problem(std::size_t n1, std::size_t n2,
                                 std::vector<double> f, double alpha,
                                 double gamma) {
  require(f.size() == n1 * n2, ErrorCode::kConfig, "data size mismatch");
  require(alpha > 0 && gamma >= 0, ErrorCode::kConfig,
          "TV-Huber needs alpha > 0 and gamma >= 0");
  auto data = std::make_shared<const std::vector<double>>(std::move(f));
  ProxFn prox_g = [data, alpha](double tau, std::span<const double> v,
                                std::span<double> out) {
    const double r = tau / alpha;
    for (std::size_t k = 0; k < v.size(); ++k)
      out[k] = (v[k] + r * (*data)[k]) / (1 + r);
  };
  ProxFn prox_f = [gamma](double sigma, std::span<const double> v,
                          std::span<double> out) {
    const double s = 1 / (1 + gamma * sigma);
    for (std::size_t k = 0; k + 1 < v.size(); k += 2) {
      const double a = s * v[k], b = s * v[k + 1];
      const double nrm = std::hypot(a, b);
      const double c = nrm > 1 ? 1 / nrm : 1.0;
      out[k] = c * a;
      out[k + 1] = c * b;
    }
  };
  return BilinearProblem(gradient_map(n1, n2), std::move(prox_g),
                         std::move(prox_f));
}

double bilinear_reduction_check(const BilinearProblem& problem,
                                const StepTriple& triple, std::size_t n_iters,
                                const PrimalDualState& init) {
  require(triple.valid(), ErrorCode::kConfig, "invalid step triple");
  const LinearMap& a = problem.op();
  const StepSchedule sched = StepSchedule::fixed(triple);
  const double tau = triple.tau, sigma = triple.sigma, omega = triple.omega;

  PrimalDualState eng = init;
  Vector x = init.x, y = init.y;
  Vector aty(a.cols), xbar(a.cols), ax(a.rows), xn(a.cols), yn(a.rows);
  Vector tmpx(a.cols), tmpy(a.rows);
  double worst = 0;
  for (std::size_t i = 0; i < n_iters; ++i) {
    eng = step(problem, sched.next(i), eng);

    a.adjoint(y, aty);
    for (std::size_t k = 0; k < a.cols; ++k) tmpx[k] = x[k] - tau * aty[k];
    problem.prox_primal(tau, tmpx, xn);
    for (std::size_t k = 0; k < a.cols; ++k)
      xbar[k] = xn[k] + omega * (xn[k] - x[k]);
    a.apply(xbar, ax);
    for (std::size_t k = 0; k < a.rows; ++k) tmpy[k] = y[k] + sigma * ax[k];
    problem.prox_dual(sigma, tmpy, yn);
    x.swap(xn);
    y.swap(yn);

    worst = std::max({worst, rel_diff(eng.x, x), rel_diff(eng.y, y)});
  }
  return worst;
}

// ---------------------------------------------------------------------------

KappaSmall kappa_small(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 1 && x.size() <= 3,
          ErrorCode::kPrecondition, "kappa_small takes equal sizes 1..3");
  const std::size_t m = x.size();
  const double t = dot(x, y);
  KappaSmall k;
  k.val = 2 * t - t * t;
  k.gx.resize(m);
  k.gy.resize(m);
  k.gyx.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    k.gx[i] = 2 * y[i] * (1 - t);
    k.gy[i] = 2 * x[i] * (1 - t);
    for (std::size_t j = 0; j < m; ++j)
      k.gyx[i * m + j] = 2 * ((i == j ? 1 - t : 0.0) - x[i] * y[j]);
  }
  return k;
}

std::vector<double> kappa_xy_small(std::span<const double> x,
                                   std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 1 && x.size() <= 3,
          ErrorCode::kPrecondition, "kappa_xy_small takes equal sizes 1..3");
  const std::size_t m = x.size();
  const double t = dot(x, y);
  std::vector<double> out(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      out[i * m + j] = 2 * ((i == j ? 1 - t : 0.0) - y[i] * x[j]);
  return out;
}

C2Result c2_check(std::span<const double> x_hat,
                  std::span<const double> y_hat) {
  require(x_hat.size() == y_hat.size() && !x_hat.empty() && x_hat.size() <= 3,
          ErrorCode::kPrecondition, "c2_check takes equal sizes 1..3");
  const auto m = static_cast<Eigen::Index>(x_hat.size());
  Eigen::MatrixXd M = dot(x_hat, y_hat) * Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      M(i, j) += x_hat[static_cast<std::size_t>(i)] *
                 y_hat[static_cast<std::size_t>(j)];
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  C2Result r;
  r.eig_min = es.eigenvalues().minCoeff();
  r.eig_max = es.eigenvalues().maxCoeff();
  constexpr double tol = 1e-12;
  r.ok = r.eig_min >= -tol && r.eig_max <= 2 + tol;
  return r;
}

KappaConstants lemma_constants(const KappaPoint& point, double lambda_x,
                               double eps) {
  require(lambda_x > 0 && eps > 0, ErrorCode::kPrecondition,
          "lemma constants need lambda_x > 0 and eps > 0");
  const double ny = norm2(point.y_hat), nx = norm2(point.x_hat);
  const double Y = ny * ny, X = nx * nx;
  KappaConstants c;
  c.L_x_of_y = [](std::span<const double> y) { return 2 * dot(y, y); };
  c.L_y_of_x = [](std::span<const double> x) { return 2 * dot(x, x); };
  c.L_yx = 4 * (ny + point.rho_y);
  c.lambda_x = lambda_x;
  c.xi_x = 2 * (lambda_x + Y) * Y / lambda_x + eps;
  c.lambda_y = X + eps;
  c.xi_y = eps;
  // 2 theta_x |y| and the theta_y terms must fit inside eps for |y| up to
  // |y_hat| + 1 and |x'| up to |x_hat| + 1.
  c.theta_x = eps / (4 * (ny + 1));
  c.theta_y = eps / (24 * (nx + 1));
  return c;
}

void check_lemma_constraints(const KappaPoint& point, const KappaConstants& c) {
  const double Y = dot(point.y_hat, point.y_hat);
  const double X = dot(point.x_hat, point.x_hat);
  if (!(c.lambda_x * c.xi_x > 2 * (c.lambda_x + Y) * Y))
    fail(ErrorCode::kPrecondition,
         "kappa constants violate lambda_x xi_x > 2 (lambda_x + |y_hat|^2) "
         "|y_hat|^2");
  if (!(c.xi_y > 0))
    fail(ErrorCode::kPrecondition, "kappa constants violate xi_y > 0");
  if (!(c.lambda_y > X))
    fail(ErrorCode::kPrecondition,
         "kappa constants violate lambda_y > |x_hat|^2");
  if (!(c.theta_x > 0 && c.theta_y > 0))
    fail(ErrorCode::kPrecondition, "kappa constants need theta_x, theta_y > 0");
}

ThreePointReport three_point_sample(const KappaPoint& point,
                                    const KappaConstants& c,
                                    std::size_t n_samples, std::uint64_t seed) {
  require(c2_check(point.x_hat, point.y_hat).ok, ErrorCode::kPrecondition,
          "point fails 0 <= <x,y> I + x (x) y <= 2 I");
  check_lemma_constraints(point, c);
  require(point.rho_x > 0 && point.rho_y > 0, ErrorCode::kPrecondition,
          "ball radii must be positive");
  const std::size_t m = point.x_hat.size();
  const auto& xh = point.x_hat;
  const auto& yh = point.y_hat;
  const KappaSmall at_hat = kappa_small(xh, yh);

  std::mt19937_64 rng(seed);
  ThreePointReport r;
  r.samples = n_samples;
  Vector v(m);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Vector x = ball_sample(rng, xh, point.rho_x);
    const Vector xp = ball_sample(rng, xh, point.rho_x);
    const Vector y = ball_sample(rng, yh, point.rho_y);
    const Vector yp = ball_sample(rng, yh, point.rho_y);

    const KappaSmall k_xp_yh = kappa_small(xp, yh);
    const KappaSmall k_xh_y = kappa_small(xh, y);
    const KappaSmall k_x_y = kappa_small(x, y);
    const KappaSmall k_x_yp = kappa_small(x, yp);
    const KappaSmall k_xp_yp = kappa_small(xp, yp);

    double dxx = 0, dxxp = 0, dyy = 0, dyyp = 0;
    for (std::size_t i = 0; i < m; ++i) {
      dxx += (x[i] - xh[i]) * (x[i] - xh[i]);
      dxxp += (x[i] - xp[i]) * (x[i] - xp[i]);
      dyy += (y[i] - yh[i]) * (y[i] - yh[i]);
      dyyp += (y[i] - yp[i]) * (y[i] - yp[i]);
    }

    // Primal side.
    double lhs = c.xi_x * dxx;
    for (std::size_t i = 0; i < m; ++i)
      lhs += (k_xp_yh.gx[i] - at_hat.gx[i]) * (x[i] - xh[i]);
    Vector hx(m);
    for (std::size_t i = 0; i < m; ++i) hx[i] = xh[i] - x[i];
    const Vector jx = matvec(k_x_y.gyx, hx);
    for (std::size_t i = 0; i < m; ++i)
      v[i] = k_xh_y.gy[i] - k_x_y.gy[i] - jx[i];
    const double rhs_norm = c.theta_x * norm2(v);
    const double rhs = rhs_norm - 0.5 * c.lambda_x * dxxp;
    const double margin_a = lhs - rhs;
    const double scale_a =
        std::abs(lhs) + rhs_norm + 0.5 * c.lambda_x * dxxp + 1e-300;
    r.worst_margin_primal = std::min(r.worst_margin_primal, margin_a);
    if (margin_a < -1e-12 * scale_a) ++r.violations_primal;

    // Dual side.
    double lhs_b = c.xi_y * dyy;
    for (std::size_t i = 0; i < m; ++i)
      lhs_b += (k_x_y.gy[i] - k_x_yp.gy[i] + at_hat.gy[i] - k_xh_y.gy[i]) *
               (y[i] - yh[i]);
    Vector hy(m);
    for (std::size_t i = 0; i < m; ++i) hy[i] = yh[i] - yp[i];
    const Vector jy = matvec(kappa_xy_small(xp, yp), hy);
    for (std::size_t i = 0; i < m; ++i)
      v[i] = k_xp_yh.gx[i] - k_xp_yp.gx[i] - jy[i];
    const double rhs_norm_b = c.theta_y * norm2(v);
    const double rhs_b = rhs_norm_b - 0.5 * c.lambda_y * dyyp;
    const double margin_b = lhs_b - rhs_b;
    const double scale_b =
        std::abs(lhs_b) + rhs_norm_b + 0.5 * c.lambda_y * dyyp + 1e-300;
    r.worst_margin_dual = std::min(r.worst_margin_dual, margin_b);
    if (margin_b < -1e-12 * scale_b) ++r.violations_dual;
  }
  return r;
}

KappaPoint shrink_rho(KappaPoint point, const KappaConstants& c,
                      std::size_t n_samples, std::uint64_t seed,
                      int max_halvings, int safety_halvings) {
  double rho = 1;
  for (int k = 0; k <= max_halvings; ++k, rho *= 0.5) {
    point.rho_x = point.rho_y = rho;
    if (three_point_sample(point, c, n_samples, seed).violations() == 0) {
      point.rho_x = point.rho_y = std::ldexp(rho, -safety_halvings);
      return point;
    }
  }
  fail(ErrorCode::kInfeasible,
       "no neighborhood radius found for the three-point conditions");
}

LiftedConstants lift_constants(double R_K, double xi_z, double xi_y,
                               double lambda_z, double lambda_y,
                               double theta_z, double theta_y, double rho_x,
                               double rho_y, double L_yz, double norm_a) {
  require(norm_a > 0, ErrorCode::kPrecondition, "operator norm must be > 0");
  LiftedConstants l;
  l.R_K = R_K * norm_a;
  l.xi_x = norm_a * xi_z;
  l.xi_y = xi_y;
  l.lambda_x = norm_a * lambda_z;
  l.lambda_y = lambda_y;
  l.theta_x = theta_z;
  l.theta_y = theta_y / norm_a;
  l.rho_x = rho_x / norm_a;
  l.rho_y = rho_y;
  l.L_x_scale = norm_a * norm_a;
  l.L_yx = norm_a * norm_a * L_yz;
  return l;
}

// ---------------------------------------------------------------------------

RateFit rate_fit(std::span<const double> errors, std::size_t start,
                 std::size_t end) {
  require(start < end && end < errors.size(), ErrorCode::kPrecondition,
          "rate window must satisfy start < end < size");
  const std::size_t n = end - start + 1;
  double sx = 0, sy = 0;
  std::vector<double> ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double e = errors[start + k];
    require(e > 0 && std::isfinite(e), ErrorCode::kPrecondition,
            "rate fit needs positive errors in the window");
    ly[k] = std::log(e);
    sx += static_cast<double>(start + k);
    sy += ly[k];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = static_cast<double>(start + k) - mx, dy = ly[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  RateFit r;
  r.start = start;
  r.end = end;
  r.rate = std::exp(slope);
  const double ss_res = std::max(0.0, syy - slope * sxy);
  r.r_squared = syy > 0 ? std::clamp(1 - ss_res / syy, 0.0, 1.0) : 1.0;
  return r;
}

double dh_norm_sq(std::size_t n1, std::size_t n2, double h, std::size_t iters,
                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector v = random_unit(rng, n1 * n2, 1.0);
  Vector g(2 * n1 * n2), w(n1 * n2);
  double est = 0;
  for (std::size_t k = 0; k < iters; ++k) {
    potts::dh(n1, n2, h, v, g);
    est = dot(g, g) / dot(v, v);
    potts::dht(n1, n2, h, g, w);
    const double nrm = norm2(w);
    if (nrm == 0) break;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nrm;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Suite

namespace {

CheckLine bound_line(std::string name, double value, double tol,
                     std::string detail) {
  CheckLine l;
  l.name = std::move(name);
  l.margin = tol - value;
  l.passed = std::isfinite(value) && value <= tol;
  std::ostringstream os;
  os << detail << " = " << value << " (tol " << tol << ")";
  l.detail = os.str();
  return l;
}

CheckLine grad_potts(JumpNorm p, std::uint64_t seed) {
  potts::PottsConfig cfg;
  cfg.p = p;
  cfg.f = io::gen_synthetic(8, 8, seed, 3, 0.05);
  const potts::PottsProblem prob(cfg);
  std::mt19937_64 rng(seed + 17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector x(prob.primal_dim()), y(prob.dual_dim());
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  const FdResult r = fd_grad_check(prob, x, y, 1e-5, 100, seed);
  return bound_line(p == JumpNorm::kL1 ? "grad-potts-p1" : "grad-potts-pinf",
                    r.max_rel_err, 1e-6, "max relative error");
}

CheckLine grad_nash(std::uint64_t seed) {
  const auto man = nash::manufacture(31, nash::ManufacturedProfile::standard());
  const nash::NashProblem prob(man.config);
  std::mt19937_64 rng(seed + 29);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Vector x(prob.primal_dim()), y(prob.dual_dim()), tmp(prob.primal_dim());
  for (auto& v : tmp) v = u(rng);
  prob.project(tmp, x);
  for (auto& v : tmp) v = u(rng);
  prob.project(tmp, y);
  const FdResult r = fd_grad_check(prob, x, y, 1e-5, 100, seed);
  return bound_line("grad-nash", r.max_rel_err, 1e-6, "max relative error");
}

CheckLine adjoint(std::uint64_t seed) {
  const std::size_t n1 = 16, n2 = 13;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector x(n1 * n2), y(2 * n1 * n2), dx(2 * n1 * n2), dty(n1 * n2);
  for (auto& v : x) v = g(rng);
  for (auto& v : y) v = g(rng);
  potts::dh(n1, n2, 0.5, x, dx);
  potts::dht(n1, n2, 0.5, y, dty);
  const double err =
      std::abs(dot(dx, y) - dot(x, dty)) / (norm2(dx) * norm2(y));
  return bound_line("adjoint", err, 1e-12, "|<Dx,y> - <x,D^T y>| / |Dx||y|");
}

CheckLine bilinear(std::uint64_t seed) {
  const potts::Image f = io::gen_synthetic(16, 16, seed, 4, 0.05);
  const BilinearProblem prob = tv_huber_problem(16, 16, f.values, 0.5, 1e-2);
  const double s = 0.99 / std::sqrt(8.0);
  const PrimalDualState init =
      PrimalDualState::from(f.values, Vector(prob.dual_dim(), 0.0));
  const double d = bilinear_reduction_check(prob, {s, s, 1.0}, 100, init);
  return bound_line("bilinear-reduction", d, 1e-12,
                    "max relative iterate difference over 100 iterations");
}

CheckLine kappa_derivatives(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0;
  const double h = 1e-6;
  for (std::size_t m = 1; m <= 3; ++m) {
    for (int trial = 0; trial < 20; ++trial) {
      Vector x(m), y(m);
      for (auto& v : x) v = u(rng);
      for (auto& v : y) v = u(rng);
      const KappaSmall k = kappa_small(x, y);
      const auto xy = kappa_xy_small(x, y);
      for (std::size_t j = 0; j < m; ++j) {
        Vector xp = x, xm = x, yp = y, ym = y;
        xp[j] += h;
        xm[j] -= h;
        yp[j] += h;
        ym[j] -= h;
        const KappaSmall kxp = kappa_small(xp, y), kxm = kappa_small(xm, y);
        const KappaSmall kyp = kappa_small(x, yp), kym = kappa_small(x, ym);
        const double scale = 1 + std::abs(k.gx[j]) + std::abs(k.gy[j]);
        worst = std::max(worst,
                         std::abs((kxp.val - kxm.val) / (2 * h) - k.gx[j]) / scale);
        worst = std::max(worst,
                         std::abs((kyp.val - kym.val) / (2 * h) - k.gy[j]) / scale);
        for (std::size_t i = 0; i < m; ++i) {
          // d(kappa_y)_i / dx_j and d(kappa_x)_i / dy_j.
          const double fd_yx = (kxp.gy[i] - kxm.gy[i]) / (2 * h);
          const double fd_xy = (kyp.gx[i] - kym.gx[i]) / (2 * h);
          worst = std::max(worst, std::abs(fd_yx - k.gyx[i * m + j]) /
                                      (1 + std::abs(k.gyx[i * m + j])));
          worst = std::max(worst, std::abs(fd_xy - xy[i * m + j]) /
                                      (1 + std::abs(xy[i * m + j])));
          // kappa_xy is the transpose of kappa_yx.
          worst = std::max(worst, std::abs(xy[i * m + j] - k.gyx[j * m + i]));
        }
      }
    }
  }
  return bound_line("kappa-derivatives", worst, 1e-9,
                    "max derivative mismatch");
}

CheckLine c2_reading() {
  const double zero[1] = {0.0}, one[1] = {1.0}, a15[1] = {1.5};
  const bool ok0 = c2_check(zero, zero).ok;
  const bool ok1 = c2_check(one, one).ok;
  const bool bad = !c2_check(a15, one).ok;
  // Rescaling x -> c x, y -> y / c leaves the matrix unchanged.
  const double xh[2] = {0.3, -0.4}, yh[2] = {0.6, -0.8};
  const double xs[2] = {0.9, -1.2}, ys[2] = {0.2, -0.8 / 3};
  const C2Result r1 = c2_check(xh, yh), r2 = c2_check(xs, ys);
  const double drift =
      std::abs(r1.eig_min - r2.eig_min) + std::abs(r1.eig_max - r2.eig_max);
  CheckLine l;
  l.name = "c2-reading";
  l.passed = ok0 && ok1 && bad && r1.ok == r2.ok && drift <= 1e-12;
  l.margin = l.passed ? 2 - r1.eig_max : -1;
  l.detail = "symmetric-part eigenvalues in [0, 2]; scalar cases 0, 1, 1.5 and "
             "rescaling invariance";
  return l;
}

CheckLine three_point(std::size_t m, std::uint64_t seed, std::size_t samples) {
  KappaPoint pt;
  if (m == 1) {
    pt.x_hat = {0.5};
    pt.y_hat = {2 * 0.5 / (1 + 2 * 0.25)};  // dual optimality with gamma = 1
  } else {
    pt.x_hat = {0.3, -0.4};
    pt.y_hat = {0.6, -0.8};  // dual optimality with gamma = 0.5
  }
  const KappaConstants c = lemma_constants(pt, 1.0, 1e-2);
  const KappaPoint shrunk = shrink_rho(pt, c, 10000, seed);
  const ThreePointReport r =
      three_point_sample(shrunk, c, samples, seed + 1000003);
  CheckLine l;
  l.name = "three-point-m" + std::to_string(m);
  l.passed = r.violations() == 0;
  l.margin = std::min(r.worst_margin_primal, r.worst_margin_dual);
  std::ostringstream os;
  os << "rho = " << shrunk.rho_x << ", " << r.samples << " samples, "
     << r.violations() << " violations";
  l.detail = os.str();
  return l;
}

CheckLine poisson_eigenpair() {
  double worst = 0;
  for (std::size_t n : {63u, 127u}) {
    const nash::PoissonSolver solver{nash::Grid(n)};
    const double h = solver.grid().h();
    for (auto [j, k] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 5}, {n, 2}}) {
      // Reduce the integer phase mod 2(n + 1) so the sines are exact to
      // rounding; unreduced arguments inject noise that A^-1 amplifies.
      auto mode = [&](std::size_t f, std::size_t idx) {
        const std::size_t r = (f * (idx + 1)) % (2 * (n + 1));
        return std::sin(std::numbers::pi * static_cast<double>(r) * h);
      };
      Vector v(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < n; ++c) v[i * n + c] = mode(j, c) * mode(k, i);
      const double lam = solver.eigenvalue(j, k);
      const Vector av = solver.apply(v);
      const Vector sv = solver.solve(v);
      Vector lv(v.size()), vl(v.size());
      for (std::size_t p = 0; p < v.size(); ++p) {
        lv[p] = lam * v[p];
        vl[p] = v[p] / lam;
      }
      worst = std::max({worst, rel_diff(av, lv), rel_diff(sv, vl)});
    }
  }
  return bound_line("poisson-eigenpair", worst, 1e-12,
                    "max relative eigen-residual, n in {63, 127}");
}

CheckLine poisson_roundtrip(std::uint64_t seed) {
  double worst = 0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {63u, 127u}) {
    const nash::PoissonSolver solver{nash::Grid(n)};
    Vector w(n * n);
    for (auto& v : w) v = u(rng);
    worst = std::max(worst, rel_diff(solver.solve(solver.apply(w)), w));
  }
  return bound_line("poisson-roundtrip", worst, 1e-12,
                    "relative error of solve(apply(w)), n in {63, 127}");
}

CheckLine dh_norm(std::uint64_t seed) {
  const double est = dh_norm_sq(32, 32, 1.0, 2000, seed);
  CheckLine l = bound_line("dh-norm", est, 8 + 1e-9,
                           "power-iteration ||D_h||^2 at h = 1");
  return l;
}

}  // namespace

std::vector<std::string> suite_check_names() {
  return {"grad-potts-p1",      "grad-potts-pinf",   "grad-nash",
          "adjoint",            "bilinear-reduction", "kappa-derivatives",
          "c2-reading",         "three-point-m1",    "three-point-m2",
          "poisson-eigenpair",  "poisson-roundtrip", "dh-norm"};
}

CheckReport run_suite(const SuiteOptions& opts) {
  const auto names = suite_check_names();
  if (opts.only &&
      std::find(names.begin(), names.end(), *opts.only) == names.end())
    fail(ErrorCode::kConfig, "unknown check '" + *opts.only + "'");
  const std::uint64_t s = opts.seed;
  CheckReport rep;
  auto run = [&](const std::string& name, auto&& fn) {
    if (opts.only && *opts.only != name) return;
    try {
      rep.lines.push_back(fn());
    } catch (const std::exception& e) {
      rep.lines.push_back({name, false, -kInf, e.what()});
    }
  };
  run("grad-potts-p1", [&] { return grad_potts(JumpNorm::kL1, s); });
  run("grad-potts-pinf", [&] { return grad_potts(JumpNorm::kLinf, s); });
  run("grad-nash", [&] { return grad_nash(s); });
  run("adjoint", [&] { return adjoint(s); });
  run("bilinear-reduction", [&] { return bilinear(s); });
  run("kappa-derivatives", [&] { return kappa_derivatives(s); });
  run("c2-reading", [&] { return c2_reading(); });
  run("three-point-m1",
      [&] { return three_point(1, s, opts.three_point_samples); });
  run("three-point-m2",
      [&] { return three_point(2, s, opts.three_point_samples); });
  run("poisson-eigenpair", [&] { return poisson_eigenpair(); });
  run("poisson-roundtrip", [&] { return poisson_roundtrip(s); });
  run("dh-norm", [&] { return dh_norm(s); });
  return rep;
}

}  // namespace gpdps::verify
