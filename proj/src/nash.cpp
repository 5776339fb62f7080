#include "gpdps/nash.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gpdps/error.hpp"

namespace gpdps::nash {

namespace {

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    fail(ErrorCode::kConfig, std::string(what) + ": expected " +
                                 std::to_string(want) + " entries, got " +
                                 std::to_string(got));
}

double node(std::size_t idx, double h) {
  return static_cast<double>(idx + 1) * h;
}

}  // namespace

Mask lower_half_mask(const Grid& g) {
  Mask m(g.size(), 0);
  for (std::size_t i = 0; i < g.n; ++i)
    if (node(i, g.h()) < 0.5)
      std::fill_n(m.begin() + static_cast<std::ptrdiff_t>(i * g.n), g.n, 1);
  return m;
}

Mask upper_half_mask(const Grid& g) {
  Mask m(g.size(), 0);
  for (std::size_t i = 0; i < g.n; ++i)
    if (node(i, g.h()) > 0.5)
      std::fill_n(m.begin() + static_cast<std::ptrdiff_t>(i * g.n), g.n, 1);
  return m;
}

NashConfig NashConfig::defaults(std::size_t n) {
  Grid g(n);
  NashConfig c;
  c.n = n;
  c.mask1 = lower_half_mask(g);
  c.mask2 = upper_half_mask(g);
  c.z1.assign(g.size(), 0.0);
  c.z2.assign(g.size(), 0.0);
  c.f.assign(g.size(), 0.0);
  return c;
}

// ---------------------------------------------------------------------------

NashProblem::NashProblem(NashConfig cfg)
    : cfg_(std::move(cfg)), solver_(Grid(cfg_.n)) {
  const std::size_t m = grid().size();
  check_size(cfg_.mask1.size(), m, "mask1");
  check_size(cfg_.mask2.size(), m, "mask2");
  check_size(cfg_.z1.size(), m, "z1");
  check_size(cfg_.z2.size(), m, "z2");
  check_size(cfg_.f.size(), m, "f");
  require(cfg_.a < cfg_.b, ErrorCode::kConfig, "box bounds need a < b");
  require(cfg_.alpha1 > 0 && cfg_.alpha2 > 0, ErrorCode::kConfig,
          "control costs alpha_k must be positive");
}

std::span<const double> NashProblem::half(std::span<const double> v,
                                          int k) const {
  const std::size_t m = grid().size();
  return v.subspan(k == 1 ? 0 : m, m);
}

std::span<double> NashProblem::half(std::span<double> v, int k) const {
  const std::size_t m = grid().size();
  return v.subspan(k == 1 ? 0 : m, m);
}

double NashProblem::metric_weight() const {
  const double h = grid().h();
  return h * h;
}

double NashProblem::inner(std::span<const double> a,
                          std::span<const double> b) const {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return metric_weight() * s;
}

Field NashProblem::state(std::span<const double> u1,
                         std::span<const double> u2) const {
  const std::size_t m = grid().size();
  check_size(u1.size(), m, "control u1");
  check_size(u2.size(), m, "control u2");
  Field rhs(m);
  for (std::size_t i = 0; i < m; ++i)
    rhs[i] = (cfg_.mask1[i] ? u1[i] : 0.0) + (cfg_.mask2[i] ? u2[i] : 0.0) +
             cfg_.f[i];
  return solver_.solve(rhs);
}

double NashProblem::payout(int k, std::span<const double> u1,
                           std::span<const double> u2) const {
  require(k == 1 || k == 2, ErrorCode::kPrecondition, "player index is 1 or 2");
  const Field y = state(u1, u2);
  const Field& z = k == 1 ? cfg_.z1 : cfg_.z2;
  const Mask& mask = k == 1 ? cfg_.mask1 : cfg_.mask2;
  const auto uk = k == 1 ? u1 : u2;
  const double alpha = k == 1 ? cfg_.alpha1 : cfg_.alpha2;
  double track = 0, cost = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - z[i];
    track += d * d;
    if (mask[i]) cost += uk[i] * uk[i];
  }
  return 0.5 * metric_weight() * (track + alpha * cost);
}

double NashProblem::psi(std::span<const double> u,
                        std::span<const double> v) const {
  check_size(u.size(), primal_dim(), "psi u");
  check_size(v.size(), dual_dim(), "psi v");
  const auto u1 = half(u, 1), u2 = half(u, 2);
  const auto v1 = half(v, 1), v2 = half(v, 2);
  return payout(1, u1, u2) - payout(1, v1, u2) + payout(2, u1, u2) -
         payout(2, u1, v2);
}

double NashProblem::value(std::span<const double> u,
                          std::span<const double> v) const {
  return psi(u, v);
}

void NashProblem::project(std::span<const double> w,
                          std::span<double> out) const {
  check_size(w.size(), primal_dim(), "projection input");
  check_size(out.size(), primal_dim(), "projection output");
  const std::size_t m = grid().size();
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = cfg_.mask1[i] ? std::clamp(w[i], cfg_.a, cfg_.b) : 0.0;
    out[m + i] = cfg_.mask2[i] ? std::clamp(w[m + i], cfg_.a, cfg_.b) : 0.0;
  }
}

void NashProblem::prox_primal(double, std::span<const double> v,
                              std::span<double> out) const {
  project(v, out);
}

void NashProblem::prox_dual(double, std::span<const double> v,
                            std::span<double> out) const {
  project(v, out);
}

void NashProblem::grad_x(std::span<const double> u, std::span<const double> v,
                         std::span<double> out) const {
  check_size(u.size(), primal_dim(), "K_u input u");
  check_size(v.size(), dual_dim(), "K_u input v");
  check_size(out.size(), primal_dim(), "K_u output");
  const std::size_t m = grid().size();
  const auto u1 = half(u, 1), u2 = half(u, 2);
  const auto v1 = half(v, 1), v2 = half(v, 2);

  const Field s_uu = state(u1, u2);
  const Field s_u1v2 = state(u1, v2);
  const Field s_v1u2 = state(v1, u2);

  Field rhs(m);
  for (std::size_t i = 0; i < m; ++i)
    rhs[i] = 2 * s_uu[i] - s_u1v2[i] - cfg_.z1[i];
  const Field p1 = solver_.solve(rhs);
  for (std::size_t i = 0; i < m; ++i)
    rhs[i] = 2 * s_uu[i] - s_v1u2[i] - cfg_.z2[i];
  const Field p2 = solver_.solve(rhs);

  auto o1 = half(out, 1), o2 = half(out, 2);
  for (std::size_t i = 0; i < m; ++i) {
    o1[i] = cfg_.mask1[i] ? p1[i] + cfg_.alpha1 * u1[i] : 0.0;
    o2[i] = cfg_.mask2[i] ? p2[i] + cfg_.alpha2 * u2[i] : 0.0;
  }
}

void NashProblem::grad_y(std::span<const double> u, std::span<const double> v,
                         std::span<double> out) const {
  check_size(u.size(), primal_dim(), "K_v input u");
  check_size(v.size(), dual_dim(), "K_v input v");
  check_size(out.size(), dual_dim(), "K_v output");
  const std::size_t m = grid().size();
  const auto u1 = half(u, 1), u2 = half(u, 2);
  const auto v1 = half(v, 1), v2 = half(v, 2);

  const Field s_v1u2 = state(v1, u2);
  const Field s_u1v2 = state(u1, v2);

  Field rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = cfg_.z1[i] - s_v1u2[i];
  const Field q1 = solver_.solve(rhs);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = cfg_.z2[i] - s_u1v2[i];
  const Field q2 = solver_.solve(rhs);

  auto o1 = half(out, 1), o2 = half(out, 2);
  for (std::size_t i = 0; i < m; ++i) {
    o1[i] = cfg_.mask1[i] ? q1[i] - cfg_.alpha1 * v1[i] : 0.0;
    o2[i] = cfg_.mask2[i] ? q2[i] - cfg_.alpha2 * v2[i] : 0.0;
  }
}

// ---------------------------------------------------------------------------

ManufacturedProfile ManufacturedProfile::standard() {
  using std::numbers::pi;
  ManufacturedProfile p;
  p.w1 = [](double x, double y) {
    return 0.4 * std::sin(pi * x) * std::sin(2 * pi * y);
  };
  p.w2 = [](double x, double y) {
    return 0.4 * std::sin(2 * pi * x) * std::sin(pi * y);
  };
  p.y_s = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
  return p;
}

ManufacturedProfile ManufacturedProfile::zero() {
  ManufacturedProfile p;
  p.w1 = p.w2 = p.y_s = [](double, double) { return 0.0; };
  return p;
}

PrimalDualState Manufactured::solution() const {
  return PrimalDualState::from(u_star, u_star);
}

Manufactured manufacture(std::size_t n, const ManufacturedProfile& profile,
                         double a, double b, double alpha1, double alpha2) {
  require(a < 0 && b > 0, ErrorCode::kConfig,
          "manufactured equilibrium needs a < 0 < b");
  require(profile.w1 && profile.w2 && profile.y_s, ErrorCode::kConfig,
          "manufactured profile is incomplete");
  Manufactured out;
  out.config = NashConfig::defaults(n);
  NashConfig& cfg = out.config;
  cfg.a = a;
  cfg.b = b;
  cfg.alpha1 = alpha1;
  cfg.alpha2 = alpha2;

  const Grid g(n);
  const std::size_t m = g.size();
  const double h = g.h();
  const double bound = 0.8 * std::min(std::abs(a), std::abs(b));

  Field w1(m), w2(m), ys(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = node(j, h), y = node(i, h);
      const std::size_t p = i * n + j;
      w1[p] = profile.w1(x, y);
      w2[p] = profile.w2(x, y);
      ys[p] = profile.y_s(x, y);
    }
  }

  out.u_star.assign(2 * m, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    if (cfg.mask1[p]) out.u_star[p] = w1[p];
    if (cfg.mask2[p]) out.u_star[m + p] = w2[p];
  }
  for (double v : out.u_star) {
    if (std::abs(v) > bound)
      fail(ErrorCode::kConfig,
           "manufactured controls must satisfy |w_k| <= 0.8 min(|a|, b) = " +
               std::to_string(bound));
  }

  const PoissonSolver solver(g);
  const Field a_ys = solver.apply(ys);
  Field p1(m), p2(m);
  for (std::size_t p = 0; p < m; ++p) {
    p1[p] = -alpha1 * w1[p];
    p2[p] = -alpha2 * w2[p];
  }
  const Field a_p1 = solver.apply(p1);
  const Field a_p2 = solver.apply(p2);
  for (std::size_t p = 0; p < m; ++p) {
    cfg.f[p] = a_ys[p] - out.u_star[p] - out.u_star[m + p];
    cfg.z1[p] = ys[p] - a_p1[p];
    cfg.z2[p] = ys[p] - a_p2[p];
  }
  out.y_star = std::move(ys);
  return out;
}

}  // namespace gpdps::nash
