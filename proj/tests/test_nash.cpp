#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gpdps/core.hpp"
#include "gpdps/error.hpp"
#include "gpdps/nash.hpp"
#include "gpdps/poisson.hpp"
#include "gpdps/verify.hpp"

using namespace gpdps;
using namespace gpdps::nash;

namespace {

double max_abs(std::span<const double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

NashConfig zero_config(std::size_t n) {
  auto c = NashConfig::defaults(n);
  const Grid g(n);
  c.z1.assign(g.size(), 0);
  c.z2.assign(g.size(), 0);
  c.f.assign(g.size(), 0);
  return c;
}

}  // namespace

TEST_CASE("Poisson: zero right-hand side") {
  PoissonSolver s(Grid(15));
  const auto out = s.solve(std::vector<double>(225, 0.0));
  CHECK(max_abs(out) == 0);
}

TEST_CASE("Poisson: apply-then-solve round trip") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {31u, 63u, 127u}) {
    PoissonSolver s{Grid(n)};
    const auto w = random_vec(n * n, rng);
    const auto back = s.solve(s.apply(w));
    CHECK(max_diff(back, w) <= 1e-12 * max_abs(w));
  }
}

TEST_CASE("Poisson: first eigenpair in closed form") {
  for (std::size_t n : {63u, 127u}) {
    const Grid g(n);
    PoissonSolver s(g);
    const double h = g.h();
    const double lam = (2 - 2 * std::cos(std::numbers::pi * h)) * 2 / (h * h);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        v[i * n + j] = std::sin(std::numbers::pi * (i + 1) * h) *
                       std::sin(std::numbers::pi * (j + 1) * h);
    std::vector<double> rhs(v);
    for (auto& x : rhs) x *= lam;
    CHECK(max_diff(s.solve(rhs), v) <= 1e-12);
    CHECK(s.eigenvalue(1, 1) == doctest::Approx(lam).epsilon(1e-13));
  }
}

TEST_CASE("Poisson: solve counter") {
  PoissonSolver s(Grid(7));
  std::vector<double> r(49, 1.0);
  s.solve(r);
  s.solve(r);
  s.apply(r);
  CHECK(s.solve_count() == 2);
  s.reset_solve_count();
  CHECK(s.solve_count() == 0);
}

TEST_CASE("masks split the square") {
  const Grid g(9);
  const auto lo = lower_half_mask(g), hi = upper_half_mask(g);
  std::size_t n_lo = 0, n_hi = 0, both = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    n_lo += lo[i];
    n_hi += hi[i];
    both += lo[i] && hi[i];
  }
  CHECK(both == 0);
  // Odd n puts the middle row on y = 1/2, which neither open half contains.
  CHECK(n_lo == n_hi);
  CHECK(n_lo + n_hi == g.size() - g.n);
}

TEST_CASE("state map: homogeneous controls and linearity") {
  std::mt19937_64 rng(4);
  const std::size_t n = 31;
  const Grid g(n);
  auto cfg = NashConfig::defaults(n);
  cfg.f = random_vec(g.size(), rng);
  NashProblem prob(cfg);
  const std::vector<double> zero(g.size(), 0.0);
  CHECK(max_diff(prob.state(zero, zero), prob.poisson().solve(cfg.f)) <= 1e-14);

  const auto u1 = random_vec(g.size(), rng), u2 = random_vec(g.size(), rng);
  auto d = random_vec(g.size(), rng);
  auto u1d = u1;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] *= cfg.mask1[i];
    u1d[i] += d[i];
  }
  const auto s0 = prob.state(u1, u2), s1 = prob.state(u1d, u2);
  std::vector<double> diff(g.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = s1[i] - s0[i];
  CHECK(max_diff(diff, prob.poisson().solve(d)) <= 1e-12 * (1 + max_abs(diff)));
}

TEST_CASE("payout: zero controls") {
  std::mt19937_64 rng(6);
  const std::size_t n = 15;
  auto cfg = zero_config(n);
  const std::vector<double> zero(Grid(n).size(), 0.0);
  {
    NashProblem prob(cfg);
    CHECK(prob.payout(1, zero, zero) == 0);
  }
  cfg.z1 = random_vec(zero.size(), rng);
  NashProblem prob(cfg);
  CHECK(prob.payout(1, zero, zero) ==
        doctest::Approx(0.5 * prob.inner(cfg.z1, cfg.z1)));
}

TEST_CASE("psi: vanishes on the diagonal and matches four payouts") {
  std::mt19937_64 rng(7);
  auto m = manufacture(15, ManufacturedProfile::standard());
  NashProblem prob(m.config);
  const std::size_t half = Grid(15).size();
  auto u = random_vec(2 * half, rng), v = random_vec(2 * half, rng);
  prob.project(u, u);
  prob.project(v, v);
  CHECK(prob.psi(u, u) == doctest::Approx(0).scale(1));

  std::span<const double> u1(u.data(), half), u2(u.data() + half, half);
  std::span<const double> v1(v.data(), half), v2(v.data() + half, half);
  const double direct = prob.payout(1, u1, u2) - prob.payout(1, v1, u2) +
                        prob.payout(2, u1, u2) - prob.payout(2, u1, v2);
  CHECK(prob.psi(u, v) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(prob.value(u, v) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("gradients: zero data") {
  NashProblem prob(zero_config(15));
  const std::vector<double> z(2 * 225, 0.0);
  std::vector<double> gx(z.size()), gy(z.size());
  prob.grad_x(z, z, gx);
  prob.grad_y(z, z, gy);
  CHECK(max_abs(gx) == 0);
  CHECK(max_abs(gy) == 0);
}

TEST_CASE("gradients: finite differences of psi") {
  auto m = manufacture(31, ManufacturedProfile::standard());
  NashProblem prob(m.config);
  std::mt19937_64 rng(12);
  auto u = random_vec(prob.primal_dim(), rng), v = random_vec(prob.dual_dim(), rng);
  prob.project(u, u);
  prob.project(v, v);
  const auto r = verify::fd_grad_check(prob, u, v, 1e-5, 20, 3);
  CHECK(r.max_rel_err <= 1e-6);
}

TEST_CASE("projection: clamp on the mask, zero off it") {
  auto cfg = NashConfig::defaults(11);
  NashProblem prob(cfg);
  const std::size_t half = Grid(11).size();
  std::vector<double> ones(2 * half, 1.0), out(2 * half), again(2 * half);
  prob.project(ones, out);
  for (std::size_t i = 0; i < half; ++i) {
    CHECK(out[i] == (cfg.mask1[i] ? 0.5 : 0.0));
    CHECK(out[half + i] == (cfg.mask2[i] ? 0.5 : 0.0));
  }
  std::vector<double> inside(2 * half, 0.1);
  prob.project(inside, out);
  for (std::size_t i = 0; i < half; ++i) CHECK(out[i] == (cfg.mask1[i] ? 0.1 : 0.0));

  std::mt19937_64 rng(2);
  auto w = random_vec(2 * half, rng);
  prob.project(w, out);
  prob.project(out, again);
  CHECK(again == out);

  std::vector<double> po(2 * half), pd(2 * half);
  prob.prox_primal(0.3, w, po);
  prob.prox_dual(7.0, w, pd);
  CHECK(po == out);
  CHECK(pd == out);
}

TEST_CASE("manufactured data: zero profile gives the trivial equilibrium") {
  auto m = manufacture(15, ManufacturedProfile::zero());
  CHECK(max_abs(m.config.f) == 0);
  CHECK(max_abs(m.config.z1) == 0);
  CHECK(max_abs(m.config.z2) == 0);
  CHECK(max_abs(m.u_star) == 0);
}

TEST_CASE("manufactured data: standard profile is an equilibrium") {
  for (std::size_t n : {63u, 127u}) {
    auto m = manufacture(n, ManufacturedProfile::standard());
    CHECK(max_abs(m.u_star) <= 0.4 + 1e-15);
    NashProblem prob(m.config);
    const std::size_t half = Grid(n).size();
    std::span<const double> u1(m.u_star.data(), half),
        u2(m.u_star.data() + half, half);
    CHECK(max_diff(prob.state(u1, u2), m.y_star) <= 1e-12);
    CHECK(std::abs(prob.psi(m.u_star, m.u_star)) <= 1e-12);

    std::vector<double> gx(m.u_star.size()), gy(m.u_star.size());
    prob.grad_x(m.u_star, m.u_star, gx);
    prob.grad_y(m.u_star, m.u_star, gy);
    const double scale = 1 + max_abs(m.config.f);
    CHECK(max_abs(gx) + max_abs(gy) <= 1e-11 * scale);
  }
}

TEST_CASE("manufactured data: profile outside the box is rejected") {
  auto p = ManufacturedProfile::standard();
  CHECK_THROWS_AS(manufacture(15, p, -0.3, 0.3), Error);
}

TEST_CASE("solve: monotone convergence with nine solves per iteration") {
  auto m = manufacture(63, ManufacturedProfile::standard());
  NashProblem prob(m.config);
  prob.reset_poisson_solves();
  SolveOptions o;
  o.max_iters = 10;
  o.reference = m.solution();
  const auto r = solve(prob, StepSchedule::fixed({0.99, 1.0, 1.0}), o,
                       PrimalDualState::from(Vector(prob.primal_dim(), 0.0),
                                             Vector(prob.dual_dim(), 0.0)));
  CHECK(prob.poisson_solves() == 90);
  // Strict decrease until the tolerance; afterwards only rounding noise.
  bool reached = false;
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    const double cur = *r.log[i].dist_to_ref;
    if (reached) {
      CHECK(cur <= 1e-12);
    } else if (i > 0) {
      CHECK(cur < *r.log[i - 1].dist_to_ref);
    }
    reached = reached || cur <= 1e-12;
  }
  CHECK(reached);
}
