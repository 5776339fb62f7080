#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gpdps/error.hpp"
#include "gpdps/verify.hpp"

using namespace gpdps;
using namespace gpdps::verify;

TEST_CASE("fd_grad_check: exact on a bilinear coupling") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  const std::size_t n = 6;
  std::vector<double> f(n * n);
  for (auto& v : f) v = d(rng);
  const auto prob = tv_huber_problem(n, n, f, 1, 0.1);
  std::vector<double> x(n * n), y(2 * n * n);
  for (auto& v : x) v = d(rng);
  for (auto& v : y) v = d(rng);
  CHECK(fd_grad_check(prob, x, y, 1e-6, 50, 2).max_rel_err <= 1e-9);
}

TEST_CASE("bilinear reduction: identical trajectories") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  const std::size_t n = 16;
  std::vector<double> f(n * n);
  for (auto& v : f) v = u(rng);
  const auto prob = tv_huber_problem(n, n, f, 1, 0.05);
  auto init = PrimalDualState::from(f, std::vector<double>(2 * n * n, 0.0));
  const double s = 0.99 / std::sqrt(8.0);
  CHECK(bilinear_reduction_check(prob, {s, s, 1.0}, 100, init) <= 1e-12);
  CHECK(bilinear_reduction_check(prob, {s, s, 0.5}, 100, init) <= 1e-12);
}

TEST_CASE("kappa_small: closed-form values") {
  const std::vector<double> z{0, 0};
  const auto k0 = kappa_small(z, z);
  CHECK(k0.val == 0);
  CHECK(k0.gx == std::vector<double>{0, 0});
  CHECK(k0.gy == std::vector<double>{0, 0});
  CHECK(k0.gyx == std::vector<double>{2, 0, 0, 2});

  const std::vector<double> one{1};
  const auto k1 = kappa_small(one, one);
  CHECK(k1.val == doctest::Approx(1));
  CHECK(k1.gx[0] == doctest::Approx(0));
  CHECK(k1.gyx[0] == doctest::Approx(-2));
}

TEST_CASE("kappa_small: mixed derivatives are transposes") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;
  for (std::size_t m : {1u, 2u, 3u}) {
    std::vector<double> x(m), y(m);
    for (auto& v : x) v = d(rng);
    for (auto& v : y) v = d(rng);
    const auto yx = kappa_small(x, y).gyx;
    const auto xy = kappa_xy_small(x, y);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        CHECK(yx[i * m + j] == doctest::Approx(xy[j * m + i]));
  }
}

TEST_CASE("c2_check") {
  const std::vector<double> z{0, 0};
  const auto r0 = c2_check(z, z);
  CHECK(r0.ok);
  CHECK(r0.eig_min == 0);
  CHECK(r0.eig_max == 0);

  const std::vector<double> a{1}, b{1}, c{1.5};
  const auto r1 = c2_check(a, b);
  CHECK(r1.ok);
  CHECK(r1.eig_max == doctest::Approx(2));
  const auto r2 = c2_check(a, c);
  CHECK_FALSE(r2.ok);
  CHECK(r2.eig_max == doctest::Approx(3));
}

TEST_CASE("three-point sampler: origin with xi_x = 2 theta_x rho_y") {
  KappaPoint pt{{0.0}, {0.0}, 0.5, 0.5};
  KappaConstants c;
  c.L_x_of_y = [](std::span<const double>) { return 0.0; };
  c.L_y_of_x = [](std::span<const double>) { return 0.0; };
  c.theta_x = 0.2;
  c.theta_y = 1;
  c.xi_x = 2 * c.theta_x * pt.rho_y;
  c.xi_y = 1;
  c.lambda_x = 1;
  c.lambda_y = 1;
  c.L_yx = 2;
  const auto rep = three_point_sample(pt, c, 20000, 9);
  CHECK(rep.violations_primal == 0);

  c.theta_x *= 10;
  const auto bad = three_point_sample(pt, c, 20000, 9);
  CHECK(bad.violations_primal > 0);
  CHECK(bad.worst_margin_primal < 0);
}

TEST_CASE("three-point sampler: lemma constants at dual-optimal points") {
  const std::vector<KappaPoint> pts{{{0.5}, {2.0 / 3}, 1, 1},
                                    {{0.3, -0.4}, {0.6, -0.8}, 1, 1}};
  for (const auto& p0 : pts) {
    REQUIRE(c2_check(p0.x_hat, p0.y_hat).ok);
    const auto c = lemma_constants(p0, 1.0, 1e-2);
    CHECK_NOTHROW(check_lemma_constraints(p0, c));
    const auto p = shrink_rho(p0, c, 10000, 1);
    CHECK(p.rho_x > 0);
    const auto rep = three_point_sample(p, c, 20000, 2);
    CHECK(rep.violations() == 0);
  }
}

TEST_CASE("lemma constraints: violation is named") {
  KappaPoint p{{0.5}, {2.0 / 3}, 1, 1};
  auto c = lemma_constants(p, 1.0, 1e-2);
  c.lambda_y = 0.1;
  CHECK_THROWS_AS(check_lemma_constraints(p, c), Error);
}

TEST_CASE("lifted constants follow the operator-norm substitutions") {
  const double L = std::sqrt(8.0);
  const auto l = lift_constants(2, 3, 5, 7, 11, 13, 17, 19, 23, 29, L);
  CHECK(l.R_K == doctest::Approx(2 * L));
  CHECK(l.lambda_x == doctest::Approx(7 * L));
  CHECK(l.xi_x == doctest::Approx(3 * L));
  CHECK(l.theta_y == doctest::Approx(17 / L));
  CHECK(l.theta_x == 13);
  CHECK(l.rho_x == doctest::Approx(19 / L));
  CHECK(l.rho_y == 23);
  CHECK(l.xi_y == 5);
  CHECK(l.lambda_y == 11);
  CHECK(l.L_yx == doctest::Approx(8 * 29));
}

TEST_CASE("rate_fit: geometric, sublinear and noisy inputs") {
  std::vector<double> g(200);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 3 * std::pow(0.9, i);
  const auto r = rate_fit(g, 10, 150);
  CHECK(std::abs(r.rate - 0.9) <= 1e-10);
  CHECK(r.r_squared == doctest::Approx(1).epsilon(1e-12));

  std::vector<double> s(100001);
  for (std::size_t i = 1; i < s.size(); ++i) s[i] = 1.0 / static_cast<double>(i);
  s[0] = 2;
  const double r1 = rate_fit(s, 10, 100).rate;
  const double r2 = rate_fit(s, 1000, 10000).rate;
  const double r3 = rate_fit(s, 10000, 100000).rate;
  CHECK(r1 < r2);
  CHECK(r2 < r3);
  CHECK(r3 > 0.9999);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  std::vector<double> noisy(2000);
  for (std::size_t i = 0; i < noisy.size(); ++i)
    noisy[i] = std::pow(0.99, i) * (1 + u(rng));
  CHECK(std::abs(rate_fit(noisy, 100, 1999).rate - 0.99) <= 0.005 * 0.99);

  CHECK_THROWS_AS(rate_fit(g, 5, 5), Error);
  g[20] = 0;
  CHECK_THROWS_AS(rate_fit(g, 10, 30), Error);
}

TEST_CASE("dh norm estimate stays below 8/h^2") {
  CHECK(dh_norm_sq(32, 32, 1.0, 2000, 1) <= 8 + 1e-9);
  CHECK(dh_norm_sq(16, 16, 0.5, 2000, 1) <= 32 + 1e-9);
  CHECK(dh_norm_sq(32, 32, 1.0, 2000, 1) > 7.5);
}

TEST_CASE("suite: default run and filter") {
  SuiteOptions o;
  const auto rep = run_suite(o);
  CHECK(rep.lines.size() >= 8);
  CHECK(rep.lines.size() == suite_check_names().size());
  for (const auto& l : rep.lines) CHECK_MESSAGE(l.passed, l.name << ": " << l.detail);

  o.only = "adjoint";
  const auto one = run_suite(o);
  REQUIRE(one.lines.size() == 1);
  CHECK(one.lines[0].name == "adjoint");

  o.only = "no-such-check";
  CHECK_THROWS_AS(run_suite(o), Error);
}

TEST_CASE("suite: seeds change draws but not the verdict") {
  for (std::uint64_t seed = 2; seed <= 11; ++seed) {
    SuiteOptions o;
    o.seed = seed;
    o.three_point_samples = 20000;
    const auto rep = run_suite(o);
    CHECK_MESSAGE(rep.all_passed(), "seed " << seed);
  }
}
