// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. The first argument is the path of the gpdps_cli binary.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gpdps/core.hpp"
#include "gpdps/error.hpp"
#include "gpdps/image_io.hpp"
#include "gpdps/nash.hpp"
#include "gpdps/potts.hpp"
#include "gpdps/schedules.hpp"
#include "gpdps/verify.hpp"

using namespace gpdps;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

std::string runtime_note(double secs, double limit) {
  return fmt(secs, 3) + " s (limit " + fmt(limit) + " s)";
}

// ---------------------------------------------------------------------------

Outcome bilinear_reduction() {
  const auto t0 = Clock::now();
  const std::size_t n = 16;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> f(n * n);
  for (auto& v : f) v = u(rng);
  const auto prob = verify::tv_huber_problem(n, n, f, 1, 0.05);
  const auto init = PrimalDualState::from(f, Vector(2 * n * n, 0.0));
  const double s = 0.99 / std::sqrt(8.0);
  const double d = verify::bilinear_reduction_check(prob, {s, s, 1.0}, 100, init);
  const double secs = seconds_since(t0);
  return {d <= 1e-12 && secs < 1,
          "max relative iterate difference " + fmt(d) + " (tol 1e-12), " +
              runtime_note(secs, 1)};
}

Outcome gradient_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0, 0.5);
  double worst_potts = 0;
  for (JumpNorm p : {JumpNorm::kL1, JumpNorm::kLinf}) {
    potts::Image f(8, 8);
    for (auto& v : f.values) v = nd(rng);
    potts::PottsProblem prob({1, 1e-3, p, f, 1});
    Vector x(64), y(128);
    for (auto& v : x) v = nd(rng);
    for (auto& v : y) v = nd(rng);
    worst_potts = std::max(
        worst_potts, verify::fd_grad_check(prob, x, y, 1e-5, 100, 3).max_rel_err);
  }
  const auto m = nash::manufacture(31, nash::ManufacturedProfile::standard());
  nash::NashProblem nash_prob(m.config);
  std::uniform_real_distribution<double> ud(-1, 1);
  Vector u(nash_prob.primal_dim()), v(nash_prob.dual_dim());
  for (auto& w : u) w = ud(rng);
  for (auto& w : v) w = ud(rng);
  nash_prob.project(u, u);
  nash_prob.project(v, v);
  const double nash_err = verify::fd_grad_check(nash_prob, u, v, 1e-5, 100, 4).max_rel_err;
  const double secs = seconds_since(t0);
  return {worst_potts <= 1e-6 && nash_err <= 1e-6 && secs < 30,
          "Potts 8x8 (p = 1, inf) " + fmt(worst_potts) + ", Nash n = 31 " +
              fmt(nash_err) + " (tol 1e-6, h = 1e-5, 100 directions), " +
              runtime_note(secs, 30)};
}

struct NashRun {
  std::vector<double> dist;
  std::uint64_t solves = 0;
  double secs = 0;
};

std::map<std::size_t, NashRun>& nash_runs() {
  static std::map<std::size_t, NashRun> runs = [] {
    std::map<std::size_t, NashRun> out;
    for (std::size_t n : {63u, 127u, 255u}) {
      const auto t0 = Clock::now();
      const auto m = nash::manufacture(n, nash::ManufacturedProfile::standard());
      nash::NashProblem prob(m.config);
      prob.reset_poisson_solves();
      SolveOptions o;
      o.max_iters = 10;
      o.reference = m.solution();
      const auto r = solve(prob, StepSchedule::fixed({0.99, 1.0, 1.0}), o,
                           PrimalDualState::from(Vector(prob.primal_dim(), 0.0),
                                                 Vector(prob.dual_dim(), 0.0)));
      NashRun run;
      for (const auto& rec : r.log) run.dist.push_back(*rec.dist_to_ref);
      run.solves = prob.poisson_solves();
      run.secs = seconds_since(t0);
      out[n] = run;
    }
    return out;
  }();
  return runs;
}

Outcome nash_mesh_independence() {
  const auto& runs = nash_runs();
  bool ok = true;
  std::ostringstream os;
  std::vector<std::size_t> hits;
  for (const auto& [n, run] : runs) {
    // Strict decrease until the tolerance; afterwards only rounding noise.
    std::size_t hit = 0;
    bool monotone = true;
    for (std::size_t i = 0; i < run.dist.size(); ++i) {
      if (hit) {
        monotone = monotone && run.dist[i] <= 1e-12;
      } else {
        if (i > 0) monotone = monotone && run.dist[i] < run.dist[i - 1];
        if (run.dist[i] <= 1e-12) hit = i + 1;
      }
    }
    ok = ok && monotone && hit > 0;
    hits.push_back(hit);
    os << "n = " << n << ": <= 1e-12 at iteration " << hit
       << (monotone ? ", monotone" : ", NOT monotone") << "; ";
  }
  const auto [lo, hi] = std::minmax_element(hits.begin(), hits.end());
  ok = ok && *hi - *lo <= 1;
  const double secs255 = runs.at(255).secs;
  ok = ok && secs255 < 120;
  os << "row-1 spread "
     << fmt(std::abs(runs.at(63).dist[0] - runs.at(255).dist[0]) / runs.at(255).dist[0])
     << ", n = 255 " << runtime_note(secs255, 120);
  return {ok, os.str()};
}

Outcome nash_pde_budget() {
  bool ok = true;
  std::ostringstream os;
  for (const auto& [n, run] : nash_runs()) {
    const double per = static_cast<double>(run.solves) / 10.0;
    ok = ok && run.solves == 90;
    os << "n = " << n << ": " << per << " solves/iteration; ";
  }
  os << "required 9";
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// Potts runs shared by the rate and objective criteria.

struct PottsRun {
  StepTriple triple;
  std::vector<double> err_sq;     // index i holds iteration i + 1
  std::vector<double> objective;  // same indexing
  double secs = 0;
};

const PottsRun& potts_run(JumpNorm p) {
  static std::map<JumpNorm, PottsRun> cache;
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;

  const auto t0 = Clock::now();
  const auto f = io::gen_synthetic(64, 64, 42);
  potts::PottsProblem prob({1, 1e-3, p, f, 1});
  PottsStepParams sp;
  sp.p = p;
  PottsRun run;
  run.triple = potts_steps(sp).triple;
  const auto sched = StepSchedule::fixed(run.triple);

  SolveOptions ro;
  ro.max_iters = 20000;
  ro.log_stride = ro.max_iters;
  const auto ref = solve(prob, sched, ro, prob.initial_state());

  SolveOptions o;
  o.max_iters = 10000;
  o.reference = ref.state;
  o.record_objective = true;
  const auto r = solve(prob, sched, o, prob.initial_state());
  for (const auto& rec : r.log) {
    run.err_sq.push_back(*rec.dist_to_ref * *rec.dist_to_ref);
    run.objective.push_back(*rec.objective);
  }
  run.secs = seconds_since(t0);
  return cache[p] = run;
}

Outcome potts_linear_rate() {
  bool ok = true;
  std::ostringstream os;
  double secs = 0;
  for (JumpNorm p : {JumpNorm::kL1, JumpNorm::kLinf}) {
    const auto& run = potts_run(p);
    secs += run.secs;
    // Window [5e3, 1e4] in iteration numbers.
    const auto fit = verify::rate_fit(run.err_sq, 4999, 9999);
    const bool good = fit.rate <= run.triple.omega + 0.002 && fit.r_squared >= 0.95;
    ok = ok && good;
    os << "p = " << to_string(p) << ": rate " << fmt(fit.rate, 9) << " (bound "
       << fmt(run.triple.omega + 0.002, 9) << "), r^2 " << fmt(fit.r_squared, 4)
       << " (min 0.95)" << (good ? "" : " FAIL") << "; ";
  }
  ok = ok && secs < 120;
  os << runtime_note(secs, 120);
  return {ok, os.str()};
}

Outcome potts_objective_pattern() {
  bool ok = true;
  std::ostringstream os;
  for (JumpNorm p : {JumpNorm::kL1, JumpNorm::kLinf}) {
    const auto& run = potts_run(p);
    const double o3 = run.objective[999], o4 = run.objective[9999];
    const double rel = std::abs(o3 - o4) / std::abs(o4);
    const double drop = run.err_sq[999] / run.err_sq[9999];
    const bool good = rel <= 0.01 && drop >= 10;
    ok = ok && good;
    os << "p = " << to_string(p) << ": objective " << fmt(o3) << " at 1e3 vs "
       << fmt(o4) << " at 1e4 (rel " << fmt(rel, 3) << ", max 0.01), error drop "
       << fmt(drop, 3) << "x (min 10)" << (good ? "" : " FAIL") << "; ";
  }
  std::string d = os.str();
  d.resize(d.size() - 2);
  return {ok, d};
}

// ---------------------------------------------------------------------------

std::map<std::string, double> cli_header(const std::string& cli,
                                         const std::string& args) {
  const std::string csv = "acceptance_preset.csv";
  const std::string cmd = "\"" + cli + "\" potts --synthetic 16 16 1 --iters 1 " +
                          args + " --csv " + csv + " --out acceptance_preset.pgm";
  std::map<std::string, double> out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return out;
  std::array<char, 256> buf;
  while (fgets(buf.data(), buf.size(), pipe.get())) {
  }
  pipe.reset();
  FILE* fh = std::fopen(csv.c_str(), "r");
  if (!fh) return out;
  while (std::fgets(buf.data(), buf.size(), fh)) {
    std::string line(buf.data());
    if (line.rfind("# ", 0) != 0) break;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(2, eq - 2);
    if (key == "tau" || key == "sigma" || key == "omega")
      out[key] = std::strtod(line.c_str() + eq + 3, nullptr);
  }
  std::fclose(fh);
  std::remove(csv.c_str());
  std::remove("acceptance_preset.pgm");
  return out;
}

Outcome step_presets(const std::string& cli) {
  bool ok = true;
  std::ostringstream os;
  const auto h1 = cli_header(cli, "--preset paper-p1");
  const auto hi = cli_header(cli, "--p inf --preset paper-pinf");
  auto echo = [&](const std::map<std::string, double>& h, double tau, double sigma,
                  double omega) {
    return h.size() == 3 && h.at("tau") == tau && h.at("sigma") == sigma &&
           h.at("omega") == omega;
  };
  const bool e1 = echo(h1, 1.04085e-3, 1.04085, 0.99480);
  const bool ei = echo(hi, 5.51922e-4, 0.551922, 0.99724);
  ok = e1 && ei;
  os << "preset echo p1 " << (e1 ? "exact" : "MISMATCH") << ", pinf "
     << (ei ? "exact" : "MISMATCH");

  double worst_ratio = 0, worst_omega = 0;
  bool strict = true;
  std::size_t n = 0;
  for (JumpNorm p : {JumpNorm::kL1, JumpNorm::kLinf}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      for (double gamma : {1e-4, 1e-3, 1e-2, 1e-1}) {
        for (double range : {0.5, 1.0}) {
          PottsStepParams sp;
          sp.p = p;
          sp.alpha = alpha;
          sp.gamma = gamma;
          sp.dynamic_range = range;
          PottsSteps r;
          try {
            r = potts_steps(sp);
          } catch (const Error& e) {
            if (e.code() == ErrorCode::kInfeasible) continue;
            throw;
          }
          ++n;
          const auto& t = r.triple;
          const auto& c = r.constants;
          worst_ratio = std::max(
              worst_ratio, std::abs(t.sigma * c.gamma_tilde_Fstar - t.tau * c.gamma_tilde_G) /
                               (t.tau * c.gamma_tilde_G));
          worst_omega =
              std::max(worst_omega, std::abs(t.omega * (1 + 2 * c.gamma_tilde_G * t.tau) - 1));
          const double L = sp.L, my2 = r.m_y * r.m_y;
          strict = strict &&
                   c.xi_x * c.lambda_x > 2 * L * L * (c.lambda_x / L + my2) * my2 &&
                   c.lambda_y > r.m_x * r.m_x;
        }
      }
    }
  }
  ok = ok && n > 0 && worst_ratio <= 1e-12 && worst_omega <= 1e-12 && strict;
  os << "; calculator over " << n << " feasible settings: sigma ratio err "
     << fmt(worst_ratio, 3) << ", omega err " << fmt(worst_omega, 3)
     << " (tol 1e-12), strict constant inequalities "
     << (strict ? "hold" : "VIOLATED");
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------

Outcome schedule_checker() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 2.0), frac(0.2, 0.99);
  std::map<std::string, std::size_t> passes;
  std::size_t violations_ok = 0, violations_total = 0;

  auto base_constants = [&] {
    ProblemConstants c;
    c.R_K = u(rng);
    c.L_yx = u(rng);
    c.lambda_x = u(rng);
    c.lambda_y = u(rng);
    c.xi_x = u(rng);
    c.xi_y = u(rng);
    c.rho_x = 0.1 * u(rng);
    c.rho_y = 0.1 * u(rng);
    c.delta = 0.05 + 0.4 * frac(rng);
    c.mu = c.delta + (1 - c.delta) * 0.5 * frac(rng);
    return c;
  };
  // Growth and three-point moduli chosen after the triples so the remaining
  // hypotheses hold with a random slack.
  auto finish = [&](ProblemConstants& c, const std::vector<StepTriple>& ts) {
    double w_lo = 1, w_hi = 0;
    for (const auto& t : ts) {
      w_lo = std::min(w_lo, t.omega);
      w_hi = std::max(w_hi, t.omega);
    }
    c.gamma_G = (c.gamma_tilde_G + c.xi_x) * (1 + frac(rng));
    c.gamma_Fstar = (c.gamma_tilde_Fstar + c.xi_y) * (1 + frac(rng));
    c.theta_x = c.rho_y / w_lo * (1 + frac(rng));
    c.theta_y = c.rho_x * w_hi * (1 + frac(rng));
  };
  auto tau_violation = [&](const ProblemConstants& c, StepTriple t) {
    const double bound = c.delta / (c.lambda_x + c.L_yx * (t.omega + 2) * c.rho_y);
    t.tau = 1.1 * bound;
    t.sigma = 1e-9;
    const std::vector<StepTriple> ts{t};
    const auto rep = check_testing_conditions(c, ts, t.omega, t.omega);
    const auto* l = rep.find("tau-bound");
    return l && !l->passed && std::abs(l->margin + 0.1) <= 1e-9;
  };
  auto sigma_violation = [&](const ProblemConstants& c, StepTriple t) {
    const double smax =
        1 / (c.R_K * c.R_K * t.tau / (1 - c.mu) + c.lambda_y / t.omega);
    t.sigma = 1.1 * smax;
    const std::vector<StepTriple> ts{t};
    const auto rep = check_testing_conditions(c, ts, t.omega, t.omega);
    const auto* l = rep.find("sigma-bound");
    return l && !l->passed && std::abs(l->margin + 0.1) <= 1e-9;
  };

  for (int trial = 0; trial < 100; ++trial) {
    {
      auto c = base_constants();
      const auto b = bound_constant(c);
      const double tau = frac(rng) * b.tau_sup;
      const auto ts =
          StepSchedule::constant(tau, frac(rng) * b.sigma_max(tau)).first(100);
      finish(c, ts);
      passes["constant"] += check_testing_conditions(c, ts).all_passed();
      violations_ok += tau_violation(c, ts[0]) + sigma_violation(c, ts[0]);
      violations_total += 2;
    }
    {
      auto c = base_constants();
      c.gamma_tilde_G = u(rng);
      const auto b = bound_accelerated(c);
      const double tau0 = frac(rng) * b.tau0_sup;
      const double sigma = frac(rng) * std::min(bound_constant(c).sigma_max(tau0),
                                                b.sigma_tau0_max / tau0);
      const auto ts =
          StepSchedule::accelerated(tau0, sigma, c.gamma_tilde_G).first(100);
      finish(c, ts);
      passes["accelerated"] += check_testing_conditions(c, ts).all_passed();
      violations_ok += tau_violation(c, ts[0]) + sigma_violation(c, ts[0]);
      violations_total += 2;
    }
    {
      auto c = base_constants();
      c.gamma_tilde_G = u(rng);
      c.gamma_tilde_Fstar = u(rng);
      const auto ts = StepSchedule::linear_rate(frac(rng) * bound_linear(c),
                                                c.gamma_tilde_G, c.gamma_tilde_Fstar)
                          .first(100);
      finish(c, ts);
      passes["linear"] += check_testing_conditions(c, ts).all_passed();
      violations_ok += tau_violation(c, ts[0]) + sigma_violation(c, ts[0]);
      violations_total += 2;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = passes["constant"] == 100 && passes["accelerated"] == 100 &&
                  passes["linear"] == 100 && violations_ok == violations_total &&
                  secs < 5;
  std::ostringstream os;
  os << "passing trials: constant " << passes["constant"] << "/100, accelerated "
     << passes["accelerated"] << "/100, linear " << passes["linear"]
     << "/100; 10% violations flagged with margin -0.1: " << violations_ok << "/"
     << violations_total << ", " << runtime_note(secs, 5);
  return {ok, os.str()};
}

Outcome three_point() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream os;
  const std::vector<verify::KappaPoint> pts{{{0.5}, {2.0 / 3}, 1, 1},
                                            {{0.3, -0.4}, {0.6, -0.8}, 1, 1}};
  for (const auto& p0 : pts) {
    const auto c2 = verify::c2_check(p0.x_hat, p0.y_hat);
    const auto c = verify::lemma_constants(p0, 1.0, 1e-2);
    verify::check_lemma_constraints(p0, c);
    const auto p = verify::shrink_rho(p0, c, 10000, 1);
    const auto rep = verify::three_point_sample(p, c, 100000, 2);
    const bool good = c2.ok && rep.violations() == 0;
    ok = ok && good;
    os << "m = " << p0.x_hat.size() << ": c2 " << (c2.ok ? "ok" : "FAIL")
       << ", rho " << p.rho_x << ", " << rep.violations() << " violations in "
       << rep.samples << "; ";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 30;
  os << runtime_note(secs, 30);
  return {ok, os.str()};
}

Outcome poisson() {
  verify::SuiteOptions o;
  bool ok = true;
  std::ostringstream os;
  for (const char* name : {"poisson-eigenpair", "poisson-roundtrip", "dh-norm"}) {
    o.only = name;
    const auto rep = verify::run_suite(o);
    const auto& l = rep.lines.at(0);
    ok = ok && l.passed;
    os << name << " " << (l.passed ? "ok" : "FAIL") << " (" << l.detail
       << ", margin " << fmt(l.margin, 3) << "); ";
  }
  std::string d = os.str();
  d.resize(d.size() - 2);
  return {ok, d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "gpdps_cli";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"bilinear reduction", bilinear_reduction},
      {"gradient oracles", gradient_oracles},
      {"Nash mesh independence", nash_mesh_independence},
      {"Nash PDE budget", nash_pde_budget},
      {"Potts linear rate", potts_linear_rate},
      {"Potts objective pattern", potts_objective_pattern},
      {"step presets", [&] { return step_presets(cli); }},
      {"schedule checker", schedule_checker},
      {"three-point sampler", three_point},
      {"Poisson solver", poisson},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.passed;
    std::cout << (r.passed ? "PASS" : "FAIL") << "  " << i + 1 << ". "
              << criteria[i].first << ": " << r.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
