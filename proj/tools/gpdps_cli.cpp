// Command-line experiment runner. Links only the C interface.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gpdps/gpdps.h"

namespace {

// ---------------------------------------------------------------------------
// Small utilities

struct RunError : std::runtime_error {
  RunError(int code, const std::string& what)
      : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

void check(gpdps_status st, const std::string& context) {
  if (st != GPDPS_OK)
    throw RunError(1, context + ": " + gpdps_last_error());
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ImagePtr = std::unique_ptr<gpdps_image, Deleter<gpdps_image, gpdps_image_free>>;
using ProblemPtr =
    std::unique_ptr<gpdps_problem, Deleter<gpdps_problem, gpdps_problem_free>>;
using SchedulePtr =
    std::unique_ptr<gpdps_schedule, Deleter<gpdps_schedule, gpdps_schedule_free>>;
using ResultPtr = std::unique_ptr<gpdps_result, Deleter<gpdps_result, gpdps_result_free>>;
using ReportPtr = std::unique_ptr<gpdps_report, Deleter<gpdps_report, gpdps_report_free>>;

std::string g_config_path;

/// Comment header shared by every output file: version, command and the
/// effective configuration, followed by any derived values.
struct Header {
  std::vector<std::string> lines;

  Header(const std::string& command, const CLI::App& sub) {
    lines.push_back(std::string("gpdps ") + gpdps_version());
    lines.push_back("command = " + command);
    if (!g_config_path.empty()) lines.push_back("config = " + g_config_path);
    std::istringstream cfg(sub.config_to_str(true, false));
    for (std::string l; std::getline(cfg, l);) {
      const auto eq = l.find('=');
      if (eq == std::string::npos) continue;
      add(l.substr(0, eq), l.substr(eq + 1));
    }
  }
  void add(const std::string& key, const std::string& value) {
    lines.push_back(key + " = " + value);
  }
  void write(std::ostream& os) const {
    for (const auto& l : lines) os << "# " << l << '\n';
  }
};

void write_pgm(const gpdps_image* img, const std::string& path,
               const Header& h, int bits, bool ascii) {
  std::vector<const char*> c;
  for (const auto& l : h.lines) c.push_back(l.c_str());
  check(gpdps_image_write_pgm(img, path.c_str(), ascii ? 0 : 1, bits, c.data(),
                              c.size()),
        "writing " + path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw RunError(1, "cannot write " + path);
  return os;
}

gpdps_jump_norm parse_p(const std::string& s) {
  if (s == "1") return GPDPS_P1;
  if (s == "inf" || s == "infinity") return GPDPS_PINF;
  throw RunError(2, "--p must be 1 or inf, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// Config file: `key = value` lines, `#` comments. Keys are long option names
// without dashes. Values only fill options absent from the command line.

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::optional<std::string> path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" && i + 1 < args.size()) {
      path = args[++i];
      continue;
    }
    if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
      continue;
    }
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
    out.push_back(a);
  }
  if (!path) return out;
  g_config_path = *path;

  std::ifstream in(*path);
  if (!in) throw RunError(2, "cannot read config file " + *path);
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw RunError(2, *path + ":" + std::to_string(lineno) +
                            ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty() || given.count(key)) continue;
    if (value == "true") {
      out.push_back("--" + key);
    } else if (value != "false") {
      out.push_back("--" + key);
      // Multi-value options (e.g. synthetic) are whitespace separated.
      std::istringstream vs(value);
      for (std::string tok; vs >> tok;) out.push_back(tok);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// potts

struct PottsArgs {
  std::string input;
  std::vector<std::uint64_t> synthetic;
  std::size_t shapes = 6;
  double noise = 0.05;
  double alpha = 1;
  double gamma = 1e-3;
  std::string p = "1";
  std::string preset;
  double range = 1;
  double gamma_bar = 10;
  double delta = 0.1;
  std::optional<double> mu, gtilde_g, gtilde_f;
  std::size_t iters = 1000;
  std::size_t reference_iters = 0;
  std::size_t log_stride = 1;
  std::string out = "potts_out.pgm";
  std::string reference_out = "potts_ref.pgm";
  std::string csv = "potts_log.csv";
  int bits = 16;
  bool ascii = false;
};

void add_potts(CLI::App& app, PottsArgs& a) {
  auto* in = app.add_option("--input", a.input, "Noisy input image (PGM)");
  auto* syn = app.add_option("--synthetic", a.synthetic,
                             "Generate the input: n1 n2 seed")
                  ->expected(3);
  in->excludes(syn);
  app.add_option("--shapes", a.shapes, "Shapes in a synthetic image");
  app.add_option("--noise", a.noise, "Noise level of a synthetic image");
  app.add_option("--alpha", a.alpha, "Data fidelity weight");
  app.add_option("--gamma", a.gamma, "Huber parameter");
  app.add_option("--p", a.p, "Jump norm: 1 or inf");
  app.add_option("--preset", a.preset, "Named step preset (paper-p1, paper-pinf)");
  app.add_option("--range", a.range, "Dynamic range of the image");
  app.add_option("--gamma-bar", a.gamma_bar, "Over-approximation of gamma");
  app.add_option("--delta", a.delta, "Step-bound delta");
  app.add_option("--mu", a.mu, "Step-bound mu (default: delta)");
  app.add_option("--gtilde-g", a.gtilde_g, "Primal acceleration factor");
  app.add_option("--gtilde-f", a.gtilde_f, "Dual acceleration factor");
  app.add_option("--iters", a.iters, "Iterations")->check(CLI::PositiveNumber);
  app.add_option("--reference-iters", a.reference_iters,
                 "Iterations of the reference run (0 disables)");
  app.add_option("--log-stride", a.log_stride, "CSV row every k iterations")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", a.out, "Denoised image");
  app.add_option("--reference-out", a.reference_out, "Reference image");
  app.add_option("--csv", a.csv, "Iteration log");
  app.add_option("--bits", a.bits, "PGM bit depth")->check(CLI::IsMember({8, 16}));
  app.add_flag("--ascii", a.ascii, "Write P2 instead of P5");
}

int run_potts(const CLI::App& sub, const PottsArgs& a) {
  if (a.input.empty() && a.synthetic.empty())
    throw RunError(2, "potts needs --input or --synthetic n1 n2 seed");
  const gpdps_jump_norm p = parse_p(a.p);

  gpdps_image* raw = nullptr;
  if (!a.input.empty()) {
    check(gpdps_image_read_pgm(a.input.c_str(), &raw), "reading input");
  } else {
    check(gpdps_image_synthetic(a.synthetic[0], a.synthetic[1], a.synthetic[2],
                                a.shapes, a.noise, &raw),
          "generating input");
  }
  ImagePtr img(raw);

  gpdps_triple t{};
  std::string step_source;
  if (!a.preset.empty()) {
    check(gpdps_potts_preset(a.preset.c_str(), &t), "preset");
    step_source = "preset " + a.preset;
  } else {
    gpdps_potts_step_params sp;
    gpdps_potts_step_params_default(&sp);
    sp.alpha = a.alpha;
    sp.gamma = a.gamma;
    sp.p = p;
    sp.dynamic_range = a.range;
    sp.gamma_bar = a.gamma_bar;
    sp.delta = a.delta;
    if (a.mu) sp.mu = *a.mu;
    if (a.gtilde_g) sp.gamma_tilde_G = *a.gtilde_g;
    if (a.gtilde_f) sp.gamma_tilde_Fstar = *a.gtilde_f;
    gpdps_potts_steps_result r;
    check(gpdps_potts_steps(&sp, &r), "step calculation");
    t = r.triple;
    step_source = "calculator";
  }

  Header header("potts", sub);
  header.add("steps", step_source);
  header.add("tau", num(t.tau));
  header.add("sigma", num(t.sigma));
  header.add("omega", num(t.omega));
  std::cout << "tau = " << num(t.tau) << "\nsigma = " << num(t.sigma)
            << "\nomega = " << num(t.omega) << '\n';

  gpdps_problem* rp = nullptr;
  check(gpdps_problem_potts(img.get(), a.alpha, a.gamma, p, 1.0, &rp), "problem");
  ProblemPtr prob(rp);
  gpdps_schedule* rs = nullptr;
  check(gpdps_schedule_fixed(t, &rs), "schedule");
  SchedulePtr sched(rs);

  ResultPtr ref;
  if (a.reference_iters > 0) {
    gpdps_solve_options o;
    gpdps_solve_options_default(&o);
    o.max_iters = a.reference_iters;
    o.log_stride = a.reference_iters;
    gpdps_result* rr = nullptr;
    check(gpdps_solve(prob.get(), sched.get(), &o, nullptr, nullptr, nullptr,
                      nullptr, &rr),
          "reference run");
    ref.reset(rr);
  }

  gpdps_solve_options o;
  gpdps_solve_options_default(&o);
  o.max_iters = a.iters;
  o.log_stride = a.log_stride;
  o.record_objective = 1;
  const double* ref_x = ref ? gpdps_result_x(ref.get(), nullptr) : nullptr;
  const double* ref_y = ref ? gpdps_result_y(ref.get(), nullptr) : nullptr;
  gpdps_result* rr = nullptr;
  check(gpdps_solve(prob.get(), sched.get(), &o, nullptr, nullptr, ref_x, ref_y,
                    &rr),
        "solve");
  ResultPtr res(rr);

  std::size_t n1 = 0, n2 = 0;
  gpdps_image_dims(img.get(), &n1, &n2);
  auto save = [&](const gpdps_result* r, const std::string& path) {
    gpdps_image* out = nullptr;
    check(gpdps_image_create(n1, n2, gpdps_result_x(r, nullptr), &out), "image");
    ImagePtr guard(out);
    write_pgm(out, path, header, a.bits, a.ascii);
  };
  save(res.get(), a.out);
  if (ref) save(ref.get(), a.reference_out);

  auto os = open_out(a.csv);
  header.write(os);
  os << "iter,objective,step_norm,err_sq_vs_reference\n";
  const std::size_t n = gpdps_result_log_size(res.get());
  gpdps_iteration_record rec;
  for (std::size_t i = 0; i < n; ++i) {
    check(gpdps_result_record(res.get(), i, &rec), "log");
    os << rec.iter << ',' << (rec.has_objective ? num(rec.objective) : "") << ','
       << num(rec.step_norm) << ','
       << (rec.has_dist ? num(rec.dist_to_ref * rec.dist_to_ref) : "") << '\n';
  }
  if (n > 0) {
    std::cout << "iterations = " << rec.iter << "\nobjective = "
              << num(rec.objective) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// nash

struct NashArgs {
  std::vector<std::size_t> sizes{63, 127};
  std::size_t iters = 10;
  double tau = 0.99;
  double sigma = 1.0;
  double omega = 1.0;
  double a = -0.5;
  double b = 0.5;
  double alpha1 = 1;
  double alpha2 = 1;
  std::string csv = "nash.csv";
};

void add_nash(CLI::App& app, NashArgs& a) {
  app.add_option("--sizes", a.sizes, "Interior grid sizes, comma separated")
      ->delimiter(',')
      ->check(CLI::Range(std::size_t{2}, std::size_t{4095}));
  app.add_option("--iters", a.iters, "Iterations")->check(CLI::PositiveNumber);
  app.add_option("--tau", a.tau, "Primal step");
  app.add_option("--sigma", a.sigma, "Dual step");
  app.add_option("--omega", a.omega, "Over-relaxation");
  app.add_option("--a", a.a, "Lower control bound");
  app.add_option("--b", a.b, "Upper control bound");
  app.add_option("--alpha1", a.alpha1, "Control cost of player 1");
  app.add_option("--alpha2", a.alpha2, "Control cost of player 2");
  app.add_option("--csv", a.csv, "Distance table");
}

int run_nash(const CLI::App& sub, const NashArgs& a) {
  if (a.sizes.empty()) throw RunError(2, "--sizes must not be empty");
  gpdps_schedule* rs = nullptr;
  check(gpdps_schedule_fixed({a.tau, a.sigma, a.omega}, &rs), "schedule");
  SchedulePtr sched(rs);

  std::vector<std::vector<double>> cols;
  for (std::size_t n : a.sizes) {
    gpdps_problem* rp = nullptr;
    check(gpdps_problem_nash_manufactured(n, a.a, a.b, a.alpha1, a.alpha2, &rp),
          "manufactured data for n = " + std::to_string(n));
    ProblemPtr prob(rp);
    std::size_t nx = 0, ny = 0;
    gpdps_problem_dims(prob.get(), &nx, &ny);
    std::vector<double> sx(nx), sy(ny);
    check(gpdps_problem_solution(prob.get(), sx.data(), sy.data()), "solution");
    check(gpdps_problem_reset_poisson_solves(prob.get()), "counter");

    gpdps_solve_options o;
    gpdps_solve_options_default(&o);
    o.max_iters = a.iters;
    o.log_stride = 1;
    gpdps_result* rr = nullptr;
    check(gpdps_solve(prob.get(), sched.get(), &o, nullptr, nullptr, sx.data(),
                      sy.data(), &rr),
          "solve for n = " + std::to_string(n));
    ResultPtr res(rr);
    std::uint64_t solves = 0;
    check(gpdps_problem_poisson_solves(prob.get(), &solves), "counter");

    std::vector<double> col;
    gpdps_iteration_record rec;
    for (std::size_t i = 0; i < gpdps_result_log_size(res.get()); ++i) {
      check(gpdps_result_record(res.get(), i, &rec), "log");
      col.push_back(rec.dist_to_ref);
    }
    std::cout << "n = " << n << ": final distance " << num(col.back())
              << ", Poisson solves per iteration "
              << num(static_cast<double>(solves) / static_cast<double>(a.iters))
              << '\n';
    cols.push_back(std::move(col));
  }

  auto os = open_out(a.csv);
  Header("nash", sub).write(os);
  os << "iter";
  for (std::size_t n : a.sizes) os << ",n" << n;
  os << '\n';
  for (std::size_t i = 0; i < a.iters; ++i) {
    os << i + 1;
    for (const auto& c : cols) os << ',' << (i < c.size() ? num(c[i]) : "");
    os << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// steps

struct StepsArgs {
  std::string regime;
  gpdps_constants c{};
  double alpha = 1, gamma = 1e-3, range = 1, gamma_bar = 10;
  std::string p = "1";
  std::optional<double> tau;
  double fraction = 0.99;
  bool check = false;
  std::size_t check_n = 100;
};

void add_steps(CLI::App& app, StepsArgs& a) {
  gpdps_constants_default(&a.c);
  app.add_option("regime", a.regime, "constant, accelerated, linear or potts")
      ->required()
      ->check(CLI::IsMember({"constant", "accelerated", "linear", "potts"}));
  auto& c = a.c;
  app.add_option("--rk", c.R_K, "Bound R_K on the mixed derivative");
  app.add_option("--lx", c.L_x_at_yhat, "Lipschitz factor L_x at y_hat");
  app.add_option("--ly", c.L_y_at_xhat, "Lipschitz factor L_y at x_hat");
  app.add_option("--lyx", c.L_yx, "Lipschitz factor L_yx");
  app.add_option("--lambda-x", c.lambda_x, "Three-point lambda_x");
  app.add_option("--lambda-y", c.lambda_y, "Three-point lambda_y");
  app.add_option("--xi-x", c.xi_x, "Three-point xi_x");
  app.add_option("--xi-y", c.xi_y, "Three-point xi_y");
  app.add_option("--theta-x", c.theta_x, "Three-point theta_x");
  app.add_option("--theta-y", c.theta_y, "Three-point theta_y");
  app.add_option("--gamma-g", c.gamma_G, "Growth modulus of G");
  app.add_option("--gamma-f", c.gamma_Fstar, "Growth modulus of F*");
  app.add_option("--gtilde-g", c.gamma_tilde_G, "Primal acceleration factor");
  app.add_option("--gtilde-f", c.gamma_tilde_Fstar, "Dual acceleration factor");
  app.add_option("--rho-x", c.rho_x, "Primal neighborhood radius");
  app.add_option("--rho-y", c.rho_y, "Dual neighborhood radius");
  app.add_option("--delta", c.delta, "delta");
  app.add_option("--mu", c.mu, "mu");
  app.add_option("--alpha", a.alpha, "Potts data weight");
  app.add_option("--gamma", a.gamma, "Potts Huber parameter");
  app.add_option("--p", a.p, "Potts jump norm: 1 or inf");
  app.add_option("--range", a.range, "Potts dynamic range");
  app.add_option("--gamma-bar", a.gamma_bar, "Over-approximation of gamma");
  app.add_option("--tau", a.tau, "Use this tau instead of fraction * bound");
  app.add_option("--fraction", a.fraction, "Fraction of the tau bound")
      ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--check-48", a.check,
               "Run the testing-conditions checker on the first triples");
  app.add_option("--check-n", a.check_n, "Triples to check")
      ->check(CLI::PositiveNumber);
}

double pick_tau(const StepsArgs& a, double sup, bool exclusive) {
  if (a.tau) {
    if (*a.tau <= 0 || (exclusive ? *a.tau >= sup : *a.tau > sup))
      throw RunError(1, "--tau " + num(*a.tau) + " violates the bound tau " +
                            (exclusive ? "< " : "<= ") + num(sup));
    return *a.tau;
  }
  if (!std::isfinite(sup))
    throw RunError(1, "tau bound is unbounded for these constants; pass --tau");
  if (!(sup > 0)) throw RunError(1, "tau bound is not positive: " + num(sup));
  return a.fraction * sup;
}

int run_steps(const StepsArgs& a) {
  gpdps_constants c = a.c;
  gpdps_schedule* rs = nullptr;
  std::cout << "regime = " << a.regime << '\n';
  if (a.regime == "constant") {
    double sup = 0;
    check(gpdps_bound_constant(&c, &sup), "bound");
    std::cout << "tau_sup = " << num(sup) << '\n';
    const double tau = pick_tau(a, sup, true);
    double smax = 0;
    check(gpdps_bound_constant_sigma(&c, tau, &smax), "bound");
    std::cout << "sigma_max = " << num(smax) << '\n';
    check(gpdps_schedule_constant(tau, smax, &rs), "schedule");
  } else if (a.regime == "accelerated") {
    double sup = 0, prod = 0, smax = 0;
    check(gpdps_bound_accelerated(&c, &sup, &prod), "bound");
    std::cout << "tau0_sup = " << num(sup) << "\nsigma_tau0_max = " << num(prod)
              << '\n';
    const double tau = pick_tau(a, sup, false);
    check(gpdps_bound_constant_sigma(&c, tau, &smax), "bound");
    check(gpdps_schedule_accelerated(tau, std::min(smax, prod / tau),
                                     c.gamma_tilde_G, &rs),
          "schedule");
  } else if (a.regime == "linear") {
    double loc = 0, quad = 0, tmax = 0;
    check(gpdps_bound_linear(&c, &loc, &quad, &tmax), "bound");
    std::cout << "tau_locality = " << num(loc) << "\ntau_quadratic = "
              << num(quad) << "\ntau_max = " << num(tmax) << '\n';
    const double tau = pick_tau(a, tmax, false);
    check(gpdps_schedule_linear_rate(tau, c.gamma_tilde_G, c.gamma_tilde_Fstar,
                                     &rs),
          "schedule");
  } else {
    gpdps_potts_step_params sp;
    gpdps_potts_step_params_default(&sp);
    sp.alpha = a.alpha;
    sp.gamma = a.gamma;
    sp.p = parse_p(a.p);
    sp.dynamic_range = a.range;
    sp.gamma_bar = a.gamma_bar;
    sp.delta = a.c.delta;
    gpdps_potts_steps_result r;
    check(gpdps_potts_steps(&sp, &r), "infeasible constants");
    c = r.constants;
    std::cout << "m_x = " << num(r.m_x) << "\nm_y = " << num(r.m_y)
              << "\ntau_locality = " << num(r.tau_bound_locality)
              << "\ntau_quadratic = " << num(r.tau_bound_quadratic) << '\n';
    check(gpdps_schedule_fixed(r.triple, &rs), "schedule");
  }
  SchedulePtr sched(rs);

  gpdps_triple t0{};
  check(gpdps_schedule_next(sched.get(), 0, &t0), "schedule");
  std::cout << "tau = " << num(t0.tau) << "\nsigma = " << num(t0.sigma)
            << "\nomega = " << num(t0.omega) << '\n';

  std::string ledger(gpdps_constants_ledger(&c, nullptr, 0) + 1, '\0');
  gpdps_constants_ledger(&c, ledger.data(), ledger.size());
  ledger.resize(ledger.size() - 1);
  std::cout << "# constants\n" << ledger;
  if (!ledger.empty() && ledger.back() != '\n') std::cout << '\n';

  if (!a.check) return 0;
  std::vector<gpdps_triple> ts(a.check_n);
  for (std::size_t i = 0; i < a.check_n; ++i)
    check(gpdps_schedule_next(sched.get(), i, &ts[i]), "schedule");
  gpdps_report* rr = nullptr;
  check(gpdps_check_testing_conditions(&c, ts.data(), ts.size(), std::nan(""),
                                       std::nan(""), &rr),
        "checker");
  ReportPtr rep(rr);
  std::cout << "check,status,margin,detail\n";
  for (std::size_t i = 0; i < gpdps_report_size(rep.get()); ++i) {
    const char *name = nullptr, *detail = nullptr;
    int passed = 0;
    double margin = 0;
    check(gpdps_report_line(rep.get(), i, &name, &passed, &margin, &detail),
          "report");
    std::cout << name << ',' << (passed ? "pass" : "fail") << ',' << num(margin)
              << ',' << csv_field(detail) << '\n';
  }
  return gpdps_report_all_passed(rep.get()) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::uint64_t seed = 1;
  std::string only;
  std::size_t samples = 100000;
  std::string out;
};

void add_verify(CLI::App& app, VerifyArgs& a) {
  app.add_option("--seed", a.seed, "Random seed");
  app.add_option("--only", a.only, "Run a single named check");
  app.add_option("--samples", a.samples, "Three-point samples")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", a.out, "Also write the report to this file");
}

int run_verify(const CLI::App& sub, const VerifyArgs& a) {
  gpdps_report* rr = nullptr;
  check(gpdps_verify_suite(a.seed, a.only.empty() ? nullptr : a.only.c_str(),
                           a.samples, &rr),
        "verify");
  ReportPtr rep(rr);
  std::ostringstream body;
  body << "check,status,margin,detail\n";
  for (std::size_t i = 0; i < gpdps_report_size(rep.get()); ++i) {
    const char *name = nullptr, *detail = nullptr;
    int passed = 0;
    double margin = 0;
    check(gpdps_report_line(rep.get(), i, &name, &passed, &margin, &detail),
          "report");
    body << name << ',' << (passed ? "pass" : "fail") << ',' << num(margin)
         << ',' << csv_field(detail) << '\n';
  }
  std::cout << body.str();
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    Header("verify", sub).write(os);
    os << body.str();
  }
  return gpdps_report_all_passed(rep.get()) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// gen-image

struct GenArgs {
  std::vector<std::size_t> size;
  std::uint64_t seed = 0;
  std::size_t shapes = 6;
  double noise = 0.05;
  std::string out;
  int bits = 16;
  bool ascii = false;
};

void add_gen(CLI::App& app, GenArgs& a) {
  app.add_option("--size", a.size, "n1 n2")->expected(2)->required();
  app.add_option("--seed", a.seed, "Random seed");
  app.add_option("--shapes", a.shapes, "Number of shapes");
  app.add_option("--noise", a.noise, "Gaussian noise level");
  app.add_option("--out", a.out, "Output PGM")->required();
  app.add_option("--bits", a.bits, "PGM bit depth")->check(CLI::IsMember({8, 16}));
  app.add_flag("--ascii", a.ascii, "Write P2 instead of P5");
}

int run_gen(const CLI::App& sub, const GenArgs& a) {
  gpdps_image* raw = nullptr;
  check(gpdps_image_synthetic(a.size[0], a.size[1], a.seed, a.shapes, a.noise,
                              &raw),
        "generating image");
  ImagePtr img(raw);
  write_pgm(img.get(), a.out, Header("gen-image", sub), a.bits, a.ascii);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
  } catch (const RunError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code;
  }

  CLI::App app{"Primal-dual solver for non-convex saddle problems"};
  app.set_version_flag("--version", gpdps_version());
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.footer("Options may also come from --config FILE (key = value lines); "
             "command-line flags take precedence.");

  PottsArgs potts;
  NashArgs nash;
  StepsArgs steps;
  VerifyArgs verify;
  GenArgs gen;
  auto* s_potts = app.add_subcommand("potts", "Huber-Potts denoising");
  auto* s_nash = app.add_subcommand("nash", "Two-player elliptic Nash game");
  auto* s_steps = app.add_subcommand("steps", "Step-size bounds and checks");
  auto* s_verify = app.add_subcommand("verify", "Numerical oracle suite");
  auto* s_gen = app.add_subcommand("gen-image", "Synthetic test image");
  for (auto* s : {s_potts, s_nash, s_steps, s_verify, s_gen})
    s->add_option("--config", "Configuration file (key = value)");
  add_potts(*s_potts, potts);
  add_nash(*s_nash, nash);
  add_steps(*s_steps, steps);
  add_verify(*s_verify, verify);
  add_gen(*s_gen, gen);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (s_potts->parsed()) return run_potts(*s_potts, potts);
    if (s_nash->parsed()) return run_nash(*s_nash, nash);
    if (s_steps->parsed()) return run_steps(steps);
    if (s_verify->parsed()) return run_verify(*s_verify, verify);
    if (s_gen->parsed()) return run_gen(*s_gen, gen);
  } catch (const RunError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code;
  }
  return 2;
}
