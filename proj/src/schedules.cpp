#include "gpdps/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpdps/error.hpp"

namespace gpdps {

namespace {

constexpr double kEqualityTol = 1e-10;
constexpr double kInequalityTol = 1e-12;

bool positive_finite(double v) { return std::isfinite(v) && v > 0; }

// a / b, or +inf when b vanishes.
double ratio_or_inf(double a, double b) { return b == 0 ? kInf : a / b; }

CheckLine inequality(std::string name, double margin, std::string detail = {}) {
  return CheckLine{std::move(name), margin >= -kInequalityTol, margin,
                   std::move(detail)};
}

}  // namespace

bool StepTriple::valid() const {
  return positive_finite(tau) && positive_finite(sigma) &&
         positive_finite(omega);
}

StepSchedule StepSchedule::constant(double tau, double sigma) {
  require(positive_finite(tau) && positive_finite(sigma),
          ErrorCode::kPrecondition, "constant schedule needs tau, sigma > 0");
  StepSchedule s;
  s.kind_ = Kind::kConstant;
  s.tau_ = tau;
  s.sigma_ = sigma;
  s.omega_ = 1;
  return s;
}

StepSchedule StepSchedule::accelerated(double tau0, double sigma,
                                       double gtilde_g) {
  require(positive_finite(tau0) && positive_finite(sigma),
          ErrorCode::kPrecondition, "accelerated schedule needs tau0, sigma > 0");
  require(positive_finite(gtilde_g), ErrorCode::kPrecondition,
          "accelerated schedule needs gtilde_G > 0");
  StepSchedule s;
  s.kind_ = Kind::kAccelerated;
  s.tau_ = tau0;
  s.sigma_ = sigma;
  s.omega_ = 1;
  s.gtilde_g_ = gtilde_g;
  return s;
}

StepSchedule StepSchedule::linear_rate(double tau, double gtilde_g,
                                       double gtilde_f) {
  require(positive_finite(tau), ErrorCode::kPrecondition,
          "linear-rate schedule needs tau > 0");
  require(positive_finite(gtilde_g) && positive_finite(gtilde_f),
          ErrorCode::kPrecondition,
          "linear-rate schedule needs gtilde_G, gtilde_F* > 0");
  StepSchedule s;
  s.kind_ = Kind::kLinearRate;
  s.tau_ = tau;
  s.gtilde_g_ = gtilde_g;
  s.gtilde_f_ = gtilde_f;
  s.sigma_ = tau * gtilde_g / gtilde_f;
  s.omega_ = 1 / (1 + 2 * gtilde_g * tau);
  return s;
}

StepSchedule StepSchedule::fixed(StepTriple t) {
  require(t.valid(), ErrorCode::kPrecondition,
          "step triple must be positive and finite");
  StepSchedule s;
  s.kind_ = Kind::kConstant;
  s.tau_ = t.tau;
  s.sigma_ = t.sigma;
  s.omega_ = t.omega;
  return s;
}

StepTriple StepSchedule::next(std::size_t i) const {
  switch (kind_) {
    case Kind::kAccelerated: {
      // Closed form of the recursion: 1/tau_i grows by 2 gtilde_G per step.
      const double tau =
          tau_ / (1 + 2 * gtilde_g_ * tau_ * static_cast<double>(i));
      return {tau, sigma_, 1.0};
    }
    case Kind::kConstant:
    case Kind::kLinearRate:
      break;
  }
  return {tau_, sigma_, omega_};
}

std::vector<StepTriple> StepSchedule::first(std::size_t n) const {
  std::vector<StepTriple> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(next(i));
  return out;
}

std::string ProblemConstants::ledger() const {
  std::ostringstream os;
  os.precision(12);
  os << "R_K = " << R_K << '\n'
     << "L_x_at_yhat = " << L_x_at_yhat << '\n'
     << "L_y_at_xhat = " << L_y_at_xhat << '\n'
     << "L_yx = " << L_yx << '\n'
     << "lambda_x = " << lambda_x << '\n'
     << "lambda_y = " << lambda_y << '\n'
     << "xi_x = " << xi_x << '\n'
     << "xi_y = " << xi_y << '\n'
     << "theta_x = " << theta_x << '\n'
     << "theta_y = " << theta_y << '\n'
     << "gamma_G = " << gamma_G << '\n'
     << "gamma_Fstar = " << gamma_Fstar << '\n'
     << "gamma_tilde_G = " << gamma_tilde_G << '\n'
     << "gamma_tilde_Fstar = " << gamma_tilde_Fstar << '\n'
     << "rho_x = " << rho_x << '\n'
     << "rho_y = " << rho_y << '\n'
     << "delta = " << delta << '\n'
     << "mu = " << mu << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

double ConstantBound::sigma_max(double tau) const {
  return ratio_or_inf(1.0, R_K * R_K * tau / (1 - mu) + lambda_y);
}

ConstantBound bound_constant(const ProblemConstants& c) {
  ConstantBound b;
  b.tau_sup = ratio_or_inf(c.delta, c.lambda_x + 3 * c.L_yx * c.rho_y);
  b.R_K = c.R_K;
  b.mu = c.mu;
  b.lambda_y = c.lambda_y;
  return b;
}

AcceleratedBound bound_accelerated(const ProblemConstants& c) {
  require(c.R_K > 0, ErrorCode::kPrecondition, "R_K must be positive");
  AcceleratedBound b;
  b.tau0_sup = ratio_or_inf(c.delta, c.lambda_x + 3 * c.L_yx * c.rho_y);
  b.sigma_tau0_max = (1 - c.mu) / (c.R_K * c.R_K);
  return b;
}

LinearBound bound_linear_detail(const ProblemConstants& c) {
  require(c.gamma_tilde_G > 0 && c.gamma_tilde_Fstar > 0,
          ErrorCode::kPrecondition,
          "linear rate needs gamma_tilde_G > 0 and gamma_tilde_Fstar > 0");
  require(c.R_K > 0, ErrorCode::kPrecondition, "R_K must be positive");
  LinearBound b;
  b.tau_locality = ratio_or_inf(c.delta, c.lambda_x + 3 * c.L_yx * c.rho_y);
  // Positive root of (R_K^2/(1-mu) + 2 gG lambda_y) t^2 + lambda_y t - gF/gG.
  const double ratio = c.gamma_tilde_Fstar / c.gamma_tilde_G;
  const double quad =
      c.R_K * c.R_K / (1 - c.mu) + 2 * c.gamma_tilde_G * c.lambda_y;
  b.tau_quadratic =
      2 * ratio /
      (c.lambda_y + std::sqrt(c.lambda_y * c.lambda_y + 4 * ratio * quad));
  b.tau_max = std::min(b.tau_locality, b.tau_quadratic);
  return b;
}

double bound_linear(const ProblemConstants& c) {
  return bound_linear_detail(c).tau_max;
}

// ---------------------------------------------------------------------------

std::string_view to_string(JumpNorm p) {
  return p == JumpNorm::kL1 ? "1" : "inf";
}

JumpNorm parse_jump_norm(std::string_view s) {
  if (s == "1") return JumpNorm::kL1;
  if (s == "inf" || s == "infinity" || s == "Inf") return JumpNorm::kLinf;
  fail(ErrorCode::kConfig,
       "p must be 1 or inf (intermediate exponents are not supported), got '" +
           std::string(s) + "'");
}

PottsSteps potts_steps(const PottsStepParams& in) {
  require(positive_finite(in.alpha), ErrorCode::kPrecondition,
          "alpha must be positive");
  require(positive_finite(in.gamma), ErrorCode::kPrecondition,
          "gamma must be positive for the linear-rate regime");
  require(positive_finite(in.dynamic_range), ErrorCode::kPrecondition,
          "dynamic range must be positive");
  require(positive_finite(in.L), ErrorCode::kPrecondition,
          "L must be positive");
  require(positive_finite(in.gamma_bar), ErrorCode::kPrecondition,
          "gamma_bar must be positive");
  require(in.margin > 0 && in.margin < 1, ErrorCode::kPrecondition,
          "margin must lie in (0, 1)");
  const double mu = in.mu.value_or(in.delta);
  require(in.delta > 0 && in.delta <= mu && mu < 1, ErrorCode::kPrecondition,
          "need 0 < delta <= mu < 1");
  const double gG = in.gamma_tilde_G.value_or(1 / (10 * in.alpha));
  const double gF = in.gamma_tilde_Fstar.value_or(in.gamma / 100);
  require(gG > 0 && gG < 1 / in.alpha, ErrorCode::kPrecondition,
          "gamma_tilde_G must lie in (0, 1/alpha)");
  require(gF > 0 && gF < in.gamma, ErrorCode::kPrecondition,
          "gamma_tilde_Fstar must lie in (0, gamma)");

  const double L = in.L;
  const double eps = in.margin;

  PottsSteps out;
  out.m_x = in.p == JumpNorm::kL1 ? in.dynamic_range
                                  : std::sqrt(2.0) * in.dynamic_range;
  out.m_y = 2 * out.m_x / (2 * out.m_x * out.m_x + in.gamma_bar);
  const double my2 = out.m_y * out.m_y;

  const double xi_x = 1 / in.alpha - gG;
  const double xi_y = in.gamma - gF;
  if (!(xi_x > 2 * L * my2)) {
    std::ostringstream os;
    os << "infeasible constants: primal three-point inequality "
          "xi_x*lambda_x > 2L^2(lambda_x/L + m_y^2)m_y^2 has no solution "
          "lambda_x >= 0 since xi_x = "
       << xi_x << " <= 2 L m_y^2 = " << 2 * L * my2;
    fail(ErrorCode::kInfeasible, os.str());
  }
  const double lambda_y = out.m_x * out.m_x * (1 + eps);
  const double lambda_x =
      2 * L * L * my2 * my2 / (xi_x - 2 * L * my2) * (1 + eps);

  out.tau_bound_locality = in.delta / lambda_x;
  const double ratio = gF / gG;
  out.tau_bound_quadratic =
      2 * ratio /
      (lambda_y +
       std::sqrt(lambda_y * lambda_y +
                 4 * ratio * (4 * L * L / (1 - mu) + 2 * gG * lambda_y)));
  const double tau =
      (1 - eps) * std::min(out.tau_bound_locality, out.tau_bound_quadratic);

  out.triple = {tau, tau * gG / gF, 1 / (1 + 2 * gG * tau)};

  ProblemConstants& c = out.constants;
  c.R_K = 2 * L;
  c.L_x_at_yhat = 2 * L * L * my2;
  c.L_y_at_xhat = 2 * out.m_x * out.m_x;
  c.L_yx = 4 * L * out.m_y;
  c.lambda_x = lambda_x;
  c.lambda_y = lambda_y;
  c.xi_x = xi_x;
  c.xi_y = xi_y;
  // Any positive theta works once the neighborhood radii shrink to zero.
  c.theta_x = eps;
  c.theta_y = eps;
  c.gamma_G = 1 / in.alpha;
  c.gamma_Fstar = in.gamma;
  c.gamma_tilde_G = gG;
  c.gamma_tilde_Fstar = gF;
  c.rho_x = 0;
  c.rho_y = 0;
  c.delta = in.delta;
  c.mu = mu;
  return out;
}

std::optional<StepTriple> potts_preset(std::string_view name) {
  if (name == "paper-p1") return StepTriple{1.04085e-3, 1.04085, 0.99480};
  if (name == "paper-pinf") return StepTriple{5.51922e-4, 0.551922, 0.99724};
  return std::nullopt;
}

// ---------------------------------------------------------------------------

ThetaLambda derive_theta_lambda_primal(double gamma_x, double alpha,
                                       double L_x_at_yhat, double L_yx) {
  require(alpha > 0 && alpha <= gamma_x, ErrorCode::kPrecondition,
          "need 0 < alpha <= gamma_x");
  ThetaLambda out;
  out.theta = L_yx == 0 ? kInf : 2 * (gamma_x - alpha) / L_yx;
  out.lambda = L_x_at_yhat * L_x_at_yhat / (2 * alpha);
  out.warning = !(out.theta > 0);
  return out;
}

ThetaLambda derive_theta_lambda_dual(double gamma_y, double alpha1,
                                     double alpha2, double L_y_bar,
                                     double L_xy) {
  require(alpha1 > 0 && alpha1 <= gamma_y, ErrorCode::kPrecondition,
          "need 0 < alpha1 <= gamma_y");
  require(alpha2 > 0, ErrorCode::kPrecondition, "need alpha2 > 0");
  ThetaLambda out;
  if (L_xy == 0) {
    out.theta = kInf;
    out.lambda = L_y_bar * L_y_bar / (2 * alpha1);
  } else {
    out.theta = 2 * (gamma_y - alpha1) / ((1 + alpha2) * L_xy);
    out.lambda = L_y_bar * L_y_bar / (2 * alpha1) +
                 (1 + 1 / alpha2) * L_xy * out.theta;
  }
  out.warning = !(out.theta > 0);
  return out;
}

// ---------------------------------------------------------------------------

bool CheckReport::all_passed() const {
  return std::all_of(lines.begin(), lines.end(),
                     [](const CheckLine& l) { return l.passed; });
}

const CheckLine* CheckReport::find(std::string_view name) const {
  for (const auto& l : lines)
    if (l.name == name) return &l;
  return nullptr;
}

TestingReport check_testing_conditions(const ProblemConstants& c,
                                       std::span<const StepTriple> triples,
                                       double omega_low, double omega_high) {
  require(!triples.empty(), ErrorCode::kPrecondition,
          "testing-condition check needs at least one step triple");
  TestingReport rep;
  const std::size_t n = triples.size();

  // phi_i, psi_{i+1} for i = 0..n-1; psi_{n+1} kept separately for the last
  // omega consistency test.
  std::vector<double> phi(n + 1), psi(n + 2);
  psi[1] = 1;
  phi[0] = triples[0].sigma * triples[0].omega / triples[0].tau * psi[1];
  for (std::size_t i = 0; i < n; ++i) {
    phi[i + 1] = phi[i] * (1 + 2 * triples[i].tau * c.gamma_tilde_G);
    psi[i + 2] = psi[i + 1] * (1 + 2 * triples[i].sigma * c.gamma_tilde_Fstar);
  }
  rep.testing.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    rep.testing[i] = {phi[i], psi[i + 1], phi[i] * triples[i].tau};

  // eta_i = phi_i tau_i must equal psi_i sigma_i, and omega_i = eta_i/eta_{i+1}.
  double worst = 0;
  std::size_t worst_at = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double eta_i = phi[i] * triples[i].tau;
    const double eta_next = psi[i + 1] * triples[i].sigma;
    const double err = std::abs(triples[i].omega - eta_i / eta_next) /
                       std::abs(triples[i].omega);
    if (err > worst) worst = err, worst_at = i;
    if (i + 1 < n) {
      const double lhs = phi[i + 1] * triples[i + 1].tau;
      const double e2 = std::abs(lhs - eta_next) / std::abs(eta_next);
      if (e2 > worst) worst = e2, worst_at = i + 1;
    }
  }
  rep.lines.push_back({"omega-consistency", worst <= kEqualityTol,
                       kEqualityTol - worst,
                       "worst relative error at i=" + std::to_string(worst_at)});

  double sigma_margin = kInf, tau_margin = kInf;
  std::size_t sigma_at = 0, tau_at = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = triples[i];
    const double load =
        t.sigma * (c.R_K * c.R_K * t.tau / (1 - c.mu) + c.lambda_y / t.omega);
    if (1 - load < sigma_margin) sigma_margin = 1 - load, sigma_at = i;
    const double bound =
        ratio_or_inf(c.delta, c.lambda_x + c.L_yx * (t.omega + 2) * c.rho_y);
    const double m = std::isinf(bound) ? 1.0 : 1 - t.tau / bound;
    if (m < tau_margin) tau_margin = m, tau_at = i;
  }
  rep.lines.push_back(inequality("sigma-bound", sigma_margin,
                                 "tightest at i=" + std::to_string(sigma_at)));
  rep.lines.push_back(inequality("tau-bound", tau_margin,
                                 "tightest at i=" + std::to_string(tau_at)));
  rep.lines.push_back(
      inequality("primal-growth", c.gamma_G - c.gamma_tilde_G - c.xi_x));
  rep.lines.push_back(inequality("dual-theta", c.theta_y - omega_high * c.rho_x));
  rep.lines.push_back(
      inequality("dual-growth", c.gamma_Fstar - c.gamma_tilde_Fstar - c.xi_y));
  rep.lines.push_back(
      inequality("primal-theta", c.theta_x - c.rho_y / omega_low));
  rep.lines.push_back(
      {"delta-mu", c.delta > 0 && c.delta <= c.mu && c.mu < 1,
       std::min({c.delta, c.mu - c.delta, 1 - c.mu}), "0 < delta <= mu < 1"});
  return rep;
}

TestingReport check_testing_conditions(const ProblemConstants& c,
                                       std::span<const StepTriple> triples) {
  require(!triples.empty(), ErrorCode::kPrecondition,
          "testing-condition check needs at least one step triple");
  auto [lo, hi] = std::minmax_element(
      triples.begin(), triples.end(),
      [](const StepTriple& a, const StepTriple& b) { return a.omega < b.omega; });
  return check_testing_conditions(c, triples, lo->omega, hi->omega);
}

LocalityBudget make_locality_budget(double dist_x0_sq, double dist_y0_sq,
                                    double tau0, double sigma1, double omega0,
                                    double delta, double r_y, double delta_x,
                                    double delta_y) {
  require(tau0 > 0 && sigma1 > 0 && omega0 > 0 && delta > 0,
          ErrorCode::kPrecondition, "step parameters and delta must be positive");
  LocalityBudget b;
  b.nu = sigma1 * omega0 / tau0;
  b.r_max = std::sqrt(2 / delta * (dist_x0_sq + dist_y0_sq / b.nu));
  b.r_y = r_y;
  b.delta_x = delta_x;
  b.delta_y = delta_y;
  return b;
}

LocalityStepBounds locality_step_bounds(const LocalityBudget& b,
                                        const ProblemConstants& c) {
  LocalityStepBounds out;
  out.tau = ratio_or_inf(b.delta_x,
                         2 * c.R_K * b.r_y + 2 * c.L_x_at_yhat * b.r_max);
  out.sigma = ratio_or_inf(
      b.delta_y, c.L_y_at_xhat * b.r_y + c.R_K * (b.r_max + b.delta_x));
  return out;
}

CheckReport check_locality(const LocalityBudget& b, const ProblemConstants& c,
                           std::span<const StepTriple> triples) {
  CheckReport rep;
  const auto bounds = locality_step_bounds(b, c);
  double tau_margin = kInf, sigma_margin = kInf;
  for (const auto& t : triples) {
    tau_margin =
        std::min(tau_margin, std::isinf(bounds.tau) ? 1.0 : 1 - t.tau / bounds.tau);
    sigma_margin = std::min(
        sigma_margin, std::isinf(bounds.sigma) ? 1.0 : 1 - t.sigma / bounds.sigma);
  }
  if (triples.empty()) tau_margin = sigma_margin = 1.0;
  std::ostringstream td, sd;
  td.precision(10);
  sd.precision(10);
  td << "tau bound " << bounds.tau;
  sd << "sigma bound " << bounds.sigma;
  rep.lines.push_back(inequality("locality-tau", tau_margin, td.str()));
  rep.lines.push_back(inequality("locality-sigma", sigma_margin, sd.str()));

  double required;
  if (c.mu > c.delta) {
    required = b.r_max *
               std::sqrt(b.nu * (1 - c.delta) * c.delta / (c.mu - c.delta));
  } else {
    required = b.r_max == 0 ? 0.0 : kInf;
  }
  std::ostringstream rd;
  rd.precision(10);
  rd << "neighborhood premise: r_y >= " << required;
  rep.lines.push_back(inequality(
      "locality-radius", std::isinf(required) ? -kInf : b.r_y - required,
      rd.str()));
  return rep;
}

}  // namespace gpdps
