#pragma once

// Step-size rules for the generalized primal-dual iteration, the bound
// calculators that produce admissible parameters from problem constants, and
// numerical checkers for the testing conditions and locality step bounds.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gpdps {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Parameters used inside iteration i: tau_i, sigma_{i+1}, omega_i.
struct StepTriple {
  double tau = 0;
  double sigma = 0;
  double omega = 0;

  bool valid() const;
};

class StepSchedule {
 public:
  enum class Kind { kConstant, kAccelerated, kLinearRate };

  /// tau, sigma fixed; omega = 1.
  static StepSchedule constant(double tau, double sigma);
  /// tau_{i+1} = tau_i / (1 + 2 gtilde_g tau_i), sigma fixed, omega = 1.
  static StepSchedule accelerated(double tau0, double sigma, double gtilde_g);
  /// sigma = tau gtilde_g / gtilde_f, omega = 1 / (1 + 2 gtilde_g tau).
  static StepSchedule linear_rate(double tau, double gtilde_g, double gtilde_f);
  /// Arbitrary fixed triple, e.g. a stored preset.
  static StepSchedule fixed(StepTriple t);

  StepTriple next(std::size_t i) const;

  Kind kind() const { return kind_; }
  double tau0() const { return tau_; }
  double sigma() const { return sigma_; }
  double omega() const { return omega_; }
  double gtilde_g() const { return gtilde_g_; }
  double gtilde_f() const { return gtilde_f_; }

  std::vector<StepTriple> first(std::size_t n) const;

 private:
  StepSchedule() = default;

  Kind kind_ = Kind::kConstant;
  double tau_ = 0;
  double sigma_ = 0;
  double omega_ = 1;
  double gtilde_g_ = 0;
  double gtilde_f_ = 0;
};

/// Assumption constants feeding the bound calculators. Field names follow the
/// roles of the constants: Lipschitz moduli, three-point constants,
/// strong-subregularity moduli, acceleration factors and neighborhood radii.
struct ProblemConstants {
  double R_K = 1;
  double L_x_at_yhat = 0;
  double L_y_at_xhat = 0;
  double L_yx = 0;
  double lambda_x = 0;
  double lambda_y = 0;
  double xi_x = 0;
  double xi_y = 0;
  double theta_x = 1;
  double theta_y = 1;
  double gamma_G = 0;
  double gamma_Fstar = 0;
  double gamma_tilde_G = 0;
  double gamma_tilde_Fstar = 0;
  double rho_x = 0;
  double rho_y = 0;
  double delta = 0.1;
  double mu = 0.1;

  /// Human-readable ledger of all fields, one `name = value` per line.
  std::string ledger() const;
};

// ---------------------------------------------------------------------------
// Bound calculators. +infinity is returned where a denominator vanishes.

struct ConstantBound {
  double tau_sup = kInf;  // exclusive
  double R_K = 1;
  double mu = 0;
  double lambda_y = 0;

  /// Inclusive upper bound on sigma for a given tau.
  double sigma_max(double tau) const;
};
ConstantBound bound_constant(const ProblemConstants& c);

struct AcceleratedBound {
  double tau0_sup = kInf;  // inclusive
  double sigma_tau0_max = kInf;
};
AcceleratedBound bound_accelerated(const ProblemConstants& c);

/// Both branches of the linear-rate bound; tau_max is their minimum.
struct LinearBound {
  double tau_locality = kInf;
  double tau_quadratic = kInf;
  double tau_max = kInf;
};
LinearBound bound_linear_detail(const ProblemConstants& c);
double bound_linear(const ProblemConstants& c);

// ---------------------------------------------------------------------------
// Potts step parameters.

enum class JumpNorm { kL1, kLinf };

std::string_view to_string(JumpNorm p);
/// Accepts "1", "inf", "infinity". Anything else is a configuration error.
JumpNorm parse_jump_norm(std::string_view s);

struct PottsStepParams {
  double alpha = 1;
  double gamma = 1e-3;
  JumpNorm p = JumpNorm::kL1;
  double dynamic_range = 1;
  double gamma_bar = 10;
  double delta = 0.1;
  std::optional<double> mu;                 // defaults to delta
  std::optional<double> gamma_tilde_G;      // defaults to 1/(10 alpha)
  std::optional<double> gamma_tilde_Fstar;  // defaults to gamma/100
  double L = 2.8284271247461903;            // >= ||D_h||, sqrt(8)/h at h = 1
  double margin = 1e-6;
};

struct PottsSteps {
  StepTriple triple;
  ProblemConstants constants;
  double m_x = 0;
  double m_y = 0;
  double tau_bound_locality = 0;
  double tau_bound_quadratic = 0;
};

/// Minimal-feasible constants and the linear-rate triple for the Huber-Potts
/// problem. Throws kInfeasible if xi_x <= 2 L m_y^2.
PottsSteps potts_steps(const PottsStepParams& params);

/// Named step presets reported for the 256x254 test image: "paper-p1" and
/// "paper-pinf". Returns nullopt for unknown names.
std::optional<StepTriple> potts_preset(std::string_view name);

// ---------------------------------------------------------------------------
// Constant derivations from second-order growth.

struct ThetaLambda {
  double theta = 0;
  double lambda = 0;
  bool warning = false;  // theta <= 0
};

ThetaLambda derive_theta_lambda_primal(double gamma_x, double alpha,
                                       double L_x_at_yhat, double L_yx);
ThetaLambda derive_theta_lambda_dual(double gamma_y, double alpha1,
                                     double alpha2, double L_y_bar,
                                     double L_xy);

// ---------------------------------------------------------------------------
// Checkers. They never throw on failed conditions; they report.

struct CheckLine {
  std::string name;
  bool passed = false;
  double margin = 0;  // >= 0 means satisfied
  std::string detail;
};

struct CheckReport {
  std::vector<CheckLine> lines;

  bool all_passed() const;
  const CheckLine* find(std::string_view name) const;
};

struct TestingState {
  double phi = 0;
  double psi = 0;
  double eta = 0;
};

struct TestingReport : CheckReport {
  /// phi_i, psi_{i+1}, eta_i for i = 0..N-1.
  std::vector<TestingState> testing;
};

/// Builds the testing sequences phi_i, psi_{i+1}, eta_i from
/// phi_0 = sigma_1 omega_0 / tau_0 with psi_1 = 1 (phi grows by
/// 1 + 2 tau_i gtilde_G, psi by 1 + 2 sigma_{i+1} gtilde_F*) and checks:
///   "omega-consistency"   omega_i = eta_i / eta_{i+1}, phi_i tau_i = psi_i sigma_i
///   "sigma-bound"         1 >= sigma (R_K^2 tau / (1 - mu) + lambda_y / omega)
///   "tau-bound"           tau <= delta / (lambda_x + L_yx (omega + 2) rho_y)
///   "primal-growth"       gamma_G >= gtilde_G + xi_x
///   "dual-theta"          theta_y >= omega_high rho_x
///   "dual-growth"         gamma_F* >= gtilde_F* + xi_y
///   "primal-theta"        theta_x >= rho_y / omega_low
/// Equalities use a 1e-10 relative tolerance.
TestingReport check_testing_conditions(const ProblemConstants& c,
                       std::span<const StepTriple> triples, double omega_low,
                       double omega_high);

/// Overload using min/max of the triples' omegas.
TestingReport check_testing_conditions(const ProblemConstants& c,
                       std::span<const StepTriple> triples);

struct LocalityBudget {
  double r_max = 0;
  double nu = 1;
  double r_y = 1;
  double delta_x = 1;
  double delta_y = 1;
};

/// r_max and nu from the initial squared distances and first step parameters.
LocalityBudget make_locality_budget(double dist_x0_sq, double dist_y0_sq,
                                    double tau0, double sigma1, double omega0,
                                    double delta, double r_y, double delta_x,
                                    double delta_y);

/// Bound on tau_i and sigma_{i+1} keeping iterates in the neighborhood.
struct LocalityStepBounds {
  double tau = kInf;
  double sigma = kInf;
};
LocalityStepBounds locality_step_bounds(const LocalityBudget& b,
                                        const ProblemConstants& c);

/// Advisory locality check: "locality-tau", "locality-sigma" and
/// "locality-radius" (r_y >= r_max sqrt(nu (1 - delta) delta / (mu - delta))).
CheckReport check_locality(const LocalityBudget& b, const ProblemConstants& c,
                     std::span<const StepTriple> triples);

}  // namespace gpdps
