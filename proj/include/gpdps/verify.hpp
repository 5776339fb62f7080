#pragma once

// Independent numerical oracles: finite-difference gradient checks, the
// bilinear reduction harness, the scalar kappa three-point sampler and
// convergence-rate fitting.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpdps/core.hpp"
#include "gpdps/schedules.hpp"

namespace gpdps::verify {

// ---------------------------------------------------------------------------
// Finite differences

struct FdResult {
  double max_rel_err = 0;
  double max_rel_err_x = 0;
  double max_rel_err_y = 0;
};

/// Compares <grad_x, d> against central differences of value() along n_dirs
/// seeded random directions (unit in the problem's weighted norm), and the
/// same for grad_y. The relative error of each comparison is normalized by
/// max(|analytic|, |fd|, ||grad||). Throws kUnsupported if value() is absent.
FdResult fd_grad_check(const SaddleProblem& problem, std::span<const double> x,
                       std::span<const double> y, double h, std::size_t n_dirs,
                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Bilinear coupling K(x, y) = <Ax, y>

struct LinearMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
  std::function<void(std::span<const double>, std::span<double>)> adjoint;
};

using ProxFn =
    std::function<void(double, std::span<const double>, std::span<double>)>;

class BilinearProblem final : public SaddleProblem {
 public:
  BilinearProblem(LinearMap a, ProxFn prox_g, ProxFn prox_fstar);

  const LinearMap& op() const { return a_; }
  std::size_t primal_dim() const override { return a_.cols; }
  std::size_t dual_dim() const override { return a_.rows; }
  void prox_primal(double tau, std::span<const double> v,
                   std::span<double> out) const override;
  void prox_dual(double sigma, std::span<const double> v,
                 std::span<double> out) const override;
  void grad_x(std::span<const double> x, std::span<const double> y,
              std::span<double> out) const override;
  void grad_y(std::span<const double> x, std::span<const double> y,
              std::span<double> out) const override;
  double value(std::span<const double> x,
               std::span<const double> y) const override;

 private:
  LinearMap a_;
  ProxFn prox_g_;
  ProxFn prox_fstar_;
};

/// Forward-difference gradient D_h on an n1 x n2 image as a LinearMap.
LinearMap gradient_map(std::size_t n1, std::size_t n2, double h = 1.0);

/// TV-Huber denoising: G = 1/(2 alpha) ||x - f||^2,
/// F* = gamma/2 ||y||^2 + indicator of pointwise |y_k| <= 1 (isotropic).
BilinearProblem tv_huber_problem(std::size_t n1, std::size_t n2,
                                 std::vector<double> f, double alpha,
                                 double gamma);

/// Runs core::solve on the bilinear problem and, separately, the textbook
/// primal-dual loop with the same fixed triple; returns the largest relative
/// difference of the iterates over all n_iters iterations.
double bilinear_reduction_check(const BilinearProblem& problem,
                                const StepTriple& triple, std::size_t n_iters,
                                const PrimalDualState& init);

// ---------------------------------------------------------------------------
// Scalar-block kappa(x, y) = rho(<x, y>), rho(t) = 2t - t^2, for m <= 3.

struct KappaSmall {
  double val = 0;
  std::vector<double> gx;   // kappa_x
  std::vector<double> gy;   // kappa_y
  std::vector<double> gyx;  // kappa_yx, m x m row-major
};

KappaSmall kappa_small(std::span<const double> x, std::span<const double> y);
/// kappa_xy(x, y) = 2(I - <y, x> I - y (x) x), m x m row-major.
std::vector<double> kappa_xy_small(std::span<const double> x,
                                   std::span<const double> y);

struct C2Result {
  bool ok = false;
  double eig_min = 0;
  double eig_max = 0;
};

/// Eigenvalue range of the symmetric part of <x, y> I + x (x) y, tested
/// against [0, 2].
C2Result c2_check(std::span<const double> x_hat, std::span<const double> y_hat);

struct KappaPoint {
  std::vector<double> x_hat;
  std::vector<double> y_hat;
  double rho_x = 1;
  double rho_y = 1;
};

struct KappaConstants {
  std::function<double(std::span<const double>)> L_x_of_y;
  std::function<double(std::span<const double>)> L_y_of_x;
  double L_yx = 0;
  double xi_x = 0;
  double xi_y = 0;
  double lambda_x = 0;
  double lambda_y = 0;
  double theta_x = 0;
  double theta_y = 0;
};

/// Constants for kappa at (x_hat, y_hat) with the smallest admissible xi and
/// lambda plus `eps`: xi_x = 2 (lambda_x + |y_hat|^2) |y_hat|^2 / lambda_x +
/// eps, xi_y = eps, lambda_y = |x_hat|^2 + eps, and theta values small enough
/// to be absorbed by eps. rho_y enters L_yx.
KappaConstants lemma_constants(const KappaPoint& point, double lambda_x,
                               double eps);

/// Throws kPrecondition naming the first violated constraint among
/// lambda_x xi_x > 2 (lambda_x + |y_hat|^2) |y_hat|^2, xi_y > 0 and
/// lambda_y > |x_hat|^2.
void check_lemma_constraints(const KappaPoint& point, const KappaConstants& c);

struct ThreePointReport {
  std::size_t samples = 0;
  std::size_t violations_primal = 0;  // first inequality (x side)
  std::size_t violations_dual = 0;    // second inequality (y side)
  double worst_margin_primal = kInf;
  double worst_margin_dual = kInf;

  std::size_t violations() const { return violations_primal + violations_dual; }
};

/// Samples (x, x', y, y') uniformly from B(x_hat, rho_x)^2 x B(y_hat, rho_y)^2
/// and evaluates both three-point inequalities for kappa. A sample violates
/// when its margin is below -1e-12 times the magnitude of the terms involved.
ThreePointReport three_point_sample(const KappaPoint& point,
                                    const KappaConstants& c,
                                    std::size_t n_samples, std::uint64_t seed);

/// Halves rho_x and rho_y from 1 until n_samples draws pass, then halves
/// safety_halvings more times since a clean batch at the boundary radius is
/// no guarantee for fresh draws. Throws kInfeasible after max_halvings.
KappaPoint shrink_rho(KappaPoint point, const KappaConstants& c,
                      std::size_t n_samples = 10000, std::uint64_t seed = 1,
                      int max_halvings = 60, int safety_halvings = 1);

/// Constants of K(x, y) = Ktilde(Ax, y) from those of Ktilde given ||A||.
struct LiftedConstants {
  double R_K = 0;
  double xi_x = 0;
  double xi_y = 0;
  double lambda_x = 0;
  double lambda_y = 0;
  double theta_x = 0;
  double theta_y = 0;
  double rho_x = 0;
  double rho_y = 0;
  double L_x_scale = 0;  // multiplies Ltilde_z
  double L_yx = 0;
};

LiftedConstants lift_constants(double R_K, double xi_z, double xi_y,
                               double lambda_z, double lambda_y,
                               double theta_z, double theta_y, double rho_x,
                               double rho_y, double L_yz, double norm_a);

// ---------------------------------------------------------------------------
// Rates and norms

struct RateFit {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive
  double rate = 0;
  double r_squared = 0;
};

/// Least-squares fit of log(errors[i]) over i in [start, end]; rate is the
/// exponentiated slope. Throws kPrecondition on non-positive entries.
RateFit rate_fit(std::span<const double> errors, std::size_t start,
                 std::size_t end);

/// Power iteration estimate of ||D_h||^2 on an n1 x n2 grid.
double dh_norm_sq(std::size_t n1, std::size_t n2, double h, std::size_t iters,
                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Suite

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::optional<std::string> only;  // run a single named check
  std::size_t three_point_samples = 100000;
};

/// Check names: grad-potts-p1, grad-potts-pinf, grad-nash, adjoint,
/// bilinear-reduction, kappa-derivatives, c2-reading, three-point-m1,
/// three-point-m2, poisson-eigenpair, poisson-roundtrip, dh-norm.
std::vector<std::string> suite_check_names();
CheckReport run_suite(const SuiteOptions& opts);

}  // namespace gpdps::verify
