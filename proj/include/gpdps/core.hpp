#pragma once

// Generic iteration engine for min_x max_y G(x) + K(x, y) - F*(y) with a
// smooth, possibly non-bilinear coupling K:
//
//   x_{i+1}     = prox_{tau_i G}(x_i - tau_i K_x(x_i, y_i))
//   xbar_{i+1}  = x_{i+1} + omega_i (x_{i+1} - x_i)
//   y_{i+1}     = prox_{sigma_{i+1} F*}(y_i + sigma_{i+1} K_y(xbar_{i+1}, y_i))

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gpdps/schedules.hpp"

namespace gpdps {

using Vector = std::vector<double>;

struct PrimalDualState {
  Vector x;
  Vector y;
  Vector x_bar;
  std::size_t iter = 0;

  /// x_bar starts equal to x.
  static PrimalDualState from(Vector x, Vector y);
};

/// Saddle-point problem contract. Vectors are flat; the problem interprets
/// shape. All hooks are pure functions of their inputs.
class SaddleProblem {
 public:
  virtual ~SaddleProblem() = default;

  virtual std::size_t primal_dim() const = 0;
  virtual std::size_t dual_dim() const = 0;

  virtual void prox_primal(double tau, std::span<const double> v,
                           std::span<double> out) const = 0;
  virtual void prox_dual(double sigma, std::span<const double> v,
                         std::span<double> out) const = 0;
  virtual void grad_x(std::span<const double> x, std::span<const double> y,
                      std::span<double> out) const = 0;
  virtual void grad_y(std::span<const double> x, std::span<const double> y,
                      std::span<double> out) const = 0;

  /// Coupling value K(x, y); used by gradient oracles only.
  /// Default throws ErrorCode::kUnsupported.
  virtual double value(std::span<const double> x,
                       std::span<const double> y) const;

  /// G(x) + F(x) for reporting, if the problem can evaluate it.
  virtual std::optional<double> primal_objective(
      std::span<const double> x) const;

  /// Quadrature weight of the discrete inner product <a, b> = w * sum a_i b_i.
  /// Gradients are Riesz representatives with respect to this product.
  virtual double metric_weight() const { return 1.0; }
};

struct IterationRecord {
  std::size_t iter = 0;
  double tau = 0;
  double sigma = 0;
  double omega = 0;
  double step_norm = 0;  // ||u_{i+1} - u_i||
  std::optional<double> dist_to_ref;
  std::optional<double> objective;
};

struct SolveOptions {
  std::size_t max_iters = 1;
  double step_tol = 0;  // 0 disables
  std::size_t log_stride = 1;
  std::optional<PrimalDualState> reference;
  bool record_objective = false;
};

struct SolveResult {
  PrimalDualState state;
  std::vector<IterationRecord> log;
};

/// Weighted norm sqrt(w * sum(a_i^2)).
double weighted_norm(std::span<const double> a, double weight);
/// Weighted distance ||(x1, y1) - (x2, y2)|| over the product space.
double pair_distance(std::span<const double> x1, std::span<const double> y1,
                     std::span<const double> x2, std::span<const double> y2,
                     double weight);

/// One iteration. Throws kConfig on dimension mismatch or invalid triple and
/// kDivergence (carrying the iteration index) on a non-finite result.
PrimalDualState step(const SaddleProblem& problem, const StepTriple& triple,
                     const PrimalDualState& state);

/// Runs step() with schedule.next(i) until max_iters or step_norm <= step_tol.
/// The log holds a record every log_stride iterations plus the final one.
SolveResult solve(const SaddleProblem& problem, const StepSchedule& schedule,
                  const SolveOptions& opts, PrimalDualState init);

}  // namespace gpdps
