#include "gpdps/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpdps/error.hpp"

namespace gpdps {

namespace {

bool all_finite(std::span<const double> v) {
  for (double a : v)
    if (!std::isfinite(a)) return false;
  return true;
}

void check_dims(const SaddleProblem& p, const PrimalDualState& s) {
  if (s.x.size() != p.primal_dim() || s.x_bar.size() != p.primal_dim() ||
      s.y.size() != p.dual_dim()) {
    fail(ErrorCode::kConfig,
         "state dimensions (x " + std::to_string(s.x.size()) + ", x_bar " +
             std::to_string(s.x_bar.size()) + ", y " +
             std::to_string(s.y.size()) + ") do not match problem (" +
             std::to_string(p.primal_dim()) + ", " +
             std::to_string(p.dual_dim()) + ")");
  }
}

double sq_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

PrimalDualState PrimalDualState::from(Vector x, Vector y) {
  PrimalDualState s;
  s.x_bar = x;
  s.x = std::move(x);
  s.y = std::move(y);
  return s;
}

double SaddleProblem::value(std::span<const double>,
                            std::span<const double>) const {
  fail(ErrorCode::kUnsupported, "problem does not implement value(x, y)");
}

std::optional<double> SaddleProblem::primal_objective(
    std::span<const double>) const {
  return std::nullopt;
}

double weighted_norm(std::span<const double> a, double weight) {
  double s = 0;
  for (double v : a) s += v * v;
  return std::sqrt(weight * s);
}

double pair_distance(std::span<const double> x1, std::span<const double> y1,
                     std::span<const double> x2, std::span<const double> y2,
                     double weight) {
  return std::sqrt(weight * (sq_diff(x1, x2) + sq_diff(y1, y2)));
}

PrimalDualState step(const SaddleProblem& problem, const StepTriple& t,
                     const PrimalDualState& s) {
  check_dims(problem, s);
  if (!t.valid()) fail(ErrorCode::kConfig, "step triple must be positive");

  const std::size_t n = s.x.size();
  const std::size_t m = s.y.size();
  PrimalDualState out;
  out.iter = s.iter + 1;
  out.x.resize(n);
  out.x_bar.resize(n);
  out.y.resize(m);

  Vector work(std::max(n, m));
  std::span<double> gx(work.data(), n);
  problem.grad_x(s.x, s.y, gx);
  for (std::size_t k = 0; k < n; ++k) gx[k] = s.x[k] - t.tau * gx[k];
  problem.prox_primal(t.tau, gx, out.x);

  for (std::size_t k = 0; k < n; ++k)
    out.x_bar[k] = out.x[k] + t.omega * (out.x[k] - s.x[k]);

  std::span<double> gy(work.data(), m);
  problem.grad_y(out.x_bar, s.y, gy);
  for (std::size_t k = 0; k < m; ++k) gy[k] = s.y[k] + t.sigma * gy[k];
  problem.prox_dual(t.sigma, gy, out.y);

  if (!all_finite(out.x) || !all_finite(out.y) || !all_finite(out.x_bar)) {
    throw Error(ErrorCode::kDivergence,
                "non-finite iterate at iteration " + std::to_string(out.iter),
                out.iter);
  }
  return out;
}

SolveResult solve(const SaddleProblem& problem, const StepSchedule& schedule,
                  const SolveOptions& opts, PrimalDualState init) {
  require(opts.max_iters >= 1, ErrorCode::kConfig, "max_iters must be >= 1");
  require(opts.log_stride >= 1, ErrorCode::kConfig, "log_stride must be >= 1");
  require(opts.step_tol >= 0, ErrorCode::kConfig, "step_tol must be >= 0");
  check_dims(problem, init);
  if (opts.reference) {
    require(opts.reference->x.size() == problem.primal_dim() &&
                opts.reference->y.size() == problem.dual_dim(),
            ErrorCode::kConfig, "reference dimensions do not match problem");
  }
  const double w = problem.metric_weight();

  SolveResult res;
  res.state = std::move(init);
  for (std::size_t i = 0; i < opts.max_iters; ++i) {
    const StepTriple t = schedule.next(i);
    PrimalDualState next = step(problem, t, res.state);
    const double step_norm =
        pair_distance(next.x, next.y, res.state.x, res.state.y, w);
    res.state = std::move(next);

    const bool converged = opts.step_tol > 0 && step_norm <= opts.step_tol;
    const bool last = converged || i + 1 == opts.max_iters;
    if (last || res.state.iter % opts.log_stride == 0) {
      IterationRecord rec;
      rec.iter = res.state.iter;
      rec.tau = t.tau;
      rec.sigma = t.sigma;
      rec.omega = t.omega;
      rec.step_norm = step_norm;
      if (opts.reference) {
        rec.dist_to_ref = pair_distance(res.state.x, res.state.y,
                                        opts.reference->x, opts.reference->y, w);
      }
      if (opts.record_objective)
        rec.objective = problem.primal_objective(res.state.x);
      res.log.push_back(rec);
    }
    if (converged) break;
  }
  return res;
}

}  // namespace gpdps
