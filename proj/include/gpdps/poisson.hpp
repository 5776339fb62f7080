#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace gpdps::nash {

/// n x n interior nodes of the unit square, spacing h = 1/(n + 1).
struct Grid {
  std::size_t n = 0;

  explicit Grid(std::size_t n_);
  double h() const { return 1.0 / static_cast<double>(n + 1); }
  std::size_t size() const { return n * n; }
};

/// Dirichlet 5-point Laplacian A_h = -Delta_h on a Grid, solved by a 2-D
/// type-I sine transform. The transform plan is built once per solver and
/// reused by every solve; solve() is reentrant.
class PoissonSolver {
 public:
  explicit PoissonSolver(Grid grid);
  ~PoissonSolver();
  PoissonSolver(PoissonSolver&&) noexcept;
  PoissonSolver& operator=(PoissonSolver&&) noexcept;
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;

  const Grid& grid() const { return grid_; }

  /// out = A_h^{-1} rhs. Increments solve_count().
  void solve(std::span<const double> rhs, std::span<double> out) const;
  std::vector<double> solve(std::span<const double> rhs) const;

  /// out = A_h w (stencil application).
  void apply(std::span<const double> w, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> w) const;

  /// Eigenvalue of A_h for the sine mode (j, k), 1-based.
  double eigenvalue(std::size_t j, std::size_t k) const;

  std::uint64_t solve_count() const { return solves_->load(); }
  void reset_solve_count() const { solves_->store(0); }

 private:
  struct Plan;

  Grid grid_;
  std::unique_ptr<Plan> plan_;
  std::vector<double> inv_eig_;  // includes the transform normalization
  std::unique_ptr<std::atomic<std::uint64_t>> solves_;
};

}  // namespace gpdps::nash
