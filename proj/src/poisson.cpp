#include "gpdps/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

#include "gpdps/error.hpp"

namespace gpdps::nash {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* data;
};

}  // namespace

Grid::Grid(std::size_t n_) : n(n_) {
  require(n >= 2, ErrorCode::kConfig, "grid needs at least 2 interior nodes");
}

struct PoissonSolver::Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    if (plan) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

PoissonSolver::PoissonSolver(Grid grid)
    : grid_(grid),
      plan_(std::make_unique<Plan>()),
      solves_(std::make_unique<std::atomic<std::uint64_t>>(0)) {
  const int n = static_cast<int>(grid_.n);
  {
    FftwBuffer in(grid_.size()), out(grid_.size());
    std::lock_guard lock(planner_mutex());
    plan_->plan = fftw_plan_r2r_2d(n, n, in.data, out.data, FFTW_RODFT00,
                                   FFTW_RODFT00, FFTW_ESTIMATE);
  }
  if (!plan_->plan) fail(ErrorCode::kConfig, "could not build sine transform");

  // Unnormalized DST-I applied twice scales by (2(n+1))^2 per dimension pair.
  const double norm = 2.0 * static_cast<double>(grid_.n + 1);
  inv_eig_.resize(grid_.size());
  for (std::size_t j = 0; j < grid_.n; ++j)
    for (std::size_t k = 0; k < grid_.n; ++k)
      inv_eig_[j * grid_.n + k] = 1.0 / (eigenvalue(j + 1, k + 1) * norm * norm);
}

PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;
PoissonSolver& PoissonSolver::operator=(PoissonSolver&&) noexcept = default;

double PoissonSolver::eigenvalue(std::size_t j, std::size_t k) const {
  const double h = grid_.h();
  const double sj = std::sin(std::numbers::pi * static_cast<double>(j) * h / 2);
  const double sk = std::sin(std::numbers::pi * static_cast<double>(k) * h / 2);
  return 4.0 / (h * h) * (sj * sj + sk * sk);
}

void PoissonSolver::solve(std::span<const double> rhs,
                          std::span<double> out) const {
  const std::size_t m = grid_.size();
  if (rhs.size() != m || out.size() != m)
    fail(ErrorCode::kConfig, "Poisson solve: expected " + std::to_string(m) +
                                 " entries, got " + std::to_string(rhs.size()));
  FftwBuffer a(m), b(m);
  std::memcpy(a.data, rhs.data(), m * sizeof(double));
  fftw_execute_r2r(plan_->plan, a.data, b.data);
  for (std::size_t i = 0; i < m; ++i) b.data[i] *= inv_eig_[i];
  fftw_execute_r2r(plan_->plan, b.data, a.data);
  std::memcpy(out.data(), a.data, m * sizeof(double));
  solves_->fetch_add(1);
}

std::vector<double> PoissonSolver::solve(std::span<const double> rhs) const {
  std::vector<double> out(grid_.size());
  solve(rhs, out);
  return out;
}

void PoissonSolver::apply(std::span<const double> w,
                          std::span<double> out) const {
  const std::size_t n = grid_.n;
  if (w.size() != n * n || out.size() != n * n)
    fail(ErrorCode::kConfig, "Laplacian apply: size mismatch");
  const double inv_h2 = 1.0 / (grid_.h() * grid_.h());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t p = i * n + j;
      double s = 4 * w[p];
      if (i > 0) s -= w[p - n];
      if (i + 1 < n) s -= w[p + n];
      if (j > 0) s -= w[p - 1];
      if (j + 1 < n) s -= w[p + 1];
      out[p] = s * inv_h2;
    }
  }
}

std::vector<double> PoissonSolver::apply(std::span<const double> w) const {
  std::vector<double> out(grid_.size());
  apply(w, out);
  return out;
}

}  // namespace gpdps::nash
