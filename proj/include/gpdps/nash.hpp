#pragma once

// Two-player elliptic Nash equilibrium game reformulated through the
// Nikaido-Isoda function. Each player k controls u_k on a subdomain omega_k,
// the state solves -Delta y = B_1 u_1 + B_2 u_2 + f with homogeneous
// Dirichlet data, and the payouts are
//   phi_k(u) = 1/2 ||S(u) - z_k||^2 + alpha_k/2 ||B_k u_k||^2.
// Both G and F* are the indicator of the box [a, b] on the control masks.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gpdps/core.hpp"
#include "gpdps/poisson.hpp"

namespace gpdps::nash {

using Field = std::vector<double>;
using Mask = std::vector<std::uint8_t>;

/// Default control domains: omega_1 = {y < 1/2}, omega_2 = {y > 1/2}, where
/// row i of a Field sits at y = (i + 1) h.
Mask lower_half_mask(const Grid& g);
Mask upper_half_mask(const Grid& g);

struct NashConfig {
  std::size_t n = 63;
  Mask mask1;
  Mask mask2;
  double a = -0.5;
  double b = 0.5;
  double alpha1 = 1;
  double alpha2 = 1;
  Field z1;
  Field z2;
  Field f;

  /// Default masks and zero data on an n x n grid.
  static NashConfig defaults(std::size_t n);
};

/// Control pair (u_1, u_2) stored back to back; that is the primal (and dual)
/// vector layout of NashProblem.
struct ControlPair {
  std::span<const double> first;
  std::span<const double> second;
};

class NashProblem final : public SaddleProblem {
 public:
  explicit NashProblem(NashConfig cfg);

  const NashConfig& config() const { return cfg_; }
  const Grid& grid() const { return solver_.grid(); }
  const PoissonSolver& poisson() const { return solver_; }

  std::size_t primal_dim() const override { return 2 * grid().size(); }
  std::size_t dual_dim() const override { return 2 * grid().size(); }

  /// Projection onto the box on each mask, zero elsewhere; tau is unused.
  void prox_primal(double tau, std::span<const double> v,
                   std::span<double> out) const override;
  void prox_dual(double sigma, std::span<const double> v,
                 std::span<double> out) const override;

  /// K_u(u, v): three state solves and two adjoint solves.
  void grad_x(std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override;
  /// K_v(u, v): two state solves and two adjoint solves.
  void grad_y(std::span<const double> u, std::span<const double> v,
              std::span<double> out) const override;
  /// Nikaido-Isoda coupling psi(u, v).
  double value(std::span<const double> u,
               std::span<const double> v) const override;
  double metric_weight() const override;

  /// State map S(u_1, u_2).
  Field state(std::span<const double> u1, std::span<const double> u2) const;
  double payout(int k, std::span<const double> u1,
                std::span<const double> u2) const;
  /// phi_1(u) - phi_1(v_1, u_2) + phi_2(u) - phi_2(u_1, v_2).
  double psi(std::span<const double> u, std::span<const double> v) const;

  void project(std::span<const double> w, std::span<double> out) const;

  std::uint64_t poisson_solves() const { return solver_.solve_count(); }
  void reset_poisson_solves() const { solver_.reset_solve_count(); }

  /// Discrete L^2 inner product (h^2 weighted).
  double inner(std::span<const double> a, std::span<const double> b) const;

 private:
  std::span<const double> half(std::span<const double> v, int k) const;
  std::span<double> half(std::span<double> v, int k) const;

  NashConfig cfg_;
  PoissonSolver solver_;
};

/// Smooth shape functions on [0, 1]^2 used to manufacture an equilibrium.
struct ManufacturedProfile {
  std::function<double(double, double)> w1;
  std::function<double(double, double)> w2;
  std::function<double(double, double)> y_s;

  /// w1 = 0.4 sin(pi x) sin(2 pi y), w2 = 0.4 sin(2 pi x) sin(pi y),
  /// y_s = sin(pi x) sin(pi y).
  static ManufacturedProfile standard();
  static ManufacturedProfile zero();
};

struct Manufactured {
  NashConfig config;
  Field u_star;  // (u_1*, u_2*) back to back
  Field y_star;

  /// (u*, u*) as a primal-dual state.
  PrimalDualState solution() const;
};

/// Builds f and z_k so that u* = (mask_1 w_1, mask_2 w_2) is an exact discrete
/// critical point with v* = u*. Throws kConfig if some |w_k| exceeds
/// 0.8 min(|a|, b) on its mask.
Manufactured manufacture(std::size_t n, const ManufacturedProfile& profile,
                         double a = -0.5, double b = 0.5, double alpha1 = 1,
                         double alpha2 = 1);

}  // namespace gpdps::nash
