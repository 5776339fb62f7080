#pragma once

// Huber-regularized Potts (l0-TV) denoising as a saddle-point problem:
//   G(x) = 1/(2 alpha) ||x - f||^2,  F*(y) = gamma/2 ||y||^2,
//   K(x, y) = kappa_p(D_h x, y) with rho(t) = 2t - t^2.

#include <cstddef>
#include <span>
#include <vector>

#include "gpdps/core.hpp"
#include "gpdps/schedules.hpp"

namespace gpdps::potts {

/// n1 x n2 scalar grid, row-major (index i * n2 + j).
struct Image {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::vector<double> values;

  Image() = default;
  Image(std::size_t n1, std::size_t n2, double fill = 0.0);
  Image(std::size_t n1, std::size_t n2, std::vector<double> v);

  double& operator()(std::size_t i, std::size_t j) { return values[i * n2 + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return values[i * n2 + j];
  }
  std::size_t size() const { return values.size(); }
};

/// n1 x n2 x 2 field, interleaved per pixel (index (i * n2 + j) * 2 + k).
/// k = 0 holds horizontal differences, k = 1 vertical ones.
struct GradField {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::vector<double> values;

  GradField() = default;
  GradField(std::size_t n1, std::size_t n2, double fill = 0.0);
  GradField(std::size_t n1, std::size_t n2, std::vector<double> v);

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return values[(i * n2 + j) * 2 + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values[(i * n2 + j) * 2 + k];
  }
  std::size_t size() const { return values.size(); }
};

// Raw-span kernels; `out` must be sized by the caller. These back both the
// value-typed wrappers and the SaddleProblem hooks.
void dh(std::size_t n1, std::size_t n2, double h, std::span<const double> x,
        std::span<double> out);
void dht(std::size_t n1, std::size_t n2, double h, std::span<const double> y,
         std::span<double> out);
double kappa_val(JumpNorm p, std::span<const double> z,
                 std::span<const double> y);
void kappa_z(JumpNorm p, std::span<const double> z, std::span<const double> y,
             std::span<double> out);
void kappa_y(JumpNorm p, std::span<const double> z, std::span<const double> y,
             std::span<double> out);
double huber_value(JumpNorm p, std::span<const double> z, double gamma);
void dual_from_primal_grad(JumpNorm p, std::span<const double> z, double gamma,
                           std::span<double> out);

/// Forward differences, zero at the far boundary.
GradField dh(const Image& x, double h = 1.0);
/// Exact adjoint of dh (negative discrete divergence).
Image dht(const GradField& y, double h = 1.0);

double kappa_val(JumpNorm p, const GradField& z, const GradField& y);
GradField kappa_z(JumpNorm p, const GradField& z, const GradField& y);
GradField kappa_y(JumpNorm p, const GradField& z, const GradField& y);

/// |t|_gamma = 2t^2 / (2t^2 + gamma), per component (p = 1) or on the pixel
/// 2-norm (p = inf).
double huber_value(JumpNorm p, const GradField& z, double gamma);

struct PottsConfig {
  double alpha = 1;
  double gamma = 1e-3;
  JumpNorm p = JumpNorm::kL1;
  Image f;
  double h = 1;
};

class PottsProblem final : public SaddleProblem {
 public:
  explicit PottsProblem(PottsConfig cfg);

  const PottsConfig& config() const { return cfg_; }
  std::size_t n1() const { return cfg_.f.n1; }
  std::size_t n2() const { return cfg_.f.n2; }

  std::size_t primal_dim() const override { return cfg_.f.size(); }
  std::size_t dual_dim() const override { return 2 * cfg_.f.size(); }

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
  std::optional<double> primal_objective(
      std::span<const double> x) const override;

  /// 1/(2 alpha) ||x - f||^2 + huber_value(p, dh x, gamma).
  double objective(const Image& x) const;
  /// Dual point satisfying the dual optimality condition at x.
  GradField dual_from_primal(const Image& x) const;

  /// Default start: x = f, y = 0.
  PrimalDualState initial_state() const;

 private:
  void check_primal(std::span<const double> x) const;
  void check_dual(std::span<const double> y) const;

  PottsConfig cfg_;
};

}  // namespace gpdps::potts
