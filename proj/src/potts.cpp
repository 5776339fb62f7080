#include "gpdps/potts.hpp"

#include <cmath>
#include <string>

#include "gpdps/error.hpp"

namespace gpdps::potts {

namespace {

inline double rho(double t) { return 2 * t - t * t; }

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    fail(ErrorCode::kConfig, std::string(what) + ": size mismatch (" +
                                 std::to_string(a) + " vs " +
                                 std::to_string(b) + ")");
}

void check_pairs(std::span<const double> z, std::span<const double> y) {
  check_same(z.size(), y.size(), "kappa");
  if (z.size() % 2 != 0)
    fail(ErrorCode::kConfig, "gradient fields hold two components per pixel");
}

}  // namespace

Image::Image(std::size_t n1_, std::size_t n2_, double fill)
    : n1(n1_), n2(n2_), values(n1_ * n2_, fill) {}

Image::Image(std::size_t n1_, std::size_t n2_, std::vector<double> v)
    : n1(n1_), n2(n2_), values(std::move(v)) {
  check_same(values.size(), n1 * n2, "Image");
}

GradField::GradField(std::size_t n1_, std::size_t n2_, double fill)
    : n1(n1_), n2(n2_), values(2 * n1_ * n2_, fill) {}

GradField::GradField(std::size_t n1_, std::size_t n2_, std::vector<double> v)
    : n1(n1_), n2(n2_), values(std::move(v)) {
  check_same(values.size(), 2 * n1 * n2, "GradField");
}

// ---------------------------------------------------------------------------

void dh(std::size_t n1, std::size_t n2, double h, std::span<const double> x,
        std::span<double> out) {
  check_same(x.size(), n1 * n2, "dh input");
  check_same(out.size(), 2 * n1 * n2, "dh output");
  const double inv_h = 1 / h;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t p = i * n2 + j;
      const double v = x[p];
      out[2 * p] = j + 1 < n2 ? (x[p + 1] - v) * inv_h : 0.0;
      out[2 * p + 1] = i + 1 < n1 ? (x[p + n2] - v) * inv_h : 0.0;
    }
  }
}

void dht(std::size_t n1, std::size_t n2, double h, std::span<const double> y,
         std::span<double> out) {
  check_same(y.size(), 2 * n1 * n2, "dht input");
  check_same(out.size(), n1 * n2, "dht output");
  const double inv_h = 1 / h;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t p = i * n2 + j;
      double s = 0;
      if (j + 1 < n2) s -= y[2 * p];
      if (j > 0) s += y[2 * (p - 1)];
      if (i + 1 < n1) s -= y[2 * p + 1];
      if (i > 0) s += y[2 * (p - n2) + 1];
      out[p] = s * inv_h;
    }
  }
}

double kappa_val(JumpNorm p, std::span<const double> z,
                 std::span<const double> y) {
  check_pairs(z, y);
  double s = 0;
  if (p == JumpNorm::kL1) {
    for (std::size_t k = 0; k < z.size(); ++k) s += rho(z[k] * y[k]);
  } else {
    for (std::size_t k = 0; k < z.size(); k += 2)
      s += rho(z[k] * y[k] + z[k + 1] * y[k + 1]);
  }
  return s;
}

void kappa_z(JumpNorm p, std::span<const double> z, std::span<const double> y,
             std::span<double> out) {
  check_pairs(z, y);
  check_same(out.size(), z.size(), "kappa_z output");
  if (p == JumpNorm::kL1) {
    for (std::size_t k = 0; k < z.size(); ++k)
      out[k] = 2 * (1 - z[k] * y[k]) * y[k];
  } else {
    for (std::size_t k = 0; k < z.size(); k += 2) {
      const double c = 2 * (1 - z[k] * y[k] - z[k + 1] * y[k + 1]);
      out[k] = c * y[k];
      out[k + 1] = c * y[k + 1];
    }
  }
}

void kappa_y(JumpNorm p, std::span<const double> z, std::span<const double> y,
             std::span<double> out) {
  check_pairs(z, y);
  check_same(out.size(), z.size(), "kappa_y output");
  if (p == JumpNorm::kL1) {
    for (std::size_t k = 0; k < z.size(); ++k)
      out[k] = 2 * (1 - z[k] * y[k]) * z[k];
  } else {
    for (std::size_t k = 0; k < z.size(); k += 2) {
      const double c = 2 * (1 - z[k] * y[k] - z[k + 1] * y[k + 1]);
      out[k] = c * z[k];
      out[k + 1] = c * z[k + 1];
    }
  }
}

double huber_value(JumpNorm p, std::span<const double> z, double gamma) {
  require(gamma > 0, ErrorCode::kPrecondition, "Huber parameter must be > 0");
  double s = 0;
  if (p == JumpNorm::kL1) {
    for (double t : z) {
      const double t2 = 2 * t * t;
      s += t2 / (t2 + gamma);
    }
  } else {
    require(z.size() % 2 == 0, ErrorCode::kConfig,
            "gradient fields hold two components per pixel");
    for (std::size_t k = 0; k < z.size(); k += 2) {
      const double t2 = 2 * (z[k] * z[k] + z[k + 1] * z[k + 1]);
      s += t2 / (t2 + gamma);
    }
  }
  return s;
}

void dual_from_primal_grad(JumpNorm p, std::span<const double> z, double gamma,
                           std::span<double> out) {
  require(gamma > 0, ErrorCode::kPrecondition, "Huber parameter must be > 0");
  check_same(out.size(), z.size(), "dual_from_primal output");
  if (p == JumpNorm::kL1) {
    for (std::size_t k = 0; k < z.size(); ++k)
      out[k] = 2 * z[k] / (2 * z[k] * z[k] + gamma);
  } else {
    for (std::size_t k = 0; k < z.size(); k += 2) {
      const double d = 2 * (z[k] * z[k] + z[k + 1] * z[k + 1]) + gamma;
      out[k] = 2 * z[k] / d;
      out[k + 1] = 2 * z[k + 1] / d;
    }
  }
}

GradField dh(const Image& x, double h) {
  GradField out(x.n1, x.n2);
  dh(x.n1, x.n2, h, x.values, out.values);
  return out;
}

Image dht(const GradField& y, double h) {
  Image out(y.n1, y.n2);
  dht(y.n1, y.n2, h, y.values, out.values);
  return out;
}

double kappa_val(JumpNorm p, const GradField& z, const GradField& y) {
  return kappa_val(p, std::span<const double>(z.values),
                   std::span<const double>(y.values));
}

GradField kappa_z(JumpNorm p, const GradField& z, const GradField& y) {
  GradField out(z.n1, z.n2);
  kappa_z(p, z.values, y.values, out.values);
  return out;
}

GradField kappa_y(JumpNorm p, const GradField& z, const GradField& y) {
  GradField out(z.n1, z.n2);
  kappa_y(p, z.values, y.values, out.values);
  return out;
}

double huber_value(JumpNorm p, const GradField& z, double gamma) {
  return huber_value(p, std::span<const double>(z.values), gamma);
}

// ---------------------------------------------------------------------------

PottsProblem::PottsProblem(PottsConfig cfg) : cfg_(std::move(cfg)) {
  require(cfg_.alpha > 0 && std::isfinite(cfg_.alpha), ErrorCode::kConfig,
          "alpha must be positive");
  require(cfg_.gamma >= 0 && std::isfinite(cfg_.gamma), ErrorCode::kConfig,
          "gamma must be non-negative");
  require(cfg_.h > 0 && std::isfinite(cfg_.h), ErrorCode::kConfig,
          "grid spacing must be positive");
  require(cfg_.f.n1 > 0 && cfg_.f.n2 > 0 &&
              cfg_.f.values.size() == cfg_.f.n1 * cfg_.f.n2,
          ErrorCode::kConfig, "data image must be non-empty");
  for (double v : cfg_.f.values)
    require(std::isfinite(v), ErrorCode::kConfig, "data image must be finite");
}

void PottsProblem::check_primal(std::span<const double> x) const {
  check_same(x.size(), primal_dim(), "Potts primal vector");
}

void PottsProblem::check_dual(std::span<const double> y) const {
  check_same(y.size(), dual_dim(), "Potts dual vector");
}

void PottsProblem::prox_primal(double tau, std::span<const double> v,
                               std::span<double> out) const {
  check_primal(v);
  check_primal(out);
  const double r = tau / cfg_.alpha;
  const double scale = 1 / (1 + r);
  const auto& f = cfg_.f.values;
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = scale * (v[k] + r * f[k]);
}

void PottsProblem::prox_dual(double sigma, std::span<const double> v,
                             std::span<double> out) const {
  check_dual(v);
  check_dual(out);
  const double scale = 1 / (1 + cfg_.gamma * sigma);
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = scale * v[k];
}

void PottsProblem::grad_x(std::span<const double> x, std::span<const double> y,
                          std::span<double> out) const {
  check_primal(x);
  check_dual(y);
  std::vector<double> z(dual_dim());
  dh(n1(), n2(), cfg_.h, x, z);
  kappa_z(cfg_.p, z, y, z);
  dht(n1(), n2(), cfg_.h, z, out);
}

void PottsProblem::grad_y(std::span<const double> x, std::span<const double> y,
                          std::span<double> out) const {
  check_primal(x);
  check_dual(y);
  std::vector<double> z(dual_dim());
  dh(n1(), n2(), cfg_.h, x, z);
  kappa_y(cfg_.p, z, y, out);
}

double PottsProblem::value(std::span<const double> x,
                           std::span<const double> y) const {
  check_primal(x);
  check_dual(y);
  std::vector<double> z(dual_dim());
  dh(n1(), n2(), cfg_.h, x, z);
  return kappa_val(cfg_.p, std::span<const double>(z), y);
}

std::optional<double> PottsProblem::primal_objective(
    std::span<const double> x) const {
  check_primal(x);
  if (cfg_.gamma <= 0) return std::nullopt;
  double data = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - cfg_.f.values[k];
    data += d * d;
  }
  std::vector<double> z(dual_dim());
  dh(n1(), n2(), cfg_.h, x, z);
  return data / (2 * cfg_.alpha) +
         huber_value(cfg_.p, std::span<const double>(z), cfg_.gamma);
}

double PottsProblem::objective(const Image& x) const {
  require(cfg_.gamma > 0, ErrorCode::kPrecondition,
          "objective needs gamma > 0");
  return *primal_objective(x.values);
}

GradField PottsProblem::dual_from_primal(const Image& x) const {
  check_primal(x.values);
  GradField z = dh(x, cfg_.h);
  GradField out(x.n1, x.n2);
  dual_from_primal_grad(cfg_.p, z.values, cfg_.gamma, out.values);
  return out;
}

PrimalDualState PottsProblem::initial_state() const {
  return PrimalDualState::from(cfg_.f.values, Vector(dual_dim(), 0.0));
}

}  // namespace gpdps::potts
