#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpdps/potts.hpp"

namespace gpdps::io {

enum class PgmFormat { kAscii, kBinary };  // P2, P5

struct PgmWriteOptions {
  PgmFormat format = PgmFormat::kBinary;
  int bit_depth = 16;  // 8 or 16
  /// Comment lines written after the magic number, without the leading '#'.
  std::vector<std::string> comments;
};

/// Reads a P2 or P5 file and scales samples by 1/maxval into [0, 1].
potts::Image read_pgm(const std::string& path);

/// Clamps to [0, 1] and quantizes to the requested depth.
void write_pgm(const std::string& path, const potts::Image& img,
               const PgmWriteOptions& opts = {});

/// Piecewise-constant test image: background plus n_shapes rectangles or
/// disks, each at a distinct gray level in [0, 1], then additive Gaussian
/// noise and clamping. Deterministic per seed.
potts::Image gen_synthetic(std::size_t n1, std::size_t n2, std::uint64_t seed,
                           std::size_t n_shapes = 6, double noise_sigma = 0.05);

}  // namespace gpdps::io
