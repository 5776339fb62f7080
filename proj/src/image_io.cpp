#include "gpdps/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gpdps/error.hpp"

namespace gpdps::io {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

std::size_t parse_uint(const std::string& tok, const std::string& path) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
    fail(ErrorCode::kIo, path + ": malformed PGM header");
  return std::stoul(tok);
}

}  // namespace

potts::Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5")
    fail(ErrorCode::kIo, path + ": not a P2/P5 PGM file");
  const std::size_t w = parse_uint(next_token(in), path);
  const std::size_t h = parse_uint(next_token(in), path);
  const std::size_t maxval = parse_uint(next_token(in), path);
  if (w == 0 || h == 0 || maxval == 0 || maxval > 65535)
    fail(ErrorCode::kIo, path + ": unsupported PGM dimensions or maxval");

  potts::Image img(h, w);
  const double denom = static_cast<double>(maxval);
  if (magic == "P2") {
    for (auto& v : img.values) {
      const std::string tok = next_token(in);
      const std::size_t s = parse_uint(tok, path);
      if (s > maxval) fail(ErrorCode::kIo, path + ": sample exceeds maxval");
      v = static_cast<double>(s) / denom;
    }
    return img;
  }
  // next_token consumed exactly one whitespace byte after maxval.
  const std::size_t bytes = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(img.size() * bytes);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    fail(ErrorCode::kIo, path + ": truncated PGM data");
  for (std::size_t k = 0; k < img.size(); ++k) {
    const std::size_t s =
        bytes == 2 ? (std::size_t{raw[2 * k]} << 8) | raw[2 * k + 1] : raw[k];
    if (s > maxval) fail(ErrorCode::kIo, path + ": sample exceeds maxval");
    img.values[k] = static_cast<double>(s) / denom;
  }
  return img;
}

void write_pgm(const std::string& path, const potts::Image& img,
               const PgmWriteOptions& opts) {
  require(opts.bit_depth == 8 || opts.bit_depth == 16, ErrorCode::kConfig,
          "PGM bit depth must be 8 or 16");
  require(img.n1 > 0 && img.n2 > 0, ErrorCode::kConfig, "empty image");
  const unsigned maxval = opts.bit_depth == 8 ? 255u : 65535u;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);

  out << (opts.format == PgmFormat::kAscii ? "P2" : "P5") << '\n';
  for (const auto& c : opts.comments) out << "# " << c << '\n';
  out << img.n2 << ' ' << img.n1 << '\n' << maxval << '\n';

  auto quantize = [&](double v) {
    const double c = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
    return static_cast<unsigned>(std::lround(c * maxval));
  };
  if (opts.format == PgmFormat::kAscii) {
    for (std::size_t i = 0; i < img.n1; ++i) {
      for (std::size_t j = 0; j < img.n2; ++j)
        out << (j ? " " : "") << quantize(img(i, j));
      out << '\n';
    }
  } else {
    std::vector<unsigned char> raw;
    raw.reserve(img.size() * (opts.bit_depth / 8));
    for (double v : img.values) {
      const unsigned q = quantize(v);
      if (opts.bit_depth == 16) raw.push_back(static_cast<unsigned char>(q >> 8));
      raw.push_back(static_cast<unsigned char>(q & 0xff));
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
  }
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

potts::Image gen_synthetic(std::size_t n1, std::size_t n2, std::uint64_t seed,
                           std::size_t n_shapes, double noise_sigma) {
  require(n1 >= 8 && n2 >= 8, ErrorCode::kConfig,
          "synthetic image needs at least 8x8 pixels");
  require(noise_sigma >= 0, ErrorCode::kConfig, "noise sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Distinct levels on an evenly spaced ladder, shuffled; index 0 is the
  // background.
  std::vector<double> levels(n_shapes + 1);
  for (std::size_t k = 0; k <= n_shapes; ++k)
    levels[k] = n_shapes == 0 ? 0.5
                              : 0.1 + 0.8 * static_cast<double>(k) /
                                          static_cast<double>(n_shapes);
  std::shuffle(levels.begin(), levels.end(), rng);

  potts::Image img(n1, n2, levels[0]);
  const double d1 = static_cast<double>(n1), d2 = static_cast<double>(n2);
  for (std::size_t s = 1; s <= n_shapes; ++s) {
    const double ci = unit(rng) * d1, cj = unit(rng) * d2;
    const double size = (0.1 + 0.25 * unit(rng)) * std::min(d1, d2);
    const bool disk = unit(rng) < 0.5;
    const double aspect = 0.5 + unit(rng);
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        const double di = static_cast<double>(i) + 0.5 - ci;
        const double dj = static_cast<double>(j) + 0.5 - cj;
        const bool inside =
            disk ? di * di + dj * dj <= size * size
                 : std::abs(di) <= size && std::abs(dj) <= size * aspect;
        if (inside) img(i, j) = levels[s];
      }
    }
  }
  if (noise_sigma > 0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (auto& v : img.values) v = std::clamp(v + noise(rng), 0.0, 1.0);
  }
  return img;
}

}  // namespace gpdps::io
