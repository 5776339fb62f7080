#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "gpdps/error.hpp"
#include "gpdps/image_io.hpp"

using namespace gpdps;
using namespace gpdps::io;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("gpdps_test_" + name);
}

}  // namespace

TEST_CASE("synthetic image: constant without shapes or noise") {
  const auto img = gen_synthetic(12, 9, 5, 0, 0);
  for (double v : img.values) CHECK(v == img.values[0]);
}

TEST_CASE("synthetic image: deterministic per seed") {
  const auto a = gen_synthetic(32, 40, 42);
  const auto b = gen_synthetic(32, 40, 42);
  const auto c = gen_synthetic(32, 40, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  for (double v : a.values) {
    CHECK(v >= 0);
    CHECK(v <= 1);
  }
}

TEST_CASE("synthetic image: at most background + shapes levels") {
  const auto img = gen_synthetic(64, 64, 7, 3, 0);
  std::set<double> levels(img.values.begin(), img.values.end());
  CHECK(levels.size() <= 4);
  CHECK(levels.size() >= 2);
}

TEST_CASE("synthetic image: too small") {
  CHECK_THROWS_AS(gen_synthetic(4, 16, 1), Error);
}

TEST_CASE("PGM round trip is lossless at the file bit depth") {
  for (int bits : {8, 16}) {
    for (PgmFormat fmt : {PgmFormat::kAscii, PgmFormat::kBinary}) {
      const double maxval = bits == 8 ? 255 : 65535;
      potts::Image img(5, 7);
      for (std::size_t i = 0; i < img.size(); ++i)
        img.values[i] = std::round(maxval * std::fmod(0.37 * i, 1.0)) / maxval;
      const auto path = temp_file("rt.pgm").string();
      write_pgm(path, img, {fmt, bits, {"line one", "k = v"}});
      const auto back = read_pgm(path);
      CHECK(back.n1 == 5);
      CHECK(back.n2 == 7);
      CHECK(back.values == img.values);
      std::filesystem::remove(path);
    }
  }
}

TEST_CASE("PGM writer clamps and emits comment lines") {
  potts::Image img(1, 3, std::vector<double>{-1, 0.5, 2});
  const auto path = temp_file("clamp.pgm").string();
  write_pgm(path, img, {PgmFormat::kAscii, 8, {"hello"}});
  std::ifstream in(path);
  std::string magic, comment;
  std::getline(in, magic);
  std::getline(in, comment);
  CHECK(magic == "P2");
  CHECK(comment == "# hello");
  const auto back = read_pgm(path);
  CHECK(back.values[0] == 0);
  CHECK(back.values[2] == 1);
  std::filesystem::remove(path);
}

TEST_CASE("PGM reader errors") {
  CHECK_THROWS_AS(read_pgm(temp_file("missing.pgm").string()), Error);
  const auto path = temp_file("bad.pgm").string();
  std::ofstream(path) << "P3\n1 1\n255\n0 0 0\n";
  CHECK_THROWS_AS(read_pgm(path), Error);
  std::filesystem::remove(path);
}
