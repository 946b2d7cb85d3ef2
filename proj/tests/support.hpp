#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "jisa/image.hpp"
#include "jisa/puzzle.hpp"

namespace testing_support {

using jisa::Image;
using jisa::Piece;

inline Piece make_piece(int id, int P, const std::function<jisa::Rgb(int, int)>& color) {
  Piece p{id, P, std::vector<std::uint8_t>(static_cast<std::size_t>(P) * P * 3)};
  for (int r = 0; r < P; ++r) {
    for (int c = 0; c < P; ++c) {
      const auto v = color(r, c);
      p.at(r, c, 0) = v.r;
      p.at(r, c, 1) = v.g;
      p.at(r, c, 2) = v.b;
    }
  }
  return p;
}

inline Piece uniform_piece(int id, int P, jisa::Rgb c) {
  return make_piece(id, P, [c](int, int) { return c; });
}

inline Piece random_piece(int id, int P, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, 255);
  return make_piece(id, P, [&](int, int) {
    return jisa::Rgb{static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)),
                     static_cast<std::uint8_t>(d(rng))};
  });
}

// Smooth colour field with mild texture; adjacent pieces continue each other.
inline Image textured_image(int width, int height, std::uint64_t seed) {
  Image img(width, height);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 6.283);
  const double a = phase(rng), b = phase(rng), c = phase(rng);
  std::uniform_int_distribution<int> noise(-6, 6);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      auto clamp = [](double v) { return static_cast<std::uint8_t>(std::max(0.0, std::min(255.0, v))); };
      const double r = 128 + 90 * std::sin(x * 0.031 + a) * std::cos(y * 0.017 + b) + noise(rng);
      const double g = 128 + 80 * std::cos(x * 0.013 + y * 0.023 + c) + noise(rng);
      const double bl = 40 + 0.25 * x + 0.2 * y + 30 * std::sin((x + y) * 0.05 + a) + noise(rng);
      img.set_pixel(y, x, {clamp(r), clamp(g), clamp(bl)});
    }
  }
  return img;
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("jisa_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path source_dir() { return JISA_SOURCE_DIR; }

}  // namespace testing_support
