#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace jisa {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Interleaved 8-bit RGB raster, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, Rgb fill = {});

  std::uint8_t& at(int row, int col, int channel) {
    return data[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
  std::uint8_t at(int row, int col, int channel) const {
    return data[(static_cast<std::size_t>(row) * width + col) * 3 + channel];
  }
  Rgb pixel(int row, int col) const {
    const auto* p = &data[(static_cast<std::size_t>(row) * width + col) * 3];
    return {p[0], p[1], p[2]};
  }
  void set_pixel(int row, int col, Rgb c) {
    auto* p = &data[(static_cast<std::size_t>(row) * width + col) * 3];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  friend bool operator==(const Image&, const Image&) = default;
};

// PNG codec. Gray, palette and alpha inputs are converted to 8-bit RGB.
Image read_png(const std::filesystem::path& path);
Image decode_png(std::span<const std::uint8_t> bytes);
void write_png(const std::filesystem::path& path, const Image& image);
std::vector<std::uint8_t> encode_png(const Image& image);

}  // namespace jisa
