#include "jisa/image.hpp"

#include <png.h>

#include <cstring>
#include <string>

#include "jisa/errors.hpp"

namespace jisa {

Image::Image(int w, int h, Rgb fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3) {
  for (std::size_t k = 0; k < data.size(); k += 3) {
    data[k] = fill.r;
    data[k + 1] = fill.g;
    data[k + 2] = fill.b;
  }
}

namespace {

Image finish_read(png_image& img) {
  img.format = PNG_FORMAT_RGB;
  Image out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.data.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, out.data.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw InputError("png decode failed: " + msg);
  }
  return out;
}

png_image make_write_header(const Image& image) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  return img;
}

}  // namespace

Image read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw InputError("cannot read png '" + path.string() + "': " + img.message);
  }
  return finish_read(img);
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw InputError(std::string("png decode failed: ") + img.message);
  }
  return finish_read(img);
}

void write_png(const std::filesystem::path& path, const Image& image) {
  png_image img = make_write_header(image);
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.data.data(), 0, nullptr)) {
    throw InputError("cannot write png '" + path.string() + "': " + img.message);
  }
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  png_image img = make_write_header(image);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.data.data(), 0, nullptr)) {
    throw InputError(std::string("png encode failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.data.data(), 0, nullptr)) {
    throw InputError(std::string("png encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

}  // namespace jisa
