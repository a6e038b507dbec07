#pragma once

#include <cstring>
#include <string>

#include <png.h>

#include "acaug/error.hpp"
#include "acaug/image.hpp"

namespace acaug {

/// 8-bit grayscale PNG. Requires linking libpng.
inline std::string encode_png(const GrayImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), 0, nullptr)) {
    throw Error(std::string("png: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels.data(), 0, nullptr)) {
    throw Error(std::string("png: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace acaug
