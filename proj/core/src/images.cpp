#include "sci/images.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "sci/errors.hpp"

namespace sci {

namespace {

std::vector<unsigned char> to_bytes(std::span<const double> frame) {
  std::vector<unsigned char> px(frame.size());
  for (std::size_t n = 0; n < frame.size(); ++n) px[n] = to_gray8(frame[n]);
  return px;
}

void write_pgm(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               const std::vector<unsigned char>& px) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "P5\n" << cols << ' ' << rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_png(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               const std::vector<unsigned char>& px) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw IoError("cannot write '" + path.string() + "'");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < rows; ++r) png_write_row(png, px.data() + r * cols);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

ImageFormat parse_image_format(std::string_view tag) {
  if (tag == "pgm") return ImageFormat::Pgm;
  if (tag == "png") return ImageFormat::Png;
  throw ConfigError("unknown image format '" + std::string(tag) + "' (expected pgm or png)");
}

unsigned char to_gray8(double value) noexcept {
  if (!(value > 0.0)) return 0;
  if (value >= 1.0) return 255;
  return static_cast<unsigned char>(std::floor(value * 255.0 + 0.5));
}

std::vector<std::filesystem::path> export_frames(const VideoCube& cube, const std::filesystem::path& dir,
                                                 ImageFormat format, const std::string& prefix) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  std::vector<std::filesystem::path> written;
  for (std::size_t k = 0; k < cube.frames(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "_%04zu.%s", k, format == ImageFormat::Pgm ? "pgm" : "png");
    const auto path = dir / (prefix + name);
    const auto px = to_bytes(cube.frame(k));
    if (format == ImageFormat::Pgm) {
      write_pgm(path, cube.n_x(), cube.n_y(), px);
    } else {
      write_png(path, cube.n_x(), cube.n_y(), px);
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace sci
