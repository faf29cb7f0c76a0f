#include "uwimg/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "uwimg/errors.hpp"

namespace uwimg {

namespace {

struct FileCloser {
  FILE* f = nullptr;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void open_for_read(const std::filesystem::path& path, FileCloser& file,
                   PngReadGuard& guard) {
  file.f = std::fopen(path.string().c_str(), "rb");
  if (!file.f) throw IoError("cannot open " + path.string());
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.f) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw FormatError(path.string() + " is not a PNG file");
  guard.png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!guard.png) throw IoError("libpng allocation failed");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw IoError("libpng allocation failed");
}

}  // namespace

Image read_image_png(const std::filesystem::path& path) {
  FileCloser file;
  PngReadGuard guard;
  std::vector<unsigned char> buffer;
  std::vector<png_bytep> rows;
  open_for_read(path, file, guard);

  if (setjmp(png_jmpbuf(guard.png)))
    throw IoError("PNG decode failed for " + path.string());
  png_init_io(guard.png, file.f);
  png_set_sig_bytes(guard.png, 8);
  png_read_info(guard.png, guard.info);

  const png_uint_32 width = png_get_image_width(guard.png, guard.info);
  const png_uint_32 height = png_get_image_height(guard.png, guard.info);
  const int bit_depth = png_get_bit_depth(guard.png, guard.info);
  const int color_type = png_get_color_type(guard.png, guard.info);
  if (bit_depth > 8)
    throw FormatError(path.string() + ": expected an 8-bit image, got " +
                      std::to_string(bit_depth) + "-bit");

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(guard.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(guard.png);
  if (png_get_valid(guard.png, guard.info, PNG_INFO_tRNS))
    png_set_tRNS_to_alpha(guard.png);
  if (color_type == PNG_COLOR_TYPE_GRAY ||
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(guard.png);
  png_set_strip_alpha(guard.png);
  png_read_update_info(guard.png, guard.info);

  if (png_get_rowbytes(guard.png, guard.info) != size_t(width) * 3)
    throw FormatError(path.string() + ": unsupported PNG layout");

  buffer.resize(size_t(width) * height * 3);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r)
    rows[r] = buffer.data() + size_t(r) * width * 3;
  png_read_image(guard.png, rows.data());
  png_read_end(guard.png, nullptr);

  Image img(Eigen::Index(height), Eigen::Index(width));
  for (Eigen::Index r = 0; r < img.rows(); ++r)
    for (Eigen::Index c = 0; c < img.cols(); ++c) {
      const unsigned char* px = rows[size_t(r)] + size_t(c) * 3;
      for (int ch = 0; ch < 3; ++ch) img[ch](r, c) = px[ch] / 255.0;
    }
  return img;
}

DepthMap read_depth_png(const std::filesystem::path& path,
                        double meters_per_unit) {
  if (!(meters_per_unit > 0.0))
    throw InvalidParameter("read_depth_png: meters_per_unit must be > 0");
  FileCloser file;
  PngReadGuard guard;
  std::vector<unsigned char> buffer;
  std::vector<png_bytep> rows;
  open_for_read(path, file, guard);

  if (setjmp(png_jmpbuf(guard.png)))
    throw IoError("PNG decode failed for " + path.string());
  png_init_io(guard.png, file.f);
  png_set_sig_bytes(guard.png, 8);
  png_read_info(guard.png, guard.info);

  const png_uint_32 width = png_get_image_width(guard.png, guard.info);
  const png_uint_32 height = png_get_image_height(guard.png, guard.info);
  const int bit_depth = png_get_bit_depth(guard.png, guard.info);
  const int color_type = png_get_color_type(guard.png, guard.info);
  if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 16)
    throw FormatError(path.string() +
                      ": depth maps must be 16-bit grayscale PNG");
#if defined(PNG_READ_SWAP_SUPPORTED)
  png_set_swap(guard.png);  // PNG stores 16-bit big-endian
#endif
  png_read_update_info(guard.png, guard.info);

  buffer.resize(size_t(width) * height * 2);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r)
    rows[r] = buffer.data() + size_t(r) * width * 2;
  png_read_image(guard.png, rows.data());
  png_read_end(guard.png, nullptr);

  DepthMap depth(Eigen::Index(height), Eigen::Index(width));
  for (Eigen::Index r = 0; r < depth.rows(); ++r) {
    const auto* px = reinterpret_cast<const uint16_t*>(rows[size_t(r)]);
    for (Eigen::Index c = 0; c < depth.cols(); ++c)
      depth(r, c) = double(px[c]) * meters_per_unit;
  }
  return depth;
}

void write_image_png(const std::filesystem::path& path, const Image& img) {
  require_image(img);
  FileCloser file;
  PngWriteGuard guard;
  std::vector<unsigned char> buffer(size_t(img.rows()) * img.cols() * 3);
  std::vector<png_bytep> rows(size_t(img.rows()));
  for (Eigen::Index r = 0; r < img.rows(); ++r) {
    rows[size_t(r)] = buffer.data() + size_t(r) * img.cols() * 3;
    for (Eigen::Index c = 0; c < img.cols(); ++c)
      for (int ch = 0; ch < 3; ++ch) {
        const double v = std::clamp(img[ch](r, c), 0.0, 1.0);
        rows[size_t(r)][c * 3 + ch] =
            static_cast<unsigned char>(std::lround(v * 255.0));
      }
  }

  file.f = std::fopen(path.string().c_str(), "wb");
  if (!file.f) throw IoError("cannot write " + path.string());
  guard.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                      nullptr);
  if (!guard.png) throw IoError("libpng allocation failed");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw IoError("libpng allocation failed");
  if (setjmp(png_jmpbuf(guard.png)))
    throw IoError("PNG encode failed for " + path.string());
  png_init_io(guard.png, file.f);
  png_set_IHDR(guard.png, guard.info, png_uint_32(img.cols()),
               png_uint_32(img.rows()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(guard.png, guard.info);
  png_write_image(guard.png, rows.data());
  png_write_end(guard.png, nullptr);
}

void write_depth_png(const std::filesystem::path& path, const DepthMap& depth,
                     double meters_per_unit) {
  if (!(meters_per_unit > 0.0))
    throw InvalidParameter("write_depth_png: meters_per_unit must be > 0");
  require_depth(depth);
  FileCloser file;
  PngWriteGuard guard;
  std::vector<unsigned char> buffer(size_t(depth.rows()) * depth.cols() * 2);
  std::vector<png_bytep> rows(size_t(depth.rows()));
  for (Eigen::Index r = 0; r < depth.rows(); ++r) {
    rows[size_t(r)] = buffer.data() + size_t(r) * depth.cols() * 2;
    auto* px = reinterpret_cast<uint16_t*>(rows[size_t(r)]);
    for (Eigen::Index c = 0; c < depth.cols(); ++c) {
      const double units = std::round(depth(r, c) / meters_per_unit);
      px[c] = static_cast<uint16_t>(std::clamp(units, 0.0, 65535.0));
    }
  }

  file.f = std::fopen(path.string().c_str(), "wb");
  if (!file.f) throw IoError("cannot write " + path.string());
  guard.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                      nullptr);
  if (!guard.png) throw IoError("libpng allocation failed");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw IoError("libpng allocation failed");
  if (setjmp(png_jmpbuf(guard.png)))
    throw IoError("PNG encode failed for " + path.string());
  png_init_io(guard.png, file.f);
  png_set_IHDR(guard.png, guard.info, png_uint_32(depth.cols()),
               png_uint_32(depth.rows()), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(guard.png, guard.info);
#if defined(PNG_WRITE_SWAP_SUPPORTED)
  png_set_swap(guard.png);
#endif
  png_write_image(guard.png, rows.data());
  png_write_end(guard.png, nullptr);
}

}  // namespace uwimg
