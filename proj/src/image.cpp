/*
 * Copyright 2026 The coshrem Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coshrem/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace coshrem {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

// --- PGM -------------------------------------------------------------------

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  long next_int() {
    skip_space_and_comments();
    long value = 0;
    bool any = false;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) throw IoError("PGM header value out of range");
      ++pos_;
      any = true;
    }
    if (!any) throw IoError("malformed PGM header");
    return value;
  }

  std::size_t payload_offset() {
    // exactly one whitespace byte separates maxval from the raster
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw IoError("malformed PGM header");
    }
    return pos_ + 1;
  }

  void seek(std::size_t pos) { pos_ = pos; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
  if (bytes[1] != '5') {
    if (bytes[1] == '6' || bytes[1] == '3') {
      throw IoError("non-grayscale input: PPM colour images are not supported");
    }
    throw IoError("unsupported PNM variant P" + std::string(1, static_cast<char>(bytes[1])) +
                  " (only binary P5 grayscale is supported)");
  }
  PgmHeaderReader reader(bytes);
  reader.seek(2);
  const long width = reader.next_int();
  const long height = reader.next_int();
  const long maxval = reader.next_int();
  if (width <= 0 || height <= 0) throw IoError("PGM has empty dimensions");
  if (maxval <= 0 || maxval > 65535) {
    throw IoError("unsupported bit depth: PGM maxval " + std::to_string(maxval));
  }
  const std::size_t offset = reader.payload_offset();
  const std::size_t bytesPerSample = maxval > 255 ? 2 : 1;
  const std::size_t needed = static_cast<std::size_t>(width) * height * bytesPerSample;
  if (bytes.size() < offset + needed) throw IoError("truncated PGM payload");

  GrayImage image(height, width);
  const std::uint8_t* p = bytes.data() + offset;
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    const unsigned value =
        bytesPerSample == 2 ? (unsigned(p[2 * i]) << 8) | p[2 * i + 1] : p[i];
    if (maxval == 255) {
      image.data()[i] = value;
    } else if (maxval == 65535) {
      image.data()[i] = value / 257.0;
    } else {
      image.data()[i] = value * 255.0 / static_cast<double>(maxval);
    }
  }
  return image;
}

std::vector<std::uint8_t> encode_pgm8(const ByteImage& image) {
  const std::string header = "P5\n" + std::to_string(image.cols()) + " " +
                             std::to_string(image.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.data(), image.data() + image.size());
  return out;
}

// --- PNG -------------------------------------------------------------------

struct PngReadCursor {
  const std::vector<std::uint8_t>* bytes;
  std::size_t pos;
};

void png_error_fn(png_structp png, png_const_charp message) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = message;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

void png_read_fn(png_structp png, png_bytep out, png_size_t count) {
  auto* cursor = static_cast<PngReadCursor*>(png_get_io_ptr(png));
  if (cursor->pos + count > cursor->bytes->size()) png_error(png, "truncated PNG");
  std::memcpy(out, cursor->bytes->data() + cursor->pos, count);
  cursor->pos += count;
}

void png_write_fn(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void png_flush_fn(png_structp) {}

GrayImage decode_png(const std::vector<std::uint8_t>& bytes) {
  // IHDR sits at a fixed offset: signature(8) length(4) "IHDR"(4) w(4) h(4)
  if (bytes.size() < 33) throw IoError("truncated PNG");
  const int bitDepth = bytes[24];
  const int colorType = bytes[25];
  if (colorType != PNG_COLOR_TYPE_GRAY && colorType != PNG_COLOR_TYPE_GRAY_ALPHA) {
    throw IoError("non-grayscale input: PNG colour type " + std::to_string(colorType) +
                  " is not supported");
  }
  if (bitDepth != 8 && bitDepth != 16) {
    throw IoError("unsupported bit depth: " + std::to_string(bitDepth) +
                  "-bit PNG (8 or 16 required)");
  }

  std::string error;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  GrayImage image;
  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> raster;
  PngReadCursor cursor{&bytes, 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("PNG decode failed: " + error);
  }
  png_set_read_fn(png, &cursor, png_read_fn);
  png_read_info(png, info);
  if (colorType == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const std::size_t rowBytes = png_get_rowbytes(png, info);
  raster.resize(rowBytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = raster.data() + y * rowBytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  image.resize(height, width);
  for (png_uint_32 y = 0; y < height; ++y) {
    const std::uint8_t* row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      image(y, x) = bitDepth == 16 ? ((unsigned(row[2 * x]) << 8) | row[2 * x + 1]) / 257.0
                                   : static_cast<double>(row[x]);
    }
  }
  return image;
}

std::vector<std::uint8_t> encode_png_raw(const std::uint8_t* interleaved, int width, int height,
                                         int channels) {
  std::vector<std::uint8_t> out;
  std::string error;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failed: " + error);
  }
  png_set_write_fn(png, &out, png_write_fn, png_flush_fn);
  png_set_IHDR(png, info, width, height, 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(interleaved + std::size_t(y) * width * channels));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

ByteImage to_byte_image(const GrayImage& image) {
  return image.unaryExpr([](double v) { return to_byte(v); });
}

Rgb blend(Rgb under, Rgb over, double alpha) {
  auto mix = [alpha](std::uint8_t a, std::uint8_t b) {
    return to_byte((1.0 - alpha) * a + alpha * b);
  };
  return {mix(under.r, over.r), mix(under.g, over.g), mix(under.b, over.b)};
}

RgbImage brightened_background(const GrayImage& base) {
  RgbImage out(base.rows(), base.cols());
  const ByteImage bright = (base * 1.5).unaryExpr([](double v) { return to_byte(v); });
  out.r = bright;
  out.g = bright;
  out.b = bright;
  return out;
}

}  // namespace

GrayImage decode_gray(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '7') {
    return decode_pgm(bytes);
  }
  static constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngSignature, kPngSignature + 8, bytes.begin())) {
    return decode_png(bytes);
  }
  throw IoError("unrecognised image format (expected PGM or PNG)");
}

GrayImage load_gray(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_gray(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void save_gray(const GrayImage& image, const std::filesystem::path& path) {
  const ByteImage bytes = to_byte_image(image);
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_file(path, encode_png(bytes));
  } else if (ext == ".pgm") {
    write_file(path, encode_pgm8(bytes));
  } else {
    throw IoError("unsupported output extension '" + ext + "' (use .pgm or .png)");
  }
}

void save_unit_pgm16(const Image<double>& values, const std::filesystem::path& path) {
  const std::string header = "P5\n" + std::to_string(values.cols()) + " " +
                             std::to_string(values.rows()) + "\n65535\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + 2 * values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = std::clamp(values.data()[i], 0.0, 1.0);
    const auto q = static_cast<unsigned>(std::floor(v * 65535.0 + 0.5));
    out.push_back(static_cast<std::uint8_t>(q >> 8));
    out.push_back(static_cast<std::uint8_t>(q & 0xff));
  }
  write_file(path, out);
}

void save_binary(const BinaryMap& map, const std::filesystem::path& path) {
  save_gray(map.cast<double>() * 255.0, path);
}

std::vector<std::uint8_t> encode_png(const ByteImage& image) {
  return encode_png_raw(image.data(), static_cast<int>(image.cols()),
                        static_cast<int>(image.rows()), 1);
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  std::vector<std::uint8_t> interleaved(std::size_t(image.r.size()) * 3);
  for (Eigen::Index i = 0; i < image.r.size(); ++i) {
    interleaved[3 * i] = image.r.data()[i];
    interleaved[3 * i + 1] = image.g.data()[i];
    interleaved[3 * i + 2] = image.b.data()[i];
  }
  return encode_png_raw(interleaved.data(), static_cast<int>(image.width()),
                        static_cast<int>(image.height()), 3);
}

void save_rgb(const RgbImage& image, const std::filesystem::path& path) {
  write_file(path, encode_png(image));
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0)) throw ParameterError("Gaussian sigma must be >= 0", "sigma");
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;
  return kernel;
}

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  if (kernel.size() == 1) return image;
  const int radius = static_cast<int>(kernel.size() / 2);
  const Eigen::Index rows = image.rows();
  const Eigen::Index cols = image.cols();

  GrayImage horizontal(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * image(y, reflect_index(x + k, cols));
      }
      horizontal(y, x) = acc;
    }
  }
  GrayImage out(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * horizontal(reflect_index(y + k, rows), x);
      }
      out(y, x) = acc;
    }
  }
  return out;
}

GrayImage pad_reflect(const GrayImage& image, int border) {
  if (border < 0) throw ParameterError("padding must be >= 0", "padding");
  if (border == 0) return image;
  const Eigen::Index rows = image.rows() + 2 * border;
  const Eigen::Index cols = image.cols() + 2 * border;
  GrayImage out(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    const Eigen::Index sy = reflect_index(y - border, image.rows());
    for (Eigen::Index x = 0; x < cols; ++x) {
      out(y, x) = image(sy, reflect_index(x - border, image.cols()));
    }
  }
  return out;
}

Rgb ramp_color(double t) {
  if (std::isnan(t)) t = 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return blend(kLightBlue, kDarkRed, t);
}

RgbImage render_overlay(const GrayImage& base, const BinaryMap& detection) {
  require_same_size(base, detection, "render_overlay");
  RgbImage out = brightened_background(base);
  for (Eigen::Index y = 0; y < base.rows(); ++y) {
    for (Eigen::Index x = 0; x < base.cols(); ++x) {
      if (detection(y, x)) out.set(y, x, kDarkRed);
    }
  }
  return out;
}

RgbImage render_overlay(const GrayImage& base, const MeasureMap& detection) {
  require_same_size(base, detection.values, "render_overlay");
  RgbImage out = brightened_background(base);
  for (Eigen::Index y = 0; y < base.rows(); ++y) {
    for (Eigen::Index x = 0; x < base.cols(); ++x) {
      const double alpha = std::clamp(detection.values(y, x), 0.0, 1.0);
      if (alpha > 0.0) out.set(y, x, blend(out.at(y, x), kDarkRed, alpha));
    }
  }
  return out;
}

RgbImage render_anglemap(const OrientationMap& orientation) {
  const Image<double>& deg = orientation.degrees;
  RgbImage out(deg.rows(), deg.cols());
  for (Eigen::Index y = 0; y < deg.rows(); ++y) {
    for (Eigen::Index x = 0; x < deg.cols(); ++x) {
      const double theta = deg(y, x);
      if (std::isnan(theta)) {
        out.set(y, x, {255, 255, 255});
        continue;
      }
      double wrapped = std::fmod(theta, 180.0);
      if (wrapped < 0) wrapped += 180.0;
      const double deviation = std::min(wrapped, 180.0 - wrapped);
      out.set(y, x, ramp_color(deviation / 90.0));
    }
  }
  return out;
}

RgbImage render_anglemap(const CurvatureMap& curvature, double rangeDegrees) {
  if (!(rangeDegrees > 0.0)) throw ParameterError("colour range must be > 0", "range");
  const Image<double>& k = curvature.degreesPerPixel;
  RgbImage out(k.rows(), k.cols());
  for (Eigen::Index y = 0; y < k.rows(); ++y) {
    for (Eigen::Index x = 0; x < k.cols(); ++x) {
      const double v = k(y, x);
      out.set(y, x, std::isnan(v) ? Rgb{255, 255, 255} : ramp_color(v / rangeDegrees));
    }
  }
  return out;
}

ByteImage to_bytes_unit(const Image<double>& values) {
  return (values * 255.0).unaryExpr([](double v) { return to_byte(v); });
}

ByteImage to_bytes(const BinaryMap& map) {
  return map.select(ByteImage::Constant(map.rows(), map.cols(), 255),
                    ByteImage::Zero(map.rows(), map.cols()));
}

}  // namespace coshrem
