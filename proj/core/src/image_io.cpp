#include "pit/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace pit {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// ---------------------------------------------------------------- PNG

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

Image8 read_png_file(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed");
  }

  // Everything allocated after setjmp must be owned outside the jump scope.
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("PNG decode failed for " + path.string() + ": " + err);
  }

  png_init_io(png, f.get());
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  channels = png_get_channels(png, info);
  if (channels == 2 || channels > 4) png_error(png, "unsupported channel layout");

  pixels.resize(static_cast<std::size_t>(width) * height * channels);
  rows.resize(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * channels;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  return Image8(width, height, channels, std::move(pixels));
}

void write_png_file(const std::filesystem::path& path, const Image8& image) {
  if (image.empty()) throw IoError("cannot write an empty image");
  int color_type = 0;
  switch (image.channels()) {
    case 1: color_type = PNG_COLOR_TYPE_GRAY; break;
    case 3: color_type = PNG_COLOR_TYPE_RGB; break;
    case 4: color_type = PNG_COLOR_TYPE_RGB_ALPHA; break;
    default: throw IoError("PNG supports 1, 3 or 4 channels");
  }

  FilePtr f = open_file(path, "wb");
  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed");
  }
  std::vector<png_const_bytep> rows(image.height());
  for (int y = 0; y < image.height(); ++y) rows[y] = image.row(y).data();

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failed for " + path.string() + ": " + err);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, image.width(), image.height(), 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// ---------------------------------------------------------------- PNM / PFM

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Header token reader shared by PNM and PFM; skips whitespace and comments.
class HeaderReader {
 public:
  HeaderReader(const std::string& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  std::string token() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) fail("truncated header");
    return bytes_.substr(start, pos_ - start);
  }

  long integer() {
    const std::string t = token();
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (*end != '\0') fail("bad integer '" + t + "'");
    return v;
  }

  double real() {
    const std::string t = token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (*end != '\0') fail("bad number '" + t + "'");
    return v;
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      fail("missing raster separator");
    }
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw IoError(path_.string() + ": " + msg);
  }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

Image8 decode_pnm(const std::string& bytes, const std::filesystem::path& path) {
  HeaderReader hdr(bytes, path);
  const std::string magic = hdr.token();
  const int channels = magic == "P5" ? 1 : magic == "P6" ? 3 : 0;
  if (channels == 0) hdr.fail("only binary P5/P6 is supported");
  const long width = hdr.integer();
  const long height = hdr.integer();
  const long maxval = hdr.integer();
  if (width <= 0 || height <= 0) hdr.fail("bad dimensions");
  if (maxval != 255) hdr.fail("only maxval 255 is supported");
  const std::size_t start = hdr.raster_start();
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() < start + n) hdr.fail("truncated raster");
  std::vector<std::uint8_t> data(bytes.begin() + start, bytes.begin() + start + n);
  return Image8(static_cast<int>(width), static_cast<int>(height), channels, std::move(data));
}

ImageF decode_pfm(const std::string& bytes, const std::filesystem::path& path) {
  HeaderReader hdr(bytes, path);
  const std::string magic = hdr.token();
  const int channels = magic == "Pf" ? 1 : magic == "PF" ? 3 : 0;
  if (channels == 0) hdr.fail("bad PFM magic");
  const long width = hdr.integer();
  const long height = hdr.integer();
  const double scale = hdr.real();
  if (width <= 0 || height <= 0) hdr.fail("bad dimensions");
  if (scale == 0.0 || !std::isfinite(scale)) hdr.fail("bad scale");
  const bool little = scale < 0.0;
  const std::size_t start = hdr.raster_start();
  const std::size_t row = static_cast<std::size_t>(width) * channels;
  if (bytes.size() < start + row * height * 4) hdr.fail("truncated raster");

  ImageF image(static_cast<int>(width), static_cast<int>(height), channels);
  const bool swap = little != (std::endian::native == std::endian::little);
  for (long y = 0; y < height; ++y) {
    // PFM stores rows bottom to top.
    const char* src = bytes.data() + start + (height - 1 - y) * row * 4;
    auto dst = image.row(static_cast<int>(y));
    for (std::size_t i = 0; i < row; ++i) {
      std::array<char, 4> b;
      std::memcpy(b.data(), src + i * 4, 4);
      if (swap) std::reverse(b.begin(), b.end());
      std::memcpy(&dst[i], b.data(), 4);
    }
  }
  return image;
}

void write_bytes(const std::filesystem::path& path, const std::string& header,
                 const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

ImageBuffer read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::array<unsigned char, 8> sig{};
  {
    FilePtr f = open_file(path, "rb");
    if (std::fread(sig.data(), 1, sig.size(), f.get()) < 2) throw IoError(path.string() + ": file too short");
  }
  if (png_sig_cmp(sig.data(), 0, 8) == 0) return read_png_file(path);
  if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) return decode_pnm(read_all(path), path);
  if (sig[0] == 'P' && (sig[1] == 'f' || sig[1] == 'F')) return decode_pfm(read_all(path), path);
  throw IoError(path.string() + ": unrecognized image format");
}

Image8 read_image8(const std::filesystem::path& path) {
  ImageBuffer buf = read_image(path);
  if (auto* img = std::get_if<Image8>(&buf)) return std::move(*img);
  throw IoError(path.string() + ": expected an 8-bit image");
}

void write_png(const std::filesystem::path& path, const Image8& image) { write_png_file(path, image); }

void write_pnm(const std::filesystem::path& path, const Image8& image) {
  if (image.channels() != 1 && image.channels() != 3) throw IoError("PNM supports 1 or 3 channels");
  const std::string header = std::string(image.channels() == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(image.width()) + " " + std::to_string(image.height()) +
                             "\n255\n";
  write_bytes(path, header, image.data().data(), image.data().size());
}

void write_pfm(const std::filesystem::path& path, const ImageF& image) {
  if (image.channels() != 1 && image.channels() != 3) throw IoError("PFM supports 1 or 3 channels");
  const std::string header = std::string(image.channels() == 1 ? "Pf" : "PF") + "\n" +
                             std::to_string(image.width()) + " " + std::to_string(image.height()) +
                             "\n-1.0\n";
  const std::size_t row = image.row_stride();
  std::vector<char> raster(row * image.height() * 4);
  for (int y = 0; y < image.height(); ++y) {
    auto src = image.row(image.height() - 1 - y);
    for (std::size_t i = 0; i < row; ++i) {
      std::array<char, 4> b;
      std::memcpy(b.data(), &src[i], 4);
      if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
      std::memcpy(raster.data() + (y * row + i) * 4, b.data(), 4);
    }
  }
  write_bytes(path, header, raster.data(), raster.size());
}

void write_image(const std::filesystem::path& path, const ImageBuffer& image) {
  const std::string ext = lower_extension(path);
  if (const auto* img8 = std::get_if<Image8>(&image)) {
    if (ext == ".png") return write_png(path, *img8);
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return write_pnm(path, *img8);
    throw IoError(path.string() + ": unsupported extension for an 8-bit image");
  }
  const auto& imgf = std::get<ImageF>(image);
  if (ext == ".pfm") return write_pfm(path, imgf);
  throw IoError(path.string() + ": float images are written as .pfm");
}

}  // namespace pit
