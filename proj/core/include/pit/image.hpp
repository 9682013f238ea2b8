#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace pit {

/// Row-major, channel-interleaved raster.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, int channels, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
    if (channels < 1 || channels > 4) throw std::invalid_argument("image must have 1-4 channels");
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }
  Image(int width, int height, int channels, std::vector<T> data)
      : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
    if (channels < 1 || channels > 4) throw std::invalid_argument("image must have 1-4 channels");
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
      throw std::invalid_argument("image data length does not match width*height*channels");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t row_stride() const noexcept { return static_cast<std::size_t>(width_) * channels_; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::span<T> row(int y) noexcept { return {data_.data() + y * row_stride(), row_stride()}; }
  std::span<const T> row(int y) const noexcept {
    return {data_.data() + y * row_stride(), row_stride()};
  }

  T& at(int x, int y, int c = 0) noexcept { return data_[y * row_stride() + x * channels_ + c]; }
  const T& at(int x, int y, int c = 0) const noexcept {
    return data_[y * row_stride() + x * channels_ + c];
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

using Image8 = Image<std::uint8_t>;
using ImageF = Image<float>;

/// Either sample depth, as produced by the file readers.
using ImageBuffer = std::variant<Image8, ImageF>;

}  // namespace pit
