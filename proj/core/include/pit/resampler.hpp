#pragma once

// Separable remapping for forward PIT, reverse PIT and FoV-reducing crops.
//
// A RemapSpec is two 1-D lookup tables. Output pixel (i, j) samples the input
// at (lut_x.src[i], lut_y.src[j]); because the PIT map is separable the remap
// runs as a horizontal pass followed by a vertical pass.

#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "pit/camera_geometry.hpp"
#include "pit/image.hpp"

namespace pit {

enum class Interpolation { bilinear, nearest };
enum class Direction { forward, reverse };

/// One axis of a separable remap.
class AxisLut {
 public:
  /// Forward axis: output index i (PIT space) -> input index (plane space).
  static AxisLut forward(int in_extent, double focal);
  /// Reverse axis: output index j (plane space) -> input index (PIT space).
  static AxisLut reverse(int plane_extent, double focal);
  /// src[i] = i.
  static AxisLut identity(int extent);

  int in_extent() const noexcept { return in_extent_; }
  int out_extent() const noexcept { return static_cast<int>(src_.size()); }
  const std::vector<double>& src() const noexcept { return src_; }

  /// Unclamped analytic source coordinate for a (possibly fractional) output
  /// index. The table holds this value clamped to [0, in_extent - 1].
  double map(double out_index) const;

 private:
  AxisLut(Direction direction, int in_extent, int plane_extent, double focal, bool identity);

  Direction direction_ = Direction::forward;
  int in_extent_ = 0;
  int plane_extent_ = 0;
  int arc_extent_ = 0;
  double focal_ = 0.0;
  bool identity_ = false;
  std::vector<double> src_;
};

struct RemapSpec {
  AxisLut lut_x;
  AxisLut lut_y;
  Interpolation interpolation = Interpolation::bilinear;
  Direction direction = Direction::forward;

  int in_width() const noexcept { return lut_x.in_extent(); }
  int in_height() const noexcept { return lut_y.in_extent(); }
  int out_width() const noexcept { return lut_x.out_extent(); }
  int out_height() const noexcept { return lut_y.out_extent(); }
};

RemapSpec build_forward_lut(const CameraIntrinsics& intrinsics,
                            Interpolation interpolation = Interpolation::bilinear);
RemapSpec build_reverse_lut(const CameraIntrinsics& intrinsics,
                            Interpolation interpolation = Interpolation::bilinear);

/// Two-pass separable remap. Throws std::invalid_argument when the image
/// size differs from the spec's input size. 8-bit results are rounded half
/// away from zero; output is bit-identical across calls.
Image8 remap(const Image8& image, const RemapSpec& spec);
ImageF remap(const ImageF& image, const RemapSpec& spec);
ImageBuffer remap(const ImageBuffer& image, const RemapSpec& spec);

/// Single-pass gather remap (per-pixel 2-D bilinear from the same LUTs).
/// Slower; kept as the reference path for the two-pass kernel.
Image8 remap_direct(const Image8& image, const RemapSpec& spec);
ImageF remap_direct(const ImageF& image, const RemapSpec& spec);

ImageBuffer pit_forward(const ImageBuffer& image, const CameraIntrinsics& intrinsics);
ImageBuffer pit_reverse(const ImageBuffer& image, const CameraIntrinsics& intrinsics);
Image8 pit_forward(const Image8& image, const CameraIntrinsics& intrinsics);
Image8 pit_reverse(const Image8& image, const CameraIntrinsics& intrinsics);
ImageF pit_forward(const ImageF& image, const CameraIntrinsics& intrinsics);
ImageF pit_reverse(const ImageF& image, const CameraIntrinsics& intrinsics);

/// Width of a center crop reducing the horizontal FoV to target_fov_x:
/// floor(2 fx tan(target/2)), at most the current width.
int crop_width_for_fov(const CameraIntrinsics& intrinsics, double target_fov_x);

/// Left offset of a centered crop of crop_width out of width.
constexpr int crop_offset(int width, int crop_width) noexcept { return (width - crop_width) / 2; }

template <typename T>
struct Cropped {
  Image<T> image;
  CameraIntrinsics intrinsics;
};

/// Center crop to a narrower horizontal FoV. Height and focal lengths are
/// kept. Throws when target_fov_x is not in (0, current fov_x].
Cropped<std::uint8_t> crop_to_fov(const Image8& image, const CameraIntrinsics& intrinsics,
                                  double target_fov_x);
Cropped<float> crop_to_fov(const ImageF& image, const CameraIntrinsics& intrinsics,
                           double target_fov_x);

/// Center crop of an arbitrary image to new_width columns.
template <typename T>
Image<T> crop_columns(const Image<T>& image, int new_width);

/// Thread-safe cache of remap specs keyed by intrinsics, direction and
/// interpolation. Specs are immutable and shared between callers.
class LutCache {
 public:
  std::shared_ptr<const RemapSpec> get(const CameraIntrinsics& intrinsics, Direction direction,
                                       Interpolation interpolation);
  std::size_t size() const;

 private:
  struct Key {
    CameraIntrinsics intrinsics;
    Direction direction;
    Interpolation interpolation;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<CameraIntrinsics>{}(k.intrinsics) * 31 +
             static_cast<std::size_t>(k.direction) * 7 + static_cast<std::size_t>(k.interpolation);
    }
  };

  mutable std::mutex mutex_;
  std::unordered_map<Key, std::shared_ptr<const RemapSpec>, KeyHash> specs_;
};

}  // namespace pit
