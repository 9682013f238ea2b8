#pragma once

// Detection boxes and segmentation masks carried between the original image
// space and PIT space.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pit/camera_geometry.hpp"
#include "pit/image.hpp"

namespace pit {

enum class Space { original, pit };

std::string to_string(Space space);
Space space_from_string(const std::string& name);

/// Which image space an annotation lives in, and the camera it came from.
/// For PIT-space annotations the intrinsics are still those of the original
/// camera; the PIT frame size is derived from them.
struct SpaceTag {
  Space which = Space::original;
  CameraIntrinsics intrinsics;

  FrameSize frame() const;
};

/// Axis-aligned box with continuous edge coordinates (a full-frame box on a
/// W x H image is (0, 0, W, H)).
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  int class_id = 0;
  std::optional<double> score;
  Space space = Space::original;

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept { return width() * height(); }
  bool valid() const noexcept { return x_min < x_max && y_min < y_max; }
};

double intersection_over_union(const BoundingBox& a, const BoundingBox& b);
bool contains(const BoundingBox& outer, const BoundingBox& inner);

/// Single-channel class-index raster with one reserved ignore index.
struct LabelMap {
  static constexpr std::uint8_t kDefaultIgnore = 255;

  Image8 classes;
  std::uint8_t ignore_index = kDefaultIgnore;
  Space space = Space::original;

  int width() const noexcept { return classes.width(); }
  int height() const noexcept { return classes.height(); }
};

/// Corners through plane_to_arc per axis, clamped to the PIT frame.
/// Throws std::invalid_argument for degenerate or PIT-space boxes.
BoundingBox box_forward(const BoundingBox& box, const CameraIntrinsics& intrinsics);

/// Corners through arc_to_plane per axis, clamped to the original frame.
BoundingBox box_reverse(const BoundingBox& box, const CameraIntrinsics& intrinsics);

/// Nearest-neighbour remap through the forward / reverse specs.
LabelMap mask_forward(const LabelMap& mask, const CameraIntrinsics& intrinsics);
LabelMap mask_reverse(const LabelMap& mask, const CameraIntrinsics& intrinsics);

inline constexpr double kDefaultMinVisible = 0.3;

/// Shift boxes into a centered crop of new_width columns and clip them.
/// Boxes keeping less than min_visible of their area are dropped.
std::vector<BoundingBox> boxes_crop(const std::vector<BoundingBox>& boxes,
                                    const CameraIntrinsics& old_intrinsics, int new_width,
                                    double min_visible = kDefaultMinVisible);

/// Center crop of a label map, matching crop_to_fov on the image.
LabelMap mask_crop(const LabelMap& mask, int new_width);

}  // namespace pit
