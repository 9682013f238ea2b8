#include "pit/label_transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pit/resampler.hpp"

namespace pit {

std::string to_string(Space space) { return space == Space::original ? "original" : "pit"; }

Space space_from_string(const std::string& name) {
  if (name == "original") return Space::original;
  if (name == "pit") return Space::pit;
  throw std::invalid_argument("unknown image space '" + name + "'");
}

FrameSize SpaceTag::frame() const {
  if (which == Space::pit) return pit_frame_size(intrinsics);
  return {intrinsics.width(), intrinsics.height()};
}

double intersection_over_union(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

bool contains(const BoundingBox& outer, const BoundingBox& inner) {
  return outer.x_min <= inner.x_min && outer.y_min <= inner.y_min && outer.x_max >= inner.x_max &&
         outer.y_max >= inner.y_max;
}

namespace {

void require_space(Space actual, Space expected, const char* what) {
  if (actual != expected) {
    throw std::invalid_argument(std::string(what) + " expects " + to_string(expected) +
                                "-space input, got " + to_string(actual));
  }
}

double forward_edge(double edge, int plane_extent, int arc_extent, double focal) {
  const double u = plane_to_arc(centered_from_edge(edge, plane_extent), focal);
  return std::clamp(edge_from_centered(u, arc_extent), 0.0, static_cast<double>(arc_extent));
}

double reverse_edge(double edge, int plane_extent, int arc_extent, double focal) {
  const double x = arc_to_plane(centered_from_edge(edge, arc_extent), focal);
  return std::clamp(edge_from_centered(x, plane_extent), 0.0, static_cast<double>(plane_extent));
}

}  // namespace

BoundingBox box_forward(const BoundingBox& box, const CameraIntrinsics& intrinsics) {
  require_space(box.space, Space::original, "box_forward");
  if (!box.valid()) throw std::invalid_argument("degenerate bounding box");
  const SpaceTag tag{Space::pit, intrinsics};
  const FrameSize pit = tag.frame();
  BoundingBox out = box;
  out.x_min = forward_edge(box.x_min, intrinsics.width(), pit.width, intrinsics.fx());
  out.x_max = forward_edge(box.x_max, intrinsics.width(), pit.width, intrinsics.fx());
  out.y_min = forward_edge(box.y_min, intrinsics.height(), pit.height, intrinsics.fy());
  out.y_max = forward_edge(box.y_max, intrinsics.height(), pit.height, intrinsics.fy());
  out.space = Space::pit;
  return out;
}

BoundingBox box_reverse(const BoundingBox& box, const CameraIntrinsics& intrinsics) {
  require_space(box.space, Space::pit, "box_reverse");
  if (!box.valid()) throw std::invalid_argument("degenerate bounding box");
  const FrameSize pit = pit_frame_size(intrinsics);
  BoundingBox out = box;
  out.x_min = reverse_edge(box.x_min, intrinsics.width(), pit.width, intrinsics.fx());
  out.x_max = reverse_edge(box.x_max, intrinsics.width(), pit.width, intrinsics.fx());
  out.y_min = reverse_edge(box.y_min, intrinsics.height(), pit.height, intrinsics.fy());
  out.y_max = reverse_edge(box.y_max, intrinsics.height(), pit.height, intrinsics.fy());
  out.space = Space::original;
  return out;
}

namespace {

void require_mask_frame(const LabelMap& mask, const SpaceTag& tag, const char* what) {
  require_space(mask.space, tag.which, what);
  const FrameSize want = tag.frame();
  if (mask.classes.channels() != 1) throw std::invalid_argument("label map must be single-channel");
  if (mask.width() != want.width || mask.height() != want.height) {
    throw std::invalid_argument(std::string(what) + ": label map is " + std::to_string(mask.width()) +
                                "x" + std::to_string(mask.height()) + ", camera expects " +
                                std::to_string(want.width) + "x" + std::to_string(want.height));
  }
}

}  // namespace

LabelMap mask_forward(const LabelMap& mask, const CameraIntrinsics& intrinsics) {
  require_mask_frame(mask, {Space::original, intrinsics}, "mask_forward");
  return {remap(mask.classes, build_forward_lut(intrinsics, Interpolation::nearest)),
          mask.ignore_index, Space::pit};
}

LabelMap mask_reverse(const LabelMap& mask, const CameraIntrinsics& intrinsics) {
  require_mask_frame(mask, {Space::pit, intrinsics}, "mask_reverse");
  return {remap(mask.classes, build_reverse_lut(intrinsics, Interpolation::nearest)),
          mask.ignore_index, Space::original};
}

std::vector<BoundingBox> boxes_crop(const std::vector<BoundingBox>& boxes,
                                    const CameraIntrinsics& old_intrinsics, int new_width,
                                    double min_visible) {
  if (new_width <= 0 || new_width > old_intrinsics.width()) {
    throw std::invalid_argument("crop width must lie in [1, original width]");
  }
  if (!(min_visible > 0.0 && min_visible <= 1.0)) {
    throw std::invalid_argument("min_visible must lie in (0, 1]");
  }
  const double offset = crop_offset(old_intrinsics.width(), new_width);
  std::vector<BoundingBox> kept;
  kept.reserve(boxes.size());
  for (const BoundingBox& box : boxes) {
    require_space(box.space, Space::original, "boxes_crop");
    if (!box.valid()) continue;
    BoundingBox out = box;
    out.x_min = std::clamp(box.x_min - offset, 0.0, static_cast<double>(new_width));
    out.x_max = std::clamp(box.x_max - offset, 0.0, static_cast<double>(new_width));
    if (!out.valid()) continue;
    if (out.area() < min_visible * box.area()) continue;
    kept.push_back(out);
  }
  return kept;
}

LabelMap mask_crop(const LabelMap& mask, int new_width) {
  return {crop_columns(mask.classes, new_width), mask.ignore_index, mask.space};
}

}  // namespace pit
