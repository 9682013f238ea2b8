#pragma once

// Pinhole / arc coordinate math for the position-invariant transform.
//
// Two coordinate systems are used per axis, both centered on the principal
// point (fixed at the image center) and measured in pixels:
//
//   plane  X : the ordinary rectilinear image coordinate
//   arc    U : arc length on a sphere of radius f, U = f * atan(X / f)
//
// Integer pixel index i maps to the centered coordinate i + 0.5 - extent/2.
// Box edges are continuous and map as x - extent/2.

#include <compare>
#include <cstddef>
#include <functional>
#include <numbers>

namespace pit {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Full-angle horizontal and vertical field of view, in degrees.
struct FieldOfView {
  double fov_x = 0.0;
  double fov_y = 0.0;
};

/// Image size plus per-axis focal lengths in pixel units.
///
/// The principal point is always the image center. Construct through
/// from_fov() or from_focal(); both validate their arguments and throw
/// std::invalid_argument on bad input.
class CameraIntrinsics {
 public:
  static CameraIntrinsics from_fov(int width, int height, FieldOfView fov);
  static CameraIntrinsics from_focal(int width, int height, double fx, double fy);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double fx() const noexcept { return fx_; }
  double fy() const noexcept { return fy_; }

  /// Field of view implied by the stored extents and focal lengths.
  FieldOfView fov() const noexcept;

  /// Same focal lengths, different frame size. Used after center crops.
  CameraIntrinsics with_size(int width, int height) const;

  friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;
  friend auto operator<=>(const CameraIntrinsics&, const CameraIntrinsics&) = default;

 private:
  CameraIntrinsics(int width, int height, double fx, double fy)
      : width_(width), height_(height), fx_(fx), fy_(fy) {}

  int width_ = 0;
  int height_ = 0;
  double fx_ = 0.0;
  double fy_ = 0.0;
};

struct IncidentAngles {
  double alpha = 0.0;  // degrees, horizontal
  double beta = 0.0;   // degrees, vertical
};

/// (extent/2) / tan(fov/2). Throws unless 0 < fov < 180 and extent > 0.
double focal_from_fov(double extent, double fov_deg);

/// Inverse of focal_from_fov: 2 * atan((extent/2) / focal), in degrees.
double fov_from_focal(double extent, double focal);

/// Plane coordinate of arc coordinate u: focal * tan(u / focal).
/// Throws std::domain_error when |u| / focal >= pi/2.
double arc_to_plane(double u, double focal);

/// Arc coordinate of plane coordinate x: focal * atan(x / focal).
double plane_to_arc(double x, double focal);

/// Incident angles of the ray through the centered plane point (x, y).
IncidentAngles incident_angles(double x, double y, const CameraIntrinsics& intrinsics);

/// Incident angles of the centered arc point (u, v) in PIT space. In arc
/// space the angle is proportional to the coordinate: alpha = u / fx.
IncidentAngles arc_incident_angles(double u, double v, const CameraIntrinsics& intrinsics);

/// Size of one axis after forward PIT: floor(2 f atan((extent/2)/f)),
/// kept within [1, extent].
int transformed_extent(int extent, double focal);

/// Floor that absorbs round-off just below an integer (|gap| <= 1e-6).
int floor_with_slack(double value) noexcept;

// Pixel-center and edge conventions.
constexpr double centered_from_index(double index, double extent) noexcept {
  return index + 0.5 - extent / 2.0;
}
constexpr double index_from_centered(double centered, double extent) noexcept {
  return centered - 0.5 + extent / 2.0;
}
constexpr double centered_from_edge(double edge, double extent) noexcept {
  return edge - extent / 2.0;
}
constexpr double edge_from_centered(double centered, double extent) noexcept {
  return centered + extent / 2.0;
}

/// PIT-space frame size for a camera, per axis via transformed_extent.
struct FrameSize {
  int width = 0;
  int height = 0;
  friend bool operator==(const FrameSize&, const FrameSize&) = default;
};
FrameSize pit_frame_size(const CameraIntrinsics& intrinsics);

}  // namespace pit

template <>
struct std::hash<pit::CameraIntrinsics> {
  std::size_t operator()(const pit::CameraIntrinsics& c) const noexcept {
    std::size_t h = std::hash<int>{}(c.width());
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(std::hash<int>{}(c.height()));
    mix(std::hash<double>{}(c.fx()));
    mix(std::hash<double>{}(c.fy()));
    return h;
  }
};
