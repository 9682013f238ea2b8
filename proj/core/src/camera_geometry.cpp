#include "pit/camera_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pit {

namespace {

constexpr double kFloorSlack = 1e-6;

void require_extent(double extent, const char* what) {
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument(std::string(what) + " must be a positive pixel count");
  }
}

void require_focal(double focal) {
  if (!(focal > 0.0) || !std::isfinite(focal)) {
    throw std::invalid_argument("focal length must be positive and finite");
  }
}

}  // namespace

double focal_from_fov(double extent, double fov_deg) {
  require_extent(extent, "extent");
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) {
    throw std::invalid_argument("field of view must lie in (0, 180) degrees, got " +
                                std::to_string(fov_deg));
  }
  if (fov_deg == 90.0) return extent / 2.0;  // tan(45 deg) is not exactly 1 in binary
  return (extent / 2.0) / std::tan(deg_to_rad(fov_deg) / 2.0);
}

double fov_from_focal(double extent, double focal) {
  require_extent(extent, "extent");
  require_focal(focal);
  return rad_to_deg(2.0 * std::atan((extent / 2.0) / focal));
}

CameraIntrinsics CameraIntrinsics::from_fov(int width, int height, FieldOfView fov) {
  require_extent(width, "width");
  require_extent(height, "height");
  return CameraIntrinsics(width, height, focal_from_fov(width, fov.fov_x),
                          focal_from_fov(height, fov.fov_y));
}

CameraIntrinsics CameraIntrinsics::from_focal(int width, int height, double fx, double fy) {
  require_extent(width, "width");
  require_extent(height, "height");
  require_focal(fx);
  require_focal(fy);
  return CameraIntrinsics(width, height, fx, fy);
}

FieldOfView CameraIntrinsics::fov() const noexcept {
  return {rad_to_deg(2.0 * std::atan((width_ / 2.0) / fx_)),
          rad_to_deg(2.0 * std::atan((height_ / 2.0) / fy_))};
}

CameraIntrinsics CameraIntrinsics::with_size(int width, int height) const {
  return from_focal(width, height, fx_, fy_);
}

double arc_to_plane(double u, double focal) {
  require_focal(focal);
  const double t = u / focal;
  if (!(std::abs(t) < kPi / 2.0)) {
    throw std::domain_error("arc coordinate lies outside the visible hemisphere");
  }
  return focal * std::tan(t);
}

double plane_to_arc(double x, double focal) {
  require_focal(focal);
  return focal * std::atan(x / focal);
}

IncidentAngles incident_angles(double x, double y, const CameraIntrinsics& intrinsics) {
  return {rad_to_deg(std::atan(x / intrinsics.fx())),
          rad_to_deg(std::atan(y / intrinsics.fy()))};
}

IncidentAngles arc_incident_angles(double u, double v, const CameraIntrinsics& intrinsics) {
  return {rad_to_deg(u / intrinsics.fx()), rad_to_deg(v / intrinsics.fy())};
}

int floor_with_slack(double value) noexcept {
  return static_cast<int>(std::floor(value + kFloorSlack));
}

int transformed_extent(int extent, double focal) {
  require_extent(extent, "extent");
  require_focal(focal);
  const double arc = 2.0 * focal * std::atan((extent / 2.0) / focal);
  return std::clamp(floor_with_slack(arc), 1, extent);
}

FrameSize pit_frame_size(const CameraIntrinsics& intrinsics) {
  return {transformed_extent(intrinsics.width(), intrinsics.fx()),
          transformed_extent(intrinsics.height(), intrinsics.fy())};
}

}  // namespace pit
