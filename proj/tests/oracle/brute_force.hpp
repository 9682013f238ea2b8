#pragma once

// Reference implementations used only by tests. Written directly from the
// transform formulas without the library's LUTs, kernels or coordinate
// helpers, so that agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double focal(double extent, double fov_deg) {
  return (extent / 2.0) / std::tan(fov_deg * 3.14159265358979323846 / 360.0);
}

inline int pit_extent(int extent, double f) {
  return static_cast<int>(std::floor(2.0 * f * std::atan(extent / (2.0 * f)) + 1e-6));
}

// Source coordinate (input pixel index space) of forward-PIT output pixel i.
inline double forward_source(int i, int out_n, int in_n, double f) {
  const double u = (i + 0.5) - out_n * 0.5;
  const double x = f * std::tan(u / f);
  return std::clamp(x + in_n * 0.5 - 0.5, 0.0, in_n - 1.0);
}

// Source coordinate (PIT pixel index space) of reverse-PIT output pixel j.
inline double reverse_source(int j, int out_n, int in_n, double f) {
  const double x = (j + 0.5) - out_n * 0.5;
  const double u = f * std::atan(x / f);
  return std::clamp(u + in_n * 0.5 - 0.5, 0.0, in_n - 1.0);
}

struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;
  double at(int x, int y, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
};

inline double bilinear(const Raster& img, double sx, double sy, int c) {
  int x0 = static_cast<int>(std::floor(sx));
  int y0 = static_cast<int>(std::floor(sy));
  x0 = std::min(x0, std::max(img.width - 2, 0));
  y0 = std::min(y0, std::max(img.height - 2, 0));
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const double tx = img.width == 1 ? 0.0 : sx - x0;
  const double ty = img.height == 1 ? 0.0 : sy - y0;
  return (1 - tx) * (1 - ty) * img.at(x0, y0, c) + tx * (1 - ty) * img.at(x1, y0, c) +
         (1 - tx) * ty * img.at(x0, y1, c) + tx * ty * img.at(x1, y1, c);
}

inline double nearest(const Raster& img, double sx, double sy, int c) {
  const int x = std::min(static_cast<int>(std::floor(sx + 0.5)), img.width - 1);
  const int y = std::min(static_cast<int>(std::floor(sy + 0.5)), img.height - 1);
  return img.at(x, y, c);
}

enum class Dir { forward, reverse };

// Per-pixel resampler. For forward, (plane_w, plane_h) is the input size;
// for reverse it is the output size.
inline Raster resample(const Raster& in, Dir dir, int plane_w, int plane_h, double fx, double fy,
                       bool use_nearest) {
  const int arc_w = pit_extent(plane_w, fx);
  const int arc_h = pit_extent(plane_h, fy);
  Raster out;
  out.width = dir == Dir::forward ? arc_w : plane_w;
  out.height = dir == Dir::forward ? arc_h : plane_h;
  out.channels = in.channels;
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
  for (int y = 0; y < out.height; ++y) {
    const double sy = dir == Dir::forward ? forward_source(y, arc_h, plane_h, fy)
                                          : reverse_source(y, plane_h, arc_h, fy);
    for (int x = 0; x < out.width; ++x) {
      const double sx = dir == Dir::forward ? forward_source(x, arc_w, plane_w, fx)
                                            : reverse_source(x, plane_w, arc_w, fx);
      for (int c = 0; c < out.channels; ++c) {
        out.data[(static_cast<std::size_t>(y) * out.width + x) * out.channels + c] =
            use_nearest ? nearest(in, sx, sy, c) : bilinear(in, sx, sy, c);
      }
    }
  }
  return out;
}

inline std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

// Plane x (edge coordinates of a W-wide frame) to PIT edge coordinate.
inline double box_edge_forward(double x, int w, double f) {
  const int n = pit_extent(w, f);
  return std::clamp(f * std::atan((x - w / 2.0) / f) + n / 2.0, 0.0, static_cast<double>(n));
}

// Weight interval along one axis, direct from the area definition.
inline std::vector<double> axis_weights(int plane_extent, double f) {
  const int n = pit_extent(plane_extent, f);
  const double half = plane_extent / 2.0;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    const double u = std::fabs(i + 0.5 - n / 2.0);
    const double a = std::min(f * std::tan(std::min(u / f, 1.5707963)), half);
    const double b = std::min(f * std::tan(std::min((u + 1) / f, 1.5707963)), half);
    w[i] = b - a;
  }
  return w;
}

inline double psnr(const std::vector<double>& a, const std::vector<double>& b, double peak) {
  double se = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) se += (a[i] - b[i]) * (a[i] - b[i]);
  const double mse = se / static_cast<double>(a.size());
  return mse == 0.0 ? 1e9 : 10.0 * std::log10(peak * peak / mse);
}

}  // namespace oracle
