#include "pit/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pit {

std::vector<double> axis_weights(int plane_extent, double focal) {
  const int arc_extent = transformed_extent(plane_extent, focal);
  const double half = plane_extent / 2.0;
  // Plane coordinate of arc coordinate t >= 0, clamped to the frame rim.
  auto plane = [&](double t) {
    const double a = t / focal;
    if (a >= kPi / 2.0) return half;
    return std::min(focal * std::tan(a), half);
  };
  std::vector<double> w(arc_extent);
  for (int i = 0; i < arc_extent; ++i) {
    const double u = std::abs(centered_from_index(i, arc_extent));
    w[i] = plane(u + 1.0) - plane(u);
  }
  return w;
}

WeightMatrix build_weight_matrix(const CameraIntrinsics& intrinsics) {
  WeightMatrix m;
  m.axis_x_ = axis_weights(intrinsics.width(), intrinsics.fx());
  m.axis_y_ = axis_weights(intrinsics.height(), intrinsics.fy());
  m.weights_.resize(m.axis_x_.size() * m.axis_y_.size());
  double total = 0.0;
  std::size_t k = 0;
  for (double wy : m.axis_y_) {
    for (double wx : m.axis_x_) {
      const float w = static_cast<float>(wx * wy);
      m.weights_[k++] = w;
      total += w;
    }
  }
  m.total_ = total;
  return m;
}

ImageF WeightMatrix::to_image() const { return ImageF(width(), height(), 1, weights_); }

Image8 WeightMatrix::visualization() const {
  Image8 out(width(), height(), 1);
  const auto [lo, hi] = std::minmax_element(weights_.begin(), weights_.end());
  const double range = static_cast<double>(*hi) - *lo;
  auto dst = out.data();
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double t = range > 0.0 ? (weights_[i] - *lo) / range : 0.0;
    dst[i] = static_cast<std::uint8_t>(std::lround(t * 255.0));
  }
  return out;
}

double weighted_reduce(const ImageF& loss_map, const WeightMatrix& weights) {
  if (loss_map.channels() != 1) throw std::invalid_argument("loss map must be single-channel");
  if (loss_map.width() != weights.width() || loss_map.height() != weights.height()) {
    throw std::invalid_argument("loss map and weight matrix sizes differ");
  }
  const auto loss = loss_map.data();
  const auto& w = weights.weights();
  // Accumulate deviations from the first sample so a constant map reduces
  // to exactly that constant.
  const double ref = loss[0];
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(loss[i])) throw std::invalid_argument("loss map contains non-finite values");
    num += (static_cast<double>(loss[i]) - ref) * w[i];
    den += w[i];
  }
  return ref + num / den;
}

}  // namespace pit
