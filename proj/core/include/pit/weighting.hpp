#pragma once

// Pixel-wise loss weights for supervision in PIT space. Each PIT pixel is
// weighted by the area of the original-image region it covers:
//
//   w(U, V) = (X(|U| + 1) - X(|U|)) * (Y(|V| + 1) - Y(|V|))
//
// with X, Y the per-axis arc-to-plane maps, U, V pixel-center coordinates
// and X, Y clamped to the original half-extent at the rim.

#include <vector>

#include "pit/camera_geometry.hpp"
#include "pit/image.hpp"

namespace pit {

class WeightMatrix {
 public:
  int width() const noexcept { return static_cast<int>(axis_x_.size()); }
  int height() const noexcept { return static_cast<int>(axis_y_.size()); }

  float at(int x, int y) const noexcept { return weights_[static_cast<std::size_t>(y) * width() + x]; }
  const std::vector<float>& weights() const noexcept { return weights_; }

  /// Per-axis interval lengths; the matrix is their outer product.
  const std::vector<double>& axis_x() const noexcept { return axis_x_; }
  const std::vector<double>& axis_y() const noexcept { return axis_y_; }

  /// Sum of all stored weights, accumulated in double.
  double total() const noexcept { return total_; }

  /// Single-channel float image of the weights (for PFM export).
  ImageF to_image() const;
  /// Min-max normalized 8-bit rendering for inspection.
  Image8 visualization() const;

 private:
  friend WeightMatrix build_weight_matrix(const CameraIntrinsics&);
  std::vector<double> axis_x_;
  std::vector<double> axis_y_;
  std::vector<float> weights_;
  double total_ = 0.0;
};

/// Interval lengths along one axis of a PIT frame of arc_extent pixels.
std::vector<double> axis_weights(int plane_extent, double focal);

WeightMatrix build_weight_matrix(const CameraIntrinsics& intrinsics);

/// sum(loss * w) / sum(w). Throws std::invalid_argument on size mismatch,
/// multi-channel input or non-finite loss values.
double weighted_reduce(const ImageF& loss_map, const WeightMatrix& weights);

}  // namespace pit
