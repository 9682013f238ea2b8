#pragma once

// Foreground occurrence counts over Angular-Position space, the plane of
// horizontal and vertical incident angles (alpha, beta).

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "pit/camera_geometry.hpp"
#include "pit/image.hpp"
#include "pit/label_transform.hpp"

namespace pit {

/// Integer-indexed 2-D histogram. Bin k along an axis holds angles that
/// round to k * bin_width degrees. Ranges are inclusive and grow on demand.
class ApHistogram {
 public:
  explicit ApHistogram(double bin_width_deg = 1.0);

  double bin_width() const noexcept { return bin_width_; }
  bool empty_range() const noexcept { return counts_.empty(); }
  int alpha_lo() const noexcept { return alpha_lo_; }
  int alpha_hi() const noexcept { return alpha_hi_; }
  int beta_lo() const noexcept { return beta_lo_; }
  int beta_hi() const noexcept { return beta_hi_; }
  int alpha_bins() const noexcept { return empty_range() ? 0 : alpha_hi_ - alpha_lo_ + 1; }
  int beta_bins() const noexcept { return empty_range() ? 0 : beta_hi_ - beta_lo_ + 1; }

  /// Bin index for an angle: floor(angle / bin_width + 0.5).
  int bin_of(double angle_deg) const noexcept;

  /// Count in bin (alpha_bin, beta_bin); zero outside the range.
  std::uint64_t count(int alpha_bin, int beta_bin) const noexcept;
  std::uint64_t total() const noexcept { return total_; }

  /// Grow the range to include the given inclusive bin box.
  void ensure_range(int alpha_lo, int alpha_hi, int beta_lo, int beta_hi);
  /// Grow the range to +-ceil(fov/2) of the camera.
  void cover(const CameraIntrinsics& intrinsics);

  void add(int alpha_bin, int beta_bin, std::uint64_t n = 1);

  friend bool operator==(const ApHistogram&, const ApHistogram&) = default;

 private:
  std::size_t index(int alpha_bin, int beta_bin) const noexcept {
    return static_cast<std::size_t>(beta_bin - beta_lo_) * alpha_bins() + (alpha_bin - alpha_lo_);
  }

  double bin_width_ = 1.0;
  int alpha_lo_ = 0, alpha_hi_ = -1, beta_lo_ = 0, beta_hi_ = -1;
  std::vector<std::uint64_t> counts_;  // row-major over beta, then alpha
  std::uint64_t total_ = 0;
};

/// Adds one count per pixel whose class is in foreground_classes, binned by
/// the incident angles at the pixel center. Unknown classes are ignored.
ApHistogram accumulate_mask(ApHistogram hist, const LabelMap& mask,
                            const std::set<int>& foreground_classes,
                            const CameraIntrinsics& intrinsics);

/// Same for a PIT-space mask: angles are read off the arc coordinates.
ApHistogram accumulate_mask_arc(ApHistogram hist, const LabelMap& mask,
                                const std::set<int>& foreground_classes,
                                const CameraIntrinsics& intrinsics);

/// Every pixel whose center lies strictly inside a box counts once per box.
ApHistogram accumulate_boxes(ApHistogram hist, const std::vector<BoundingBox>& boxes,
                             const CameraIntrinsics& intrinsics);

/// Bin-wise sum over the union range. Throws on differing bin widths.
ApHistogram merge(const ApHistogram& a, const ApHistogram& b);

/// "alpha,beta,count" header plus one row per bin in the range.
std::string heatmap_csv(const ApHistogram& hist);
/// One texel per bin (x = alpha, y = beta), log(1 + count) min-max scaled.
Image8 heatmap_image(const ApHistogram& hist);
void export_heatmap(const ApHistogram& hist, const std::filesystem::path& csv_path,
                    const std::filesystem::path& pgm_path);

}  // namespace pit
