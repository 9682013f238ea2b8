#include "pit/ap_statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pit/image_io.hpp"

namespace pit {

ApHistogram::ApHistogram(double bin_width_deg) : bin_width_(bin_width_deg) {
  if (!(bin_width_deg > 0.0)) throw std::invalid_argument("bin width must be positive");
}

int ApHistogram::bin_of(double angle_deg) const noexcept {
  return static_cast<int>(std::floor(angle_deg / bin_width_ + 0.5));
}

std::uint64_t ApHistogram::count(int a, int b) const noexcept {
  if (empty_range() || a < alpha_lo_ || a > alpha_hi_ || b < beta_lo_ || b > beta_hi_) return 0;
  return counts_[index(a, b)];
}

void ApHistogram::ensure_range(int a_lo, int a_hi, int b_lo, int b_hi) {
  if (a_lo > a_hi || b_lo > b_hi) throw std::invalid_argument("empty histogram range");
  if (!empty_range() && a_lo >= alpha_lo_ && a_hi <= alpha_hi_ && b_lo >= beta_lo_ &&
      b_hi <= beta_hi_) {
    return;
  }
  ApHistogram grown(bin_width_);
  grown.alpha_lo_ = empty_range() ? a_lo : std::min(a_lo, alpha_lo_);
  grown.alpha_hi_ = empty_range() ? a_hi : std::max(a_hi, alpha_hi_);
  grown.beta_lo_ = empty_range() ? b_lo : std::min(b_lo, beta_lo_);
  grown.beta_hi_ = empty_range() ? b_hi : std::max(b_hi, beta_hi_);
  grown.counts_.assign(static_cast<std::size_t>(grown.alpha_hi_ - grown.alpha_lo_ + 1) *
                           (grown.beta_hi_ - grown.beta_lo_ + 1),
                       0);
  for (int b = beta_lo_; b <= beta_hi_ && !empty_range(); ++b) {
    for (int a = alpha_lo_; a <= alpha_hi_; ++a) grown.counts_[grown.index(a, b)] = counts_[index(a, b)];
  }
  grown.total_ = total_;
  *this = std::move(grown);
}

void ApHistogram::cover(const CameraIntrinsics& intrinsics) {
  const FieldOfView fov = intrinsics.fov();
  const int ax = static_cast<int>(std::ceil(fov.fov_x / 2.0 / bin_width_));
  const int by = static_cast<int>(std::ceil(fov.fov_y / 2.0 / bin_width_));
  ensure_range(-ax, ax, -by, by);
}

void ApHistogram::add(int a, int b, std::uint64_t n) {
  ensure_range(a, a, b, b);
  counts_[index(a, b)] += n;
  total_ += n;
}

namespace {

void require_frame(const LabelMap& mask, FrameSize want, const char* what) {
  if (mask.classes.channels() != 1) throw std::invalid_argument("label map must be single-channel");
  if (mask.width() != want.width || mask.height() != want.height) {
    throw std::invalid_argument(std::string(what) + ": label map size does not match camera");
  }
}

// The angle grid is separable: alpha depends on the column, beta on the row.
template <typename AngleFn>
ApHistogram accumulate_grid(ApHistogram hist, const LabelMap& mask, const std::set<int>& fg,
                            const CameraIntrinsics& intrinsics, AngleFn angles) {
  hist.cover(intrinsics);
  if (fg.empty()) return hist;
  std::vector<int> col_bin(mask.width());
  std::vector<int> row_bin(mask.height());
  for (int x = 0; x < mask.width(); ++x) {
    col_bin[x] = hist.bin_of(angles(centered_from_index(x, mask.width()), 0.0).alpha);
  }
  for (int y = 0; y < mask.height(); ++y) {
    row_bin[y] = hist.bin_of(angles(0.0, centered_from_index(y, mask.height())).beta);
  }
  std::array<bool, 256> is_fg{};
  for (int c : fg) {
    if (c >= 0 && c < 256) is_fg[c] = true;
  }
  for (int y = 0; y < mask.height(); ++y) {
    const auto row = mask.classes.row(y);
    for (int x = 0; x < mask.width(); ++x) {
      if (is_fg[row[x]]) hist.add(col_bin[x], row_bin[y]);
    }
  }
  return hist;
}

}  // namespace

ApHistogram accumulate_mask(ApHistogram hist, const LabelMap& mask, const std::set<int>& fg,
                            const CameraIntrinsics& intrinsics) {
  require_frame(mask, {intrinsics.width(), intrinsics.height()}, "accumulate_mask");
  return accumulate_grid(std::move(hist), mask, fg, intrinsics, [&](double x, double y) {
    return incident_angles(x, y, intrinsics);
  });
}

ApHistogram accumulate_mask_arc(ApHistogram hist, const LabelMap& mask, const std::set<int>& fg,
                                const CameraIntrinsics& intrinsics) {
  require_frame(mask, pit_frame_size(intrinsics), "accumulate_mask_arc");
  return accumulate_grid(std::move(hist), mask, fg, intrinsics, [&](double u, double v) {
    return arc_incident_angles(u, v, intrinsics);
  });
}

ApHistogram accumulate_boxes(ApHistogram hist, const std::vector<BoundingBox>& boxes,
                             const CameraIntrinsics& intrinsics) {
  hist.cover(intrinsics);
  const int w = intrinsics.width();
  const int h = intrinsics.height();
  std::vector<int> col_bin(w);
  std::vector<int> row_bin(h);
  for (int x = 0; x < w; ++x) {
    col_bin[x] = hist.bin_of(incident_angles(centered_from_index(x, w), 0.0, intrinsics).alpha);
  }
  for (int y = 0; y < h; ++y) {
    row_bin[y] = hist.bin_of(incident_angles(0.0, centered_from_index(y, h), intrinsics).beta);
  }
  for (const BoundingBox& box : boxes) {
    if (box.space != Space::original) {
      throw std::invalid_argument("accumulate_boxes expects original-space boxes");
    }
    // Pixel k has its center at k + 0.5; keep x_min < k + 0.5 < x_max.
    const int x0 = std::max(0, static_cast<int>(std::floor(box.x_min - 0.5)) + 1);
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(box.x_max - 0.5)) - 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(box.y_min - 0.5)) + 1);
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(box.y_max - 0.5)) - 1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) hist.add(col_bin[x], row_bin[y]);
    }
  }
  return hist;
}

ApHistogram merge(const ApHistogram& a, const ApHistogram& b) {
  if (a.bin_width() != b.bin_width()) throw std::invalid_argument("histogram bin widths differ");
  if (a.empty_range()) return b;
  if (b.empty_range()) return a;
  ApHistogram out = a;
  out.ensure_range(b.alpha_lo(), b.alpha_hi(), b.beta_lo(), b.beta_hi());
  for (int bb = b.beta_lo(); bb <= b.beta_hi(); ++bb) {
    for (int aa = b.alpha_lo(); aa <= b.alpha_hi(); ++aa) {
      if (const auto n = b.count(aa, bb)) out.add(aa, bb, n);
    }
  }
  return out;
}

std::string heatmap_csv(const ApHistogram& hist) {
  std::ostringstream os;
  os << "alpha,beta,count\n";
  for (int b = hist.beta_lo(); b <= hist.beta_hi() && !hist.empty_range(); ++b) {
    for (int a = hist.alpha_lo(); a <= hist.alpha_hi(); ++a) {
      os << a * hist.bin_width() << ',' << b * hist.bin_width() << ',' << hist.count(a, b) << '\n';
    }
  }
  return os.str();
}

Image8 heatmap_image(const ApHistogram& hist) {
  if (hist.empty_range()) return Image8(1, 1, 1);
  Image8 img(hist.alpha_bins(), hist.beta_bins(), 1);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (int b = hist.beta_lo(); b <= hist.beta_hi(); ++b) {
    for (int a = hist.alpha_lo(); a <= hist.alpha_hi(); ++a) {
      const double v = std::log1p(static_cast<double>(hist.count(a, b)));
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  const double range = hi - lo;
  for (int b = hist.beta_lo(); b <= hist.beta_hi(); ++b) {
    for (int a = hist.alpha_lo(); a <= hist.alpha_hi(); ++a) {
      const double v = std::log1p(static_cast<double>(hist.count(a, b)));
      const double t = range > 0.0 ? (v - lo) / range : 0.0;
      img.at(a - hist.alpha_lo(), b - hist.beta_lo()) = static_cast<std::uint8_t>(std::lround(t * 255.0));
    }
  }
  return img;
}

void export_heatmap(const ApHistogram& hist, const std::filesystem::path& csv_path,
                    const std::filesystem::path& pgm_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot open " + csv_path.string() + " for writing");
  csv << heatmap_csv(hist);
  if (!csv) throw IoError("write failed for " + csv_path.string());
  write_pnm(pgm_path, heatmap_image(hist));
}

}  // namespace pit
