#include "pit/resampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pit {

// ---------------------------------------------------------------- AxisLut

AxisLut::AxisLut(Direction direction, int in_extent, int plane_extent, double focal, bool identity)
    : direction_(direction),
      in_extent_(in_extent),
      plane_extent_(plane_extent),
      focal_(focal),
      identity_(identity) {
  if (identity_) {
    arc_extent_ = plane_extent_;
  } else {
    arc_extent_ = transformed_extent(plane_extent_, focal_);
  }
  const int out = identity_ ? in_extent_ : (direction_ == Direction::forward ? arc_extent_ : plane_extent_);
  src_.resize(out);
  const double hi = in_extent_ - 1;
  for (int i = 0; i < out; ++i) src_[i] = std::clamp(map(i), 0.0, hi);
}

AxisLut AxisLut::forward(int in_extent, double focal) {
  return AxisLut(Direction::forward, in_extent, in_extent, focal, false);
}

AxisLut AxisLut::reverse(int plane_extent, double focal) {
  return AxisLut(Direction::reverse, transformed_extent(plane_extent, focal), plane_extent, focal,
                 false);
}

AxisLut AxisLut::identity(int extent) {
  if (extent <= 0) throw std::invalid_argument("identity LUT extent must be positive");
  return AxisLut(Direction::forward, extent, extent, 1.0, true);
}

double AxisLut::map(double out_index) const {
  if (identity_) return out_index;
  if (direction_ == Direction::forward) {
    const double u = centered_from_index(out_index, arc_extent_);
    return index_from_centered(arc_to_plane(u, focal_), plane_extent_);
  }
  const double x = centered_from_index(out_index, plane_extent_);
  return index_from_centered(plane_to_arc(x, focal_), arc_extent_);
}

// ---------------------------------------------------------------- specs

RemapSpec build_forward_lut(const CameraIntrinsics& intrinsics, Interpolation interpolation) {
  return {AxisLut::forward(intrinsics.width(), intrinsics.fx()),
          AxisLut::forward(intrinsics.height(), intrinsics.fy()), interpolation,
          Direction::forward};
}

RemapSpec build_reverse_lut(const CameraIntrinsics& intrinsics, Interpolation interpolation) {
  return {AxisLut::reverse(intrinsics.width(), intrinsics.fx()),
          AxisLut::reverse(intrinsics.height(), intrinsics.fy()), interpolation,
          Direction::reverse};
}

// ---------------------------------------------------------------- kernels

namespace {

struct Tap {
  int i0 = 0;
  int i1 = 0;
  double w = 0.0;
};

std::vector<Tap> make_taps(const AxisLut& lut, Interpolation mode) {
  const int n = lut.in_extent();
  std::vector<Tap> taps(lut.out_extent());
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const double s = lut.src()[i];
    if (mode == Interpolation::nearest) {
      const int k = std::min(static_cast<int>(std::floor(s + 0.5)), n - 1);
      taps[i] = {k, k, 0.0};
    } else if (n == 1) {
      taps[i] = {0, 0, 0.0};
    } else {
      const int k = std::min(static_cast<int>(std::floor(s)), n - 2);
      taps[i] = {k, k + 1, s - k};
    }
  }
  return taps;
}

void check_dims(int w, int h, const RemapSpec& spec) {
  if (w != spec.in_width() || h != spec.in_height()) {
    throw std::invalid_argument("image is " + std::to_string(w) + "x" + std::to_string(h) +
                                " but remap expects " + std::to_string(spec.in_width()) + "x" +
                                std::to_string(spec.in_height()));
  }
}

template <typename T>
struct Accum;
template <>
struct Accum<std::uint8_t> {
  using type = float;
  static std::uint8_t store(float v) noexcept {
    // Inputs are convex combinations of [0, 255]; round half up == half away from zero.
    const float r = std::floor(v + 0.5f);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0f, 255.0f));
  }
};
template <>
struct Accum<float> {
  using type = double;
  static float store(double v) noexcept { return static_cast<float>(v); }
};

template <typename T>
Image<T> remap_two_pass(const Image<T>& image, const RemapSpec& spec) {
  using A = typename Accum<T>::type;
  check_dims(image.width(), image.height(), spec);
  const int channels = image.channels();
  const auto tx = make_taps(spec.lut_x, spec.interpolation);
  const auto ty = make_taps(spec.lut_y, spec.interpolation);
  const int out_w = spec.out_width();
  const int out_h = spec.out_height();
  const std::size_t tmp_stride = static_cast<std::size_t>(out_w) * channels;

  std::vector<char> needed(image.height(), 0);
  for (const Tap& t : ty) needed[t.i0] = needed[t.i1] = 1;

  // Horizontal pass: every referenced input row resampled to out_w columns.
  std::vector<A> tmp(tmp_stride * image.height());
  std::vector<A> wx(tx.size());
  for (std::size_t i = 0; i < tx.size(); ++i) wx[i] = static_cast<A>(tx[i].w);
  for (int y = 0; y < image.height(); ++y) {
    if (!needed[y]) continue;
    const T* src = image.row(y).data();
    A* dst = tmp.data() + y * tmp_stride;
    for (int x = 0; x < out_w; ++x) {
      const T* p0 = src + static_cast<std::size_t>(tx[x].i0) * channels;
      const T* p1 = src + static_cast<std::size_t>(tx[x].i1) * channels;
      const A w = wx[x];
      for (int c = 0; c < channels; ++c) {
        const A a = static_cast<A>(p0[c]);
        const A b = static_cast<A>(p1[c]);
        dst[x * channels + c] = a + w * (b - a);
      }
    }
  }

  // Vertical pass.
  Image<T> out(out_w, out_h, channels);
  for (int y = 0; y < out_h; ++y) {
    const A* r0 = tmp.data() + ty[y].i0 * tmp_stride;
    const A* r1 = tmp.data() + ty[y].i1 * tmp_stride;
    const A w = static_cast<A>(ty[y].w);
    T* dst = out.row(y).data();
    for (std::size_t k = 0; k < tmp_stride; ++k) {
      dst[k] = Accum<T>::store(r0[k] + w * (r1[k] - r0[k]));
    }
  }
  return out;
}

template <typename T>
Image<T> remap_gather(const Image<T>& image, const RemapSpec& spec) {
  using A = typename Accum<T>::type;
  check_dims(image.width(), image.height(), spec);
  const int channels = image.channels();
  const auto tx = make_taps(spec.lut_x, spec.interpolation);
  const auto ty = make_taps(spec.lut_y, spec.interpolation);
  Image<T> out(spec.out_width(), spec.out_height(), channels);
  for (int y = 0; y < spec.out_height(); ++y) {
    const A wy = static_cast<A>(ty[y].w);
    for (int x = 0; x < spec.out_width(); ++x) {
      const A wx = static_cast<A>(tx[x].w);
      for (int c = 0; c < channels; ++c) {
        const A a = image.at(tx[x].i0, ty[y].i0, c);
        const A b = image.at(tx[x].i1, ty[y].i0, c);
        const A d = image.at(tx[x].i0, ty[y].i1, c);
        const A e = image.at(tx[x].i1, ty[y].i1, c);
        const A top = a + wx * (b - a);
        const A bottom = d + wx * (e - d);
        out.at(x, y, c) = Accum<T>::store(top + wy * (bottom - top));
      }
    }
  }
  return out;
}

}  // namespace

Image8 remap(const Image8& image, const RemapSpec& spec) { return remap_two_pass(image, spec); }
ImageF remap(const ImageF& image, const RemapSpec& spec) { return remap_two_pass(image, spec); }

ImageBuffer remap(const ImageBuffer& image, const RemapSpec& spec) {
  return std::visit([&spec](const auto& img) -> ImageBuffer { return remap_two_pass(img, spec); },
                    image);
}

Image8 remap_direct(const Image8& image, const RemapSpec& spec) { return remap_gather(image, spec); }
ImageF remap_direct(const ImageF& image, const RemapSpec& spec) { return remap_gather(image, spec); }

// ---------------------------------------------------------------- PIT

Image8 pit_forward(const Image8& image, const CameraIntrinsics& intrinsics) {
  return remap(image, build_forward_lut(intrinsics));
}
ImageF pit_forward(const ImageF& image, const CameraIntrinsics& intrinsics) {
  return remap(image, build_forward_lut(intrinsics));
}
Image8 pit_reverse(const Image8& image, const CameraIntrinsics& intrinsics) {
  return remap(image, build_reverse_lut(intrinsics));
}
ImageF pit_reverse(const ImageF& image, const CameraIntrinsics& intrinsics) {
  return remap(image, build_reverse_lut(intrinsics));
}
ImageBuffer pit_forward(const ImageBuffer& image, const CameraIntrinsics& intrinsics) {
  return remap(image, build_forward_lut(intrinsics));
}
ImageBuffer pit_reverse(const ImageBuffer& image, const CameraIntrinsics& intrinsics) {
  return remap(image, build_reverse_lut(intrinsics));
}

// ---------------------------------------------------------------- crop

int crop_width_for_fov(const CameraIntrinsics& intrinsics, double target_fov_x) {
  const double current = intrinsics.fov().fov_x;
  if (!(target_fov_x > 0.0) || target_fov_x > current + 1e-9) {
    throw std::invalid_argument("target FoV " + std::to_string(target_fov_x) +
                                " must lie in (0, " + std::to_string(current) + "]");
  }
  const double w = 2.0 * intrinsics.fx() * std::tan(deg_to_rad(target_fov_x) / 2.0);
  return std::clamp(floor_with_slack(w), 1, intrinsics.width());
}

template <typename T>
Image<T> crop_columns(const Image<T>& image, int new_width) {
  if (new_width <= 0 || new_width > image.width()) {
    throw std::invalid_argument("crop width must lie in [1, image width]");
  }
  const int x0 = crop_offset(image.width(), new_width);
  Image<T> out(new_width, image.height(), image.channels());
  const std::size_t n = static_cast<std::size_t>(new_width) * image.channels();
  for (int y = 0; y < image.height(); ++y) {
    auto src = image.row(y).subspan(static_cast<std::size_t>(x0) * image.channels(), n);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

template Image8 crop_columns(const Image8&, int);
template ImageF crop_columns(const ImageF&, int);

namespace {
template <typename T>
Cropped<T> crop_impl(const Image<T>& image, const CameraIntrinsics& intrinsics, double target) {
  if (image.width() != intrinsics.width() || image.height() != intrinsics.height()) {
    throw std::invalid_argument("image size does not match intrinsics");
  }
  const int w = crop_width_for_fov(intrinsics, target);
  return {crop_columns(image, w), intrinsics.with_size(w, intrinsics.height())};
}
}  // namespace

Cropped<std::uint8_t> crop_to_fov(const Image8& image, const CameraIntrinsics& intrinsics,
                                  double target_fov_x) {
  return crop_impl(image, intrinsics, target_fov_x);
}
Cropped<float> crop_to_fov(const ImageF& image, const CameraIntrinsics& intrinsics,
                           double target_fov_x) {
  return crop_impl(image, intrinsics, target_fov_x);
}

// ---------------------------------------------------------------- cache

std::shared_ptr<const RemapSpec> LutCache::get(const CameraIntrinsics& intrinsics,
                                               Direction direction, Interpolation interpolation) {
  const Key key{intrinsics, direction, interpolation};
  {
    std::lock_guard lock(mutex_);
    if (auto it = specs_.find(key); it != specs_.end()) return it->second;
  }
  // Built outside the lock; a racing builder produces an identical spec.
  auto spec = std::make_shared<const RemapSpec>(direction == Direction::forward
                                                    ? build_forward_lut(intrinsics, interpolation)
                                                    : build_reverse_lut(intrinsics, interpolation));
  std::lock_guard lock(mutex_);
  return specs_.try_emplace(key, std::move(spec)).first->second;
}

std::size_t LutCache::size() const {
  std::lock_guard lock(mutex_);
  return specs_.size();
}

}  // namespace pit
