#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "oracle/brute_force.hpp"
#include "pit/camera_geometry.hpp"
#include "pit/image.hpp"

namespace pit::test {

inline CameraIntrinsics kitti() { return CameraIntrinsics::from_fov(1242, 375, {90.0, 34.0}); }
inline CameraIntrinsics cityscapes() { return CameraIntrinsics::from_fov(2048, 1024, {50.0, 26.0}); }

template <typename T>
oracle::Raster to_raster(const Image<T>& img) {
  oracle::Raster r{img.width(), img.height(), img.channels(), {}};
  r.data.assign(img.data().begin(), img.data().end());
  return r;
}

inline Image8 random_image8(std::mt19937& rng, int w, int h, int c) {
  Image8 img(w, h, c);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(rng));
  return img;
}

inline ImageF random_imagef(std::mt19937& rng, int w, int h, int c) {
  ImageF img(w, h, c);
  std::uniform_real_distribution<float> d(0.0f, 1.0f);
  for (auto& v : img.data()) v = d(rng);
  return img;
}

/// Fresh scratch directory below the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pit_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pit::test
