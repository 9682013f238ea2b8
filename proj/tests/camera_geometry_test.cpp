#include "pit/camera_geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "test_support.hpp"

namespace pit {
namespace {

TEST(FocalFromFov, NinetyDegreesIsHalfExtent) {
  EXPECT_EQ(focal_from_fov(1242, 90.0), 621.0);
  EXPECT_EQ(focal_from_fov(375, 90.0), 187.5);
}

TEST(FocalFromFov, MatchesScalarOracle) {
  // Frozen from a double-precision evaluation of (extent/2)/tan(fov/2).
  EXPECT_NEAR(focal_from_fov(2048, 50.0), 2195.975086601788, 1e-9);
  EXPECT_NEAR(focal_from_fov(375, 34.0), 613.2848659657764, 1e-9);
  EXPECT_NEAR(focal_from_fov(2048, 50.0), 2196.0, 0.05);
  EXPECT_NEAR(focal_from_fov(375, 34.0), 613.3, 0.05);
}

TEST(FocalFromFov, RejectsOutOfRange) {
  EXPECT_THROW(focal_from_fov(100, 0.0), std::invalid_argument);
  EXPECT_THROW(focal_from_fov(100, 180.0), std::invalid_argument);
  EXPECT_THROW(focal_from_fov(100, -5.0), std::invalid_argument);
  EXPECT_THROW(focal_from_fov(0, 60.0), std::invalid_argument);
  EXPECT_THROW(focal_from_fov(-3, 60.0), std::invalid_argument);
}

TEST(CameraIntrinsics, FromFovDerivesPerAxisFocal) {
  const auto k = test::kitti();
  EXPECT_EQ(k.fx(), 621.0);
  EXPECT_NEAR(k.fy(), 613.2848659657764, 1e-9);
  EXPECT_NEAR(k.fov().fov_x, 90.0, 1e-12);
  EXPECT_NEAR(k.fov().fov_y, 34.0, 1e-12);
  EXPECT_THROW(CameraIntrinsics::from_focal(10, 10, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(CameraIntrinsics::from_fov(0, 10, {60, 60}), std::invalid_argument);
}

TEST(ArcToPlane, Examples) {
  EXPECT_EQ(arc_to_plane(0.0, 621.0), 0.0);
  EXPECT_NEAR(arc_to_plane(621.0 * kPi / 4.0, 621.0), 621.0, 1e-9);
  EXPECT_NEAR(arc_to_plane(500.0, 2196.0), 508.823213580144, 1e-9);
}

TEST(ArcToPlane, RejectsBeyondHemisphere) {
  EXPECT_THROW(arc_to_plane(621.0 * kPi / 2.0, 621.0), std::domain_error);
  EXPECT_THROW(arc_to_plane(-2000.0, 621.0), std::domain_error);
}

TEST(PlaneToArc, Examples) {
  EXPECT_EQ(plane_to_arc(0.0, 123.0), 0.0);
  EXPECT_NEAR(plane_to_arc(621.0, 621.0), 621.0 * kPi / 4.0, 1e-9);
  EXPECT_NEAR(plane_to_arc(621.0, 621.0), 487.7, 0.05);
  EXPECT_NEAR(plane_to_arc(arc_to_plane(300.0, 621.0), 621.0), 300.0, 1e-9);
}

TEST(IncidentAngles, Examples) {
  const auto k = test::kitti();
  const auto a0 = incident_angles(0, 0, k);
  EXPECT_EQ(a0.alpha, 0.0);
  EXPECT_EQ(a0.beta, 0.0);
  const auto edge = incident_angles(621, 0, k);
  EXPECT_NEAR(edge.alpha, 45.0, 1e-12);
  EXPECT_EQ(edge.beta, 0.0);
  const auto c = CameraIntrinsics::from_focal(2048, 1024, 2196.0, 2196.0);
  EXPECT_NEAR(incident_angles(512, 0, c).alpha, 13.124124383050166, 1e-9);
}

TEST(IncidentAngles, ArcAnglesAreLinear) {
  const auto k = test::kitti();
  EXPECT_NEAR(arc_incident_angles(621.0 * kPi / 4.0, 0, k).alpha, 45.0, 1e-12);
  EXPECT_NEAR(arc_incident_angles(100.0, 0, k).alpha, 2 * arc_incident_angles(50.0, 0, k).alpha, 1e-12);
}

TEST(TransformedExtent, Examples) {
  EXPECT_EQ(transformed_extent(1242, 621.0), 975);
  EXPECT_EQ(transformed_extent(2048, 2196.0), 1916);
  EXPECT_EQ(transformed_extent(2, 1e6), 2);
  EXPECT_EQ(transformed_extent(375, focal_from_fov(375, 34.0)), 363);
  // 2 f atan(512 / f) with f = 512 / tan(13 deg) is 1006.4.
  EXPECT_EQ(transformed_extent(1024, focal_from_fov(1024, 26.0)), 1006);
}

TEST(TransformedExtent, BoundedByInput) {
  for (int extent : {1, 2, 3, 17, 640, 1242}) {
    for (double fov : {0.5, 30.0, 90.0, 150.0, 179.0}) {
      const int n = transformed_extent(extent, focal_from_fov(extent, fov));
      EXPECT_GE(n, 1);
      EXPECT_LE(n, extent);
    }
  }
}

TEST(PitFrameSize, KittiAndCityscapes) {
  EXPECT_EQ(pit_frame_size(test::kitti()), (FrameSize{975, 363}));
  EXPECT_EQ(pit_frame_size(test::cityscapes()), (FrameSize{1916, 1006}));
}

// ---- properties

TEST(CameraGeometryProperty, InversePair) {
  std::mt19937 rng(7);
  for (double fov : {30.0, 50.0, 80.0, 90.0, 120.0}) {
    const double f = focal_from_fov(1000, fov);
    std::uniform_real_distribution<double> d(-0.99 * kPi / 2.0 * f, 0.99 * kPi / 2.0 * f);
    for (int i = 0; i < 10000; ++i) {
      const double u = d(rng);
      EXPECT_LE(std::abs(plane_to_arc(arc_to_plane(u, f), f) - u), 1e-6 * std::max(1.0, std::abs(u)));
    }
  }
}

TEST(CameraGeometryProperty, Contraction) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-5000.0, 5000.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = d(rng);
    if (x == 0.0) continue;
    EXPECT_LT(std::abs(plane_to_arc(x, 621.0)), std::abs(x));
  }
  EXPECT_EQ(plane_to_arc(0.0, 621.0), 0.0);
}

TEST(CameraGeometryProperty, Monotone) {
  const double f = 621.0;
  double prev_arc = -1e300, prev_plane = -1e300;
  for (int i = 0; i < 10000; ++i) {
    const double x = -3000.0 + 6000.0 * i / 9999.0;
    const double u = -0.99 * f * kPi / 2.0 + 0.99 * f * kPi * i / 9999.0;
    const double a = plane_to_arc(x, f);
    const double p = arc_to_plane(u, f);
    EXPECT_GT(a, prev_arc);
    EXPECT_GT(p, prev_plane);
    prev_arc = a;
    prev_plane = p;
  }
}

TEST(CameraGeometryProperty, ArcRuler) {
  const double f = 621.0;
  const double step = deg_to_rad(45.0) / 50.0;
  for (int k = 1; k < 50; ++k) {
    const double expected = f * k * step;
    EXPECT_NEAR(plane_to_arc(f * std::tan(k * step), f), expected, 1e-9 * expected);
  }
}

TEST(CameraGeometryProperty, ConcurrentCallsAgree) {
  std::vector<double> a(4);
  std::vector<std::jthread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      double s = 0;
      for (int i = 0; i < 10000; ++i) s += plane_to_arc(i * 0.1, 621.0);
      a[t] = s;
    });
  }
  threads.clear();
  for (int t = 0; t < 4; ++t) EXPECT_EQ(a[t], a[0]);
}

}  // namespace
}  // namespace pit
