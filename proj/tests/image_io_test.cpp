#include "pit/image_io.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <random>

#include "test_support.hpp"

namespace pit {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(ImageIo, Png8RoundTripAllChannelCounts) {
  const auto dir = test::scratch_dir("png");
  std::mt19937 rng(3);
  for (int c : {1, 3, 4}) {
    const Image8 img = test::random_image8(rng, 37, 19, c);
    const auto path = dir / ("img" + std::to_string(c) + ".png");
    write_png(path, img);
    EXPECT_EQ(read_image8(path), img) << c << " channels";
  }
}

TEST(ImageIo, PnmRoundTrip) {
  const auto dir = test::scratch_dir("pnm");
  std::mt19937 rng(4);
  const Image8 gray = test::random_image8(rng, 13, 7, 1);
  const Image8 rgb = test::random_image8(rng, 13, 7, 3);
  write_image(dir / "g.pgm", gray);
  write_image(dir / "c.ppm", rgb);
  EXPECT_EQ(read_image8(dir / "g.pgm"), gray);
  EXPECT_EQ(read_image8(dir / "c.ppm"), rgb);
  EXPECT_EQ(slurp(dir / "g.pgm").substr(0, 11), "P5\n13 7\n255");
  EXPECT_THROW(write_pnm(dir / "x.ppm", Image8(2, 2, 4)), IoError);
}

TEST(ImageIo, PnmHeaderWithComments) {
  const auto dir = test::scratch_dir("pnm_comment");
  {
    std::ofstream out(dir / "c.pgm", std::ios::binary);
    out << "P5\n# a comment\n2 1\n# more\n255\n";
    out.put('\x07').put('\xfe');
  }
  const Image8 img = read_image8(dir / "c.pgm");
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.at(0, 0), 7);
  EXPECT_EQ(img.at(1, 0), 254);
}

TEST(ImageIo, PfmLittleEndianBottomUp) {
  const auto dir = test::scratch_dir("pfm");
  ImageF img(2, 2, 1);
  img.at(0, 0) = 1.0f;  // top row
  img.at(1, 0) = 2.0f;
  img.at(0, 1) = 3.0f;  // bottom row
  img.at(1, 1) = 4.0f;
  write_pfm(dir / "w.pfm", img);
  const std::string bytes = slurp(dir / "w.pfm");
  ASSERT_EQ(bytes.substr(0, 12), "Pf\n2 2\n-1.0\n");
  float first = 0;
  std::memcpy(&first, bytes.data() + 12, 4);
  EXPECT_EQ(first, 3.0f);  // rows are stored bottom to top
  const ImageBuffer back = read_image(dir / "w.pfm");
  EXPECT_EQ(std::get<ImageF>(back), img);
}

TEST(ImageIo, PfmBigEndianIsRead) {
  const auto dir = test::scratch_dir("pfm_be");
  {
    std::ofstream out(dir / "be.pfm", std::ios::binary);
    out << "Pf\n1 1\n1.0\n";
    const float v = 0.5f;
    char b[4];
    std::memcpy(b, &v, 4);
    std::swap(b[0], b[3]);
    std::swap(b[1], b[2]);
    out.write(b, 4);
  }
  EXPECT_EQ(std::get<ImageF>(read_image(dir / "be.pfm")).at(0, 0), 0.5f);
}

TEST(ImageIo, PfmThreeChannelRoundTrip) {
  const auto dir = test::scratch_dir("pfm3");
  std::mt19937 rng(5);
  const ImageF img = test::random_imagef(rng, 9, 4, 3);
  write_image(dir / "c.pfm", img);
  EXPECT_EQ(std::get<ImageF>(read_image(dir / "c.pfm")), img);
}

TEST(ImageIo, Errors) {
  const auto dir = test::scratch_dir("io_err");
  EXPECT_THROW(read_image(dir / "missing.png"), IoError);
  {
    std::ofstream(dir / "junk.png") << "definitely not an image";
  }
  EXPECT_THROW(read_image(dir / "junk.png"), IoError);
  {
    std::ofstream(dir / "short.pgm", std::ios::binary) << "P5\n4 4\n255\n\x01\x02";
  }
  EXPECT_THROW(read_image(dir / "short.pgm"), IoError);
  {
    std::ofstream(dir / "deep.pgm", std::ios::binary) << "P5\n1 1\n65535\n\x01\x02";
  }
  EXPECT_THROW(read_image(dir / "deep.pgm"), IoError);
  EXPECT_THROW(write_image(dir / "x.jpg", Image8(1, 1, 1)), IoError);
  EXPECT_THROW(write_image(dir / "x.png", ImageF(1, 1, 1)), IoError);
  EXPECT_THROW(read_image8(([&] {
                 write_pfm(dir / "f.pfm", ImageF(1, 1, 1));
                 return dir / "f.pfm";
               })()),
               IoError);
}

TEST(Image, RejectsBadShapes) {
  EXPECT_THROW(Image8(0, 1, 1), std::invalid_argument);
  EXPECT_THROW(Image8(1, 1, 5), std::invalid_argument);
  EXPECT_THROW(Image8(2, 2, 1, std::vector<std::uint8_t>(3)), std::invalid_argument);
}

}  // namespace
}  // namespace pit
