#pragma once

// Raster file I/O: 8-bit PNG (1, 3 or 4 channels), binary PGM/PPM (P5/P6,
// maxval 255) and PFM (Pf/PF). PFM is written little-endian (negative scale)
// and bottom-to-top as the format requires; both byte orders are read.

#include <filesystem>
#include <stdexcept>

#include "pit/image.hpp"

namespace pit {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads by file signature, not by extension.
ImageBuffer read_image(const std::filesystem::path& path);

/// Reads and requires an 8-bit image.
Image8 read_image8(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Image8& image);
void write_pnm(const std::filesystem::path& path, const Image8& image);
void write_pfm(const std::filesystem::path& path, const ImageF& image);

/// Picks the encoder from the extension: .png, .pgm/.ppm/.pnm, .pfm.
void write_image(const std::filesystem::path& path, const ImageBuffer& image);

}  // namespace pit
