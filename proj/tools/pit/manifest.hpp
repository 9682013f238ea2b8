#pragma once

// Dataset manifests.
//
//   {
//     "space": "original",                       // or "pit"
//     "defaults": {"fov_x": 90, "fov_y": 34},    // or fx/fy, width/height
//     "entries": [
//       {"id": "000001", "image": "img/000001.png",
//        "boxes": "lbl/000001.jsonl", "mask": "seg/000001.png",
//        "intrinsics": {"fov_x": 50.3, "fov_y": 25.9}}
//     ]
//   }
//
// Paths are relative to the manifest's directory. Entry intrinsics override
// the defaults per group (focal group: fx/fov_x, fy/fov_y; size group:
// width/height, always given together). Width and height may be omitted for original-space entries,
// in which case they are taken from the image file.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pit/camera_geometry.hpp"
#include "pit/label_transform.hpp"

namespace pit::cli {

struct IntrinsicsSpec {
  std::optional<int> width;
  std::optional<int> height;
  std::optional<double> fx;
  std::optional<double> fy;
  std::optional<double> fov_x;
  std::optional<double> fov_y;
};

struct ManifestEntry {
  std::string id;
  std::filesystem::path image;
  std::optional<std::filesystem::path> boxes;
  std::optional<std::filesystem::path> mask;
  std::optional<std::filesystem::path> weights;
  IntrinsicsSpec intrinsics;
};

struct DatasetManifest {
  Space space = Space::original;
  IntrinsicsSpec defaults;
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  /// Absolute-ish path of a manifest-relative file.
  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Serializes with paths relative to base_dir and full intrinsics per entry.
std::string dump_manifest(const DatasetManifest& manifest);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Complete intrinsics for an entry. image_size supplies width/height when
/// neither the entry nor the defaults give them. Throws ManifestError.
CameraIntrinsics resolve_intrinsics(const DatasetManifest& manifest, const ManifestEntry& entry,
                                    std::optional<FrameSize> image_size = std::nullopt);

/// Whether resolution needs the image dimensions.
bool needs_image_size(const DatasetManifest& manifest, const ManifestEntry& entry);

/// Fully specified intrinsics as stored in emitted manifests.
IntrinsicsSpec full_spec(const CameraIntrinsics& intrinsics);

}  // namespace pit::cli
