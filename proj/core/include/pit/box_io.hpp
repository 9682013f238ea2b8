#pragma once

// JSON Lines box files: one object per line with image_id, space
// ("original" | "pit", default original), class_id, x_min, y_min, x_max,
// y_max and an optional score.

#include <filesystem>
#include <string>
#include <vector>

#include "pit/label_transform.hpp"

namespace pit {

struct BoxRecord {
  std::string image_id;
  BoundingBox box;
};

/// Throws std::invalid_argument on malformed lines.
BoxRecord parse_box_line(const std::string& line);
std::string format_box_line(const BoxRecord& record);

/// Blank lines are skipped. Errors carry the 1-based line number.
std::vector<BoxRecord> read_boxes(const std::filesystem::path& path);
void write_boxes(const std::filesystem::path& path, const std::vector<BoxRecord>& records);

}  // namespace pit
