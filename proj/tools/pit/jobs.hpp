#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "manifest.hpp"
#include "pit/label_transform.hpp"

namespace pit::cli {

enum class Command { forward, reverse, crop, weights, apstats, bench };

Command command_from_string(const std::string& name);
std::string to_string(Command command);

struct JobOptions {
  Command command = Command::forward;
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::optional<double> target_fov_x;
  std::set<int> foreground;
  std::string ap_source = "auto";  // mask | boxes | auto
  double min_visible = kDefaultMinVisible;
  int jobs = 0;  // 0: hardware concurrency
  bool keep_going = false;
};

struct EntryTiming {
  std::string id;
  double seconds = 0.0;
};

struct EntryFailure {
  int index = 0;
  std::string id;
  std::string error;
};

struct JobReport {
  Command command = Command::forward;
  int entries = 0;
  int images = 0;
  int boxes = 0;
  int masks = 0;
  int skipped = 0;
  std::vector<EntryTiming> per_image;
  std::vector<EntryFailure> failures;
  std::vector<std::string> outputs;
  std::optional<std::string> manifest_out;

  double mean_seconds() const;
  /// Nearest-rank percentile, q in [0, 100].
  double percentile_seconds(double q) const;
  bool ok() const noexcept { return failures.empty() && skipped == 0; }

  std::string to_json() const;
};

/// Runs one command over a manifest. Throws ManifestError when the manifest
/// itself cannot be read; per-entry problems are collected in the report.
JobReport run(const JobOptions& options);

}  // namespace pit::cli
