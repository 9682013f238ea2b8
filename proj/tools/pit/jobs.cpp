#include "jobs.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "pit/ap_statistics.hpp"
#include "pit/box_io.hpp"
#include "pit/image_io.hpp"
#include "pit/resampler.hpp"
#include "pit/weighting.hpp"

namespace pit::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

Command command_from_string(const std::string& name) {
  if (name == "forward") return Command::forward;
  if (name == "reverse") return Command::reverse;
  if (name == "crop") return Command::crop;
  if (name == "weights") return Command::weights;
  if (name == "apstats") return Command::apstats;
  if (name == "bench") return Command::bench;
  throw std::invalid_argument("unknown command '" + name + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::forward: return "forward";
    case Command::reverse: return "reverse";
    case Command::crop: return "crop";
    case Command::weights: return "weights";
    case Command::apstats: return "apstats";
    case Command::bench: return "bench";
  }
  return "?";
}

double JobReport::mean_seconds() const {
  if (per_image.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : per_image) s += t.seconds;
  return s / static_cast<double>(per_image.size());
}

double JobReport::percentile_seconds(double q) const {
  if (per_image.empty()) return 0.0;
  std::vector<double> v;
  v.reserve(per_image.size());
  for (const auto& t : per_image) v.push_back(t.seconds);
  std::sort(v.begin(), v.end());
  const double rank = std::ceil(q / 100.0 * static_cast<double>(v.size()));
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(rank, 1.0)), 1, v.size());
  return v[k - 1];
}

std::string JobReport::to_json() const {
  json j;
  j["command"] = cli::to_string(command);
  j["ok"] = ok();
  j["entries"] = entries;
  j["images"] = images;
  j["boxes"] = boxes;
  j["masks"] = masks;
  j["skipped"] = skipped;
  j["timing"] = {{"mean_s", mean_seconds()},
                 {"p50_s", percentile_seconds(50)},
                 {"p90_s", percentile_seconds(90)},
                 {"p99_s", percentile_seconds(99)},
                 {"max_s", percentile_seconds(100)}};
  json per = json::array();
  for (const auto& t : per_image) per.push_back({{"id", t.id}, {"seconds", t.seconds}});
  j["per_image"] = std::move(per);
  json fails = json::array();
  for (const auto& f : failures) fails.push_back({{"index", f.index}, {"id", f.id}, {"error", f.error}});
  j["failures"] = std::move(fails);
  j["outputs"] = outputs;
  if (manifest_out) j["manifest"] = *manifest_out;
  return j.dump(2);
}

namespace {

struct EntryOutput {
  ManifestEntry entry;
  double seconds = 0.0;
  int images = 0;
  int boxes = 0;
  int masks = 0;
  std::vector<fs::path> outputs;
  std::optional<ApHistogram> histogram;
};

// Location of an input file below the output directory, relative to it.
fs::path mirror(const DatasetManifest& m, const fs::path& input) {
  fs::path rel = input.is_relative() ? input.lexically_normal() : input.lexically_relative(m.base_dir);
  if (rel.empty() || *rel.begin() == "..") rel = input.filename();
  return rel;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

FrameSize size_of(const ImageBuffer& img) {
  return std::visit([](const auto& i) { return FrameSize{i.width(), i.height()}; }, img);
}

std::vector<BoundingBox> boxes_of(const std::vector<BoxRecord>& records) {
  std::vector<BoundingBox> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.box);
  return out;
}

LabelMap read_mask(const fs::path& path, Space space) {
  Image8 img = read_image8(path);
  if (img.channels() != 1) throw IoError(path.string() + ": label maps must be single-channel");
  return {std::move(img), LabelMap::kDefaultIgnore, space};
}

class Runner {
 public:
  Runner(const JobOptions& opts, DatasetManifest manifest)
      : opts_(opts), manifest_(std::move(manifest)) {}

  JobReport run() {
    JobReport report;
    report.command = opts_.command;
    report.entries = static_cast<int>(manifest_.entries.size());
    validate_command();
    if (opts_.command != Command::bench) fs::create_directories(opts_.out_dir);

    std::vector<std::optional<EntryOutput>> results(manifest_.entries.size());
    std::vector<std::optional<std::string>> errors(manifest_.entries.size());
    std::vector<char> skipped(manifest_.entries.size(), 0);

    if (opts_.command == Command::weights) {
      run_weights(results, errors, skipped);
    } else {
      parallel_for(manifest_.entries.size(), [&](std::size_t i) {
        results[i] = process(manifest_.entries[i]);
      }, errors, skipped);
    }

    DatasetManifest emitted = manifest_;
    emitted.entries.clear();
    emitted.base_dir = opts_.out_dir;
    emitted.space = output_space();
    std::optional<ApHistogram> merged;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (skipped[i]) {
        ++report.skipped;
        continue;
      }
      if (errors[i]) {
        report.failures.push_back({static_cast<int>(i), manifest_.entries[i].id, *errors[i]});
        continue;
      }
      EntryOutput& r = *results[i];
      report.images += r.images;
      report.boxes += r.boxes;
      report.masks += r.masks;
      if (r.images > 0) report.per_image.push_back({r.entry.id, r.seconds});
      for (const auto& p : r.outputs) report.outputs.push_back(p.generic_string());
      if (r.histogram) merged = merged ? merge(*merged, *r.histogram) : *r.histogram;
      emitted.entries.push_back(std::move(r.entry));
    }

    if (opts_.command == Command::apstats) {
      const ApHistogram hist = merged.value_or(ApHistogram{});
      const fs::path csv = opts_.out_dir / "ap_histogram.csv";
      const fs::path pgm = opts_.out_dir / "ap_histogram.pgm";
      export_heatmap(hist, csv, pgm);
      report.outputs.push_back(csv.generic_string());
      report.outputs.push_back(pgm.generic_string());
    }
    if (opts_.command != Command::bench && opts_.command != Command::apstats) {
      // Entries that failed are left out so downstream commands see a clean manifest.
      const fs::path out_manifest = opts_.out_dir / "manifest.json";
      save_manifest(emitted, out_manifest);
      report.manifest_out = out_manifest.generic_string();
    }
    return report;
  }

 private:
  void validate_command() const {
    const Command c = opts_.command;
    if ((c == Command::forward || c == Command::crop || c == Command::weights) &&
        manifest_.space != Space::original) {
      throw ManifestError(to_string(c) + " needs an original-space manifest");
    }
    if (c == Command::reverse && manifest_.space != Space::pit) {
      throw ManifestError("reverse needs a PIT-space manifest");
    }
    if (c == Command::crop && !opts_.target_fov_x) {
      throw ManifestError("crop needs --target-fovx");
    }
    if (c == Command::bench && manifest_.space != Space::original) {
      throw ManifestError("bench needs an original-space manifest");
    }
  }

  Space output_space() const {
    if (opts_.command == Command::forward) return Space::pit;
    if (opts_.command == Command::reverse) return Space::original;
    return manifest_.space;
  }

  template <typename Fn>
  void parallel_for(std::size_t n, Fn&& fn, std::vector<std::optional<std::string>>& errors,
                    std::vector<char>& skipped) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    auto worker = [&] {
      for (std::size_t i = next++; i < n; i = next++) {
        if (stop) {
          skipped[i] = 1;
          continue;
        }
        try {
          fn(i);
        } catch (const std::exception& e) {
          errors[i] = e.what();
          if (!opts_.keep_going) stop = true;
        }
      }
    };
    unsigned threads = opts_.jobs > 0 ? static_cast<unsigned>(opts_.jobs)
                                      : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
      worker();
      return;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  CameraIntrinsics intrinsics_for(const ManifestEntry& e, const ImageBuffer* image) const {
    if (!needs_image_size(manifest_, e)) return resolve_intrinsics(manifest_, e);
    if (image) return resolve_intrinsics(manifest_, e, size_of(*image));
    const ImageBuffer img = read_image(manifest_.resolve(e.image));
    return resolve_intrinsics(manifest_, e, size_of(img));
  }

  EntryOutput process(const ManifestEntry& e) {
    switch (opts_.command) {
      case Command::forward:
      case Command::reverse: return transform(e);
      case Command::crop: return crop(e);
      case Command::apstats: return apstats(e);
      case Command::bench: return bench(e);
      case Command::weights: break;
    }
    throw std::logic_error("unreachable");
  }

  EntryOutput transform(const ManifestEntry& e) {
    const bool fwd = opts_.command == Command::forward;
    const Direction dir = fwd ? Direction::forward : Direction::reverse;
    const Space in_space = fwd ? Space::original : Space::pit;
    const auto start = Clock::now();
    EntryOutput out;
    out.entry = e;

    const ImageBuffer image = read_image(manifest_.resolve(e.image));
    const CameraIntrinsics cam = intrinsics_for(e, &image);
    const auto spec = luts_.get(cam, dir, Interpolation::bilinear);
    const fs::path img_out_rel = mirror(manifest_, e.image);
    const fs::path img_out = opts_.out_dir / img_out_rel;
    ensure_parent(img_out);
    write_image(img_out, remap(image, *spec));
    out.entry.image = img_out_rel;
    out.outputs.push_back(img_out);
    out.images = 1;

    if (e.mask) {
      const LabelMap mask = read_mask(manifest_.resolve(*e.mask), in_space);
      const LabelMap moved = fwd ? mask_forward(mask, cam) : mask_reverse(mask, cam);
      const fs::path p_rel = mirror(manifest_, *e.mask);
      const fs::path p = opts_.out_dir / p_rel;
      ensure_parent(p);
      write_png(p, moved.classes);
      out.entry.mask = p_rel;
      out.outputs.push_back(p);
      out.masks = 1;
    }
    if (e.boxes) {
      auto records = read_boxes(manifest_.resolve(*e.boxes));
      for (auto& r : records) r.box = fwd ? box_forward(r.box, cam) : box_reverse(r.box, cam);
      const fs::path p_rel = mirror(manifest_, *e.boxes);
      const fs::path p = opts_.out_dir / p_rel;
      ensure_parent(p);
      write_boxes(p, records);
      out.entry.boxes = p_rel;
      out.outputs.push_back(p);
      out.boxes = static_cast<int>(records.size());
    }
    out.entry.intrinsics = full_spec(cam);
    out.entry.weights.reset();
    out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }

  EntryOutput crop(const ManifestEntry& e) {
    const auto start = Clock::now();
    EntryOutput out;
    out.entry = e;
    const ImageBuffer image = read_image(manifest_.resolve(e.image));
    const CameraIntrinsics cam = intrinsics_for(e, &image);
    const double target = *opts_.target_fov_x;
    const int new_w = crop_width_for_fov(cam, target);
    const CameraIntrinsics cropped_cam = cam.with_size(new_w, cam.height());

    const ImageBuffer cropped = std::visit(
        [&](const auto& img) -> ImageBuffer { return crop_to_fov(img, cam, target).image; }, image);
    const fs::path img_out_rel = mirror(manifest_, e.image);
    const fs::path img_out = opts_.out_dir / img_out_rel;
    ensure_parent(img_out);
    write_image(img_out, cropped);
    out.entry.image = img_out_rel;
    out.outputs.push_back(img_out);
    out.images = 1;

    if (e.mask) {
      const LabelMap mask = read_mask(manifest_.resolve(*e.mask), Space::original);
      if (mask.width() != cam.width() || mask.height() != cam.height()) {
        throw std::invalid_argument("mask size does not match image");
      }
      const fs::path p_rel = mirror(manifest_, *e.mask);
      const fs::path p = opts_.out_dir / p_rel;
      ensure_parent(p);
      write_png(p, mask_crop(mask, new_w).classes);
      out.entry.mask = p_rel;
      out.outputs.push_back(p);
      out.masks = 1;
    }
    if (e.boxes) {
      const auto records = read_boxes(manifest_.resolve(*e.boxes));
      std::vector<BoxRecord> kept;
      for (const auto& r : records) {
        const auto b = boxes_crop({r.box}, cam, new_w, opts_.min_visible);
        if (!b.empty()) kept.push_back({r.image_id, b.front()});
      }
      const fs::path p_rel = mirror(manifest_, *e.boxes);
      const fs::path p = opts_.out_dir / p_rel;
      ensure_parent(p);
      write_boxes(p, kept);
      out.entry.boxes = p_rel;
      out.outputs.push_back(p);
      out.boxes = static_cast<int>(kept.size());
    }
    out.entry.intrinsics = full_spec(cropped_cam);
    out.entry.weights.reset();
    out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }

  EntryOutput apstats(const ManifestEntry& e) {
    EntryOutput out;
    out.entry = e;
    const CameraIntrinsics cam = intrinsics_for(e, nullptr);
    std::string source = opts_.ap_source;
    if (source == "auto") source = e.mask ? "mask" : "boxes";
    ApHistogram hist;
    if (source == "mask") {
      if (!e.mask) throw std::invalid_argument("entry has no mask");
      if (opts_.foreground.empty()) throw std::invalid_argument("mask statistics need --foreground");
      const LabelMap mask = read_mask(manifest_.resolve(*e.mask), manifest_.space);
      hist = manifest_.space == Space::original
                 ? accumulate_mask(std::move(hist), mask, opts_.foreground, cam)
                 : accumulate_mask_arc(std::move(hist), mask, opts_.foreground, cam);
      out.masks = 1;
    } else if (source == "boxes") {
      if (!e.boxes) throw std::invalid_argument("entry has no boxes");
      std::vector<BoundingBox> boxes = boxes_of(read_boxes(manifest_.resolve(*e.boxes)));
      if (!opts_.foreground.empty()) {
        std::erase_if(boxes, [&](const BoundingBox& b) { return !opts_.foreground.contains(b.class_id); });
      }
      for (auto& b : boxes) {
        if (b.space == Space::pit) b = box_reverse(b, cam);
      }
      hist = accumulate_boxes(std::move(hist), boxes, cam);
      out.boxes = static_cast<int>(boxes.size());
    } else {
      throw std::invalid_argument("unknown statistics source '" + source + "'");
    }
    out.histogram = std::move(hist);
    return out;
  }

  EntryOutput bench(const ManifestEntry& e) {
    EntryOutput out;
    out.entry = e;
    const ImageBuffer image = read_image(manifest_.resolve(e.image));
    const CameraIntrinsics cam = intrinsics_for(e, &image);
    const auto start = Clock::now();
    const ImageBuffer result = pit_forward(image, cam);
    out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    (void)result;
    out.images = 1;
    return out;
  }

  void run_weights(std::vector<std::optional<EntryOutput>>& results,
                   std::vector<std::optional<std::string>>& errors, std::vector<char>& skipped) {
    const std::size_t n = manifest_.entries.size();
    std::vector<std::optional<CameraIntrinsics>> cams(n);
    parallel_for(n, [&](std::size_t i) { cams[i] = intrinsics_for(manifest_.entries[i], nullptr); },
                 errors, skipped);

    // One file per distinct camera, numbered in manifest order.
    std::vector<CameraIntrinsics> unique;
    std::map<CameraIntrinsics, std::size_t> slot;
    for (std::size_t i = 0; i < n; ++i) {
      if (!cams[i]) continue;
      if (slot.try_emplace(*cams[i], unique.size()).second) unique.push_back(*cams[i]);
    }
    std::vector<fs::path> files(unique.size());
    std::vector<fs::path> rels(unique.size());
    std::vector<std::optional<std::string>> werr(unique.size());
    std::vector<char> wskip(unique.size(), 0);
    parallel_for(unique.size(), [&](std::size_t k) {
      const CameraIntrinsics& c = unique[k];
      const WeightMatrix w = build_weight_matrix(c);
      const std::string stem = "weights/weights_" + std::to_string(k) + "_" +
                               std::to_string(c.width()) + "x" + std::to_string(c.height());
      rels[k] = stem + ".pfm";
      const fs::path pfm = opts_.out_dir / rels[k];
      ensure_parent(pfm);
      write_pfm(pfm, w.to_image());
      write_pnm(opts_.out_dir / (stem + ".pgm"), w.visualization());
      files[k] = pfm;
    }, werr, wskip);

    std::vector<char> reported(unique.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!cams[i]) continue;
      const std::size_t k = slot.at(*cams[i]);
      if (werr[k] || wskip[k]) {
        errors[i] = werr[k] ? *werr[k] : "weight generation skipped";
        continue;
      }
      EntryOutput out;
      out.entry = manifest_.entries[i];
      out.entry.weights = rels[k];
      out.entry.intrinsics = full_spec(*cams[i]);
      if (!reported[k]) {
        out.outputs = {files[k], fs::path(files[k]).replace_extension(".pgm")};
        reported[k] = 1;
      }
      results[i] = std::move(out);
    }
  }

  const JobOptions& opts_;
  DatasetManifest manifest_;
  LutCache luts_;
};

}  // namespace

JobReport run(const JobOptions& options) {
  DatasetManifest manifest = load_manifest(options.manifest);
  Runner runner(options, std::move(manifest));
  return runner.run();
}

}  // namespace pit::cli
