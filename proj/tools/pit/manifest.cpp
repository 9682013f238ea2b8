#include "manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pit::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

IntrinsicsSpec parse_spec(const json& j, const std::string& where) {
  if (!j.is_object()) throw ManifestError(where + ": intrinsics must be an object");
  IntrinsicsSpec s;
  try {
    if (j.contains("width")) s.width = j.at("width").get<int>();
    if (j.contains("height")) s.height = j.at("height").get<int>();
    if (j.contains("fx")) s.fx = j.at("fx").get<double>();
    if (j.contains("fy")) s.fy = j.at("fy").get<double>();
    if (j.contains("fov_x")) s.fov_x = j.at("fov_x").get<double>();
    if (j.contains("fov_y")) s.fov_y = j.at("fov_y").get<double>();
  } catch (const json::exception& e) {
    throw ManifestError(where + ": " + e.what());
  }
  return s;
}

json spec_json(const IntrinsicsSpec& s) {
  json j = json::object();
  if (s.width) j["width"] = *s.width;
  if (s.height) j["height"] = *s.height;
  if (s.fx) j["fx"] = *s.fx;
  if (s.fy) j["fy"] = *s.fy;
  if (s.fov_x) j["fov_x"] = *s.fov_x;
  if (s.fov_y) j["fov_y"] = *s.fov_y;
  return j;
}

std::string relative_string(const fs::path& p, const fs::path& base) {
  if (p.is_relative()) return p.generic_string();
  const fs::path rel = p.lexically_relative(base);
  return rel.empty() ? p.generic_string() : rel.generic_string();
}

std::optional<fs::path> optional_path(const json& e, const char* key) {
  if (auto it = e.find(key); it != e.end() && !it->is_null()) return fs::path(it->get<std::string>());
  return std::nullopt;
}

}  // namespace

fs::path DatasetManifest::resolve(const fs::path& p) const {
  return p.is_absolute() ? p : (base_dir / p).lexically_normal();
}

DatasetManifest parse_manifest(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ManifestError("manifest must be a JSON object");

  DatasetManifest m;
  m.base_dir = base_dir;
  try {
    if (j.contains("space")) m.space = space_from_string(j.at("space").get<std::string>());
  } catch (const std::exception& e) {
    throw ManifestError(std::string("manifest space: ") + e.what());
  }
  if (j.contains("defaults")) m.defaults = parse_spec(j.at("defaults"), "defaults");
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw ManifestError("manifest needs an \"entries\" array");
  }
  int index = 0;
  for (const json& e : j.at("entries")) {
    const std::string where = "entry " + std::to_string(index);
    if (!e.is_object()) throw ManifestError(where + ": must be an object");
    ManifestEntry entry;
    try {
      if (!e.contains("image")) throw ManifestError(where + ": missing \"image\"");
      entry.image = e.at("image").get<std::string>();
      entry.id = e.contains("id") ? e.at("id").get<std::string>() : entry.image.stem().string();
      entry.boxes = optional_path(e, "boxes");
      entry.mask = optional_path(e, "mask");
      entry.weights = optional_path(e, "weights");
    } catch (const json::exception& ex) {
      throw ManifestError(where + ": " + ex.what());
    }
    if (e.contains("intrinsics")) entry.intrinsics = parse_spec(e.at("intrinsics"), where);
    m.entries.push_back(std::move(entry));
    ++index;
  }
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

std::string dump_manifest(const DatasetManifest& m) {
  json j;
  j["space"] = to_string(m.space);
  if (const json d = spec_json(m.defaults); !d.empty()) j["defaults"] = d;
  json entries = json::array();
  for (const ManifestEntry& e : m.entries) {
    json o;
    o["id"] = e.id;
    o["image"] = relative_string(e.image, m.base_dir);
    if (e.boxes) o["boxes"] = relative_string(*e.boxes, m.base_dir);
    if (e.mask) o["mask"] = relative_string(*e.mask, m.base_dir);
    if (e.weights) o["weights"] = relative_string(*e.weights, m.base_dir);
    o["intrinsics"] = spec_json(e.intrinsics);
    entries.push_back(std::move(o));
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

void save_manifest(const DatasetManifest& m, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ManifestError("cannot write manifest " + path.string());
  out << dump_manifest(m);
}

bool needs_image_size(const DatasetManifest& m, const ManifestEntry& e) {
  const bool has_size = (e.intrinsics.width && e.intrinsics.height) ||
                        (m.defaults.width && m.defaults.height);
  return !has_size;
}

CameraIntrinsics resolve_intrinsics(const DatasetManifest& m, const ManifestEntry& e,
                                    std::optional<FrameSize> image_size) {
  const IntrinsicsSpec& en = e.intrinsics;
  const IntrinsicsSpec& df = m.defaults;

  if (en.width.has_value() != en.height.has_value() || df.width.has_value() != df.height.has_value()) {
    throw ManifestError("entry '" + e.id + "': width and height must be given together");
  }
  std::optional<int> width, height;
  if (en.width && en.height) {
    width = en.width, height = en.height;
  } else if (df.width && df.height) {
    width = df.width, height = df.height;
  } else if (image_size) {
    if (m.space == Space::pit) {
      throw ManifestError("entry '" + e.id + "': PIT-space entries must state the original width/height");
    }
    width = image_size->width, height = image_size->height;
  } else {
    throw ManifestError("entry '" + e.id + "': no image size available");
  }

  // Per axis, the entry's own value wins; within a level fx beats fov_x.
  auto focal = [&](const std::optional<double>& ef, const std::optional<double>& efov,
                   const std::optional<double>& df_, const std::optional<double>& dfov, int extent,
                   const char* axis) -> double {
    if (ef) return *ef;
    if (efov) return focal_from_fov(extent, *efov);
    if (df_) return *df_;
    if (dfov) return focal_from_fov(extent, *dfov);
    throw ManifestError("entry '" + e.id + "': no focal length or FoV for axis " + axis);
  };
  try {
    const double fx = focal(en.fx, en.fov_x, df.fx, df.fov_x, *width, "x");
    const double fy = focal(en.fy, en.fov_y, df.fy, df.fov_y, *height, "y");
    return CameraIntrinsics::from_focal(*width, *height, fx, fy);
  } catch (const ManifestError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ManifestError("entry '" + e.id + "': " + ex.what());
  }
}

IntrinsicsSpec full_spec(const CameraIntrinsics& c) {
  const FieldOfView fov = c.fov();
  return {c.width(), c.height(), c.fx(), c.fy(), fov.fov_x, fov.fov_y};
}

}  // namespace pit::cli
