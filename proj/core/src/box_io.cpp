#include "pit/box_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "pit/image_io.hpp"

namespace pit {

using json = nlohmann::ordered_json;

BoxRecord parse_box_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("box line is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("box line must be a JSON object");
  try {
    BoxRecord r;
    r.image_id = j.at("image_id").get<std::string>();
    r.box.space = space_from_string(j.value("space", std::string("original")));
    r.box.class_id = j.at("class_id").get<int>();
    r.box.x_min = j.at("x_min").get<double>();
    r.box.y_min = j.at("y_min").get<double>();
    r.box.x_max = j.at("x_max").get<double>();
    r.box.y_max = j.at("y_max").get<double>();
    if (auto it = j.find("score"); it != j.end() && !it->is_null()) {
      const double s = it->get<double>();
      if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("score must lie in [0, 1]");
      r.box.score = s;
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed box record: ") + e.what());
  }
}

std::string format_box_line(const BoxRecord& r) {
  json j;
  j["image_id"] = r.image_id;
  j["space"] = to_string(r.box.space);
  j["class_id"] = r.box.class_id;
  j["x_min"] = r.box.x_min;
  j["y_min"] = r.box.y_min;
  j["x_max"] = r.box.x_max;
  j["y_max"] = r.box.y_max;
  if (r.box.score) j["score"] = *r.box.score;
  return j.dump();
}

std::vector<BoxRecord> read_boxes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<BoxRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_box_line(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_boxes(const std::filesystem::path& path, const std::vector<BoxRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& r : records) out << format_box_line(r) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace pit
