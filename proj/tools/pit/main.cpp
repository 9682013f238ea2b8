// pit: batch position-invariant transforms over dataset manifests.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jobs.hpp"

namespace {

std::set<int> parse_classes(const std::string& list) {
  std::set<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad class id '" + item + "'");
    out.insert(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position-invariant transform tools for cross-FoV datasets"};
  app.require_subcommand(1);

  pit::cli::JobOptions opts;
  std::string foreground;
  std::string report_path;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"forward", "Transform images and labels into PIT space"},
      {"reverse", "Map PIT-space images, masks and boxes back to the original space"},
      {"crop", "Center-crop to a narrower horizontal FoV"},
      {"weights", "Write loss weight matrices, one per distinct camera"},
      {"apstats", "Accumulate Angular-Position foreground statistics"},
      {"bench", "Time forward PIT without writing outputs"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--manifest", opts.manifest, "Dataset manifest (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out-dir", opts.out_dir, "Output directory")->required(name != "bench");
    sub->add_option("--target-fovx", opts.target_fov_x, "Target horizontal FoV in degrees (crop)");
    sub->add_option("--foreground", foreground, "Comma-separated foreground class ids");
    sub->add_option("--source", opts.ap_source, "apstats source: mask, boxes or auto")
        ->check(CLI::IsMember({"mask", "boxes", "auto"}));
    sub->add_option("--min-visible", opts.min_visible, "Minimum kept area fraction for cropped boxes")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--jobs", opts.jobs, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--keep-going", opts.keep_going, "Continue past failing entries");
    sub->add_option("--report", report_path, "Write the JSON report here instead of stdout");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    opts.command = pit::cli::command_from_string(app.get_subcommands().front()->get_name());
    opts.foreground = parse_classes(foreground);
    if (opts.min_visible <= 0.0) throw std::invalid_argument("--min-visible must be positive");
    const pit::cli::JobReport report = pit::cli::run(opts);
    if (report_path.empty()) {
      std::cout << report.to_json() << '\n';
    } else {
      std::ofstream out(report_path);
      out << report.to_json() << '\n';
      if (!out) throw std::runtime_error("cannot write report " + report_path);
    }
    for (const auto& f : report.failures) {
      std::cerr << "pit: entry " << f.index << " (" << f.id << "): " << f.error << '\n';
    }
    return report.ok() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "pit: " << e.what() << '\n';
    return 2;
  }
}
