// robsurf command-line front end.
//
//   robsurf run --topology FILE --scenario NAME [--pmax N] [--configs M]
//               [--seed S] [--alpha A] [--out DIR] [--heatmap] [--threads T]
//   robsurf characterize --topology FILE
//   robsurf replay --manifest FILE [--out DIR] [--threads T]

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "robsurf/robsurf.hpp"

namespace {

int fail(robsurf::ErrorKind kind, const std::string& message) {
  std::cerr << "error[" << robsurf::to_string(kind) << "]: " << message << '\n';
  return robsurf::exit_code(kind);
}

void report(const robsurf::RunResult& r, const std::filesystem::path& dir) {
  std::cout << "scenario " << robsurf::scenario_name(r.surface.scenario) << ": "
            << r.surface.omega.rows() << " levels x " << r.surface.omega.cols()
            << " configurations, R*_init = " << robsurf::format_double(r.surface.r_star_init)
            << ", area under mean = " << robsurf::format_double(r.summary.area_under_mean)
            << '\n';
  for (const auto& f : r.written) std::cout << "wrote " << (dir / f).string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness surfaces of complex networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(robsurf::kVersion));

  robsurf::RunConfig cfg;
  std::size_t configs = 0;
  std::string topology;
  std::string out_dir = ".";
  auto* run = app.add_subcommand("run", "Compute the robustness surface of one failure scenario");
  run->add_option("--topology", topology, "Edge-list file (one 'u v' link per line)")
      ->required();
  run->add_option("--scenario", cfg.scenario,
                  "node-random | node-degree | node-bc | node-cc | link-random | link-bc")
      ->required();
  run->add_option("--pmax", cfg.p_max, "Largest failure percentage; P = {1..pmax}")
      ->capture_default_str();
  run->add_option("--configs", configs,
                  "Failure configurations m (default 500 random, 100 targeted)");
  run->add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
  run->add_option("--alpha", cfg.alpha, "Energy threshold for component selection")
      ->capture_default_str();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_flag("--heatmap", cfg.emit_heatmap, "Also write heatmap.ppm");
  run->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();

  auto* characterize =
      app.add_subcommand("characterize", "Print N, L, <k>, k_max, <l> and assortativity");
  std::string char_topology;
  characterize->add_option("--topology", char_topology, "Edge-list file")->required();

  auto* replay = app.add_subcommand("replay", "Re-run a recorded manifest.json");
  std::string manifest;
  std::string replay_out;
  unsigned replay_threads = 0;
  replay->add_option("--manifest", manifest, "manifest.json written by 'run'")->required();
  replay->add_option("--out", replay_out, "Output directory (default: the recorded one)");
  replay->add_option("--threads", replay_threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : robsurf::exit_code(robsurf::ErrorKind::configuration);
  }

  try {
    if (*run) {
      cfg.topology_path = topology;
      cfg.output_dir = out_dir;
      if (run->count("--configs") > 0) cfg.config_count = configs;
      const auto result = robsurf::run(cfg, &std::cerr);
      report(result, cfg.output_dir);
    } else if (*characterize) {
      const auto g = robsurf::load_edge_list(char_topology);
      robsurf::print_characterization(std::cout, std::filesystem::path(char_topology).stem(),
                                      robsurf::characterize(g));
    } else if (*replay) {
      std::optional<std::filesystem::path> dir;
      if (!replay_out.empty()) dir = replay_out;
      const auto result = robsurf::replay(manifest, dir, replay_threads, &std::cerr);
      report(result, dir ? *dir : std::filesystem::path(
                                      nlohmann::json::parse(robsurf::read_file_bytes(manifest))
                                          .at("output_dir")
                                          .get<std::string>()));
    }
  } catch (const robsurf::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
