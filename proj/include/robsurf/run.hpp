#pragma once

// End-to-end orchestration: load a topology, run one failure scenario,
// build the robustness surface and write every output file.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "robsurf/error.hpp"
#include "robsurf/failure.hpp"
#include "robsurf/io.hpp"
#include "robsurf/metrics.hpp"
#include "robsurf/surface.hpp"
#include "robsurf/version.hpp"

namespace robsurf {

inline constexpr std::uint64_t kDefaultMasterSeed = 20140101;
inline constexpr int kDefaultMaxPercentage = 70;
inline constexpr std::size_t kDefaultRandomConfigs = 500;
inline constexpr std::size_t kDefaultTargetedConfigs = 100;
inline constexpr double kDefaultAlpha = 0.9;

struct RunConfig {
  std::filesystem::path topology_path;
  std::string scenario = "node-random";
  int p_max = kDefaultMaxPercentage;
  std::optional<std::size_t> config_count;  // default depends on the strategy
  std::uint64_t master_seed = kDefaultMasterSeed;
  double alpha = kDefaultAlpha;
  std::filesystem::path output_dir = ".";
  bool emit_heatmap = false;
  unsigned threads = 0;
  // Explicit per-configuration seeds (manifest replay); overrides master_seed
  // derivation when non-empty.
  std::vector<std::uint64_t> seeds;

  std::size_t resolved_config_count() const {
    if (!seeds.empty()) return seeds.size();
    if (config_count) return *config_count;
    return parse_scenario(scenario).targeted() ? kDefaultTargetedConfigs : kDefaultRandomConfigs;
  }

  void validate() const {
    parse_scenario(scenario);
    if (p_max < 1 || p_max > 100)
      throw ConfigurationError("pmax must lie in [1,100], got " + std::to_string(p_max));
    if (resolved_config_count() < 2)
      throw ConfigurationError("at least 2 failure configurations are required");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw ConfigurationError("alpha must lie in (0,1]");
  }

  RunPlan plan() const {
    if (seeds.empty())
      return RunPlan::from_master_seed(p_max, resolved_config_count(), master_seed);
    RunPlan p = RunPlan::from_master_seed(p_max, 1, master_seed);
    p.seeds = seeds;
    p.validate();
    return p;
  }
};

struct RunResult {
  RobustnessSurface surface;
  SurfaceSummary summary;
  std::vector<std::string> written;  // file names inside output_dir
};

inline std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << x;
  return os.str();
}

inline nlohmann::json make_manifest(const RunConfig& cfg, const RunPlan& plan,
                                    const Graph& g, std::uint64_t topology_hash) {
  nlohmann::json j;
  j["tool"] = "robsurf";
  j["version"] = std::string(kVersion);
  j["topology"] = {{"path", cfg.topology_path.string()},
                   {"fnv1a64", hex64(topology_hash)},
                   {"nodes", g.node_count()},
                   {"links", g.link_count()}};
  j["scenario"] = cfg.scenario;
  j["p_max"] = cfg.p_max;
  j["percentages"] = plan.percentages;
  j["configs"] = plan.config_count();
  j["master_seed"] = cfg.master_seed;
  j["seed_mix"] = std::string(kSeedMixDescription);
  j["seeds"] = plan.seeds;
  j["alpha"] = cfg.alpha;
  j["heatmap"] = cfg.emit_heatmap;
  j["output_dir"] = cfg.output_dir.string();
  return j;
}

inline nlohmann::json surface_metadata(const RobustnessSurface& s, const RunPlan& plan,
                                       std::uint64_t master_seed,
                                       std::span<const std::string> names) {
  nlohmann::json j;
  j["scenario"] = std::string(scenario_name(s.scenario));
  j["percentages"] = s.percentages;
  j["configs"] = s.omega.cols();
  j["master_seed"] = master_seed;
  j["seeds"] = plan.seeds;
  j["metric_names"] = std::vector<std::string>(names.begin(), names.end());
  j["v_hat"] = s.pca.normalized;
  j["t0"] = s.pca.intact;
  j["alpha"] = s.pca.alpha;
  j["l_selected"] = s.pca.selected_l;
  j["l_used"] = s.pca.used_l;
  j["r_star_init"] = s.r_star_init;
  j["color_scale"] = {{"min", 0.0}, {"max", s.scale_max}, {"ramp", "linear blue->red"}};
  j["negative_values"] = {{"present", s.negative_count > 0}, {"count", s.negative_count}};
  j["omega_sorted"] = "each row of omega.csv is sorted in decreasing order";
  return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, text);
}

// Runs the configured scenario and writes omega.csv, omega_unsorted.csv,
// summary.csv, pca.json, surface.json, manifest.json and (optionally)
// heatmap.ppm into cfg.output_dir. Warnings go to `log`.
inline RunResult run(const RunConfig& cfg, std::ostream* log = nullptr) {
  cfg.validate();
  const std::string bytes = read_file_bytes(cfg.topology_path);
  std::istringstream in(bytes);
  const Graph g = parse_edge_list(in);
  const std::uint64_t topology_hash = fnv1a64(bytes);

  const FailureScenario scenario = parse_scenario(cfg.scenario);
  const RunPlan plan = cfg.plan();
  const ScenarioRun scenario_run = run_scenario(g, scenario, plan, {cfg.threads});

  RunResult result;
  result.surface = build_surface(scenario_run, cfg.alpha);
  result.summary = summarize(result.surface);
  const auto& names = scenario_run.intact.names;

  if (log) {
    for (const auto& w : result.surface.pca.warnings) *log << "WARNING: " << w << '\n';
    if (result.surface.negative_count > 0)
      *log << "WARNING: surface contains " << result.surface.negative_count
           << " negative R* values (reported as computed)\n";
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.output_dir.string() + "'");

  auto emit = [&](const std::string& name, const std::string& text) {
    write_text(cfg.output_dir / name, text);
    result.written.push_back(name);
  };

  {
    std::ostringstream os;
    write_surface_csv(os, result.surface.omega, result.surface.percentages);
    emit("omega.csv", os.str());
  }
  {
    std::ostringstream os;
    write_surface_csv(os, result.surface.omega_unsorted, result.surface.percentages);
    emit("omega_unsorted.csv", os.str());
  }
  {
    std::ostringstream os;
    write_summary_csv(os, result.summary, result.surface.percentages);
    emit("summary.csv", os.str());
  }
  auto pca = pca_to_json(result.surface.pca, names);
  pca["area_under_mean"] = result.summary.area_under_mean;
  emit("pca.json", pca.dump(2) + "\n");
  emit("surface.json",
       surface_metadata(result.surface, plan, cfg.master_seed, names).dump(2) + "\n");
  emit("manifest.json", make_manifest(cfg, plan, g, topology_hash).dump(2) + "\n");
  if (cfg.emit_heatmap) {
    emit_heatmap(result.surface, cfg.output_dir / "heatmap.ppm");
    result.written.push_back("heatmap.ppm");
  }
  return result;
}

// Rebuilds a RunConfig from manifest.json. The topology is re-read from the
// recorded path and must hash to the recorded value.
inline RunConfig config_from_manifest(const nlohmann::json& j) {
  try {
    RunConfig cfg;
    cfg.topology_path = j.at("topology").at("path").get<std::string>();
    cfg.scenario = j.at("scenario").get<std::string>();
    cfg.p_max = j.at("p_max").get<int>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.config_count = cfg.seeds.size();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.emit_heatmap = j.at("heatmap").get<bool>();
    cfg.output_dir = j.at("output_dir").get<std::string>();
    const auto percentages = j.at("percentages").get<std::vector<int>>();
    if (percentages != cfg.plan().percentages)
      throw ParseError("manifest percentages do not match p_max", 0);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0);
  }
}

inline RunResult replay(const std::filesystem::path& manifest_path,
                        const std::optional<std::filesystem::path>& output_dir = std::nullopt,
                        std::optional<unsigned> threads = std::nullopt,
                        std::ostream* log = nullptr) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_bytes(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0);
  }
  RunConfig cfg = config_from_manifest(j);
  if (output_dir) cfg.output_dir = *output_dir;
  if (threads) cfg.threads = *threads;

  const std::string expected = j.at("topology").at("fnv1a64").get<std::string>();
  const std::string actual = hex64(fnv1a64(read_file_bytes(cfg.topology_path)));
  if (expected != actual)
    throw InputError("topology '" + cfg.topology_path.string() + "' changed since the run (hash " +
                     actual + ", manifest " + expected + ")");
  return run(cfg, log);
}

inline void print_characterization(std::ostream& out, const std::string& name,
                                   const CharacterizationStats& s) {
  auto fixed = [](double x, int digits) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << x;
    return os.str();
  };
  out << "topology\tN\tL\t<k> +- StDev\tk_max\t<l> +- StDev\tr\n";
  out << name << '\t' << s.node_count << '\t' << s.link_count << '\t'
      << fixed(s.degree.mean, 2) << " +- " << fixed(s.degree.stddev, 2) << '\t' << s.max_degree
      << '\t' << fixed(s.shortest_path.mean, 2) << " +- " << fixed(s.shortest_path.stddev, 2)
      << '\t' << (s.assortativity ? fixed(*s.assortativity, 3) : std::string("undefined"))
      << '\n';
}

// Exit status per error category; 0 is success, 1 is reserved for
// unexpected failures.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration: return 2;
    case ErrorKind::input: return 3;
    case ErrorKind::parse: return 4;
    case ErrorKind::domain: return 5;
    case ErrorKind::numeric: return 6;
    case ErrorKind::degenerate: return 7;
    case ErrorKind::io: return 8;
  }
  return 1;
}

}  // namespace robsurf
