#pragma once

// Seeded failure configurations and the degraded graphs they produce.
//
// A configuration is a full removal order over the removable elements of
// the intact graph. The graph at failure level p is the intact graph minus
// the first round_half_up(p * total / 100) elements of that order, so the
// levels of one configuration are nested prefixes. Targeted strategies rank
// elements once, on the intact graph; equal scores are ordered by a seeded
// random key.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "robsurf/error.hpp"
#include "robsurf/graph.hpp"
#include "robsurf/linalg.hpp"
#include "robsurf/metrics.hpp"

namespace robsurf {

enum class Strategy { random, degree, node_betweenness, link_betweenness, clustering_coefficient };

struct FailureScenario {
  ElementKind element = ElementKind::node;
  Strategy strategy = Strategy::random;

  bool valid() const noexcept {
    switch (strategy) {
      case Strategy::random: return true;
      case Strategy::link_betweenness: return element == ElementKind::link;
      case Strategy::degree:
      case Strategy::node_betweenness:
      case Strategy::clustering_coefficient: return element == ElementKind::node;
    }
    return false;
  }

  bool targeted() const noexcept { return strategy != Strategy::random; }

  bool operator==(const FailureScenario&) const = default;
};

struct ScenarioName {
  std::string_view name;
  FailureScenario scenario;
};

inline constexpr std::array<ScenarioName, 6> kScenarioNames{{
    {"node-random", {ElementKind::node, Strategy::random}},
    {"node-degree", {ElementKind::node, Strategy::degree}},
    {"node-bc", {ElementKind::node, Strategy::node_betweenness}},
    {"node-cc", {ElementKind::node, Strategy::clustering_coefficient}},
    {"link-random", {ElementKind::link, Strategy::random}},
    {"link-bc", {ElementKind::link, Strategy::link_betweenness}},
}};

inline std::string_view scenario_name(const FailureScenario& s) {
  for (const auto& entry : kScenarioNames)
    if (entry.scenario == s) return entry.name;
  throw ConfigurationError("scenario has no name (incompatible element kind and strategy)");
}

inline FailureScenario parse_scenario(std::string_view name) {
  for (const auto& entry : kScenarioNames)
    if (entry.name == name) return entry.scenario;
  throw ConfigurationError("unknown scenario '" + std::string(name) +
                           "' (expected node-random, node-degree, node-bc, node-cc, "
                           "link-random or link-bc)");
}

// ---------------------------------------------------------------------------
// Seeds

// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::string_view kSeedMixDescription =
    "seed_i = splitmix64(master_seed + i * 0x9e3779b97f4a7c15), i = 0..m-1";

inline std::uint64_t configuration_seed(std::uint64_t master_seed, std::size_t index) {
  return splitmix64(master_seed + static_cast<std::uint64_t>(index) * 0x9e3779b97f4a7c15ULL);
}

// Unbiased draw in [0, bound) from a 64-bit engine; unlike
// std::uniform_int_distribution the result is identical across standard
// libraries.
inline std::uint64_t bounded_draw(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % bound;
}

// ---------------------------------------------------------------------------
// Run plan

struct RunPlan {
  std::vector<int> percentages;
  std::vector<std::uint64_t> seeds;

  std::size_t config_count() const noexcept { return seeds.size(); }

  // P = {1, 2, .., p_max}; m seeds derived from one master seed.
  static RunPlan from_master_seed(int p_max, std::size_t configs, std::uint64_t master_seed) {
    RunPlan plan;
    for (int p = 1; p <= p_max; ++p) plan.percentages.push_back(p);
    for (std::size_t i = 0; i < configs; ++i)
      plan.seeds.push_back(configuration_seed(master_seed, i));
    plan.validate();
    return plan;
  }

  void validate() const {
    if (percentages.empty()) throw ConfigurationError("run plan has no failure percentages");
    if (seeds.empty()) throw ConfigurationError("run plan has no failure configurations");
    for (std::size_t i = 0; i < percentages.size(); ++i) {
      if (percentages[i] < 1 || percentages[i] > 100)
        throw ConfigurationError("failure percentage " + std::to_string(percentages[i]) +
                                 " outside [1,100]");
      if (i > 0 && percentages[i] <= percentages[i - 1])
        throw ConfigurationError("failure percentages must be strictly increasing");
    }
  }
};

// ---------------------------------------------------------------------------
// Configurations

struct FailureConfiguration {
  FailureScenario scenario;
  std::uint64_t seed = 0;
  // Node indices (node scenarios) or positions in Graph::links() (link
  // scenarios) in removal order.
  std::vector<std::uint32_t> order;
};

// Score of every removable element on the intact graph; higher is removed
// first.
inline std::vector<double> targeting_scores(const Graph& g, const FailureScenario& s) {
  switch (s.strategy) {
    case Strategy::degree: {
      std::vector<double> out(g.node_count());
      for (std::size_t v = 0; v < out.size(); ++v)
        out[v] = static_cast<double>(g.degree(static_cast<NodeIndex>(v)));
      return out;
    }
    case Strategy::node_betweenness: return shortest_path_profile(g).node_betweenness;
    case Strategy::link_betweenness: return shortest_path_profile(g).link_betweenness;
    case Strategy::clustering_coefficient: return local_clustering(g);
    case Strategy::random: break;
  }
  return {};
}

// Scores are compared after rounding to 1e-6 so that values equal in exact
// arithmetic (symmetric nodes) tie regardless of summation order.
inline std::int64_t quantize_score(double score) {
  return static_cast<std::int64_t>(std::llround(score * 1e6));
}

// Builds the removal order for one seed. `scores` holds the targeting score
// of every element for targeted strategies and is ignored for random ones.
inline FailureConfiguration configuration_from_scores(const FailureScenario& s,
                                                      std::size_t total,
                                                      std::span<const double> scores,
                                                      std::uint64_t seed) {
  FailureConfiguration cfg{s, seed, std::vector<std::uint32_t>(total)};
  std::iota(cfg.order.begin(), cfg.order.end(), 0u);
  std::mt19937_64 engine(seed);

  if (s.strategy == Strategy::random) {
    for (std::size_t i = total - 1; i > 0; --i)
      std::swap(cfg.order[i], cfg.order[bounded_draw(engine, i + 1)]);
    return cfg;
  }

  if (scores.size() != total) throw InputError("targeting score count mismatch");
  std::vector<std::int64_t> rank(total);
  std::vector<std::uint64_t> tie_key(total);
  for (std::size_t i = 0; i < total; ++i) {
    rank[i] = quantize_score(scores[i]);
    tie_key[i] = engine();
  }
  std::sort(cfg.order.begin(), cfg.order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (rank[a] != rank[b]) return rank[a] > rank[b];
    if (tie_key[a] != tie_key[b]) return tie_key[a] < tie_key[b];
    return a < b;
  });
  return cfg;
}

inline std::size_t removable_count(const Graph& g, const FailureScenario& s) {
  if (!s.valid())
    throw ConfigurationError("strategy is not applicable to " + std::string(to_string(s.element)) +
                             " failures");
  const std::size_t total = s.element == ElementKind::node ? g.node_count() : g.link_count();
  if (total == 0)
    throw ConfigurationError("graph has no " + std::string(to_string(s.element)) + "s to remove");
  return total;
}

inline FailureConfiguration generate_configuration(const Graph& g, const FailureScenario& s,
                                                   std::uint64_t seed) {
  const std::size_t total = removable_count(g, s);
  return configuration_from_scores(s, total, targeting_scores(g, s), seed);
}

// round_half_up(p * total / 100), at least 1 when total > 0.
inline std::size_t removal_count(std::size_t total, int percentage) {
  if (percentage < 1 || percentage > 100)
    throw InputError("failure percentage " + std::to_string(percentage) + " outside [1,100]");
  const std::size_t count = (static_cast<std::size_t>(percentage) * total + 50) / 100;
  return total == 0 ? 0 : std::max<std::size_t>(1, count);
}

inline Graph degraded_graph(const Graph& g, const FailureConfiguration& cfg, int percentage) {
  const std::size_t k = removal_count(cfg.order.size(), percentage);
  const std::span<const std::uint32_t> victims(cfg.order.data(), k);
  if (cfg.scenario.element == ElementKind::node) {
    std::vector<NodeIndex> nodes(victims.begin(), victims.end());
    return remove_nodes(g, nodes);
  }
  std::vector<Link> links;
  links.reserve(k);
  const auto all = g.links();
  for (std::uint32_t i : victims) {
    if (i >= all.size()) throw InputError("configuration refers to a missing link");
    links.push_back(all[i]);
  }
  return remove_links(g, links);
}

// ---------------------------------------------------------------------------
// Scenario execution

struct ScenarioRun {
  FailureScenario scenario;
  RunPlan plan;
  MetricVector intact;                 // t0
  std::vector<Matrix> matrices;        // A_p, one m x n matrix per percentage
  std::vector<FailureConfiguration> configurations;
};

struct ExecutionOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Evaluates every (configuration, percentage) cell. Randomness is consumed
// only while generating configurations, so the result does not depend on the
// number of worker threads.
inline ScenarioRun run_scenario(const Graph& g, const FailureScenario& scenario,
                                const RunPlan& plan, const ExecutionOptions& exec = {}) {
  plan.validate();
  ScenarioRun run;
  run.scenario = scenario;
  run.plan = plan;
  run.intact = metric_vector(g, scenario.element, g.node_count());

  const std::size_t m = plan.config_count();
  const std::size_t levels = plan.percentages.size();
  const std::size_t n = run.intact.size();

  const std::size_t total = removable_count(g, scenario);
  const auto scores = targeting_scores(g, scenario);
  run.configurations.reserve(m);
  for (std::uint64_t seed : plan.seeds)
    run.configurations.push_back(configuration_from_scores(scenario, total, scores, seed));
  run.matrices.assign(levels, Matrix(m, n));

  const std::size_t cells = m * levels;
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::optional<std::size_t> failed_cell;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= cells) return;
      const std::size_t i = cell / levels;
      const std::size_t p = cell % levels;
      try {
        const Graph degraded = degraded_graph(g, run.configurations[i], plan.percentages[p]);
        const auto t = metric_vector(degraded, scenario.element, g.node_count());
        std::copy(t.values.begin(), t.values.end(), run.matrices[p].row(i).begin());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failed_cell || cell < *failed_cell) {
          failed_cell = cell;
          failure = std::current_exception();
        }
      }
    }
  };

  unsigned threads = exec.threads == 0 ? std::thread::hardware_concurrency() : exec.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return run;
}

}  // namespace robsurf
