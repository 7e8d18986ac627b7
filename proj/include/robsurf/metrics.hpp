#pragma once

// Robustness metrics evaluated on a (possibly degraded) graph, plus the
// descriptive statistics used to characterize a topology.
//
// Conventions:
//  * Betweenness values are raw counts over unordered source/target pairs.
//    Node betweenness excludes the endpoints; link betweenness counts every
//    link on a shortest path, including the ones touching the endpoints.
//  * Shortest-path length and diameter are taken over the largest connected
//    component, as is algebraic connectivity.
//  * lcc_size is normalized by the node count of the intact graph.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robsurf/error.hpp"
#include "robsurf/graph.hpp"
#include "robsurf/spectral.hpp"

namespace robsurf {

enum class ElementKind { node, link };

inline std::string_view to_string(ElementKind kind) {
  return kind == ElementKind::node ? "node" : "link";
}

struct MeanDeviation {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

// ---------------------------------------------------------------------------
// Component-based metrics

inline double lcc_size(const ComponentPartition& parts, std::size_t initial_nodes) {
  if (initial_nodes == 0) throw DomainError("lcc_size: initial node count is zero");
  return static_cast<double>(parts.largest()) / static_cast<double>(initial_nodes);
}

inline double lcc_size(const Graph& g, std::size_t initial_nodes) {
  return lcc_size(connected_components(g), initial_nodes);
}

// (C - 1) / (N - 1): 0 for a connected graph, 1 when every node is isolated.
inline double fragmentation(const ComponentPartition& parts) {
  const std::size_t n = parts.component_of.size();
  if (n < 2) throw DomainError("fragmentation needs at least 2 nodes");
  return static_cast<double>(parts.count() - 1) / static_cast<double>(n - 1);
}

inline double fragmentation(const Graph& g) { return fragmentation(connected_components(g)); }

// Fraction of unordered node pairs that can still reach each other.
inline double two_terminal_reliability(const ComponentPartition& parts) {
  const std::size_t n = parts.component_of.size();
  if (n < 2) throw DomainError("two-terminal reliability needs at least 2 nodes");
  std::uint64_t connected = 0;
  for (std::size_t s : parts.sizes) connected += static_cast<std::uint64_t>(s) * (s - 1);
  return static_cast<double>(connected) /
         (static_cast<double>(n) * static_cast<double>(n - 1));
}

inline double two_terminal_reliability(const Graph& g) {
  return two_terminal_reliability(connected_components(g));
}

// ---------------------------------------------------------------------------
// Degree and clustering

inline MeanDeviation degree_statistics(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DomainError("average degree of an empty graph");
  const double mean = 2.0 * static_cast<double>(g.link_count()) / static_cast<double>(n);
  double sq = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const double d = static_cast<double>(g.degree(static_cast<NodeIndex>(v))) - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / static_cast<double>(n))};
}

inline double avg_degree(const Graph& g) { return degree_statistics(g).mean; }

// Local clustering coefficient of every node; nodes of degree < 2 get 0.
inline std::vector<double> local_clustering(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  std::vector<char> mark(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto nbrs = g.neighbors(static_cast<NodeIndex>(v));
    const std::size_t k = nbrs.size();
    if (k < 2) continue;
    for (NodeIndex u : nbrs) mark[u] = 1;
    std::uint64_t closed = 0;
    for (NodeIndex u : nbrs)
      for (NodeIndex w : g.neighbors(u))
        if (w > u && mark[w]) ++closed;
    for (NodeIndex u : nbrs) mark[u] = 0;
    out[v] = static_cast<double>(closed) / (static_cast<double>(k) * (k - 1) / 2.0);
  }
  return out;
}

inline double avg_clustering(const Graph& g) {
  if (g.node_count() == 0) throw DomainError("average clustering of an empty graph");
  const auto c = local_clustering(g);
  double s = 0.0;
  for (double x : c) s += x;
  return s / static_cast<double>(c.size());
}

// ---------------------------------------------------------------------------
// Shortest-path metrics (one Brandes pass yields all of them)

struct ShortestPathProfile {
  std::vector<double> node_betweenness;  // per node
  std::vector<double> link_betweenness;  // aligned with Graph::links()
  // Unordered pairs inside the largest connected component.
  std::uint64_t lcc_pairs = 0;
  std::uint64_t distance_sum = 0;
  std::uint64_t distance_square_sum = 0;
  std::uint32_t max_distance = 0;
};

inline ShortestPathProfile shortest_path_profile(const Graph& g,
                                                 const ComponentPartition& parts) {
  const std::size_t n = g.node_count();
  ShortestPathProfile out;
  out.node_betweenness.assign(n, 0.0);
  out.link_betweenness.assign(g.link_count(), 0.0);

  // flat adjacency with the link index of every arc
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offset[v + 1] = offset[v] + g.degree(static_cast<NodeIndex>(v));
  std::vector<NodeIndex> target(offset[n]);
  std::vector<std::size_t> arc_link(offset[n]);
  {
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    const auto links = g.links();
    for (std::size_t k = 0; k < links.size(); ++k) {
      const auto [a, b] = links[k];
      target[fill[a]] = b;
      arc_link[fill[a]++] = k;
      target[fill[b]] = a;
      arc_link[fill[b]++] = k;
    }
  }

  std::vector<std::uint32_t> dist(n, kUnreachable);
  std::vector<double> sigma(n, 0.0);
  std::vector<double> delta(n, 0.0);
  std::vector<NodeIndex> order;
  order.reserve(n);

  for (std::size_t s = 0; s < n; ++s) {
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(static_cast<NodeIndex>(s));
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeIndex v = order[head];
      const std::uint32_t next = dist[v] + 1;
      for (std::size_t a = offset[v]; a < offset[v + 1]; ++a) {
        const NodeIndex w = target[a];
        if (dist[w] == kUnreachable) {
          dist[w] = next;
          order.push_back(w);
        }
        if (dist[w] == next) sigma[w] += sigma[v];
      }
    }

    if (parts.component_of[s] == 0) {
      for (NodeIndex t : order) {
        const std::uint64_t d = dist[t];
        out.distance_sum += d;
        out.distance_square_sum += d * d;
        out.max_distance = std::max(out.max_distance, dist[t]);
      }
    }

    // reverse BFS order: every successor is finalized before its parents
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeIndex w = *it;
      if (dist[w] == 0) continue;
      const std::uint32_t parent = dist[w] - 1;
      const double share = (1.0 + delta[w]) / sigma[w];
      for (std::size_t a = offset[w]; a < offset[w + 1]; ++a) {
        const NodeIndex v = target[a];
        if (dist[v] == parent) {
          const double credit = sigma[v] * share;
          out.link_betweenness[arc_link[a]] += credit;
          delta[v] += credit;
        }
      }
      out.node_betweenness[w] += delta[w];
    }

    for (NodeIndex v : order) {
      dist[v] = kUnreachable;
      sigma[v] = 0.0;
      delta[v] = 0.0;
    }
  }

  // every unordered pair was visited from both ends
  for (double& x : out.node_betweenness) x /= 2.0;
  for (double& x : out.link_betweenness) x /= 2.0;
  out.distance_sum /= 2;
  out.distance_square_sum /= 2;
  const std::uint64_t lcc = parts.largest();
  out.lcc_pairs = lcc * (lcc - (lcc > 0 ? 1 : 0)) / 2;
  return out;
}

inline ShortestPathProfile shortest_path_profile(const Graph& g) {
  return shortest_path_profile(g, connected_components(g));
}

inline MeanDeviation shortest_path_statistics(const ShortestPathProfile& p) {
  if (p.lcc_pairs == 0)
    throw DomainError("shortest-path length needs a component with at least 2 nodes");
  const double pairs = static_cast<double>(p.lcc_pairs);
  const double mean = static_cast<double>(p.distance_sum) / pairs;
  const double var = static_cast<double>(p.distance_square_sum) / pairs - mean * mean;
  return {mean, std::sqrt(std::max(0.0, var))};
}

inline MeanDeviation shortest_path_statistics(const Graph& g) {
  return shortest_path_statistics(shortest_path_profile(g));
}

inline double avg_shortest_path(const Graph& g) { return shortest_path_statistics(g).mean; }

inline std::uint32_t diameter(const ShortestPathProfile& p) {
  if (p.lcc_pairs == 0) throw DomainError("diameter needs a component with at least 2 nodes");
  return p.max_distance;
}

inline std::uint32_t diameter(const Graph& g) { return diameter(shortest_path_profile(g)); }

inline std::vector<double> node_betweenness(const Graph& g) {
  if (g.node_count() == 0) throw DomainError("node betweenness of an empty graph");
  return shortest_path_profile(g).node_betweenness;
}

inline std::vector<double> link_betweenness(const Graph& g) {
  if (g.link_count() == 0) throw DomainError("link betweenness of a graph without links");
  return shortest_path_profile(g).link_betweenness;
}

namespace detail {
inline double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}
}  // namespace detail

inline double avg_node_betweenness(const Graph& g) {
  return detail::mean_of(node_betweenness(g));
}

inline double avg_link_betweenness(const Graph& g) {
  return detail::mean_of(link_betweenness(g));
}

// lambda2 of the largest component's Laplacian.
inline double algebraic_connectivity_metric(const Graph& g) {
  const auto parts = connected_components(g);
  if (parts.largest() < 2)
    throw DomainError("algebraic connectivity needs a component with at least 2 nodes");
  return laplacian_second_eigenvalue(induced_subgraph(g, largest_component_nodes(g, parts)));
}

// Degree correlation over link endpoints, each link taken in both
// orientations. Throws DomainError when undefined (fewer than 2 links or no
// degree variance at the endpoints).
inline double assortativity(const Graph& g) {
  if (g.link_count() < 2) throw DomainError("assortativity undefined: fewer than 2 links");
  double product = 0.0;
  double half_sum = 0.0;
  double half_square = 0.0;
  for (const Link& l : g.links()) {
    const double j = static_cast<double>(g.degree(l.first));
    const double k = static_cast<double>(g.degree(l.second));
    product += j * k;
    half_sum += 0.5 * (j + k);
    half_square += 0.5 * (j * j + k * k);
  }
  const double m = static_cast<double>(g.link_count());
  const double mean = half_sum / m;
  const double denominator = half_square / m - mean * mean;
  if (denominator <= 1e-12 * std::max(1.0, half_square / m))
    throw DomainError("assortativity undefined: endpoint degrees have zero variance");
  return std::clamp((product / m - mean * mean) / denominator, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Metric vector

struct MetricVector {
  ElementKind kind = ElementKind::node;
  std::vector<double> values;
  std::vector<std::string> names;

  std::size_t size() const noexcept { return values.size(); }
};

inline const std::vector<std::string>& metric_names(ElementKind kind) {
  static const std::vector<std::string> link_names = {
      "lcc_size",           "fragmentation",        "avg_degree",
      "two_terminal_reliability", "avg_clustering", "avg_shortest_path",
      "diameter",           "avg_node_betweenness", "avg_link_betweenness",
      "algebraic_connectivity"};
  static const std::vector<std::string> node_names = {
      "lcc_size",           "avg_degree",           "two_terminal_reliability",
      "avg_clustering",     "avg_shortest_path",    "diameter",
      "avg_node_betweenness", "avg_link_betweenness", "algebraic_connectivity"};
  return kind == ElementKind::link ? link_names : node_names;
}

// Assembles the fixed-order metric vector. A metric whose precondition fails
// on the given graph (too few nodes, no links, trivial LCC) is recorded as 0.
inline MetricVector metric_vector(const Graph& g, ElementKind kind, std::size_t initial_nodes) {
  if (initial_nodes == 0) throw DomainError("metric_vector: initial node count is zero");
  if (g.node_count() > initial_nodes)
    throw InputError("metric_vector: graph has more nodes than the intact network");

  const std::size_t n = g.node_count();
  const auto parts = connected_components(g);
  const bool has_nodes = n > 0;
  const bool has_pairs = n > 1;
  const bool path_metrics = parts.largest() >= 2;

  ShortestPathProfile profile;
  if (has_nodes) profile = shortest_path_profile(g, parts);

  MetricVector out;
  out.kind = kind;
  out.names = metric_names(kind);
  auto& v = out.values;
  v.reserve(out.names.size());

  v.push_back(lcc_size(parts, initial_nodes));
  if (kind == ElementKind::link) v.push_back(has_pairs ? fragmentation(parts) : 0.0);
  v.push_back(has_nodes ? avg_degree(g) : 0.0);
  v.push_back(has_pairs ? two_terminal_reliability(parts) : 0.0);
  v.push_back(has_nodes ? avg_clustering(g) : 0.0);
  v.push_back(path_metrics ? shortest_path_statistics(profile).mean : 0.0);
  v.push_back(path_metrics ? static_cast<double>(diameter(profile)) : 0.0);
  v.push_back(has_nodes ? detail::mean_of(profile.node_betweenness) : 0.0);
  v.push_back(g.link_count() > 0 ? detail::mean_of(profile.link_betweenness) : 0.0);
  v.push_back(path_metrics ? laplacian_second_eigenvalue(
                                 induced_subgraph(g, largest_component_nodes(g, parts)))
                           : 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Topology characterization

struct CharacterizationStats {
  std::size_t node_count = 0;
  std::size_t link_count = 0;
  MeanDeviation degree;
  std::size_t max_degree = 0;
  MeanDeviation shortest_path;             // over the largest component
  std::optional<double> assortativity;     // nullopt when undefined
};

inline CharacterizationStats characterize(const Graph& g) {
  CharacterizationStats s;
  s.node_count = g.node_count();
  s.link_count = g.link_count();
  s.degree = degree_statistics(g);
  for (std::size_t v = 0; v < g.node_count(); ++v)
    s.max_degree = std::max(s.max_degree, g.degree(static_cast<NodeIndex>(v)));
  s.shortest_path = shortest_path_statistics(g);
  try {
    s.assortativity = assortativity(g);
  } catch (const DomainError&) {
    s.assortativity.reset();
  }
  return s;
}

}  // namespace robsurf
