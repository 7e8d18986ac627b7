#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "robsurf/error.hpp"

namespace robsurf {

using NodeIndex = std::uint32_t;

// Unordered node pair stored with first < second.
struct Link {
  NodeIndex first = 0;
  NodeIndex second = 0;

  Link() = default;
  Link(NodeIndex a, NodeIndex b) : first(std::min(a, b)), second(std::max(a, b)) {}

  auto operator<=>(const Link&) const = default;
};

// Distance value for nodes that cannot be reached from the BFS source.
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Undirected simple graph over dense indices 0..node_count-1. Immutable
// after construction; every mutation returns a new graph. Links are kept in
// sorted order so that iteration (and everything downstream) is
// deterministic.
class Graph {
 public:
  Graph() = default;

  // Throws InputError on self-loops, duplicate links or out-of-range
  // endpoints.
  Graph(std::size_t node_count, std::vector<Link> links,
        std::vector<std::string> labels = {})
      : adjacency_(node_count), links_(std::move(links)), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != node_count)
      throw InputError("label count does not match node count");
    std::sort(links_.begin(), links_.end());
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const Link& l = links_[i];
      if (l.second >= node_count)
        throw InputError("link endpoint " + std::to_string(l.second) + " out of range");
      if (l.first == l.second)
        throw InputError("self-loop at node " + std::to_string(l.first));
      if (i > 0 && links_[i - 1] == l)
        throw InputError("duplicate link " + std::to_string(l.first) + "-" +
                         std::to_string(l.second));
      adjacency_[l.first].push_back(l.second);
      adjacency_[l.second].push_back(l.first);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
  }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t link_count() const noexcept { return links_.size(); }

  std::span<const Link> links() const noexcept { return links_; }
  std::span<const NodeIndex> neighbors(NodeIndex v) const { return adjacency_[v]; }
  std::size_t degree(NodeIndex v) const { return adjacency_[v].size(); }

  bool has_link(NodeIndex a, NodeIndex b) const {
    if (a >= node_count() || b >= node_count()) return false;
    const auto& nbrs = adjacency_[a];
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
  }

  // Position of the link in links(), if present.
  std::optional<std::size_t> link_index(Link l) const {
    auto it = std::lower_bound(links_.begin(), links_.end(), l);
    if (it == links_.end() || *it != l) return std::nullopt;
    return static_cast<std::size_t>(it - links_.begin());
  }

  bool has_labels() const noexcept { return !labels_.empty(); }
  std::span<const std::string> labels() const noexcept { return labels_; }

  // Original identifier of a node, or its index when the graph is unlabeled.
  std::string label(NodeIndex v) const {
    return labels_.empty() ? std::to_string(v) : labels_[v];
  }

 private:
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::vector<Link> links_;
  std::vector<std::string> labels_;
};

struct ComponentPartition {
  std::vector<std::size_t> component_of;  // per node
  std::vector<std::size_t> sizes;         // descending; index = component id

  std::size_t count() const noexcept { return sizes.size(); }
  std::size_t largest() const noexcept { return sizes.empty() ? 0 : sizes.front(); }
};

// Component ids are assigned so that id 0 is the largest component (ties
// broken by smallest member index).
inline ComponentPartition connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> raw(n, kNone);
  std::vector<std::size_t> raw_sizes;
  std::vector<NodeIndex> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (raw[s] != kNone) continue;
    const std::size_t id = raw_sizes.size();
    raw_sizes.push_back(0);
    raw[s] = id;
    stack.push_back(static_cast<NodeIndex>(s));
    while (!stack.empty()) {
      const NodeIndex v = stack.back();
      stack.pop_back();
      ++raw_sizes[id];
      for (NodeIndex w : g.neighbors(v)) {
        if (raw[w] == kNone) {
          raw[w] = id;
          stack.push_back(w);
        }
      }
    }
  }

  std::vector<std::size_t> order(raw_sizes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return raw_sizes[a] > raw_sizes[b];
  });
  std::vector<std::size_t> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  ComponentPartition out;
  out.component_of.resize(n);
  out.sizes.resize(order.size());
  for (std::size_t v = 0; v < n; ++v) out.component_of[v] = rank[raw[v]];
  for (std::size_t i = 0; i < order.size(); ++i) out.sizes[i] = raw_sizes[order[i]];
  return out;
}

inline std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeIndex source) {
  if (source >= g.node_count())
    throw InputError("bfs source " + std::to_string(source) + " out of range");
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::queue<NodeIndex> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeIndex v = frontier.front();
    frontier.pop();
    for (NodeIndex w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

// Nodes are re-indexed densely in increasing order of their old index.
// Labels follow their nodes.
inline Graph induced_subgraph(const Graph& g, std::span<const NodeIndex> nodes) {
  constexpr NodeIndex kDropped = std::numeric_limits<NodeIndex>::max();
  std::vector<NodeIndex> remap(g.node_count(), kDropped);
  for (NodeIndex v : nodes) {
    if (v >= g.node_count())
      throw InputError("induced_subgraph: node " + std::to_string(v) + " out of range");
    remap[v] = 0;
  }
  std::vector<std::string> labels;
  NodeIndex next = 0;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (remap[v] == kDropped) continue;
    remap[v] = next++;
    if (g.has_labels()) labels.push_back(g.labels()[v]);
  }
  std::vector<Link> links;
  for (const Link& l : g.links()) {
    if (remap[l.first] != kDropped && remap[l.second] != kDropped)
      links.emplace_back(remap[l.first], remap[l.second]);
  }
  return Graph(next, std::move(links), std::move(labels));
}

inline Graph remove_nodes(const Graph& g, std::span<const NodeIndex> victims) {
  std::vector<bool> dead(g.node_count(), false);
  for (NodeIndex v : victims) {
    if (v >= g.node_count())
      throw InputError("remove_nodes: node " + std::to_string(v) + " out of range");
    dead[v] = true;
  }
  std::vector<NodeIndex> keep;
  keep.reserve(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (!dead[v]) keep.push_back(static_cast<NodeIndex>(v));
  return induced_subgraph(g, keep);
}

inline Graph remove_links(const Graph& g, std::span<const Link> victims) {
  std::vector<bool> dead(g.link_count(), false);
  for (const Link& l : victims) {
    const auto idx = g.link_index(l);
    if (!idx)
      throw InputError("remove_links: link " + std::to_string(l.first) + "-" +
                       std::to_string(l.second) + " not present");
    dead[*idx] = true;
  }
  std::vector<Link> kept;
  kept.reserve(g.link_count());
  const auto links = g.links();
  for (std::size_t i = 0; i < links.size(); ++i)
    if (!dead[i]) kept.push_back(links[i]);
  return Graph(g.node_count(), std::move(kept),
               std::vector<std::string>(g.labels().begin(), g.labels().end()));
}

// Nodes of the largest connected component, ascending.
inline std::vector<NodeIndex> largest_component_nodes(const Graph& g,
                                                      const ComponentPartition& parts) {
  std::vector<NodeIndex> nodes;
  if (parts.count() == 0) return nodes;
  nodes.reserve(parts.largest());
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (parts.component_of[v] == 0) nodes.push_back(static_cast<NodeIndex>(v));
  return nodes;
}

inline Graph largest_component(const Graph& g) {
  const auto parts = connected_components(g);
  const auto nodes = largest_component_nodes(g, parts);
  return induced_subgraph(g, nodes);
}

}  // namespace robsurf
