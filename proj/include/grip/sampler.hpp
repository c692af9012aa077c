// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "grip/graph.hpp"

namespace grip {

struct SubgraphSampleConfig {
  int hops = 3;
  int max_neighbors_per_node = 3;
  int max_nodes = 10;
  Direction direction = Direction::Both;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const SubgraphSampleConfig& config);
SubgraphSampleConfig subgraph_config_from_json(const nlohmann::json& j, SubgraphSampleConfig defaults = {});

/// A rooted sample. `nodes` starts with the root, in the order nodes were
/// added; `edges` are the edges traversed to reach each non-root node.
struct Subgraph {
  std::size_t root = 0;
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> edges;
};

/// Uniform sample of min(k, n) node indices without replacement, in random order.
std::vector<std::size_t> sample_nodes(const TextAttributedGraph& graph, std::size_t k, std::uint64_t seed);
std::vector<std::size_t> sample_edges(const TextAttributedGraph& graph, std::size_t k, std::uint64_t seed);

/// Breadth-first expansion from `root`: each hop visits the nodes added by
/// the previous hop and adds up to max_neighbors_per_node of their not yet
/// included neighbours, stopping as soon as max_nodes is reached.
Subgraph sample_subgraph(const TextAttributedGraph& graph, std::size_t root, const SubgraphSampleConfig& config);
/// Throws UnknownNode.
Subgraph sample_subgraph(const TextAttributedGraph& graph, std::string_view root_id, const SubgraphSampleConfig& config);

/// Edges with both endpoints in `nodes`, in edge order.
std::vector<std::size_t> induced_edges(const TextAttributedGraph& graph, std::span<const std::size_t> nodes);

/// Members of `nodes` not touched by any of `edges`.
std::vector<std::size_t> isolated_nodes(const TextAttributedGraph& graph, std::span<const std::size_t> nodes,
                                        std::span<const std::size_t> edges);

}  // namespace grip
