// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "grip/util.hpp"

namespace grip {
namespace {

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t k, std::uint64_t seed, const char* what) {
  if (k > population) {
    log_warn("requested " + std::to_string(k) + " " + what + " but only " + std::to_string(population) +
             " exist; sampling all of them");
    k = population;
  }
  std::vector<std::size_t> indices(population);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  Rng rng(seed);
  rng.partial_shuffle(indices, k);
  indices.resize(k);
  return indices;
}

}  // namespace

void SubgraphSampleConfig::validate() const {
  if (hops < 1) throw ConfigError("subgraph hops must be >= 1");
  if (max_neighbors_per_node < 1) throw ConfigError("subgraph max_neighbors_per_node must be >= 1");
  if (max_nodes < 1) throw ConfigError("subgraph max_nodes must be >= 1");
}

nlohmann::json to_json(const SubgraphSampleConfig& c) {
  return {{"hops", c.hops},
          {"max_neighbors_per_node", c.max_neighbors_per_node},
          {"max_nodes", c.max_nodes},
          {"direction", to_string(c.direction)},
          {"seed", c.seed}};
}

SubgraphSampleConfig subgraph_config_from_json(const nlohmann::json& j, SubgraphSampleConfig c) {
  c.hops = j.value("hops", c.hops);
  c.max_neighbors_per_node = j.value("max_neighbors_per_node", c.max_neighbors_per_node);
  c.max_nodes = j.value("max_nodes", c.max_nodes);
  if (j.contains("direction")) c.direction = parse_direction(j["direction"].get<std::string>());
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

std::vector<std::size_t> sample_nodes(const TextAttributedGraph& graph, std::size_t k, std::uint64_t seed) {
  return sample_indices(graph.node_count(), k, seed, "nodes");
}

std::vector<std::size_t> sample_edges(const TextAttributedGraph& graph, std::size_t k, std::uint64_t seed) {
  return sample_indices(graph.edge_count(), k, seed, "edges");
}

Subgraph sample_subgraph(const TextAttributedGraph& graph, std::size_t root, const SubgraphSampleConfig& config) {
  config.validate();
  if (root >= graph.node_count()) throw UnknownNode("#" + std::to_string(root));

  const auto cap = static_cast<std::size_t>(config.max_nodes);
  Subgraph sub;
  sub.root = root;
  sub.nodes.push_back(root);
  std::unordered_set<std::size_t> included{root};
  Rng rng(config.seed);

  std::vector<std::size_t> frontier{root};
  for (int hop = 0; hop < config.hops && !frontier.empty(); ++hop) {
    std::vector<std::size_t> next;
    for (const auto u : frontier) {
      if (sub.nodes.size() >= cap) return sub;
      // Distinct candidates, each with the first edge that reaches it.
      std::vector<Neighbor> candidates;
      std::unordered_set<std::size_t> seen;
      for (const auto& nb : graph.neighbors(u, config.direction)) {
        if (!included.contains(nb.node) && seen.insert(nb.node).second) candidates.push_back(nb);
      }
      const auto take = std::min({candidates.size(), static_cast<std::size_t>(config.max_neighbors_per_node),
                                  cap - sub.nodes.size()});
      rng.partial_shuffle(candidates, take);
      for (std::size_t i = 0; i < take; ++i) {
        included.insert(candidates[i].node);
        sub.nodes.push_back(candidates[i].node);
        sub.edges.push_back(candidates[i].edge);
        next.push_back(candidates[i].node);
      }
    }
    frontier = std::move(next);
  }
  return sub;
}

Subgraph sample_subgraph(const TextAttributedGraph& graph, std::string_view root_id, const SubgraphSampleConfig& config) {
  return sample_subgraph(graph, graph.index_of(root_id), config);
}

std::vector<std::size_t> induced_edges(const TextAttributedGraph& graph, std::span<const std::size_t> nodes) {
  const std::unordered_set<std::size_t> members(nodes.begin(), nodes.end());
  std::vector<std::size_t> edges;
  for (const auto v : members) {
    for (const auto e : graph.out_edges(v)) {
      if (members.contains(graph.tgt_index(e))) edges.push_back(e);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<std::size_t> isolated_nodes(const TextAttributedGraph& graph, std::span<const std::size_t> nodes,
                                        std::span<const std::size_t> edges) {
  std::unordered_set<std::size_t> touched;
  for (const auto e : edges) {
    touched.insert(graph.src_index(e));
    touched.insert(graph.tgt_index(e));
  }
  std::vector<std::size_t> out;
  for (const auto v : nodes) {
    if (!touched.contains(v)) out.push_back(v);
  }
  return out;
}

}  // namespace grip
