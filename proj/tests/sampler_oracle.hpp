// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <queue>
#include <set>
#include <string>

#include "grip/sampler.hpp"

namespace grip::testing {

/// Independent check of one sample: size cap, uniqueness, a tree of real
/// edges hanging off the root, and hop depth measured on that tree.
/// Returns an empty string when everything holds.
inline std::string check_subgraph(const TextAttributedGraph& g, const Subgraph& s, const SubgraphSampleConfig& c) {
  if (s.nodes.empty() || s.nodes.front() != s.root) return "root is not first";
  if (s.nodes.size() > static_cast<std::size_t>(c.max_nodes)) return "too many nodes";
  const std::set<std::size_t> members(s.nodes.begin(), s.nodes.end());
  if (members.size() != s.nodes.size()) return "duplicate node";
  if (s.edges.size() + 1 != s.nodes.size()) return "not a tree";

  std::map<std::size_t, std::vector<std::size_t>> adj;
  for (auto e : s.edges) {
    const auto a = g.src_index(e);
    const auto b = g.tgt_index(e);
    if (!members.count(a) || !members.count(b)) return "edge leaves the sample";
    if (c.direction != Direction::In) adj[a].push_back(b);
    if (c.direction != Direction::Out) adj[b].push_back(a);
  }
  std::map<std::size_t, int> depth{{s.root, 0}};
  std::queue<std::size_t> q;
  q.push(s.root);
  while (!q.empty()) {
    const auto v = q.front();
    q.pop();
    for (auto u : adj[v]) {
      if (depth.emplace(u, depth[v] + 1).second) q.push(u);
    }
  }
  if (depth.size() != members.size()) return "node not reachable from root";
  for (const auto& [v, d] : depth) {
    if (d > c.hops) return "node deeper than hop limit";
  }
  return {};
}

}  // namespace grip::testing
