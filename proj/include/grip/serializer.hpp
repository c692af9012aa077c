// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "grip/graph.hpp"
#include "grip/token_counter.hpp"

namespace grip {

enum class SerializationMethod { EdgeWithIndex, EdgeList };

SerializationMethod parse_serialization_method(std::string_view name);
std::string_view to_string(SerializationMethod method);

/// Size statistics of a graph and of one serialization of it.
struct TokenStats {
  std::size_t n = 0;
  std::size_t m = 0;
  /// Mean out-degree m / n (0 for the empty graph).
  double d = 0.0;
  /// Mean node text / edge text length under the counter.
  double t_n = 0.0;
  double t_e = 0.0;
  /// Tokens of the whole produced text, headers included.
  std::size_t exact_total = 0;
  /// Tokens of the node-list and edge-list bodies, headers excluded.
  /// Edge-list serializations have no node section.
  std::size_t node_section = 0;
  std::size_t edge_section = 0;
  /// Longest single node or edge text under the counter.
  std::size_t max_text_tokens = 0;

  std::size_t body_total() const noexcept { return node_section + edge_section; }
};

nlohmann::json to_json(const TokenStats& stats);

struct Serialization {
  std::string text;
  TokenStats stats;
};

/// "Node list:" of `ID. text;` items (IDs are 1-based node positions), then
/// "Edge list:" of `SRC_ID edge-text TGT_ID;` items.
std::string render_edge_with_index(const TextAttributedGraph& graph);
Serialization serialize_edge_with_index(const TextAttributedGraph& graph, const TokenCounter& counter);

/// `src-text edge-text tgt-text` clauses joined by "; " and closed with ".".
std::string render_edge_list(const TextAttributedGraph& graph);
Serialization serialize_edge_list(const TextAttributedGraph& graph, const TokenCounter& counter);

Serialization serialize(const TextAttributedGraph& graph, SerializationMethod method, const TokenCounter& counter);

/// Edge-list rendering of a subset of edges, followed by the texts of
/// `isolated_nodes` as extra clauses. Used for prompt contexts.
std::string render_snippets(const TextAttributedGraph& graph, std::span<const std::size_t> edges,
                            std::span<const std::size_t> isolated_nodes = {});

/// Closed-form token cost ignoring IDs and punctuation:
///   edge-with-index: n*t_n + n*d*t_e
///   edge-list:       2*n*d*t_n + n*d*t_e
double theoretical_token_cost(double n, double d, double t_n, double t_e, SerializationMethod method);

}  // namespace grip
