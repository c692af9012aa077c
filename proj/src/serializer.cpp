// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/serializer.hpp"

#include <algorithm>
#include <numeric>

namespace grip {
namespace {

constexpr std::string_view kNodeHeader = "Node list:";
constexpr std::string_view kEdgeHeader = "Edge list:";

std::string node_section_body(const TextAttributedGraph& graph) {
  std::string body;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    if (i) body += ' ';
    body += std::to_string(i + 1);
    body += ". ";
    body += graph.nodes()[i].text;
    body += ';';
  }
  return body;
}

std::string edge_section_body(const TextAttributedGraph& graph) {
  std::string body;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    if (e) body += ' ';
    body += std::to_string(graph.src_index(e) + 1);
    body += ' ';
    body += graph.edges()[e].text;
    body += ' ';
    body += std::to_string(graph.tgt_index(e) + 1);
    body += ';';
  }
  return body;
}

std::string edge_clause(const TextAttributedGraph& graph, std::size_t e) {
  const auto& edge = graph.edges()[e];
  return graph.nodes()[graph.src_index(e)].text + " " + edge.text + " " + graph.nodes()[graph.tgt_index(e)].text;
}

/// Fills n, m, d, t_n, t_e and max_text_tokens.
TokenStats graph_stats(const TextAttributedGraph& graph, const TokenCounter& counter) {
  TokenStats stats;
  stats.n = graph.node_count();
  stats.m = graph.edge_count();
  stats.d = stats.n ? static_cast<double>(stats.m) / static_cast<double>(stats.n) : 0.0;

  std::vector<std::string> texts;
  texts.reserve(stats.n + stats.m);
  for (const auto& node : graph.nodes()) texts.push_back(node.text);
  for (const auto& edge : graph.edges()) texts.push_back(edge.text);
  const auto counts = counter.count_many(texts);

  const auto node_end = counts.begin() + static_cast<std::ptrdiff_t>(stats.n);
  const auto node_tokens = std::accumulate(counts.begin(), node_end, std::size_t{0});
  const auto edge_tokens = std::accumulate(node_end, counts.end(), std::size_t{0});
  stats.t_n = stats.n ? static_cast<double>(node_tokens) / static_cast<double>(stats.n) : 0.0;
  stats.t_e = stats.m ? static_cast<double>(edge_tokens) / static_cast<double>(stats.m) : 0.0;
  stats.max_text_tokens = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  return stats;
}

}  // namespace

SerializationMethod parse_serialization_method(std::string_view name) {
  if (name == "edge-with-index") return SerializationMethod::EdgeWithIndex;
  if (name == "edge-list") return SerializationMethod::EdgeList;
  throw ConfigError("unknown serialization method '" + std::string(name) + "' (expected edge-with-index or edge-list)");
}

std::string_view to_string(SerializationMethod method) {
  return method == SerializationMethod::EdgeWithIndex ? "edge-with-index" : "edge-list";
}

nlohmann::json to_json(const TokenStats& s) {
  return {{"n", s.n},
          {"m", s.m},
          {"d", s.d},
          {"t_n", s.t_n},
          {"t_e", s.t_e},
          {"exact_total", s.exact_total},
          {"node_section", s.node_section},
          {"edge_section", s.edge_section},
          {"max_text_tokens", s.max_text_tokens}};
}

std::string render_edge_with_index(const TextAttributedGraph& graph) {
  std::string text(kNodeHeader);
  text += '\n';
  text += node_section_body(graph);
  text += "\n\n";
  text += kEdgeHeader;
  text += '\n';
  text += edge_section_body(graph);
  return text;
}

Serialization serialize_edge_with_index(const TextAttributedGraph& graph, const TokenCounter& counter) {
  Serialization out;
  out.stats = graph_stats(graph, counter);
  const std::vector<std::string> parts = {render_edge_with_index(graph), node_section_body(graph),
                                          edge_section_body(graph)};
  const auto counts = counter.count_many(parts);
  out.text = parts[0];
  out.stats.exact_total = counts[0];
  out.stats.node_section = counts[1];
  out.stats.edge_section = counts[2];
  return out;
}

std::string render_edge_list(const TextAttributedGraph& graph) {
  std::vector<std::size_t> all(graph.edge_count());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return render_snippets(graph, all);
}

Serialization serialize_edge_list(const TextAttributedGraph& graph, const TokenCounter& counter) {
  Serialization out;
  out.stats = graph_stats(graph, counter);
  out.text = render_edge_list(graph);
  out.stats.exact_total = counter.count(out.text);
  out.stats.edge_section = out.stats.exact_total;
  return out;
}

Serialization serialize(const TextAttributedGraph& graph, SerializationMethod method, const TokenCounter& counter) {
  return method == SerializationMethod::EdgeWithIndex ? serialize_edge_with_index(graph, counter)
                                                      : serialize_edge_list(graph, counter);
}

std::string render_snippets(const TextAttributedGraph& graph, std::span<const std::size_t> edges,
                            std::span<const std::size_t> isolated_nodes) {
  std::string text;
  auto append = [&text](const std::string& clause) {
    if (!text.empty()) text += "; ";
    text += clause;
  };
  for (auto e : edges) append(edge_clause(graph, e));
  for (auto v : isolated_nodes) append(graph.nodes()[v].text);
  if (!text.empty()) text += '.';
  return text;
}

double theoretical_token_cost(double n, double d, double t_n, double t_e, SerializationMethod method) {
  if (method == SerializationMethod::EdgeWithIndex) return n * t_n + n * d * t_e;
  return 2.0 * n * d * t_n + n * d * t_e;
}

}  // namespace grip
