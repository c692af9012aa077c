// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "grip/errors.hpp"

namespace grip {

struct NodeRecord {
  std::string id;
  std::string text;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

/// A directed attributed edge (src, rel, tgt). `text` is the full edge
/// feature and falls back to `rel` when the source carries none.
struct EdgeRecord {
  std::string src;
  std::string rel;
  std::string tgt;
  std::string text;

  EdgeRecord() = default;
  EdgeRecord(std::string src_id, std::string relation, std::string tgt_id, std::string edge_text = {})
      : src(std::move(src_id)), rel(std::move(relation)), tgt(std::move(tgt_id)), text(std::move(edge_text)) {
    if (text.empty()) text = rel;
  }

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::size_t n = 0;
  std::size_t m = 0;

  bool ok() const noexcept { return errors.empty(); }
  std::string summary() const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

enum class GraphFormat { TriplesTsv, GraphJson };
enum class Direction { Out, In, Both };

GraphFormat parse_graph_format(std::string_view name);
std::string_view to_string(GraphFormat format);
Direction parse_direction(std::string_view name);
std::string_view to_string(Direction direction);

/// An incident edge seen from one endpoint: the edge and the node at its other end.
struct Neighbor {
  std::size_t edge;
  std::size_t node;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Text-attributed graph G = (V, E, X_V, X_E). Immutable once built.
///
/// The constructor indexes whatever it is given, including invalid input,
/// so that validate() can report on it; edges with unknown endpoints are
/// left out of the adjacency lists. Use make_graph() or load_graph() to get
/// a graph that is known to be valid.
class TextAttributedGraph {
 public:
  TextAttributedGraph() = default;
  TextAttributedGraph(std::string title, std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges);

  const std::string& title() const noexcept { return title_; }
  const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
  const std::vector<EdgeRecord>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Index of `id`; throws UnknownNode.
  std::size_t index_of(std::string_view id) const;
  const NodeRecord& node(std::string_view id) const { return nodes_[index_of(id)]; }

  /// Edge indices leaving / entering node `index`, in edge order.
  std::span<const std::size_t> out_edges(std::size_t index) const { return out_[index]; }
  std::span<const std::size_t> in_edges(std::size_t index) const { return in_[index]; }

  /// Endpoint node indices of edge `e`. Only meaningful on a valid graph.
  std::size_t src_index(std::size_t e) const { return edge_src_[e]; }
  std::size_t tgt_index(std::size_t e) const { return edge_tgt_[e]; }

  std::vector<Neighbor> neighbors(std::size_t index, Direction direction) const;
  /// Throws UnknownNode.
  std::vector<Neighbor> neighbors(std::string_view id, Direction direction) const;

 private:
  std::string title_;
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::size_t> edge_src_;
  std::vector<std::size_t> edge_tgt_;
};

ValidationReport validate(const TextAttributedGraph& graph);

/// Builds and validates; throws ValidationError.
TextAttributedGraph make_graph(std::string title, std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges);

struct LoadOptions {
  /// Triples-TSV only: id<TAB>text file. Defaults to nodes.tsv next to the
  /// triples file when that exists.
  std::optional<std::filesystem::path> node_sidecar;
  /// Overrides the title in the file; otherwise the file stem is used when absent.
  std::optional<std::string> title;
};

/// Throws ParseError, ValidationError or IoError.
TextAttributedGraph load_graph(const std::filesystem::path& path, GraphFormat format, const LoadOptions& options = {});

/// Reads a triples file without building a graph (test splits, etc.).
std::vector<EdgeRecord> load_triples(const std::filesystem::path& path);

nlohmann::json to_json(const TextAttributedGraph& graph);
/// `fallback_title` is used when the object has no title.
TextAttributedGraph graph_from_json(const nlohmann::json& j, std::string_view fallback_title);
void save_graph_json(const TextAttributedGraph& graph, const std::filesystem::path& path);

/// SHA-256 of the canonical graph-json encoding.
std::string content_hash(const TextAttributedGraph& graph);

}  // namespace grip
