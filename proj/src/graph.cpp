// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "grip/util.hpp"

namespace grip {
namespace {

constexpr std::size_t kMissing = static_cast<std::size_t>(-1);

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string json_id(const nlohmann::json& v, std::string_view what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError(0, std::string(what) + " must be a string or integer");
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << "n=" << n << " m=" << m << ", " << errors.size() << " error(s)";
  for (const auto& e : errors) out << "\n  - " << e;
  return out.str();
}

ValidationError::ValidationError(ValidationReport report)
    : Error("graph validation failed: " + report.summary()), report_(std::move(report)) {}

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "triples-tsv" || name == "tsv") return GraphFormat::TriplesTsv;
  if (name == "graph-json" || name == "json") return GraphFormat::GraphJson;
  throw ConfigError("unknown graph format '" + std::string(name) + "' (expected triples-tsv or graph-json)");
}

std::string_view to_string(GraphFormat format) {
  return format == GraphFormat::TriplesTsv ? "triples-tsv" : "graph-json";
}

Direction parse_direction(std::string_view name) {
  if (name == "out") return Direction::Out;
  if (name == "in") return Direction::In;
  if (name == "both") return Direction::Both;
  throw ConfigError("unknown direction '" + std::string(name) + "' (expected out, in or both)");
}

std::string_view to_string(Direction direction) {
  switch (direction) {
    case Direction::Out: return "out";
    case Direction::In: return "in";
    case Direction::Both: return "both";
  }
  return "both";
}

TextAttributedGraph::TextAttributedGraph(std::string title, std::vector<NodeRecord> nodes,
                                         std::vector<EdgeRecord> edges)
    : title_(std::move(title)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.try_emplace(nodes_[i].id, i);
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  edge_src_.resize(edges_.size(), kMissing);
  edge_tgt_.resize(edges_.size(), kMissing);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto s = index_.find(edges_[e].src);
    const auto t = index_.find(edges_[e].tgt);
    if (s == index_.end() || t == index_.end()) continue;
    edge_src_[e] = s->second;
    edge_tgt_[e] = t->second;
    out_[s->second].push_back(e);
    in_[t->second].push_back(e);
  }
}

std::optional<std::size_t> TextAttributedGraph::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TextAttributedGraph::index_of(std::string_view id) const {
  const auto found = find(id);
  if (!found) throw UnknownNode(std::string(id));
  return *found;
}

std::vector<Neighbor> TextAttributedGraph::neighbors(std::size_t index, Direction direction) const {
  std::vector<Neighbor> result;
  const auto& outs = out_[index];
  const auto& ins = in_[index];
  const bool want_out = direction != Direction::In;
  const bool want_in = direction != Direction::Out;
  result.reserve((want_out ? outs.size() : 0) + (want_in ? ins.size() : 0));
  // Merge both lists so the result follows edge index order.
  std::size_t i = 0, j = 0;
  while ((want_out && i < outs.size()) || (want_in && j < ins.size())) {
    const bool take_out = want_out && i < outs.size() && (!want_in || j >= ins.size() || outs[i] <= ins[j]);
    if (take_out) {
      result.push_back({outs[i], edge_tgt_[outs[i]]});
      ++i;
    } else {
      result.push_back({ins[j], edge_src_[ins[j]]});
      ++j;
    }
  }
  return result;
}

std::vector<Neighbor> TextAttributedGraph::neighbors(std::string_view id, Direction direction) const {
  return neighbors(index_of(id), direction);
}

ValidationReport validate(const TextAttributedGraph& graph) {
  ValidationReport report;
  report.n = graph.node_count();
  report.m = graph.edge_count();
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    const auto& node = graph.nodes()[i];
    if (node.id.empty()) report.errors.push_back("node #" + std::to_string(i) + " has an empty id");
    if (!seen.insert(node.id).second) report.errors.push_back("duplicate node id '" + node.id + "'");
    if (trim(node.text).empty()) report.errors.push_back("node '" + node.id + "' has empty text");
  }
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const auto& edge = graph.edges()[e];
    const auto where = "edge #" + std::to_string(e);
    if (edge.src.empty()) report.errors.push_back(where + " has an empty source id");
    else if (!graph.find(edge.src)) report.errors.push_back(where + " references unknown source node '" + edge.src + "'");
    if (edge.tgt.empty()) report.errors.push_back(where + " has an empty target id");
    else if (!graph.find(edge.tgt)) report.errors.push_back(where + " references unknown target node '" + edge.tgt + "'");
    if (trim(edge.rel).empty()) report.errors.push_back(where + " has an empty relation");
  }
  return report;
}

TextAttributedGraph make_graph(std::string title, std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges) {
  TextAttributedGraph graph(std::move(title), std::move(nodes), std::move(edges));
  auto report = validate(graph);
  if (!report.ok()) throw ValidationError(std::move(report));
  return graph;
}

std::vector<EdgeRecord> load_triples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<EdgeRecord> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (trim(line).empty()) continue;
    const auto fields = split(line, "\t");
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields (src, rel, tgt), got " + std::to_string(fields.size()));
    }
    edges.emplace_back(std::string(trim(fields[0])), std::string(trim(fields[1])), std::string(trim(fields[2])));
  }
  return edges;
}

namespace {

std::vector<NodeRecord> load_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<NodeRecord> nodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(line_no, "expected id<TAB>text in " + path.filename().string());
    nodes.push_back({std::string(trim(std::string_view(line).substr(0, tab))),
                     std::string(trim(std::string_view(line).substr(tab + 1)))});
  }
  return nodes;
}

TextAttributedGraph load_tsv(const std::filesystem::path& path, const LoadOptions& options) {
  auto edges = load_triples(path);
  std::optional<std::filesystem::path> sidecar = options.node_sidecar;
  if (!sidecar) {
    auto candidate = path.parent_path() / "nodes.tsv";
    if (candidate != path && std::filesystem::exists(candidate)) sidecar = candidate;
  }
  std::vector<NodeRecord> nodes;
  std::unordered_set<std::string> known;
  if (sidecar) {
    nodes = load_sidecar(*sidecar);
    for (const auto& n : nodes) known.insert(n.id);
  }
  for (const auto& e : edges) {
    for (const auto* id : {&e.src, &e.tgt}) {
      if (!id->empty() && known.insert(*id).second) nodes.push_back({*id, *id});
    }
  }
  return make_graph(options.title.value_or(path.stem().string()), std::move(nodes), std::move(edges));
}

}  // namespace

TextAttributedGraph graph_from_json(const nlohmann::json& j, std::string_view fallback_title) {
  if (!j.is_object()) throw ParseError(0, "graph-json must be a single object");
  std::string title(fallback_title);
  if (j.contains("title") && !j["title"].is_null()) title = j["title"].get<std::string>();
  std::vector<NodeRecord> nodes;
  if (j.contains("nodes")) {
    for (const auto& n : j.at("nodes")) {
      if (!n.contains("id")) throw ParseError(0, "node without id");
      auto id = json_id(n["id"], "node id");
      auto text = n.contains("text") ? n["text"].get<std::string>() : std::string();
      nodes.push_back({std::move(id), std::move(text)});
    }
  }
  std::vector<EdgeRecord> edges;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.contains("src") || !e.contains("rel") || !e.contains("tgt")) throw ParseError(0, "edge needs src, rel and tgt");
      edges.emplace_back(json_id(e["src"], "edge src"), e["rel"].get<std::string>(), json_id(e["tgt"], "edge tgt"),
                         e.contains("text") && !e["text"].is_null() ? e["text"].get<std::string>() : std::string());
    }
  }
  return make_graph(std::move(title), std::move(nodes), std::move(edges));
}

TextAttributedGraph load_graph(const std::filesystem::path& path, GraphFormat format, const LoadOptions& options) {
  if (!std::filesystem::exists(path)) throw IoError("graph file not found: " + path.string());
  if (format == GraphFormat::TriplesTsv) return load_tsv(path, options);

  const auto text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_of_offset(text, e.byte), e.what());
  }
  try {
    auto graph = graph_from_json(j, path.stem().string());
    if (options.title) return TextAttributedGraph(*options.title, graph.nodes(), graph.edges());
    return graph;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
}

nlohmann::json to_json(const TextAttributedGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : graph.nodes()) nodes.push_back({{"id", n.id}, {"text", n.text}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : graph.edges()) {
    nlohmann::json je = {{"src", e.src}, {"rel", e.rel}, {"tgt", e.tgt}};
    if (e.text != e.rel) je["text"] = e.text;
    edges.push_back(std::move(je));
  }
  return {{"title", graph.title()}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

void save_graph_json(const TextAttributedGraph& graph, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(graph).dump(2) + "\n");
}

std::string content_hash(const TextAttributedGraph& graph) { return sha256_hex(to_json(graph).dump()); }

}  // namespace grip
