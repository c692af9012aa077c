// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "grip/graph.hpp"
#include "grip/util.hpp"

namespace grip::testing {

inline std::filesystem::path fixture(std::string_view rel) { return std::filesystem::path(GRIP_FIXTURES_DIR) / rel; }
inline std::filesystem::path golden(std::string_view rel) { return std::filesystem::path(GRIP_GOLDEN_DIR) / rel; }

inline TextAttributedGraph scene_graph() { return load_graph(fixture("scene_example.json"), GraphFormat::GraphJson); }

/// `k` distinct words "<stem>0 <stem>1 ...".
inline std::string words(std::size_t k, std::string_view stem) {
  std::string out;
  for (std::size_t i = 0; i < k; ++i) {
    if (i) out += ' ';
    out += stem;
    out += std::to_string(i);
  }
  return out;
}

inline std::string node_id(std::size_t i) { return "v" + std::to_string(i); }

/// Centre v0 with `leaves` spokes pointing outwards.
inline TextAttributedGraph star_graph(std::size_t leaves) {
  std::vector<NodeRecord> nodes{{"v0", "hub"}};
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 1; i <= leaves; ++i) {
    nodes.push_back({node_id(i), "leaf " + std::to_string(i)});
    edges.emplace_back("v0", "links to", node_id(i));
  }
  return make_graph("star", std::move(nodes), std::move(edges));
}

inline TextAttributedGraph path_graph(std::size_t n) {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back({node_id(i), "stop " + std::to_string(i)});
    if (i) edges.emplace_back(node_id(i - 1), "next", node_id(i));
  }
  return make_graph("path", std::move(nodes), std::move(edges));
}

/// Erdos-Renyi style directed graph, each ordered pair kept with probability p.
inline TextAttributedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({node_id(i), "item " + std::to_string(i)});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rng.uniform01() < p) edges.emplace_back(node_id(i), "r" + std::to_string((i + j) % 7), node_id(j));
    }
  }
  return make_graph("dense", std::move(nodes), std::move(edges));
}

/// Every node text has t_n words, every edge text t_e words, every node d
/// out-edges (to i+1..i+d mod n).
inline TextAttributedGraph uniform_graph(std::size_t n, std::size_t d, std::size_t t_n, std::size_t t_e) {
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({node_id(i), words(t_n, "n" + std::to_string(i) + "w")});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= d; ++k) {
      edges.emplace_back(node_id(i), "rel", node_id((i + k) % n), words(t_e, "e"));
    }
  }
  return make_graph("uniform", std::move(nodes), std::move(edges));
}

/// 100 entities with short descriptions and 300 typed relations.
inline TextAttributedGraph hundred_node_graph() {
  static constexpr std::string_view kinds[] = {"red", "blue", "green", "small", "large", "wooden", "metal", "old"};
  static constexpr std::string_view things[] = {"box", "lamp", "chair", "table", "cup", "book", "vase", "clock"};
  static constexpr std::string_view rels[] = {"is left of", "is above", "is next to", "is behind", "holds", "touches"};
  Rng rng(20260101);
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < 100; ++i) {
    nodes.push_back({node_id(i), "the " + std::string(kinds[i % 8]) + " " + std::string(things[(i / 8) % 8]) + " " +
                                     std::to_string(i)});
  }
  std::vector<EdgeRecord> edges;
  for (std::size_t k = 0; k < 300; ++k) {
    const auto a = static_cast<std::size_t>(rng.below(100));
    auto b = static_cast<std::size_t>(rng.below(99));
    if (b >= a) ++b;
    edges.emplace_back(node_id(a), std::string(rels[rng.below(6)]), node_id(b));
  }
  return make_graph("hundred", std::move(nodes), std::move(edges));
}

/// Synthetic knowledge graph: `entities` nodes, `relations` labels "rel-<k>"
/// all present in the train edges, and `n_test` held-out triples.
struct SyntheticKg {
  TextAttributedGraph train;
  std::vector<EdgeRecord> test;
};

inline SyntheticKg synthetic_kg(std::size_t entities, std::size_t relations, std::size_t n_test, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < entities; ++i) nodes.push_back({node_id(i), "entity number " + std::to_string(i)});
  const auto rel = [](std::size_t k) { return "rel-" + std::to_string(k); };
  const auto pair = [&] {
    const auto a = static_cast<std::size_t>(rng.below(entities));
    auto b = static_cast<std::size_t>(rng.below(entities - 1));
    if (b >= a) ++b;
    return std::pair{node_id(a), node_id(b)};
  };
  std::vector<EdgeRecord> edges;
  for (std::size_t k = 0; k < 3 * entities; ++k) {
    auto [a, b] = pair();
    edges.emplace_back(a, rel(k < relations ? k : rng.below(relations)), b);
  }
  std::vector<EdgeRecord> test;
  for (std::size_t k = 0; k < n_test; ++k) {
    auto [a, b] = pair();
    test.emplace_back(a, rel(rng.below(relations)), b);
  }
  return {make_graph("synthetic", std::move(nodes), std::move(edges)), std::move(test)};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("grip-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

}  // namespace grip::testing
