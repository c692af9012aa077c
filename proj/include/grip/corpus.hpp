// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "grip/graph.hpp"
#include "grip/taskgen.hpp"

namespace grip {

inline constexpr int kCorpusSchemaVersion = 1;

struct CorpusFile {
  std::string name;
  std::size_t records = 0;
  std::string sha256;
};

struct CorpusManifest {
  int schema_version = kCorpusSchemaVersion;
  /// "plain": stage-1 lines carry raw text, not chat messages.
  std::string stage1_format = "plain";
  std::string graph_title;
  std::string graph_hash;
  std::map<std::string, std::size_t> counts;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json prompt_assets = nlohmann::json::object();
  std::vector<CorpusFile> files;
  std::vector<std::string> warnings;
  std::string created_at;

  nlohmann::json to_json() const;
  static CorpusManifest from_json(const nlohmann::json& j);
};

/// Caller-supplied parts of the manifest.
struct CorpusMetadata {
  std::string graph_title;
  std::string graph_hash;
  nlohmann::json config = nlohmann::json::object();
};

CorpusMetadata metadata_for(const TextAttributedGraph& graph, nlohmann::json config);

/// Writes stage1.jsonl, stage2.jsonl and, last, manifest.json into `out_dir`.
/// Records are ordered by kind, then record id. Throws IoError.
CorpusManifest emit(std::span<const TaskRecord> records, const std::filesystem::path& out_dir,
                    const CorpusMetadata& metadata);

CorpusManifest load_manifest(const std::filesystem::path& path);

/// Recounts and rehashes the files a manifest lists. Report n = records,
/// m = files checked.
ValidationReport verify(const CorpusManifest& manifest, const std::filesystem::path& dir);

/// Reads a stage file back into records.
std::vector<TaskRecord> read_stage_file(const std::filesystem::path& path, Stage stage);

}  // namespace grip
