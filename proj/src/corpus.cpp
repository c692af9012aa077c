// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "grip/prompts.hpp"
#include "grip/util.hpp"

namespace grip {
namespace {

constexpr std::string_view kStage1File = "stage1.jsonl";
constexpr std::string_view kStage2File = "stage2.jsonl";
constexpr std::string_view kManifestFile = "manifest.json";

nlohmann::json line_for(const TaskRecord& r) {
  nlohmann::json j = {{"kind", to_string(r.kind)}};
  if (r.stage == Stage::Stage1) {
    j["text"] = r.plain_text ? *r.plain_text : r.answer_text;
  } else {
    j["messages"] = nlohmann::json::array(
        {{{"role", "user"}, {"content", r.user_text.value_or("")}}, {{"role", "assistant"}, {"content", r.answer_text}}});
  }
  j["provenance"] = r.provenance.to_json();
  return j;
}

std::string render_lines(const std::vector<const TaskRecord*>& records) {
  std::string out;
  for (const auto* r : records) {
    out += line_for(*r).dump();
    out += '\n';
  }
  return out;
}

std::size_t count_lines(const std::string& content) {
  return static_cast<std::size_t>(std::count(content.begin(), content.end(), '\n'));
}

}  // namespace

nlohmann::json CorpusManifest::to_json() const {
  nlohmann::json j = {{"schema_version", schema_version},
                      {"stage1_format", stage1_format},
                      {"graph", {{"title", graph_title}, {"hash", graph_hash}}},
                      {"counts", counts},
                      {"config", config},
                      {"prompt_assets", prompt_assets},
                      {"warnings", warnings},
                      {"created_at", created_at}};
  j["files"] = nlohmann::json::array();
  for (const auto& f : files) j["files"].push_back({{"name", f.name}, {"records", f.records}, {"sha256", f.sha256}});
  return j;
}

CorpusManifest CorpusManifest::from_json(const nlohmann::json& j) {
  CorpusManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  if (m.schema_version != kCorpusSchemaVersion) {
    throw ConfigError("unsupported corpus schema_version " + std::to_string(m.schema_version));
  }
  m.stage1_format = j.value("stage1_format", "plain");
  m.graph_title = j.at("graph").value("title", "");
  m.graph_hash = j.at("graph").value("hash", "");
  m.counts = j.value("counts", std::map<std::string, std::size_t>{});
  m.config = j.value("config", nlohmann::json::object());
  m.prompt_assets = j.value("prompt_assets", nlohmann::json::object());
  m.warnings = j.value("warnings", std::vector<std::string>{});
  m.created_at = j.value("created_at", "");
  for (const auto& f : j.at("files")) {
    m.files.push_back({f.at("name").get<std::string>(), f.at("records").get<std::size_t>(),
                       f.at("sha256").get<std::string>()});
  }
  return m;
}

CorpusMetadata metadata_for(const TextAttributedGraph& graph, nlohmann::json config) {
  return {graph.title(), content_hash(graph), std::move(config)};
}

CorpusManifest emit(std::span<const TaskRecord> records, const std::filesystem::path& out_dir,
                    const CorpusMetadata& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<const TaskRecord*> stage1, stage2;
  for (const auto& r : records) {
    r.validate();
    (r.stage == Stage::Stage1 ? stage1 : stage2).push_back(&r);
  }
  const auto order = [](const TaskRecord* a, const TaskRecord* b) {
    if (a->kind != b->kind) return to_string(a->kind) < to_string(b->kind);
    return a->provenance.record_id < b->provenance.record_id;
  };
  std::sort(stage1.begin(), stage1.end(), order);
  std::sort(stage2.begin(), stage2.end(), order);
  for (const auto* stage : {&stage1, &stage2}) {
    for (std::size_t i = 1; i < stage->size(); ++i) {
      if ((*stage)[i - 1]->provenance.record_id == (*stage)[i]->provenance.record_id &&
          (*stage)[i - 1]->kind == (*stage)[i]->kind) {
        throw Error("duplicate record id " + (*stage)[i]->provenance.record_id);
      }
    }
  }

  CorpusManifest manifest;
  manifest.graph_title = metadata.graph_title;
  manifest.graph_hash = metadata.graph_hash;
  manifest.config = metadata.config;
  manifest.prompt_assets = asset_versions();
  for (const auto& r : records) ++manifest.counts[std::string(to_string(r.kind))];

  const std::pair<std::string_view, const std::vector<const TaskRecord*>*> stages[] = {{kStage1File, &stage1},
                                                                                         {kStage2File, &stage2}};
  for (const auto& [name, stage] : stages) {
    const auto content = render_lines(*stage);
    write_file_atomic(out_dir / name, content);
    manifest.files.push_back({std::string(name), stage->size(), sha256_hex(content)});
    if (stage->empty()) {
      manifest.warnings.push_back("EmptyStage: " + std::string(name) + " has no records");
      log_warn("EmptyStage: " + std::string(name) + " has no records");
    }
  }
  manifest.created_at = utc_timestamp();
  write_file_atomic(out_dir / kManifestFile, manifest.to_json().dump(2) + "\n");
  return manifest;
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  try {
    return CorpusManifest::from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

ValidationReport verify(const CorpusManifest& manifest, const std::filesystem::path& dir) {
  ValidationReport report;
  std::map<std::string, std::size_t> seen_kinds;
  for (const auto& file : manifest.files) {
    ++report.m;
    const auto path = dir / file.name;
    std::string content;
    try {
      content = read_file(path);
    } catch (const IoError& e) {
      report.errors.push_back(file.name + ": " + e.what());
      continue;
    }
    const auto lines = count_lines(content);
    report.n += lines;
    if (lines != file.records) {
      report.errors.push_back(file.name + ": record count mismatch (manifest " + std::to_string(file.records) +
                              ", file " + std::to_string(lines) + ")");
    }
    if (sha256_hex(content) != file.sha256) report.errors.push_back(file.name + ": hash mismatch");

    const auto stage = file.name == kStage1File ? Stage::Stage1 : Stage::Stage2;
    std::size_t line_no = 0;
    for (auto line : split(content, "\n")) {
      ++line_no;
      if (line.empty()) continue;
      try {
        const auto kind = parse_task_kind(nlohmann::json::parse(line).at("kind").get<std::string>());
        ++seen_kinds[std::string(to_string(kind))];
        if (stage_of(kind) != stage) {
          report.errors.push_back(file.name + ":" + std::to_string(line_no) + ": " + std::string(to_string(kind)) +
                                  " record in the wrong stage file");
        }
      } catch (const std::exception& e) {
        report.errors.push_back(file.name + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  if (seen_kinds != manifest.counts) report.errors.push_back("per-kind counts differ from the manifest");
  return report;
}

std::vector<TaskRecord> read_stage_file(const std::filesystem::path& path, Stage stage) {
  std::vector<TaskRecord> records;
  std::size_t line_no = 0;
  const auto content = read_file(path);
  for (auto line : split(content, "\n")) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TaskRecord r;
      r.stage = stage;
      r.kind = parse_task_kind(j.at("kind").get<std::string>());
      r.provenance = Provenance::from_json(j.at("provenance"));
      if (stage == Stage::Stage1) {
        r.plain_text = j.at("text").get<std::string>();
        r.answer_text = *r.plain_text;
      } else {
        r.user_text = j.at("messages").at(0).at("content").get<std::string>();
        r.answer_text = j.at("messages").at(1).at("content").get<std::string>();
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, path.string() + ": " + e.what());
    }
  }
  return records;
}

}  // namespace grip
