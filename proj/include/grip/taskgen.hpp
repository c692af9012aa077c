// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grip/errors.hpp"
#include "grip/graph.hpp"
#include "grip/llm_client.hpp"
#include "grip/sampler.hpp"

namespace grip {

/// Stage 1 trains full-sequence LM loss on context and summary text;
/// stage 2 trains answer-conditioned loss on QA pairs.
enum class Stage { Stage1, Stage2 };

enum class TaskKind { NodeContext, EdgeContext, Summary, NodeQa, EdgeQa, ReasoningQa };

enum class QaType { MultiHop, Global, Binary, KShot, Node, EdgeSrc, EdgeRel, EdgeTgt };

enum class EdgeMask { Src, Rel, Tgt };

std::string_view to_string(Stage stage);
std::string_view to_string(TaskKind kind);
std::string_view to_string(QaType type);
std::string_view to_string(EdgeMask mask);
TaskKind parse_task_kind(std::string_view name);
QaType parse_qa_type(std::string_view name);
Stage stage_of(TaskKind kind);

/// Where a record came from: sampled graph elements, generator prompt and seed.
struct Provenance {
  /// Unique within a corpus; fixes the emission order inside a kind.
  std::string record_id;
  /// "node", "edge" or "subgraph".
  std::string source;
  std::vector<std::string> node_ids;
  std::vector<std::size_t> edge_indices;
  /// Asset name of the prompt or template that produced the record.
  std::string prompt_id;
  std::uint64_t seed = 0;
  std::optional<std::string> qa_type;

  nlohmann::json to_json() const;
  static Provenance from_json(const nlohmann::json& j);
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TaskRecord {
  Stage stage = Stage::Stage1;
  TaskKind kind = TaskKind::NodeContext;
  std::optional<std::string> user_text;
  std::string answer_text;
  /// Stage-1 text trained as a raw sequence.
  std::optional<std::string> plain_text;
  Provenance provenance;

  /// Throws Error when the stage/kind/text invariants do not hold.
  void validate() const;
  friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};

struct QAPair {
  std::string question;
  std::string answer;
  QaType type = QaType::MultiHop;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

struct TaskGenConfig {
  std::size_t n_summary = 50;
  std::size_t n_context = 50;
  std::size_t n_reasoning = 100;
  /// Train QA pairs embedded in each k-shot prompt.
  std::size_t k_shot = 3;
  bool rephrase_edge_qa = false;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> train_qa_path;
  SubgraphSampleConfig subgraph;
  /// Resamples of a malformed generation before it is dropped.
  int max_parse_retries = 3;
  double temperature = 0.7;
  /// Fraction of dropped targets that aborts a family.
  double max_failure_fraction = 0.2;

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const TaskGenConfig& config);
TaskGenConfig taskgen_config_from_json(const nlohmann::json& j, TaskGenConfig defaults = {});

/// More than the allowed fraction of a family's targets failed to parse.
/// Carries the records that did succeed.
class GenerationBudgetExceeded : public Error {
 public:
  GenerationBudgetExceeded(std::string family, std::size_t failed, std::size_t target,
                           std::vector<TaskRecord> partial);
  const std::string& family() const noexcept { return family_; }
  std::size_t failed() const noexcept { return failed_; }
  std::size_t target() const noexcept { return target_; }
  const std::vector<TaskRecord>& partial() const noexcept { return partial_; }

 private:
  std::string family_;
  std::size_t failed_;
  std::size_t target_;
  std::vector<TaskRecord> partial_;
};

/// One stage-1 record per node and per edge, in graph order.
std::vector<TaskRecord> gen_context_records(const TextAttributedGraph& graph);

/// N_s nodes, N_s edges and N_s rooted subgraphs, each summarized and then
/// rephrased: up to 6 N_s stage-1 records.
std::vector<TaskRecord> gen_summaries(const TextAttributedGraph& graph, const TaskGenConfig& config, LlmClient& client);

/// N_c node-level QA pairs from the model plus N_c template edge-level pairs.
std::vector<TaskRecord> gen_context_qa(const TextAttributedGraph& graph, const TaskGenConfig& config, LlmClient& client);

/// N_r rooted subgraphs, each with one uniformly chosen reasoning type and
/// two generated QA pairs. k-shot is only in the type pool when `train_qa`
/// is non-empty.
std::vector<TaskRecord> gen_reasoning_qa(const TextAttributedGraph& graph, const TaskGenConfig& config,
                                         LlmClient& client, std::span<const QAPair> train_qa);

/// Fixed-template edge-level QA: the masked element becomes the answer.
QAPair gen_edge_qa(std::string_view src_text, std::string_view rel, std::string_view tgt_text, EdgeMask mask);
QAPair gen_edge_qa(const TextAttributedGraph& graph, std::size_t edge, EdgeMask mask);

/// Text after the last "Summary:" marker, trimmed, without surrounding quotes.
/// Throws ParseFailure.
std::string parse_summary_response(std::string_view text);

/// Parses `Question: q Answer: a` pairs separated by "<|>". Text before a
/// pair's "Question:" (evidence, "Referred question: ...") is skipped.
/// Returns exactly `expected` pairs (type left as MultiHop) or throws
/// ParseFailure; a segment with more than one Question:/Answer: marker is
/// rejected rather than guessed at.
std::vector<QAPair> parse_qa_response(std::string_view text, std::size_t expected);

/// Inverse of parse_qa_response for well-formed pairs.
std::string render_qa_response(std::span<const QAPair> pairs, std::string_view evidence = {});

/// Prompt context for a sampled subgraph: its induced edges as an edge list
/// plus the texts of sampled nodes without any induced edge.
std::string subgraph_context(const TextAttributedGraph& graph, const Subgraph& subgraph);

/// JSONL of {"question", "answer"}.
std::vector<QAPair> load_train_qa(const std::filesystem::path& path);

/// Per-family record counts against their targets.
struct FamilyCount {
  std::string family;
  std::size_t produced = 0;
  std::size_t target = 0;
};

struct GenerationResult {
  std::vector<TaskRecord> records;
  std::vector<FamilyCount> counts;
};

/// All four families in order: context, summaries, context QA, reasoning QA.
/// A GenerationBudgetExceeded from a later family carries every record
/// produced so far.
GenerationResult generate_all(const TextAttributedGraph& graph, const TaskGenConfig& config, LlmClient& client,
                              std::span<const QAPair> train_qa);

}  // namespace grip
