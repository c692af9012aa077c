// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grip/graph.hpp"
#include "grip/llm_client.hpp"
#include "grip/sampler.hpp"
#include "grip/token_counter.hpp"

namespace grip {

inline constexpr std::size_t kCandidateCount = 10;

struct EvalItem {
  std::string id;
  std::string question;
  std::string gold;
  /// Empty, or exactly kCandidateCount unique relations containing `gold`.
  std::vector<std::string> candidates;
  std::optional<std::string> context;

  /// Throws Error when the 10-way invariants do not hold.
  void validate() const;
  nlohmann::json to_json() const;
  static EvalItem from_json(const nlohmann::json& j);
};

struct KgEvalOptions {
  std::uint64_t seed = 0;
  bool with_context = false;
  /// Sampler used around each of the two entities; its seed is ignored.
  SubgraphSampleConfig context_sampler;
};

/// Sorted distinct relation labels of `graph`.
std::vector<std::string> relation_vocab(const TextAttributedGraph& graph);

/// One 10-way relation-prediction item per test triple. Entities missing from
/// `graph` are shown by id. Throws VocabTooSmall, or ConfigError when a gold
/// relation is not in `vocab`.
std::vector<EvalItem> build_kg_eval_items(const TextAttributedGraph& graph, std::span<const EdgeRecord> test,
                                          std::span<const std::string> vocab, const KgEvalOptions& options);

/// Letter of the gold option ('A'..'J'), if the item is 10-way.
std::optional<char> gold_letter(const EvalItem& item);

/// Case-insensitive, whitespace-normalized match; 10-way items also accept
/// the gold option's letter.
bool score_exact(std::string_view prediction, const EvalItem& item);

struct JudgeVerdict {
  bool correct = false;
  /// No parseable verdict after every attempt.
  bool flagged = false;
  /// False when an exact match made the judge call unnecessary.
  bool judged = false;
};

/// Asks `judge` whether `prediction` is equivalent to the gold answer, at
/// temperature 0. Throws TransportError / EndpointError.
JudgeVerdict score_judge(std::string_view prediction, const EvalItem& item, LlmClient& judge, int attempts = 3);

enum class Scorer { Exact, Judge };
std::string_view to_string(Scorer scorer);
Scorer parse_scorer(std::string_view name);

struct ItemVerdict {
  std::string id;
  std::string prediction;
  bool correct = false;
  bool flagged = false;
  std::size_t input_tokens = 0;
  double seconds = 0.0;
  std::string error;
};

struct EvalReport {
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<ItemVerdict> verdicts;
  double avg_input_tokens = 0.0;
  /// Sum of per-item completion latencies.
  double total_seconds = 0.0;
  bool with_context = false;
  Scorer scorer = Scorer::Exact;

  nlohmann::json to_json() const;
};

struct EvalOptions {
  Scorer scorer = Scorer::Exact;
  bool with_context = false;
  /// 0 uses the model client's concurrency limit.
  int workers = 0;
};

/// What the evaluated model receives: the question alone, or the item's
/// context, a blank line and the question.
std::string model_input(const EvalItem& item, bool with_context);

/// Items are scored independently; a failed model call marks its item
/// incorrect and is recorded in the verdict. `judge` is required for
/// Scorer::Judge.
EvalReport run_eval(std::span<const EvalItem> items, LlmClient& model, const EvalOptions& options,
                    const TokenCounter& counter, LlmClient* judge = nullptr);

std::vector<EvalItem> load_eval_items(const std::filesystem::path& path);
void save_eval_items(std::span<const EvalItem> items, const std::filesystem::path& path);

}  // namespace grip
