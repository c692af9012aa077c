// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grip/eval.hpp"
#include "grip/graph.hpp"
#include "grip/llm_client.hpp"
#include "grip/sampler.hpp"
#include "grip/taskgen.hpp"
#include "grip/token_counter.hpp"

namespace grip {

struct EpochBounds {
  int min = 1;
  int max = 1;

  friend bool operator==(const EpochBounds&, const EpochBounds&) = default;
};

/// Two-stage LoRA schedule consumed by the fine-tuning driver. Only carried
/// and validated here.
struct FinetuneConfig {
  std::string base_model;
  int lora_r = 16;
  double lora_alpha = 32;
  /// Module name patterns that receive adapters: the feed-forward projections.
  std::vector<std::string> lora_target_patterns = {"gate_proj", "up_proj", "down_proj"};
  EpochBounds stage1{5, 50};
  EpochBounds stage2{5, 50};
  double early_stop_loss_threshold = 0.4;
  double learning_rate = 1e-3;
  std::string scheduler = "linear";
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-4;
  double max_grad_norm = 1.0;
  /// nullopt means "full": one optimizer step per epoch.
  std::optional<int> gradient_accumulation_steps;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const FinetuneConfig& config);
FinetuneConfig finetune_config_from_json(const nlohmann::json& j, FinetuneConfig defaults = {});

struct GraphSource {
  std::filesystem::path path;
  GraphFormat format = GraphFormat::GraphJson;
  std::optional<std::filesystem::path> node_sidecar;
  std::optional<std::string> title;
};

struct EvalSection {
  std::optional<std::filesystem::path> items;
  /// TSV triples turned into 10-way items when `items` is unset.
  std::optional<std::filesystem::path> test_triples;
  bool with_context = false;
  Scorer scorer = Scorer::Exact;
  SubgraphSampleConfig context_sampler{2, 3, 10, Direction::Both, 0};
  std::filesystem::path report = "eval_report.json";
};

struct PipelineConfig {
  std::optional<std::string> preset;
  std::uint64_t seed = 0;
  GraphSource graph;
  TaskGenConfig taskgen;
  ClientConfig generator;
  ClientConfig model;
  std::optional<ClientConfig> judge;
  CounterMode counter = CounterMode::Whitespace;
  CounterEndpoint counter_endpoint;
  std::filesystem::path output_dir = "out";
  EvalSection eval;
  FinetuneConfig finetune;

  /// Throws ConfigError.
  void validate() const;
  /// Throws ConfigError naming the first referenced input that is missing.
  void check_paths() const;
  TokenCounter make_counter() const;
  /// Snapshot embedded in every output. Secrets never appear: only the names
  /// of the environment variables holding them.
  nlohmann::json to_json() const;
};

/// Dataset presets: the reference per-dataset hyperparameters and task counts.
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
PipelineConfig preset_config(std::string_view name);

/// Relative paths resolve against `base_dir`. A "preset" key is applied
/// first and the rest of the document overrides it. The top-level seed
/// feeds sections that do not set their own.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
/// Throws IoError, ParseError, ConfigError.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace grip
