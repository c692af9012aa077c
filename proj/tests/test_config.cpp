// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "grip/config.hpp"
#include "support.hpp"

using namespace grip;
using namespace grip::testing;

namespace {

struct Expected {
  const char* name;
  int r;
  double alpha;
  std::size_t ns, nr, nc;
  EpochBounds s1, s2;
  double threshold;
  std::optional<int> accum;
};

// Reference per-dataset settings.
const Expected kExpected[] = {
    {"scene-graph", 16, 32, 50, 100, 50, {5, 50}, {5, 50}, 0.4, std::nullopt},
    {"fb15k237", 24, 48, 6000, 2000, 8000, {1, 1}, {1, 5}, 0.15, 512},
    {"wn18rr", 24, 48, 6000, 2000, 8000, {1, 1}, {1, 5}, 0.15, 512},
    {"clegr-reasoning", 16, 32, 20, 160, 20, {5, 50}, {5, 50}, 0.4, std::nullopt},
    {"codex-medium", 24, 48, 6000, 2000, 8000, {1, 1}, {1, 10}, 0.15, 512},
    {"nell23k", 24, 48, 6000, 2000, 8000, {1, 1}, {1, 10}, 0.15, 512},
};

}  // namespace

TEST_CASE("dataset presets") {
  CHECK(preset_names().size() == std::size(kExpected));
  for (const auto& e : kExpected) {
    CAPTURE(e.name);
    const auto c = preset_config(e.name);
    CHECK(c.finetune.lora_r == e.r);
    CHECK(c.finetune.lora_alpha == e.alpha);
    CHECK(c.taskgen.n_summary == e.ns);
    CHECK(c.taskgen.n_reasoning == e.nr);
    CHECK(c.taskgen.n_context == e.nc);
    CHECK(c.finetune.stage1 == e.s1);
    CHECK(c.finetune.stage2 == e.s2);
    CHECK(c.finetune.early_stop_loss_threshold == e.threshold);
    CHECK(c.finetune.gradient_accumulation_steps == e.accum);
    CHECK(c.finetune.learning_rate == 1e-3);
    CHECK(c.finetune.scheduler == "linear");
    CHECK(c.finetune.beta1 == 0.9);
    CHECK(c.finetune.beta2 == 0.98);
    CHECK(c.finetune.epsilon == 1e-4);
    CHECK(c.finetune.max_grad_norm == 1.0);
    CHECK(c.finetune.lora_target_patterns == std::vector<std::string>{"gate_proj", "up_proj", "down_proj"});
    CHECK_NOTHROW(c.finetune.validate());
  }
  CHECK_THROWS_AS(preset_config("imagenet"), ConfigError);
}

TEST_CASE("bundled pipeline config") {
  const auto c = load_pipeline_config(fixture("pipeline.json"));
  CHECK(c.seed == 7);
  CHECK(c.taskgen.seed == 7);
  CHECK(c.eval.context_sampler.seed == 7);
  CHECK(c.finetune.seed == 7);
  CHECK(c.graph.path == std::filesystem::path(GRIP_FIXTURES_DIR) / "kg_small/train.tsv");
  CHECK(c.graph.format == GraphFormat::TriplesTsv);
  CHECK(c.taskgen.n_summary == 4);
  CHECK(c.taskgen.rephrase_edge_qa);
  CHECK(c.taskgen.train_qa_path == std::filesystem::path(GRIP_FIXTURES_DIR) / "train_qa.jsonl");
  CHECK(c.eval.context_sampler.hops == 2);
  CHECK(c.output_dir == std::filesystem::path(GRIP_FIXTURES_DIR) / "out");
  CHECK(c.finetune.base_model == "Qwen/Qwen2.5-7B-Instruct");
  CHECK_NOTHROW(c.check_paths());
}

TEST_CASE("document keys override the preset") {
  const nlohmann::json j = {{"preset", "fb15k237"},
                            {"taskgen", {{"n_summary", 3}}},
                            {"finetune", {{"stage2_epochs", {{"min", 1}, {"max", 5}}},
                                          {"gradient_accumulation_steps", "full"}}}};
  const auto c = pipeline_config_from_json(j, "/base");
  CHECK(c.taskgen.n_summary == 3);
  CHECK(c.taskgen.n_context == 8000);
  CHECK(c.finetune.lora_r == 24);
  CHECK(c.finetune.stage2 == EpochBounds{1, 5});
  CHECK_FALSE(c.finetune.gradient_accumulation_steps);
  CHECK(c.output_dir == std::filesystem::path("/base/out"));
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(pipeline_config_from_json(nlohmann::json::array(), "."), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"sampler", {{"hops", 0}}}}, "."), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"finetune", {{"stage1_epochs", {{"min", 9}, {"max", 2}}}}}}, "."),
                  ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"finetune", {{"gradient_accumulation_steps", "half"}}}}, "."),
                  ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"counter", {{"mode", "endpoint"}}}}, "."), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"eval", {{"scorer", "bleu"}}}}, "."), ConfigError);
  CHECK_THROWS_AS(pipeline_config_from_json({{"graph", {{"format", "csv"}}}}, "."), ConfigError);

  PipelineConfig missing;
  missing.graph.path = "/nonexistent/graph.json";
  CHECK_THROWS_AS(missing.check_paths(), ConfigError);
}

TEST_CASE("config snapshot keeps secrets out") {
  auto c = load_pipeline_config(fixture("pipeline.json"));
  c.generator.api_key_env = "MY_SECRET_KEY";
  const auto j = c.to_json();
  CHECK(j["seed"] == 7);
  CHECK(j["finetune"]["lora_r"] == 16);
  CHECK(j["finetune"]["gradient_accumulation_steps"] == "full");
  CHECK(j.dump().find("MY_SECRET_KEY") != std::string::npos);
  // Round trip through the document form.
  const auto again = pipeline_config_from_json(j, "/");
  CHECK(again.to_json() == j);
}
