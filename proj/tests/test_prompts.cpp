// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "golden_values.hpp"
#include "grip/prompts.hpp"
#include "grip/taskgen.hpp"
#include "support.hpp"

using namespace grip;

using grip::testing::golden_text;
using grip::testing::values_for;

TEST_CASE("every prompt matches its golden file after substitution") {
  for (auto id : {PromptId::Summary, PromptId::Rephrase, PromptId::NodeQa, PromptId::MultiHopQa, PromptId::GlobalQa,
                  PromptId::BinaryQa, PromptId::KShotQa, PromptId::EdgeQaRephrase, PromptId::Judge}) {
    const auto name = asset_name(id);
    INFO(name);
    CHECK(fill(id, values_for(prompt_text(id))) == golden_text(name));
  }
}

TEST_CASE("every template matches its golden file after substitution") {
  for (auto id : {TemplateId::NodeContext, TemplateId::EdgeContext, TemplateId::SummaryRecord, TemplateId::SrcPrompt,
                  TemplateId::SrcAnswer, TemplateId::RelPrompt, TemplateId::RelAnswer, TemplateId::TgtPrompt,
                  TemplateId::TgtAnswer, TemplateId::KgQuestion}) {
    const auto name = asset_name(id);
    INFO(name);
    CHECK(fill(id, values_for(template_text(id))) == golden_text(name));
  }
}

TEST_CASE("edge QA on the scene example") {
  const auto g = grip::testing::scene_graph();
  const auto rel = gen_edge_qa(g, 1, EdgeMask::Rel);
  CHECK(rel.question ==
        "Based on the context graph, what is the relation between the node the man and the node the chair?");
  CHECK(rel.answer == "is sitting on");
  const auto src = gen_edge_qa(g, 1, EdgeMask::Src);
  CHECK(src.question == "In this context graph, which node has the relation is sitting on to node the chair?");
  CHECK(src.answer == "the man");
  const auto tgt = gen_edge_qa(g, 1, EdgeMask::Tgt);
  CHECK(tgt.question == "Given this context graph, which node has the relation is sitting on from the node the man?");
  CHECK(tgt.answer == "the chair");
}

TEST_CASE("node context record") {
  CHECK(fill(TemplateId::NodeContext, {{"title", "scene"}, {"node", "the man"}}) ==
        "In context graph scene, there is a node the man");
}

TEST_CASE("fill is strict and single pass") {
  CHECK(fill("a {x} b", {{"x", "{y}"}}) == "a {y} b");
  CHECK_THROWS_AS(fill("a {x} {y}", {{"x", "1"}}), ConfigError);
  CHECK_THROWS_AS(fill("a {x}", {{"x", "1"}, {"z", "2"}}), ConfigError);
  CHECK(fill("{sample questions}!", {{"sample questions", "q"}}) == "q!");
}

TEST_CASE("asset registry") {
  CHECK(all_assets().size() == 19);
  CHECK(is_verbatim(PromptId::Summary));
  CHECK_FALSE(is_verbatim(PromptId::Judge));
  const auto versions = asset_versions();
  CHECK(versions["version"] == kPromptAssetVersion);
  CHECK(versions["assets"].size() == 19);
}
