// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <map>
#include <mutex>
#include <set>

#include "grip/mock_responders.hpp"
#include "grip/taskgen.hpp"
#include "qa_fuzz.hpp"
#include "support.hpp"

using namespace grip;
using namespace grip::testing;

namespace {

LlmClient mock_client(MockChatBackend::Responder responder) {
  ClientConfig c;
  c.model = "mock";
  return LlmClient(std::make_shared<MockChatBackend>(std::move(responder)), c);
}

std::vector<QAPair> some_train_qa() {
  return {{"What is above the man?", "a bird", QaType::MultiHop},
          {"What is the man sitting on?", "a chair", QaType::MultiHop},
          {"Is the tree left of the man?", "yes", QaType::Binary}};
}

std::map<std::string, std::size_t> count_by_kind(const std::vector<TaskRecord>& records) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[std::string(to_string(r.kind))];
  return counts;
}

}  // namespace

TEST_CASE("summary response parsing") {
  CHECK(parse_summary_response("Summary: A bird hovers above both the man and the tree.") ==
        "A bird hovers above both the man and the tree.");
  CHECK(parse_summary_response("Thinking first.\nSummary: draft\nSummary: \"final text\"") == "final text");
  CHECK_THROWS_AS(parse_summary_response("no marker here"), ParseFailure);
  CHECK_THROWS_AS(parse_summary_response("Summary:   "), ParseFailure);
}

TEST_CASE("qa response parsing") {
  const auto pairs = parse_qa_response(
      "The man sits on the chair and the bird is above him.\n"
      "Question: Who sits on the chair? Answer: the man <|> Question: What is above the man? Answer: the bird.",
      2);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].question == "Who sits on the chair?");
  CHECK(pairs[0].answer == "the man");
  CHECK(pairs[1].question == "What is above the man?");
  CHECK(pairs[1].answer == "the bird");

  const auto node = parse_qa_response("Question: \"What is this?\". Answer: \"a tree\".", 1);
  CHECK(node[0].question == "What is this?");
  CHECK(node[0].answer == "a tree");

  const auto shot = parse_qa_response(
      "Referred question: Is it red? Question: Is the cup blue? Answer: no <|> "
      "Referred question: What holds it? Question: What holds the cup? Answer: the table",
      2);
  CHECK(shot[0].question == "Is the cup blue?");
  CHECK(shot[1].answer == "the table");

  CHECK_THROWS_AS(parse_qa_response("Question: a? Answer: b", 2), ParseFailure);
  CHECK_THROWS_AS(parse_qa_response("Question: a? Answer: b <|> Question: c? Answer: d", 1), ParseFailure);
  CHECK_THROWS_AS(parse_qa_response("Question: a? Answer: b Question: c? Answer: d", 1), ParseFailure);
  CHECK_THROWS_AS(parse_qa_response("Question: a? b", 1), ParseFailure);
  CHECK_THROWS_AS(parse_qa_response("Question: Answer: b", 1), ParseFailure);
  CHECK_THROWS_AS(parse_qa_response("Question: a? Answer: ", 1), ParseFailure);
  CHECK_THROWS_AS(parse_qa_response("Answer: b Question: a?", 1), ParseFailure);
}

TEST_CASE("render then parse is the identity on well-formed pairs") {
  const std::vector<QAPair> pairs = {{"Who is left of the tree?", "the man", QaType::MultiHop},
                                     {"Is the bird above the chair?", "yes", QaType::MultiHop}};
  CHECK(parse_qa_response(render_qa_response(pairs, "Evidence: the scene."), 2) == pairs);
}

TEST_CASE("fuzzed well-formed replies round-trip") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto expected = 1 + static_cast<std::size_t>(rng.below(2));
    const auto c = well_formed(rng, expected);
    INFO(c.text);
    const auto parsed = parse_qa_response(c.text, expected);
    REQUIRE(parsed.size() == c.pairs.size());
    for (std::size_t k = 0; k < parsed.size(); ++k) {
      CHECK(parsed[k].question == c.pairs[k].question);
      CHECK(parsed[k].answer == c.pairs[k].answer);
    }
  }
}

TEST_CASE("mutated replies parse consistently or fail") {
  Rng rng(12);
  std::size_t parsed_count = 0, failed = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto expected = 1 + static_cast<std::size_t>(rng.below(2));
    const auto text = mutate(well_formed(rng, expected).text, rng);
    INFO(text);
    try {
      const auto parsed = parse_qa_response(text, expected);
      ++parsed_count;
      CHECK(parsed.size() == expected);
      CHECK(consistently_paired(parsed));
      CHECK(parse_qa_response(text, expected) == parsed);
      for (const auto& p : parsed) {
        CHECK_FALSE(p.question.empty());
        CHECK_FALSE(p.answer.empty());
      }
    } catch (const ParseFailure&) {
      ++failed;
    }
  }
  CHECK(parsed_count > 100);
  CHECK(failed > 100);
}

TEST_CASE("the tag oracle detects a mis-pairing") {
  CHECK(consistently_paired({{"q0xred q0xcup?", "a0xblue", QaType::MultiHop}}));
  CHECK_FALSE(consistently_paired({{"q0xred?", "a1xblue", QaType::MultiHop}}));
  CHECK_FALSE(consistently_paired({{"q0xred q1xcup?", "a0xblue", QaType::MultiHop}}));
  CHECK_FALSE(consistently_paired({{"q0xred?", "a0xblue q0xcup", QaType::MultiHop}}));
}

TEST_CASE("edge QA templates") {
  const auto src = gen_edge_qa("the man", "is sitting on", "the chair", EdgeMask::Src);
  CHECK(src.answer == "the man");
  CHECK(src.type == QaType::EdgeSrc);
  CHECK(src.question.find("the chair") != std::string::npos);
  CHECK(src.question.find("the man") == std::string::npos);
  const auto rel = gen_edge_qa("the man", "is sitting on", "the chair", EdgeMask::Rel);
  CHECK(rel.answer == "is sitting on");
  CHECK(rel.question.find("is sitting on") == std::string::npos);
  const auto tgt = gen_edge_qa("the man", "is sitting on", "the chair", EdgeMask::Tgt);
  CHECK(tgt.answer == "the chair");
  CHECK(tgt.question.find("the chair") == std::string::npos);
}

TEST_CASE("context records cover every node and edge") {
  const auto g = scene_graph();
  const auto records = gen_context_records(g);
  REQUIRE(records.size() == 8);
  CHECK(*records[0].plain_text == "In context graph scene, there is a node the man");
  for (const auto& r : records) {
    CHECK(r.stage == Stage::Stage1);
    CHECK_NOTHROW(r.validate());
  }
}

TEST_CASE("count contract on a hundred node graph") {
  const auto g = hundred_node_graph();
  TaskGenConfig config;
  config.n_summary = 50;
  config.n_context = 50;
  config.n_reasoning = 100;
  config.seed = 3;
  auto client = mock_client(mock::cooperative());
  const auto train = some_train_qa();
  const auto result = generate_all(g, config, client, train);
  const auto counts = count_by_kind(result.records);
  CHECK(counts.at("node-context") + counts.at("edge-context") == 400);
  CHECK(counts.at("summary") == 300);
  CHECK(counts.at("node-qa") + counts.at("edge-qa") == 100);
  CHECK(counts.at("node-qa") == 50);
  CHECK(counts.at("reasoning-qa") == 200);
  for (const auto& c : result.counts) CHECK(c.produced == c.target);

  std::set<std::string> ids;
  std::set<std::string> types;
  for (const auto& r : result.records) {
    CHECK(ids.insert(r.provenance.record_id).second);
    CHECK_NOTHROW(r.validate());
    if (r.kind == TaskKind::ReasoningQa) types.insert(*r.provenance.qa_type);
  }
  CHECK(types == std::set<std::string>{"multi-hop", "global", "binary", "k-shot"});
}

TEST_CASE("k-shot is left out without train QA") {
  const auto g = hundred_node_graph();
  TaskGenConfig config;
  config.n_reasoning = 60;
  auto client = mock_client(mock::cooperative());
  const auto records = gen_reasoning_qa(g, config, client, {});
  CHECK(records.size() == 120);
  for (const auto& r : records) CHECK(*r.provenance.qa_type != "k-shot");
}

TEST_CASE("k-shot prompts embed the train questions") {
  const auto g = hundred_node_graph();
  TaskGenConfig config;
  config.n_reasoning = 40;
  config.k_shot = 2;
  auto backend = std::make_shared<MockChatBackend>(mock::cooperative());
  ClientConfig cc;
  cc.model = "mock";
  LlmClient client(backend, cc);
  const auto train = some_train_qa();
  gen_reasoning_qa(g, config, client, train);
  std::size_t kshot = 0;
  for (const auto& req : backend->requests()) {
    const auto& prompt = req.prompt();
    if (prompt.find("Question: What is above the man? Answer: a bird") == std::string::npos &&
        prompt.find("Question: What is the man sitting on? Answer: a chair") == std::string::npos &&
        prompt.find("Question: Is the tree left of the man? Answer: yes") == std::string::npos) {
      continue;
    }
    ++kshot;
    std::size_t embedded = 0;
    for (const auto& qa : train) embedded += prompt.find("Question: " + qa.question) != std::string::npos;
    CHECK(embedded == 2);
  }
  CHECK(kshot > 0);
}

TEST_CASE("generation is deterministic for a seed") {
  const auto g = hundred_node_graph();
  TaskGenConfig config;
  config.n_summary = 5;
  config.n_context = 5;
  config.n_reasoning = 10;
  config.seed = 99;
  const auto train = some_train_qa();
  auto a = mock_client(mock::cooperative());
  auto b = mock_client(mock::cooperative());
  const auto ra = generate_all(g, config, a, train);
  const auto rb = generate_all(g, config, b, train);
  CHECK(ra.records == rb.records);

  config.seed = 100;
  auto c = mock_client(mock::cooperative());
  CHECK(generate_all(g, config, c, train).records != ra.records);
}

TEST_CASE("unparseable generations exhaust the budget") {
  const auto g = hundred_node_graph();
  TaskGenConfig config;
  config.n_summary = 4;
  config.n_context = 4;
  config.n_reasoning = 4;
  auto client = mock_client([](const GenerationRequest&) { return std::string("I cannot help with that."); });
  try {
    generate_all(g, config, client, {});
    FAIL("expected GenerationBudgetExceeded");
  } catch (const GenerationBudgetExceeded& e) {
    CHECK(e.family() == "summaries");
    CHECK(e.failed() == e.target());
    CHECK(e.partial().size() == g.node_count() + g.edge_count());
  }
}

TEST_CASE("a malformed first attempt is resampled") {
  const auto g = scene_graph();
  TaskGenConfig config;
  config.n_context = 2;
  auto cooperative = mock::cooperative();
  std::mutex mutex;
  std::set<std::string> seen;
  auto client = mock_client([&](const GenerationRequest& r) {
    {
      std::lock_guard lock(mutex);
      if (seen.insert(r.prompt()).second) return std::string("garbage");
    }
    return cooperative(r);
  });
  const auto records = gen_context_qa(g, config, client);
  CHECK(records.size() == 4);
}

TEST_CASE("failures under the budget drop only the failed targets") {
  const auto g = hundred_node_graph();
  TaskGenConfig config;
  config.n_context = 20;
  config.max_parse_retries = 0;
  auto cooperative = mock::cooperative();
  std::atomic<int> node_prompts{0};
  auto client = mock_client([&](const GenerationRequest& r) {
    auto reply = cooperative(r);
    if (reply.find("Which entity") != std::string::npos && node_prompts++ == 0) return std::string("no");
    return reply;
  });
  const auto records = gen_context_qa(g, config, client);
  auto counts = count_by_kind(records);
  CHECK(counts["edge-qa"] == 20);
  CHECK(counts["node-qa"] == 19);
}

TEST_CASE("transport failures are not treated as malformed generations") {
  const auto g = scene_graph();
  TaskGenConfig config;
  config.n_summary = 1;
  auto backend = std::make_shared<MockChatBackend>([](const GenerationRequest&) -> std::string {
    throw EndpointError(401, "unauthorized");
  });
  ClientConfig cc;
  cc.model = "mock";
  cc.retry.max_retries = 0;
  LlmClient client(backend, cc);
  CHECK_THROWS_AS(gen_summaries(g, config, client), EndpointError);
  CHECK(backend->calls() <= 3);
}
