// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/eval.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "grip/prompts.hpp"
#include "grip/serializer.hpp"
#include "grip/util.hpp"

namespace grip {
namespace {

std::string entity_text(const TextAttributedGraph& graph, const std::string& id) {
  const auto v = graph.find(id);
  return v ? graph.nodes()[*v].text : id;
}

std::string kg_context(const TextAttributedGraph& graph, const EdgeRecord& triple, const SubgraphSampleConfig& sampler,
                       std::uint64_t seed) {
  std::vector<std::size_t> nodes;
  int salt = 0;
  for (const auto* id : {&triple.src, &triple.tgt}) {
    const auto v = graph.find(*id);
    ++salt;
    if (!v) continue;
    auto config = sampler;
    config.seed = derive_seed(seed, "kg-context", static_cast<std::uint64_t>(salt));
    for (auto u : sample_subgraph(graph, *v, config).nodes) {
      if (std::find(nodes.begin(), nodes.end(), u) == nodes.end()) nodes.push_back(u);
    }
  }
  auto edges = induced_edges(graph, nodes);
  // The answer must not be readable off the context.
  std::erase_if(edges, [&](std::size_t e) {
    const auto& edge = graph.edges()[e];
    return edge.src == triple.src && edge.tgt == triple.tgt && edge.rel == triple.rel;
  });
  return render_snippets(graph, edges, isolated_nodes(graph, nodes, edges));
}

std::optional<bool> parse_verdict(std::string_view reply) {
  auto word = to_lower(trim(reply));
  while (!word.empty() && (word.back() == '.' || word.back() == '!')) word.pop_back();
  if (word == "equivalent") return true;
  if (word == "not_equivalent" || word == "not equivalent") return false;
  return std::nullopt;
}

}  // namespace

void EvalItem::validate() const {
  if (question.empty()) throw Error("eval item " + id + ": empty question");
  if (candidates.empty()) return;
  if (candidates.size() != kCandidateCount) {
    throw Error("eval item " + id + ": expected " + std::to_string(kCandidateCount) + " candidates, got " +
                std::to_string(candidates.size()));
  }
  std::set<std::string> seen;
  for (const auto& c : candidates) {
    if (!seen.insert(normalize_answer(c)).second) throw Error("eval item " + id + ": duplicate candidate '" + c + "'");
  }
  if (!seen.contains(normalize_answer(gold))) throw Error("eval item " + id + ": gold is not a candidate");
}

nlohmann::json EvalItem::to_json() const {
  nlohmann::json j = {{"id", id}, {"question", question}, {"gold", gold}};
  if (!candidates.empty()) j["candidates"] = candidates;
  if (context) j["context"] = *context;
  return j;
}

EvalItem EvalItem::from_json(const nlohmann::json& j) {
  EvalItem item;
  item.id = j.at("id").get<std::string>();
  item.question = j.at("question").get<std::string>();
  item.gold = j.at("gold").get<std::string>();
  item.candidates = j.value("candidates", std::vector<std::string>{});
  if (j.contains("context") && !j["context"].is_null()) item.context = j["context"].get<std::string>();
  item.validate();
  return item;
}

std::vector<std::string> relation_vocab(const TextAttributedGraph& graph) {
  std::set<std::string> rels;
  for (const auto& e : graph.edges()) rels.insert(e.rel);
  return {rels.begin(), rels.end()};
}

std::vector<EvalItem> build_kg_eval_items(const TextAttributedGraph& graph, std::span<const EdgeRecord> test,
                                          std::span<const std::string> vocab, const KgEvalOptions& options) {
  std::vector<std::string> relations(vocab.begin(), vocab.end());
  std::sort(relations.begin(), relations.end());
  relations.erase(std::unique(relations.begin(), relations.end()), relations.end());
  if (relations.size() < kCandidateCount) throw VocabTooSmall(relations.size());
  if (options.with_context) options.context_sampler.validate();

  std::vector<EvalItem> items;
  items.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& triple = test[i];
    const auto gold = std::lower_bound(relations.begin(), relations.end(), triple.rel);
    if (gold == relations.end() || *gold != triple.rel) {
      throw ConfigError("test triple " + std::to_string(i) + ": relation '" + triple.rel + "' is not in the vocabulary");
    }
    const auto seed = derive_seed(options.seed, "kg-item", i);
    Rng rng(seed);
    std::vector<std::string> distractors;
    distractors.reserve(relations.size() - 1);
    for (const auto& r : relations) {
      if (r != triple.rel) distractors.push_back(r);
    }
    rng.partial_shuffle(distractors, kCandidateCount - 1);
    distractors.resize(kCandidateCount - 1);
    distractors.push_back(triple.rel);
    rng.partial_shuffle(distractors, distractors.size());

    std::string options_text;
    for (std::size_t k = 0; k < distractors.size(); ++k) {
      if (k) options_text += '\n';
      options_text += static_cast<char>('A' + k);
      options_text += ". ";
      options_text += distractors[k];
    }
    EvalItem item;
    item.id = "kg/" + std::to_string(i);
    item.gold = triple.rel;
    item.question = fill(TemplateId::KgQuestion, {{"src", entity_text(graph, triple.src)},
                                                  {"tgt", entity_text(graph, triple.tgt)},
                                                  {"options", options_text}});
    item.candidates = std::move(distractors);
    if (options.with_context) item.context = kg_context(graph, triple, options.context_sampler, seed);
    items.push_back(std::move(item));
  }
  return items;
}

std::optional<char> gold_letter(const EvalItem& item) {
  const auto gold = normalize_answer(item.gold);
  for (std::size_t k = 0; k < item.candidates.size(); ++k) {
    if (normalize_answer(item.candidates[k]) == gold) return static_cast<char>('A' + k);
  }
  return std::nullopt;
}

bool score_exact(std::string_view prediction, const EvalItem& item) {
  const auto pred = normalize_answer(prediction);
  if (pred == normalize_answer(item.gold)) return true;
  if (const auto letter = gold_letter(item)) {
    const char lower = static_cast<char>(*letter - 'A' + 'a');
    return pred == std::string(1, lower) || pred == std::string(1, lower) + ".";
  }
  return false;
}

JudgeVerdict score_judge(std::string_view prediction, const EvalItem& item, LlmClient& judge, int attempts) {
  JudgeVerdict verdict;
  if (normalize_answer(prediction) == normalize_answer(item.gold)) {
    verdict.correct = true;
    return verdict;
  }
  verdict.judged = true;
  const auto prompt =
      fill(PromptId::Judge, {{"question", item.question}, {"gold", item.gold}, {"prediction", std::string(prediction)}});
  for (int attempt = 0; attempt < attempts; ++attempt) {
    // A distinct seed per attempt keeps the retry out of the response cache.
    auto request = GenerationRequest::user(judge.config().model, prompt, 0.0, static_cast<std::uint64_t>(attempt));
    request.max_tokens = 8;
    if (const auto parsed = parse_verdict(judge.complete(request))) {
      verdict.correct = *parsed;
      return verdict;
    }
  }
  verdict.flagged = true;
  log_warn("judge gave no verdict for item " + item.id + "; marking it incorrect");
  return verdict;
}

std::string_view to_string(Scorer scorer) { return scorer == Scorer::Exact ? "exact" : "judge"; }

Scorer parse_scorer(std::string_view name) {
  if (name == "exact") return Scorer::Exact;
  if (name == "judge") return Scorer::Judge;
  throw ConfigError("unknown scorer '" + std::string(name) + "' (expected exact or judge)");
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j = {{"accuracy", accuracy},
                      {"correct", correct},
                      {"total", total},
                      {"avg_input_tokens", avg_input_tokens},
                      {"total_seconds", total_seconds},
                      {"with_context", with_context},
                      {"scorer", to_string(scorer)}};
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : verdicts) {
    nlohmann::json item = {{"id", v.id},           {"prediction", v.prediction},     {"correct", v.correct},
                           {"flagged", v.flagged}, {"input_tokens", v.input_tokens}, {"seconds", v.seconds}};
    if (!v.error.empty()) item["error"] = v.error;
    j["verdicts"].push_back(std::move(item));
  }
  return j;
}

std::string model_input(const EvalItem& item, bool with_context) {
  if (!with_context || !item.context || item.context->empty()) return item.question;
  return *item.context + "\n\n" + item.question;
}

EvalReport run_eval(std::span<const EvalItem> items, LlmClient& model, const EvalOptions& options,
                    const TokenCounter& counter, LlmClient* judge) {
  if (options.scorer == Scorer::Judge && judge == nullptr) throw ConfigError("judge scorer needs a judge endpoint");
  EvalReport report;
  report.with_context = options.with_context;
  report.scorer = options.scorer;
  report.total = items.size();
  report.verdicts.resize(items.size());

  std::vector<std::string> inputs;
  inputs.reserve(items.size());
  for (const auto& item : items) inputs.push_back(model_input(item, options.with_context));
  const auto tokens = counter.count_many(inputs);

  const int workers = options.workers > 0 ? options.workers : model.config().max_concurrency;
  parallel_for(items.size(), workers, [&](std::size_t i) {
    auto& v = report.verdicts[i];
    v.id = items[i].id;
    v.input_tokens = tokens[i];
    auto request = GenerationRequest::user(model.config().model, inputs[i], 0.0);
    request.max_tokens = model.config().max_tokens;
    try {
      const auto start = std::chrono::steady_clock::now();
      v.prediction = model.complete(request);
      v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } catch (const Error& e) {
      v.error = e.what();
      return;
    }
    try {
      if (options.scorer == Scorer::Exact) {
        v.correct = score_exact(v.prediction, items[i]);
      } else {
        const auto verdict = score_judge(v.prediction, items[i], *judge);
        v.correct = verdict.correct;
        v.flagged = verdict.flagged;
      }
    } catch (const Error& e) {
      v.flagged = true;
      v.error = std::string("judge: ") + e.what();
    }
  });

  std::size_t token_sum = 0;
  for (const auto& v : report.verdicts) {
    report.correct += v.correct ? 1 : 0;
    report.total_seconds += v.seconds;
    token_sum += v.input_tokens;
  }
  if (report.total) {
    report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
    report.avg_input_tokens = static_cast<double>(token_sum) / static_cast<double>(report.total);
  }
  return report;
}

std::vector<EvalItem> load_eval_items(const std::filesystem::path& path) {
  std::vector<EvalItem> items;
  std::size_t line_no = 0;
  const auto content = read_file(path);
  for (auto line : split(content, "\n")) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      items.push_back(EvalItem::from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, path.string() + ": " + e.what());
    }
  }
  return items;
}

void save_eval_items(std::span<const EvalItem> items, const std::filesystem::path& path) {
  std::string out;
  for (const auto& item : items) {
    out += item.to_json().dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace grip
