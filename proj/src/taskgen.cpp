// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/taskgen.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <functional>

#include "grip/prompts.hpp"
#include "grip/serializer.hpp"
#include "grip/util.hpp"

namespace grip {
namespace {

constexpr std::string_view kSeparator = "<|>";
constexpr std::string_view kQuestionMarker = "Question:";
constexpr std::string_view kAnswerMarker = "Answer:";
constexpr std::string_view kSummaryMarker = "Summary:";

std::string padded(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", i);
  return buf;
}

/// Removes one layer of matching straight or curly quotes.
std::string_view strip_quotes(std::string_view s) {
  s = trim(s);
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 4> pairs{{
      {"\"", "\""}, {"'", "'"}, {"\xE2\x80\x9C", "\xE2\x80\x9D"}, {"\xE2\x80\x98", "\xE2\x80\x99"}}};
  for (const auto& [open, close] : pairs) {
    if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close)) {
      return trim(s.substr(open.size(), s.size() - open.size() - close.size()));
    }
  }
  return s;
}

std::string clean_question(std::string_view q) {
  q = trim(q);
  // "Question: [question]. Answer:" leaves a period behind a quoted question.
  for (std::string_view close : {"\"", "'", "\xE2\x80\x9D", "\xE2\x80\x99"}) {
    if (q.size() > close.size() + 1 && q.ends_with('.') && q.substr(0, q.size() - 1).ends_with(close)) {
      q.remove_suffix(1);
      break;
    }
  }
  q = strip_quotes(q);
  // "Question: [question]. Answer:" leaves "...?." behind.
  if (q.ends_with("?.")) q.remove_suffix(1);
  return std::string(trim(q));
}

std::string clean_answer(std::string_view a) {
  a = strip_quotes(a);
  if (a.ends_with('.')) a.remove_suffix(1);
  return std::string(strip_quotes(a));
}

std::string without_trailing_period(std::string_view s) {
  s = trim(s);
  if (s.ends_with('.')) s.remove_suffix(1);
  return std::string(trim(s));
}

std::vector<std::string> node_ids(const TextAttributedGraph& graph, std::span<const std::size_t> nodes) {
  std::vector<std::string> ids;
  ids.reserve(nodes.size());
  for (auto v : nodes) ids.push_back(graph.nodes()[v].id);
  return ids;
}

std::string node_context_text(const TextAttributedGraph& graph, std::size_t v) {
  return fill(TemplateId::NodeContext, {{"title", graph.title()}, {"node", graph.nodes()[v].text}});
}

std::string edge_context_text(const TextAttributedGraph& graph, std::size_t e) {
  const auto& edge = graph.edges()[e];
  return fill(TemplateId::EdgeContext, {{"title", graph.title()},
                                        {"src", graph.nodes()[graph.src_index(e)].text},
                                        {"rel", edge.rel},
                                        {"tgt", graph.nodes()[graph.tgt_index(e)].text}});
}

/// A prompt to send until its response parses, with the base seed of its resamples.
struct Job {
  std::string prompt;
  std::uint64_t seed = 0;
};

/// Sends every job, resampling malformed responses up to max_parse_retries
/// times with fresh seeds. Unparseable jobs come back as nullopt; transport
/// and endpoint errors propagate.
template <class T>
std::vector<std::optional<T>> run_jobs(LlmClient& client, const TaskGenConfig& config, const std::vector<Job>& jobs,
                                       const std::function<T(const std::string&)>& parse, std::string_view what) {
  std::vector<std::optional<T>> results(jobs.size());
  std::vector<std::string> last_error(jobs.size());
  std::vector<std::size_t> pending(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) pending[i] = i;

  for (int attempt = 0; attempt <= config.max_parse_retries && !pending.empty(); ++attempt) {
    std::vector<GenerationRequest> requests;
    requests.reserve(pending.size());
    for (auto i : pending) {
      auto request = GenerationRequest::user(client.config().model, jobs[i].prompt, config.temperature,
                                             derive_seed(jobs[i].seed, "attempt", static_cast<std::uint64_t>(attempt)));
      request.max_tokens = client.config().max_tokens;
      requests.push_back(std::move(request));
    }
    const auto responses = client.complete_batch(requests);
    std::vector<std::size_t> still_pending;
    for (std::size_t r = 0; r < responses.size(); ++r) {
      const auto i = pending[r];
      // The client has already retried transport failures; they are not
      // malformed generations and abort the run.
      if (!responses[r].ok()) std::rethrow_exception(responses[r].exception);
      try {
        results[i] = parse(*responses[r].text);
      } catch (const ParseFailure& e) {
        last_error[i] = e.what();
        still_pending.push_back(i);
      }
    }
    pending = std::move(still_pending);
  }
  for (auto i : pending) {
    log_warn("dropping " + std::string(what) + " #" + std::to_string(i) + " after " +
             std::to_string(config.max_parse_retries + 1) + " attempt(s): " + last_error[i]);
  }
  return results;
}

void check_budget(std::string_view family, std::size_t failed, std::size_t target, const TaskGenConfig& config,
                  std::vector<TaskRecord>& produced) {
  if (target == 0 || failed == 0) return;
  const auto fraction = static_cast<double>(failed) / static_cast<double>(target);
  if (fraction > config.max_failure_fraction) {
    throw GenerationBudgetExceeded(std::string(family), failed, target, std::move(produced));
  }
  log_warn(std::string(family) + ": " + std::to_string(failed) + " of " + std::to_string(target) +
           " targets dropped");
}

std::vector<std::size_t> sample_roots(const TextAttributedGraph& graph, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> roots;
  if (graph.node_count() == 0) {
    if (count) log_warn("graph has no nodes; no subgraphs sampled");
    return roots;
  }
  // Roots are drawn with replacement.
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) roots.push_back(static_cast<std::size_t>(rng.below(graph.node_count())));
  return roots;
}

Subgraph sample_for(const TextAttributedGraph& graph, std::size_t root, const TaskGenConfig& config,
                    std::uint64_t seed) {
  auto sub_config = config.subgraph;
  sub_config.seed = seed;
  return sample_subgraph(graph, root, sub_config);
}

TaskRecord stage2_record(TaskKind kind, std::string question, std::string answer, Provenance provenance) {
  TaskRecord r;
  r.stage = Stage::Stage2;
  r.kind = kind;
  r.user_text = std::move(question);
  r.answer_text = std::move(answer);
  r.provenance = std::move(provenance);
  return r;
}

PromptId prompt_for(QaType type) {
  switch (type) {
    case QaType::MultiHop: return PromptId::MultiHopQa;
    case QaType::Global: return PromptId::GlobalQa;
    case QaType::Binary: return PromptId::BinaryQa;
    case QaType::KShot: return PromptId::KShotQa;
    default: throw Error("not a reasoning QA type: " + std::string(to_string(type)));
  }
}

}  // namespace

// --- names -------------------------------------------------------------------

std::string_view to_string(Stage stage) { return stage == Stage::Stage1 ? "stage1" : "stage2"; }

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::NodeContext: return "node-context";
    case TaskKind::EdgeContext: return "edge-context";
    case TaskKind::Summary: return "summary";
    case TaskKind::NodeQa: return "node-qa";
    case TaskKind::EdgeQa: return "edge-qa";
    case TaskKind::ReasoningQa: return "reasoning-qa";
  }
  return {};
}

std::string_view to_string(QaType type) {
  switch (type) {
    case QaType::MultiHop: return "multi-hop";
    case QaType::Global: return "global";
    case QaType::Binary: return "binary";
    case QaType::KShot: return "k-shot";
    case QaType::Node: return "node";
    case QaType::EdgeSrc: return "edge-src";
    case QaType::EdgeRel: return "edge-rel";
    case QaType::EdgeTgt: return "edge-tgt";
  }
  return {};
}

std::string_view to_string(EdgeMask mask) {
  switch (mask) {
    case EdgeMask::Src: return "src";
    case EdgeMask::Rel: return "rel";
    case EdgeMask::Tgt: return "tgt";
  }
  return {};
}

TaskKind parse_task_kind(std::string_view name) {
  for (auto k : {TaskKind::NodeContext, TaskKind::EdgeContext, TaskKind::Summary, TaskKind::NodeQa, TaskKind::EdgeQa,
                 TaskKind::ReasoningQa}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError(0, "unknown task kind '" + std::string(name) + "'");
}

QaType parse_qa_type(std::string_view name) {
  for (auto t : {QaType::MultiHop, QaType::Global, QaType::Binary, QaType::KShot, QaType::Node, QaType::EdgeSrc,
                 QaType::EdgeRel, QaType::EdgeTgt}) {
    if (to_string(t) == name) return t;
  }
  throw ParseError(0, "unknown QA type '" + std::string(name) + "'");
}

Stage stage_of(TaskKind kind) {
  switch (kind) {
    case TaskKind::NodeContext:
    case TaskKind::EdgeContext:
    case TaskKind::Summary:
      return Stage::Stage1;
    default:
      return Stage::Stage2;
  }
}

// --- records -----------------------------------------------------------------

nlohmann::json Provenance::to_json() const {
  nlohmann::json j = {{"record_id", record_id}, {"source", source},       {"node_ids", node_ids},
                      {"edge_indices", edge_indices}, {"prompt_id", prompt_id}, {"seed", seed}};
  if (qa_type) j["qa_type"] = *qa_type;
  return j;
}

Provenance Provenance::from_json(const nlohmann::json& j) {
  Provenance p;
  p.record_id = j.at("record_id").get<std::string>();
  p.source = j.value("source", "");
  p.node_ids = j.value("node_ids", std::vector<std::string>{});
  p.edge_indices = j.value("edge_indices", std::vector<std::size_t>{});
  p.prompt_id = j.value("prompt_id", "");
  p.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("qa_type")) p.qa_type = j["qa_type"].get<std::string>();
  return p;
}

void TaskRecord::validate() const {
  if (stage != stage_of(kind)) {
    throw Error("record " + provenance.record_id + ": kind " + std::string(to_string(kind)) + " belongs to " +
                std::string(to_string(stage_of(kind))));
  }
  if (stage == Stage::Stage1) {
    const bool plain = plain_text && !plain_text->empty();
    const bool chat = user_text && !user_text->empty() && !answer_text.empty();
    if (!plain && !chat) throw Error("stage1 record " + provenance.record_id + " has no text");
  } else if (!user_text || user_text->empty() || answer_text.empty()) {
    throw Error("stage2 record " + provenance.record_id + " needs question and answer");
  }
}

void TaskGenConfig::validate() const {
  if (k_shot < 1) throw ConfigError("k_shot must be >= 1");
  if (max_parse_retries < 0) throw ConfigError("max_parse_retries must be >= 0");
  if (!(temperature >= 0.0 && temperature <= 2.0)) throw ConfigError("temperature must be in [0, 2]");
  if (!(max_failure_fraction >= 0.0 && max_failure_fraction <= 1.0)) {
    throw ConfigError("max_failure_fraction must be in [0, 1]");
  }
  subgraph.validate();
}

nlohmann::json to_json(const TaskGenConfig& c) {
  nlohmann::json j = {{"n_summary", c.n_summary},
                      {"n_context", c.n_context},
                      {"n_reasoning", c.n_reasoning},
                      {"k_shot", c.k_shot},
                      {"rephrase_edge_qa", c.rephrase_edge_qa},
                      {"seed", c.seed},
                      {"subgraph", to_json(c.subgraph)},
                      {"max_parse_retries", c.max_parse_retries},
                      {"temperature", c.temperature},
                      {"max_failure_fraction", c.max_failure_fraction}};
  j["train_qa_path"] = c.train_qa_path ? nlohmann::json(c.train_qa_path->string()) : nlohmann::json(nullptr);
  return j;
}

TaskGenConfig taskgen_config_from_json(const nlohmann::json& j, TaskGenConfig c) {
  c.n_summary = j.value("n_summary", c.n_summary);
  c.n_context = j.value("n_context", c.n_context);
  c.n_reasoning = j.value("n_reasoning", c.n_reasoning);
  c.k_shot = j.value("k_shot", c.k_shot);
  c.rephrase_edge_qa = j.value("rephrase_edge_qa", c.rephrase_edge_qa);
  c.seed = j.value("seed", c.seed);
  if (j.contains("subgraph")) c.subgraph = subgraph_config_from_json(j["subgraph"], c.subgraph);
  c.max_parse_retries = j.value("max_parse_retries", c.max_parse_retries);
  c.temperature = j.value("temperature", c.temperature);
  c.max_failure_fraction = j.value("max_failure_fraction", c.max_failure_fraction);
  if (j.contains("train_qa_path")) {
    if (j["train_qa_path"].is_null()) c.train_qa_path.reset();
    else c.train_qa_path = j["train_qa_path"].get<std::string>();
  }
  c.validate();
  return c;
}

GenerationBudgetExceeded::GenerationBudgetExceeded(std::string family, std::size_t failed, std::size_t target,
                                                   std::vector<TaskRecord> partial)
    : Error(family + ": " + std::to_string(failed) + " of " + std::to_string(target) +
            " generation targets failed, over the allowed budget"),
      family_(std::move(family)),
      failed_(failed),
      target_(target),
      partial_(std::move(partial)) {}

// --- parsing -----------------------------------------------------------------

std::string parse_summary_response(std::string_view text) {
  const auto pos = text.rfind(kSummaryMarker);
  if (pos == std::string_view::npos) throw ParseFailure("response has no \"Summary:\" marker");
  auto payload = std::string(strip_quotes(text.substr(pos + kSummaryMarker.size())));
  if (payload.empty()) throw ParseFailure("empty summary");
  return payload;
}

std::vector<QAPair> parse_qa_response(std::string_view text, std::size_t expected) {
  const auto segments = split(text, kSeparator);
  if (segments.size() != expected) {
    throw ParseFailure("expected " + std::to_string(expected) + " QA pair(s) separated by <|>, found " +
                       std::to_string(segments.size()) + " segment(s)");
  }
  std::vector<QAPair> pairs;
  pairs.reserve(expected);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto seg = segments[i];
    const auto where = "pair " + std::to_string(i + 1) + ": ";
    const auto q = seg.find(kQuestionMarker);
    if (q == std::string_view::npos) throw ParseFailure(where + "missing \"Question:\"");
    const auto a = seg.find(kAnswerMarker, q + kQuestionMarker.size());
    if (a == std::string_view::npos) throw ParseFailure(where + "missing \"Answer:\" after the question");
    if (seg.find(kQuestionMarker, q + 1) != std::string_view::npos) {
      throw ParseFailure(where + "more than one \"Question:\" marker");
    }
    if (seg.find(kAnswerMarker, a + 1) != std::string_view::npos || seg.substr(0, q).find(kAnswerMarker) != std::string_view::npos) {
      throw ParseFailure(where + "more than one \"Answer:\" marker");
    }
    QAPair pair;
    pair.question = clean_question(seg.substr(q + kQuestionMarker.size(), a - q - kQuestionMarker.size()));
    pair.answer = clean_answer(seg.substr(a + kAnswerMarker.size()));
    if (pair.question.empty()) throw ParseFailure(where + "empty question");
    if (pair.answer.empty()) throw ParseFailure(where + "empty answer");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::string render_qa_response(std::span<const QAPair> pairs, std::string_view evidence) {
  std::string out;
  if (!evidence.empty()) {
    out += evidence;
    out += '\n';
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += " <|> ";
    out += "Question: ";
    out += pairs[i].question;
    out += " Answer: ";
    out += pairs[i].answer;
  }
  return out;
}

// --- generators --------------------------------------------------------------

std::vector<TaskRecord> gen_context_records(const TextAttributedGraph& graph) {
  std::vector<TaskRecord> records;
  records.reserve(graph.node_count() + graph.edge_count());
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    TaskRecord r;
    r.stage = Stage::Stage1;
    r.kind = TaskKind::NodeContext;
    r.plain_text = node_context_text(graph, v);
    r.answer_text = *r.plain_text;
    r.provenance.record_id = "context/node/" + padded(v);
    r.provenance.source = "node";
    r.provenance.node_ids = {graph.nodes()[v].id};
    r.provenance.prompt_id = std::string(asset_name(TemplateId::NodeContext));
    records.push_back(std::move(r));
  }
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    TaskRecord r;
    r.stage = Stage::Stage1;
    r.kind = TaskKind::EdgeContext;
    r.plain_text = edge_context_text(graph, e);
    r.answer_text = *r.plain_text;
    r.provenance.record_id = "context/edge/" + padded(e);
    r.provenance.source = "edge";
    r.provenance.node_ids = {graph.edges()[e].src, graph.edges()[e].tgt};
    r.provenance.edge_indices = {e};
    r.provenance.prompt_id = std::string(asset_name(TemplateId::EdgeContext));
    records.push_back(std::move(r));
  }
  return records;
}

std::string subgraph_context(const TextAttributedGraph& graph, const Subgraph& subgraph) {
  const auto edges = induced_edges(graph, subgraph.nodes);
  const auto lonely = isolated_nodes(graph, subgraph.nodes, edges);
  return render_snippets(graph, edges, lonely);
}

std::vector<TaskRecord> gen_summaries(const TextAttributedGraph& graph, const TaskGenConfig& config, LlmClient& client) {
  config.validate();
  struct Target {
    std::string context;
    Provenance provenance;
  };
  std::vector<Target> targets;

  for (const auto v : sample_nodes(graph, config.n_summary, derive_seed(config.seed, "summary/nodes"))) {
    Provenance p;
    p.record_id = "summary/node/" + padded(targets.size());
    p.source = "node";
    p.node_ids = {graph.nodes()[v].id};
    const std::size_t lone[] = {v};
    targets.push_back({render_snippets(graph, {}, lone), std::move(p)});
  }
  for (const auto e : sample_edges(graph, config.n_summary, derive_seed(config.seed, "summary/edges"))) {
    Provenance p;
    p.record_id = "summary/edge/" + padded(targets.size());
    p.source = "edge";
    p.node_ids = {graph.edges()[e].src, graph.edges()[e].tgt};
    p.edge_indices = {e};
    const std::size_t one[] = {e};
    targets.push_back({render_snippets(graph, one), std::move(p)});
  }
  const auto roots = sample_roots(graph, config.n_summary, derive_seed(config.seed, "summary/roots"));
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto sub = sample_for(graph, roots[i], config, derive_seed(config.seed, "summary/subgraph", i));
    Provenance p;
    p.record_id = "summary/subgraph/" + padded(targets.size());
    p.source = "subgraph";
    p.node_ids = node_ids(graph, sub.nodes);
    p.edge_indices = induced_edges(graph, sub.nodes);
    targets.push_back({subgraph_context(graph, sub), std::move(p)});
  }

  std::vector<Job> summary_jobs;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    summary_jobs.push_back({fill(PromptId::Summary, {{"context", targets[i].context}}),
                            derive_seed(config.seed, "summary/generate", i)});
  }
  const std::function<std::string(const std::string&)> parse = parse_summary_response;
  const auto summaries = run_jobs(client, config, summary_jobs, parse, "summary");

  // The rephrasing prompt copes with a missing summary, so every target gets one.
  std::vector<Job> rephrase_jobs;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    rephrase_jobs.push_back({fill(PromptId::Rephrase, {{"context", targets[i].context},
                                                       {"summary", summaries[i].value_or("")}}),
                             derive_seed(config.seed, "summary/rephrase", i)});
  }
  const auto rephrased = run_jobs(client, config, rephrase_jobs, parse, "rephrased summary");

  std::vector<TaskRecord> records;
  std::size_t failed = 0;
  auto emit = [&](const std::optional<std::string>& text, const Target& target, PromptId prompt,
                  std::string_view variant, std::uint64_t seed) {
    if (!text) {
      ++failed;
      return;
    }
    TaskRecord r;
    r.stage = Stage::Stage1;
    r.kind = TaskKind::Summary;
    r.plain_text = fill(TemplateId::SummaryRecord, {{"title", graph.title()}, {"summary", without_trailing_period(*text)}});
    r.answer_text = *r.plain_text;
    r.provenance = target.provenance;
    r.provenance.record_id += "/";
    r.provenance.record_id += variant;
    r.provenance.prompt_id = std::string(asset_name(prompt));
    r.provenance.seed = seed;
    records.push_back(std::move(r));
  };
  for (std::size_t i = 0; i < targets.size(); ++i) {
    emit(summaries[i], targets[i], PromptId::Summary, "a-summary", summary_jobs[i].seed);
    emit(rephrased[i], targets[i], PromptId::Rephrase, "b-rephrase", rephrase_jobs[i].seed);
  }
  check_budget("summaries", failed, 2 * targets.size(), config, records);
  return records;
}

QAPair gen_edge_qa(std::string_view src_text, std::string_view rel, std::string_view tgt_text, EdgeMask mask) {
  const std::string src(src_text), relation(rel), tgt(tgt_text);
  switch (mask) {
    case EdgeMask::Src:
      return {fill(TemplateId::SrcPrompt, {{"rel", relation}, {"tgt", tgt}}), fill(TemplateId::SrcAnswer, {{"src", src}}),
              QaType::EdgeSrc};
    case EdgeMask::Rel:
      return {fill(TemplateId::RelPrompt, {{"src", src}, {"tgt", tgt}}), fill(TemplateId::RelAnswer, {{"rel", relation}}),
              QaType::EdgeRel};
    case EdgeMask::Tgt:
      return {fill(TemplateId::TgtPrompt, {{"rel", relation}, {"src", src}}), fill(TemplateId::TgtAnswer, {{"tgt", tgt}}),
              QaType::EdgeTgt};
  }
  throw Error("invalid edge mask");
}

QAPair gen_edge_qa(const TextAttributedGraph& graph, std::size_t edge, EdgeMask mask) {
  return gen_edge_qa(graph.nodes()[graph.src_index(edge)].text, graph.edges()[edge].rel,
                     graph.nodes()[graph.tgt_index(edge)].text, mask);
}

std::vector<TaskRecord> gen_context_qa(const TextAttributedGraph& graph, const TaskGenConfig& config, LlmClient& client) {
  config.validate();
  std::vector<TaskRecord> records;

  const auto nodes = sample_nodes(graph, config.n_context, derive_seed(config.seed, "context-qa/nodes"));
  std::vector<Job> node_jobs;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    node_jobs.push_back({fill(PromptId::NodeQa, {{"node", graph.nodes()[nodes[i]].text}}),
                         derive_seed(config.seed, "context-qa/node", i)});
  }
  const std::function<QAPair(const std::string&)> parse_one = [](const std::string& text) {
    return parse_qa_response(text, 1).front();
  };
  const auto node_pairs = run_jobs(client, config, node_jobs, parse_one, "node-level QA");
  std::size_t failed = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!node_pairs[i]) {
      ++failed;
      continue;
    }
    Provenance p;
    p.record_id = "context-qa/node/" + padded(i);
    p.source = "node";
    p.node_ids = {graph.nodes()[nodes[i]].id};
    p.prompt_id = std::string(asset_name(PromptId::NodeQa));
    p.seed = node_jobs[i].seed;
    p.qa_type = std::string(to_string(QaType::Node));
    records.push_back(stage2_record(TaskKind::NodeQa, node_pairs[i]->question, node_pairs[i]->answer, std::move(p)));
  }

  const auto edges = sample_edges(graph, config.n_context, derive_seed(config.seed, "context-qa/edges"));
  std::vector<QAPair> edge_pairs;
  std::vector<std::uint64_t> edge_seeds;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto seed = derive_seed(config.seed, "context-qa/edge", i);
    Rng rng(seed);
    const auto mask = static_cast<EdgeMask>(rng.below(3));
    edge_pairs.push_back(gen_edge_qa(graph, edges[i], mask));
    edge_seeds.push_back(seed);
  }
  std::vector<std::optional<QAPair>> rephrased(edges.size());
  if (config.rephrase_edge_qa && !edges.empty()) {
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      jobs.push_back({fill(PromptId::EdgeQaRephrase, {{"question", edge_pairs[i].question}, {"answer", edge_pairs[i].answer}}),
                      derive_seed(edge_seeds[i], "rephrase")});
    }
    rephrased = run_jobs(client, config, jobs, parse_one, "edge QA rephrase");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto e = edges[i];
    Provenance p;
    p.record_id = "context-qa/edge/" + padded(i);
    p.source = "edge";
    p.node_ids = {graph.edges()[e].src, graph.edges()[e].tgt};
    p.edge_indices = {e};
    p.seed = edge_seeds[i];
    p.qa_type = std::string(to_string(edge_pairs[i].type));
    auto question = edge_pairs[i].question;
    if (rephrased[i]) {
      // Keep the template answer: it is the ground-truth masked element.
      question = rephrased[i]->question;
      p.prompt_id = std::string(asset_name(PromptId::EdgeQaRephrase));
    } else {
      switch (edge_pairs[i].type) {
        case QaType::EdgeSrc: p.prompt_id = std::string(asset_name(TemplateId::SrcPrompt)); break;
        case QaType::EdgeRel: p.prompt_id = std::string(asset_name(TemplateId::RelPrompt)); break;
        default: p.prompt_id = std::string(asset_name(TemplateId::TgtPrompt)); break;
      }
    }
    records.push_back(stage2_record(TaskKind::EdgeQa, std::move(question), edge_pairs[i].answer, std::move(p)));
  }
  check_budget("context QA", failed, nodes.size() + edges.size(), config, records);
  return records;
}

std::vector<TaskRecord> gen_reasoning_qa(const TextAttributedGraph& graph, const TaskGenConfig& config,
                                         LlmClient& client, std::span<const QAPair> train_qa) {
  config.validate();
  std::vector<QaType> pool = {QaType::MultiHop, QaType::Global, QaType::Binary};
  if (!train_qa.empty()) pool.push_back(QaType::KShot);

  const auto roots = sample_roots(graph, config.n_reasoning, derive_seed(config.seed, "reasoning/roots"));
  std::vector<Job> jobs;
  std::vector<QaType> types;
  std::vector<Subgraph> subgraphs;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto seed = derive_seed(config.seed, "reasoning/subgraph", i);
    Rng rng(seed);
    const auto type = pool[static_cast<std::size_t>(rng.below(pool.size()))];
    auto sub = sample_for(graph, roots[i], config, derive_seed(seed, "expand"));
    const auto context = subgraph_context(graph, sub);
    std::string prompt;
    if (type == QaType::KShot) {
      std::vector<std::size_t> picks(train_qa.size());
      for (std::size_t t = 0; t < picks.size(); ++t) picks[t] = t;
      rng.partial_shuffle(picks, config.k_shot);
      picks.resize(std::min(config.k_shot, picks.size()));
      std::vector<std::string> lines;
      for (auto t : picks) lines.push_back("Question: " + train_qa[t].question + " Answer: " + train_qa[t].answer);
      prompt = fill(PromptId::KShotQa, {{"context", context}, {"sample questions", join(lines, "\n")}});
    } else {
      prompt = fill(prompt_for(type), {{"context", context}});
    }
    jobs.push_back({std::move(prompt), derive_seed(seed, "generate")});
    types.push_back(type);
    subgraphs.push_back(std::move(sub));
  }

  const std::function<std::vector<QAPair>(const std::string&)> parse_two = [](const std::string& text) {
    return parse_qa_response(text, 2);
  };
  const auto results = run_jobs(client, config, jobs, parse_two, "reasoning QA");

  std::vector<TaskRecord> records;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (!results[i]) {
      failed += 2;
      continue;
    }
    for (std::size_t k = 0; k < results[i]->size(); ++k) {
      const auto& pair = (*results[i])[k];
      Provenance p;
      p.record_id = "reasoning-qa/subgraph/" + padded(i) + "/" + std::to_string(k);
      p.source = "subgraph";
      p.node_ids = node_ids(graph, subgraphs[i].nodes);
      p.edge_indices = induced_edges(graph, subgraphs[i].nodes);
      p.prompt_id = std::string(asset_name(prompt_for(types[i])));
      p.seed = jobs[i].seed;
      p.qa_type = std::string(to_string(types[i]));
      records.push_back(stage2_record(TaskKind::ReasoningQa, pair.question, pair.answer, std::move(p)));
    }
  }
  check_budget("reasoning QA", failed, 2 * roots.size(), config, records);
  return records;
}

std::vector<QAPair> load_train_qa(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<QAPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      QAPair p{j.at("question").get<std::string>(), j.at("answer").get<std::string>(), QaType::KShot};
      if (trim(p.question).empty() || trim(p.answer).empty()) throw ParseError(line_no, "empty question or answer");
      pairs.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return pairs;
}

GenerationResult generate_all(const TextAttributedGraph& graph, const TaskGenConfig& config, LlmClient& client,
                              std::span<const QAPair> train_qa) {
  config.validate();
  GenerationResult result;
  auto append = [&result](std::vector<TaskRecord> records, std::string family, std::size_t target) {
    result.counts.push_back({std::move(family), records.size(), target});
    result.records.insert(result.records.end(), std::make_move_iterator(records.begin()),
                          std::make_move_iterator(records.end()));
  };
  auto run = [&](auto&& generate) {
    try {
      return generate();
    } catch (GenerationBudgetExceeded& e) {
      auto partial = result.records;
      partial.insert(partial.end(), e.partial().begin(), e.partial().end());
      throw GenerationBudgetExceeded(e.family(), e.failed(), e.target(), std::move(partial));
    }
  };

  append(gen_context_records(graph), "context", graph.node_count() + graph.edge_count());
  append(run([&] { return gen_summaries(graph, config, client); }), "summary", 6 * config.n_summary);
  append(run([&] { return gen_context_qa(graph, config, client); }), "context-qa", 2 * config.n_context);
  append(run([&] { return gen_reasoning_qa(graph, config, client, train_qa); }), "reasoning-qa",
         2 * config.n_reasoning);
  return result;
}

}  // namespace grip
