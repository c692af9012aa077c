// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// grip: graph statistics, task generation, corpus checks and evaluation.

#include <cstdio>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "grip/config.hpp"
#include "grip/corpus.hpp"
#include "grip/eval.hpp"
#include "grip/mock_responders.hpp"
#include "grip/serializer.hpp"
#include "grip/taskgen.hpp"
#include "grip/util.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kBudget = 3, kTransport = 4 };

struct GraphArgs {
  std::string config;
  std::string graph;
  std::string format = "graph-json";
  std::string nodes;
};

void add_graph_args(CLI::App* cmd, GraphArgs& args) {
  cmd->add_option("-c,--config", args.config, "pipeline config (JSON)");
  cmd->add_option("-g,--graph", args.graph, "graph file, instead of the one in the config");
  cmd->add_option("--format", args.format, "graph-json or triples-tsv (with --graph)");
  cmd->add_option("--nodes", args.nodes, "node text sidecar for triples-tsv (with --graph)");
}

grip::PipelineConfig config_from(const std::string& path) {
  if (path.empty()) return grip::pipeline_config_from_json(nlohmann::json::object(), {});
  return grip::load_pipeline_config(path);
}

grip::TextAttributedGraph load(const GraphArgs& args) {
  grip::GraphSource source;
  if (!args.graph.empty()) {
    source.path = args.graph;
    source.format = grip::parse_graph_format(args.format);
    if (!args.nodes.empty()) source.node_sidecar = args.nodes;
  } else if (!args.config.empty()) {
    source = grip::load_pipeline_config(args.config).graph;
  } else {
    throw grip::ConfigError("give --graph or --config");
  }
  if (!std::filesystem::exists(source.path)) throw grip::ConfigError("graph not found: " + source.path.string());
  return grip::load_graph(source.path, source.format, {source.node_sidecar, source.title});
}

void apply_seed(grip::PipelineConfig& config, std::optional<std::uint64_t> seed) {
  if (!seed) return;
  config.seed = *seed;
  config.taskgen.seed = *seed;
  config.eval.context_sampler.seed = *seed;
}

std::shared_ptr<grip::ChatBackend> backend_for(const grip::ClientConfig& config) {
  return std::make_shared<grip::HttpChatBackend>(config);
}

int cmd_stats(const GraphArgs& args) {
  const auto graph = load(args);
  const auto counter = args.config.empty() ? grip::TokenCounter::whitespace() : config_from(args.config).make_counter();
  const auto index = grip::serialize_edge_with_index(graph, counter);
  const auto list = grip::serialize_edge_list(graph, counter);
  const auto& s = index.stats;
  std::printf("graph      %s\n", graph.title().c_str());
  std::printf("n          %zu\nm          %zu\nd          %.4f\nt_n        %.4f\nt_e        %.4f\n", s.n, s.m, s.d, s.t_n,
              s.t_e);
  std::printf("edge-with-index  exact %zu (bodies %zu)  theoretical %.2f\n", index.stats.exact_total,
              index.stats.body_total(),
              grip::theoretical_token_cost(s.n, s.d, s.t_n, s.t_e, grip::SerializationMethod::EdgeWithIndex));
  std::printf("edge-list        exact %zu  theoretical %.2f\n", list.stats.exact_total,
              grip::theoretical_token_cost(s.n, s.d, s.t_n, s.t_e, grip::SerializationMethod::EdgeList));
  return kOk;
}

int cmd_serialize(const GraphArgs& args, const std::string& method, const std::string& out) {
  const auto graph = load(args);
  const auto text = grip::serialize(graph, grip::parse_serialization_method(method), grip::TokenCounter::whitespace()).text;
  if (out.empty()) {
    std::cout << text << '\n';
  } else {
    grip::write_file_atomic(out, text + "\n");
  }
  return kOk;
}

void print_counts(const std::vector<grip::FamilyCount>& counts) {
  std::printf("%-14s %10s %10s\n", "family", "produced", "target");
  for (const auto& c : counts) std::printf("%-14s %10zu %10zu\n", c.family.c_str(), c.produced, c.target);
}

int cmd_gen(const std::string& config_path, bool mock, const std::string& out, std::optional<std::uint64_t> seed) {
  auto config = config_from(config_path);
  apply_seed(config, seed);
  if (!out.empty()) config.output_dir = out;
  config.check_paths();
  const auto graph = grip::load_graph(config.graph.path, config.graph.format, {config.graph.node_sidecar, config.graph.title});

  std::vector<grip::QAPair> train_qa;
  if (config.taskgen.train_qa_path) train_qa = grip::load_train_qa(*config.taskgen.train_qa_path);

  auto backend = mock ? std::shared_ptr<grip::ChatBackend>(std::make_shared<grip::MockChatBackend>(grip::mock::cooperative()))
                      : backend_for(config.generator);
  grip::LlmClient client(backend, config.generator);
  const auto metadata = grip::metadata_for(graph, config.to_json());
  try {
    const auto result = grip::generate_all(graph, config.taskgen, client, train_qa);
    grip::emit(result.records, config.output_dir, metadata);
    print_counts(result.counts);
    std::printf("wrote %zu records to %s (%zu upstream calls, %zu cache hits)\n", result.records.size(),
                config.output_dir.string().c_str(), client.upstream_calls(), client.cache_hits());
    return kOk;
  } catch (const grip::GenerationBudgetExceeded& e) {
    const auto partial = config.output_dir / "partial";
    grip::emit(e.partial(), partial, metadata);
    std::fprintf(stderr, "error: %s\npartial corpus written to %s\n", e.what(), partial.string().c_str());
    return kBudget;
  }
}

int cmd_verify(const std::string& dir) {
  const auto manifest = grip::load_manifest(std::filesystem::path(dir) / "manifest.json");
  const auto report = grip::verify(manifest, dir);
  std::printf("%s\n", report.summary().c_str());
  return report.ok() ? kOk : kValidation;
}

std::vector<grip::EvalItem> items_from_config(const grip::PipelineConfig& config, const std::string& test_override,
                                              bool with_context) {
  const std::filesystem::path test = test_override.empty() ? config.eval.test_triples.value_or("") : std::filesystem::path(test_override);
  if (test.empty()) throw grip::ConfigError("no eval items: set eval.items or eval.test_triples, or pass --items/--test");
  if (!std::filesystem::exists(test)) throw grip::ConfigError("test triples not found: " + test.string());
  const auto graph = grip::load_graph(config.graph.path, config.graph.format, {config.graph.node_sidecar, config.graph.title});
  const auto triples = grip::load_triples(test);
  auto vocab = grip::relation_vocab(graph);
  for (const auto& t : triples) vocab.push_back(t.rel);
  grip::KgEvalOptions options;
  options.seed = config.seed;
  options.with_context = with_context;
  options.context_sampler = config.eval.context_sampler;
  return grip::build_kg_eval_items(graph, triples, vocab, options);
}

int cmd_make_items(const std::string& config_path, const std::string& test, bool with_context,
                   std::optional<std::uint64_t> seed, const std::string& out) {
  auto config = config_from(config_path);
  apply_seed(config, seed);
  config.check_paths();
  const auto items = items_from_config(config, test, with_context || config.eval.with_context);
  grip::save_eval_items(items, out);
  std::printf("wrote %zu items to %s\n", items.size(), out.c_str());
  return kOk;
}

struct EvalArgs {
  std::string config;
  std::string items;
  std::string test;
  std::string mock;
  bool with_context = false;
  std::string scorer;
  std::string counter;
  std::optional<std::uint64_t> seed;
  std::string report;
};

int cmd_eval(const EvalArgs& args) {
  auto config = config_from(args.config);
  apply_seed(config, args.seed);
  if (!args.counter.empty()) config.counter = grip::parse_counter_mode(args.counter);
  if (!args.scorer.empty()) config.eval.scorer = grip::parse_scorer(args.scorer);
  const bool with_context = args.with_context || config.eval.with_context;
  config.validate();

  std::vector<grip::EvalItem> items;
  if (!args.items.empty()) {
    items = grip::load_eval_items(args.items);
  } else if (config.eval.items && args.test.empty()) {
    items = grip::load_eval_items(*config.eval.items);
  } else {
    config.check_paths();
    items = items_from_config(config, args.test, with_context);
  }

  std::shared_ptr<grip::ChatBackend> model_backend;
  std::shared_ptr<grip::ChatBackend> judge_backend;
  if (args.mock == "oracle") {
    std::map<std::string, std::string> gold;
    for (const auto& item : items) gold[item.question] = item.gold;
    model_backend = std::make_shared<grip::MockChatBackend>(grip::mock::oracle(std::move(gold)));
  } else if (args.mock == "random") {
    model_backend = std::make_shared<grip::MockChatBackend>(grip::mock::random_choice(config.seed));
  } else if (args.mock.empty()) {
    model_backend = backend_for(config.model);
  } else {
    throw grip::ConfigError("--mock takes oracle or random");
  }
  const auto judge_config = config.judge.value_or(config.model);
  if (config.eval.scorer == grip::Scorer::Judge) {
    judge_backend = args.mock.empty() ? backend_for(judge_config)
                                      : std::make_shared<grip::MockChatBackend>(grip::mock::judge());
  }
  grip::LlmClient model(model_backend, config.model);
  std::optional<grip::LlmClient> judge;
  if (judge_backend) judge.emplace(judge_backend, judge_config);

  grip::EvalOptions options;
  options.scorer = config.eval.scorer;
  options.with_context = with_context;
  const auto report = grip::run_eval(items, model, options, config.make_counter(), judge ? &*judge : nullptr);

  auto j = report.to_json();
  j["config"] = config.to_json();
  j["seed"] = config.seed;
  const std::filesystem::path report_path =
      !args.report.empty() ? std::filesystem::path(args.report) : config.output_dir / config.eval.report;
  if (report_path.has_parent_path()) std::filesystem::create_directories(report_path.parent_path());
  grip::write_file_atomic(report_path, j.dump(2) + "\n");
  std::size_t failed = 0;
  for (const auto& v : report.verdicts) failed += v.error.empty() ? 0 : 1;
  std::printf("accuracy %.4f (%zu/%zu)  avg input tokens %.2f  inference %.3f s  context %s  scorer %s\n",
              report.accuracy, report.correct, report.total, report.avg_input_tokens, report.total_seconds,
              report.with_context ? "yes" : "no", std::string(grip::to_string(report.scorer)).c_str());
  if (failed) std::printf("%zu item(s) failed to get a prediction\n", failed);
  std::printf("report written to %s\n", report_path.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grip: task generation and evaluation for in-parameter graph reasoning"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress warnings");

  GraphArgs stats_args;
  auto* stats = app.add_subcommand("stats", "token statistics and serialization costs");
  add_graph_args(stats, stats_args);

  GraphArgs ser_args;
  std::string method = "edge-list";
  std::string ser_out;
  auto* ser = app.add_subcommand("serialize", "render a graph as text");
  add_graph_args(ser, ser_args);
  ser->add_option("-m,--method", method, "edge-list or edge-with-index");
  ser->add_option("-o,--out", ser_out, "output file (default stdout)");

  std::string gen_config;
  std::string gen_out;
  bool gen_mock = false;
  std::optional<std::uint64_t> gen_seed;
  auto* gen = app.add_subcommand("gen", "generate the fine-tuning corpus");
  gen->add_option("-c,--config", gen_config, "pipeline config (JSON)")->required();
  gen->add_option("-o,--out", gen_out, "output directory (overrides output_dir)");
  gen->add_flag("--mock", gen_mock, "use the offline generator instead of the endpoint");
  gen->add_option("--seed", gen_seed, "override every seed");

  std::string verify_dir;
  auto* verify = app.add_subcommand("emit-verify", "check a corpus against its manifest");
  verify->add_option("dir", verify_dir, "corpus directory")->required();

  std::string items_config;
  std::string items_test;
  std::string items_out = "items.jsonl";
  bool items_context = false;
  std::optional<std::uint64_t> items_seed;
  auto* make_items = app.add_subcommand("make-eval-items", "build 10-way relation items from test triples");
  make_items->add_option("-c,--config", items_config, "pipeline config (JSON)")->required();
  make_items->add_option("--test", items_test, "test triples (overrides eval.test_triples)");
  make_items->add_flag("--with-context", items_context, "attach entity-centred subgraph context");
  make_items->add_option("--seed", items_seed, "override every seed");
  make_items->add_option("-o,--out", items_out, "items file (JSONL)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "query the model and score its answers");
  eval->add_option("-c,--config", eval_args.config, "pipeline config (JSON)");
  eval->add_option("--items", eval_args.items, "items file (JSONL)");
  eval->add_option("--test", eval_args.test, "test triples, built into items on the fly");
  eval->add_option("--mock", eval_args.mock, "offline model: oracle or random")->check(CLI::IsMember({"oracle", "random"}));
  eval->add_flag("--with-context", eval_args.with_context, "prepend each item's graph context");
  eval->add_option("--scorer", eval_args.scorer, "exact or judge")->check(CLI::IsMember({"exact", "judge"}));
  eval->add_option("--counter", eval_args.counter, "whitespace or endpoint")
      ->check(CLI::IsMember({"whitespace", "endpoint"}));
  eval->add_option("--seed", eval_args.seed, "override every seed");
  eval->add_option("--report", eval_args.report, "report path (default <output_dir>/eval_report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  grip::set_log_quiet(quiet);

  try {
    if (*stats) return cmd_stats(stats_args);
    if (*ser) return cmd_serialize(ser_args, method, ser_out);
    if (*gen) return cmd_gen(gen_config, gen_mock, gen_out, gen_seed);
    if (*verify) return cmd_verify(verify_dir);
    if (*make_items) return cmd_make_items(items_config, items_test, items_context, items_seed, items_out);
    if (*eval) return cmd_eval(eval_args);
  } catch (const grip::GenerationBudgetExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBudget;
  } catch (const grip::TransportError& e) {
    std::fprintf(stderr, "transport error: %s\n", e.what());
    return kTransport;
  } catch (const grip::EndpointError& e) {
    std::fprintf(stderr, "endpoint error: %s\n", e.what());
    return kTransport;
  } catch (const grip::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  }
  return kUsage;
}
