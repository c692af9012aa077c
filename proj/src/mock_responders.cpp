// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/mock_responders.hpp"

#include <vector>

#include "grip/prompts.hpp"
#include "grip/util.hpp"

namespace grip::mock {
namespace {

std::string_view first_line(std::string_view s) { return s.substr(0, s.find('\n')); }

bool is_prompt(std::string_view prompt, PromptId id) { return prompt.starts_with(first_line(prompt_text(id))); }

/// Text between `open` and the next `close` (or the end).
std::string_view between(std::string_view s, std::string_view open, std::string_view close) {
  auto a = s.find(open);
  if (a == std::string_view::npos) return {};
  a += open.size();
  const auto b = s.find(close, a);
  return trim(s.substr(a, b == std::string_view::npos ? std::string_view::npos : b - a));
}

std::string collapse(std::string_view s) {
  std::string out;
  for (auto word : split(s, " ")) {
    for (auto piece : split(word, "\n")) {
      if (trim(piece).empty()) continue;
      if (!out.empty()) out += ' ';
      out += trim(piece);
    }
  }
  return out;
}

std::string without_period(std::string_view s) {
  s = trim(s);
  if (s.ends_with('.')) s.remove_suffix(1);
  return std::string(s);
}

/// Context clauses in prompt order; a context without any yields one filler clause.
std::vector<std::string> clauses(std::string_view context) {
  std::vector<std::string> out;
  const auto text = without_period(context);
  for (auto c : split(text, "; ")) {
    if (!trim(c).empty()) out.emplace_back(trim(c));
  }
  if (out.empty()) out.emplace_back("nothing is known");
  return out;
}

std::string reasoning_pairs(const std::vector<std::string>& facts, bool yes_no, bool referred) {
  const auto& a = facts.front();
  const auto& b = facts.back();
  std::string out = "Evidence: " + a + ".\n";
  if (referred) out += "Referred question: What holds here? ";
  if (yes_no) {
    out += "Question: Is it true that " + a + " and that " + b + "? Answer: yes <|> ";
  } else {
    out += "Question: Which fact opens the snippets? Answer: " + a + " <|> ";
  }
  if (referred) out += "Referred question: What else holds? ";
  out += "Question: Which fact closes the snippets? Answer: " + b;
  return out;
}

std::string respond(const GenerationRequest& request) {
  const auto prompt = request.prompt();
  if (is_prompt(prompt, PromptId::Summary)) {
    const auto context = collapse(between(prompt, "The text snippets are provided below:", "\nPlease answer"));
    return "Summary: " + without_period(context) + ".";
  }
  if (is_prompt(prompt, PromptId::Rephrase)) {
    const auto context =
        collapse(between(prompt, "The text snippets are provided below:", "\nThe summary is provided below:"));
    return "Summary: In other words, " + without_period(context) + ".";
  }
  if (is_prompt(prompt, PromptId::NodeQa)) {
    const auto sentence = without_period(between(prompt, "Here is the sentence:", "\nPlease provide"));
    return "Question: Which entity does the sentence describe?. Answer: " + sentence + ".";
  }
  if (is_prompt(prompt, PromptId::KShotQa)) {
    return reasoning_pairs(clauses(between(prompt, "text snippets are provided below:", "\nSampled questions")), false,
                           true);
  }
  // Multi-hop, global and binary prompts share their first line.
  if (is_prompt(prompt, PromptId::MultiHopQa)) {
    const auto facts = clauses(between(prompt, "text snippets are provided below:", "\nPlease first"));
    return reasoning_pairs(facts, prompt.find("“yes” or “no”") != std::string::npos, false);
  }
  if (is_prompt(prompt, PromptId::EdgeQaRephrase)) {
    const auto question = between(prompt, "The question is provided below:", "\nThe answer is provided below:");
    const auto answer = between(prompt, "The answer is provided below:", "\nPlease answer");
    return "Question: Put differently, " + std::string(question) + " Answer: " + std::string(answer);
  }
  return "I cannot help with that.";
}

}  // namespace

MockChatBackend::Responder cooperative() { return respond; }

MockChatBackend::Responder judge() {
  return [](const GenerationRequest& request) -> std::string {
    const auto prompt = request.prompt();
    const auto gold = between(prompt, "Reference answer:", "\nModel answer:");
    const auto prediction = between(prompt, "Model answer:", "\nReply with");
    return normalize_answer(gold) == normalize_answer(prediction) ? "EQUIVALENT" : "NOT_EQUIVALENT";
  };
}

MockChatBackend::Responder oracle(std::map<std::string, std::string> gold_by_question) {
  return [gold = std::move(gold_by_question)](const GenerationRequest& request) -> std::string {
    const auto prompt = request.prompt();
    if (auto it = gold.find(prompt); it != gold.end()) return it->second;
    if (const auto cut = prompt.find("\n\n"); cut != std::string::npos) {
      if (auto it = gold.find(prompt.substr(cut + 2)); it != gold.end()) return it->second;
    }
    return "unknown";
  };
}

MockChatBackend::Responder random_choice(std::uint64_t seed) {
  return [seed](const GenerationRequest& request) -> std::string {
    const auto prompt = request.prompt();
    std::vector<std::string> options;
    for (auto line : split(prompt, "\n")) {
      if (line.size() >= 3 && line[0] >= 'A' && line[0] <= 'J' && line.substr(1, 2) == ". ") {
        options.emplace_back(line.substr(3));
      }
    }
    if (options.empty()) return "unknown";
    Rng rng(derive_seed(seed, sha256_hex(prompt)));
    return options[static_cast<std::size_t>(rng.below(options.size()))];
  };
}

}  // namespace grip::mock
