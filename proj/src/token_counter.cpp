// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/token_counter.hpp"

#include <cctype>
#include <cstdlib>

#include <json.hpp>

#include "grip/errors.hpp"
#include "http_util.hpp"

namespace grip {

CounterMode parse_counter_mode(std::string_view name) {
  if (name == "whitespace") return CounterMode::Whitespace;
  if (name == "endpoint" || name == "external-endpoint") return CounterMode::Endpoint;
  throw ConfigError("unknown counter mode '" + std::string(name) + "' (expected whitespace or endpoint)");
}

std::string_view to_string(CounterMode mode) { return mode == CounterMode::Whitespace ? "whitespace" : "endpoint"; }

std::size_t count_whitespace_tokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

TokenCounter::TokenCounter(CounterEndpoint endpoint) : mode_(CounterMode::Endpoint), endpoint_(std::move(endpoint)) {
  if (endpoint_.url.empty()) throw ConfigError("token counter endpoint url is empty");
}

std::size_t TokenCounter::count(std::string_view text) const {
  if (mode_ == CounterMode::Whitespace) return count_whitespace_tokens(text);
  if (text.empty()) return 0;
  const std::string owned(text);
  return count_many(std::span<const std::string>(&owned, 1)).front();
}

std::vector<std::size_t> TokenCounter::count_many(std::span<const std::string> texts) const {
  std::vector<std::size_t> counts;
  counts.reserve(texts.size());
  if (mode_ == CounterMode::Whitespace || texts.empty()) {
    for (const auto& t : texts) counts.push_back(count_whitespace_tokens(t));
    return counts;
  }

  const nlohmann::json body = {{"texts", texts}};
  const auto response = detail::post_json(endpoint_.url, body.dump(), endpoint_.api_key_env, endpoint_.timeout);
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(response);
    for (const auto& c : parsed.at("counts")) counts.push_back(c.get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw EndpointError(200, std::string("malformed tokenize response: ") + e.what());
  }
  if (counts.size() != texts.size()) {
    throw EndpointError(200, "tokenize endpoint returned " + std::to_string(counts.size()) + " counts for " +
                                 std::to_string(texts.size()) + " texts");
  }
  // An empty text costs nothing regardless of what the tokenizer adds.
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) counts[i] = 0;
  }
  return counts;
}

}  // namespace grip
