// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace grip {

enum class CounterMode { Whitespace, Endpoint };

CounterMode parse_counter_mode(std::string_view name);
std::string_view to_string(CounterMode mode);

/// Endpoint mode: POST {"texts": [...]} to `url`, expects {"counts": [...]}.
struct CounterEndpoint {
  std::string url;
  std::string api_key_env;
  std::chrono::seconds timeout{60};
};

/// Token counter. Whitespace mode counts maximal runs of non-whitespace
/// bytes and needs no network; endpoint mode delegates to a tokenizer
/// service so counts match a specific model.
class TokenCounter {
 public:
  TokenCounter() = default;
  explicit TokenCounter(CounterEndpoint endpoint);

  static TokenCounter whitespace() { return {}; }

  CounterMode mode() const noexcept { return mode_; }
  const CounterEndpoint& endpoint() const noexcept { return endpoint_; }

  /// Throws TransportError / EndpointError in endpoint mode.
  std::size_t count(std::string_view text) const;
  std::vector<std::size_t> count_many(std::span<const std::string> texts) const;

 private:
  CounterMode mode_ = CounterMode::Whitespace;
  CounterEndpoint endpoint_;
};

std::size_t count_whitespace_tokens(std::string_view text);

inline std::size_t count_tokens(std::string_view text, const TokenCounter& counter) { return counter.count(text); }

}  // namespace grip
