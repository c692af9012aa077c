// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace grip {

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct GenerationRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.7;
  int max_tokens = 1024;
  /// Forwarded as the OpenAI `seed` field; part of the cache key so a
  /// resample with a new seed is a new request.
  std::optional<std::uint64_t> seed;

  static GenerationRequest user(std::string model, std::string prompt, double temperature,
                                std::optional<std::uint64_t> seed = std::nullopt);

  /// Throws ConfigError: needs a user message and temperature in [0, 2].
  void validate() const;
  /// SHA-256 over model, messages, temperature and seed.
  std::string cache_key() const;
  /// Content of the last user message.
  const std::string& prompt() const;
  nlohmann::json to_json() const;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_factor = 2.0;
  std::chrono::milliseconds max_backoff{30000};
};

struct ClientConfig {
  std::string base_url = "http://localhost:8000/v1";
  std::string model;
  /// Environment variable holding the bearer token; empty disables auth.
  std::string api_key_env = "OPENAI_API_KEY";
  int max_concurrency = 8;
  /// 0 disables rate limiting.
  double max_requests_per_second = 0.0;
  RetryPolicy retry;
  std::optional<std::filesystem::path> cache_dir;
  bool memory_cache = true;
  std::chrono::seconds timeout{300};
  double temperature = 0.7;
  int max_tokens = 1024;

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const ClientConfig& config);
ClientConfig client_config_from_json(const nlohmann::json& j, ClientConfig defaults = {});

/// Transport to a chat model. send() throws TransportError for connection
/// problems and EndpointError for HTTP failures; retrying is the client's job.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string send(const GenerationRequest& request) = 0;
};

/// OpenAI-compatible POST {base_url}/chat/completions.
class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(ClientConfig config);
  std::string send(const GenerationRequest& request) override;

 private:
  ClientConfig config_;
};

/// In-process backend for tests and offline runs. Each send() calls the
/// responder; a responder may throw to simulate failures. Records call
/// counts and the peak number of concurrent calls.
class MockChatBackend final : public ChatBackend {
 public:
  using Responder = std::function<std::string(const GenerationRequest&)>;

  explicit MockChatBackend(Responder responder, std::chrono::microseconds latency = {});
  /// Canned prompt -> response map; unknown prompts raise EndpointError(404).
  static std::shared_ptr<MockChatBackend> canned(std::map<std::string, std::string> responses);

  std::string send(const GenerationRequest& request) override;

  std::size_t calls() const noexcept { return calls_; }
  std::size_t peak_in_flight() const noexcept { return peak_; }
  std::vector<GenerationRequest> requests() const;

 private:
  Responder responder_;
  std::chrono::microseconds latency_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> peak_{0};
  mutable std::mutex log_mutex_;
  std::vector<GenerationRequest> log_;
};

struct BatchResult {
  std::size_t index = 0;
  std::optional<std::string> text;
  std::string error;
  /// The exception behind `error`, for callers that rethrow it.
  std::exception_ptr exception;

  bool ok() const noexcept { return text.has_value(); }
};

/// Cached, retrying, concurrency-bounded front end to a ChatBackend.
/// Safe for concurrent use. Identical requests in flight at the same time
/// share one upstream call.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<ChatBackend> backend, ClientConfig config);

  /// Throws TransportError once retries are exhausted, EndpointError for
  /// non-retryable HTTP failures.
  std::string complete(const GenerationRequest& request);
  /// Results aligned with `requests`; failures are reported per item.
  std::vector<BatchResult> complete_batch(std::span<const GenerationRequest> requests);

  const ClientConfig& config() const noexcept { return config_; }
  /// Requests that reached the backend, retries included.
  std::size_t upstream_calls() const noexcept { return upstream_calls_; }
  std::size_t cache_hits() const noexcept { return cache_hits_; }

 private:
  std::string fetch(const GenerationRequest& request);
  std::string send_with_retries(const GenerationRequest& request);
  std::optional<std::string> read_disk_cache(const std::string& key) const;
  void write_disk_cache(const std::string& key, const GenerationRequest& request, const std::string& response) const;
  void acquire_slot();
  void release_slot();
  void pace();

  std::shared_ptr<ChatBackend> backend_;
  ClientConfig config_;

  std::mutex mutex_;
  std::unordered_map<std::string, std::string> memory_;
  std::unordered_map<std::string, std::shared_future<std::string>> in_flight_;

  std::mutex slot_mutex_;
  std::condition_variable slot_cv_;
  int active_ = 0;

  std::mutex pace_mutex_;
  std::chrono::steady_clock::time_point next_send_{};

  std::atomic<std::size_t> upstream_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

/// Runs `fn(i)` for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace grip
