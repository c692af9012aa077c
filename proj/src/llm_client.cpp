// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/llm_client.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "grip/errors.hpp"
#include "grip/util.hpp"
#include "http_util.hpp"

namespace grip {

GenerationRequest GenerationRequest::user(std::string model, std::string prompt, double temperature,
                                          std::optional<std::uint64_t> seed) {
  GenerationRequest r;
  r.model = std::move(model);
  r.messages.push_back({"user", std::move(prompt)});
  r.temperature = temperature;
  r.seed = seed;
  return r;
}

void GenerationRequest::validate() const {
  const bool has_user = std::any_of(messages.begin(), messages.end(), [](const auto& m) { return m.role == "user"; });
  if (!has_user) throw ConfigError("generation request needs at least one user message");
  if (!(temperature >= 0.0 && temperature <= 2.0)) throw ConfigError("temperature must be in [0, 2]");
  if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
}

nlohmann::json GenerationRequest::to_json() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  nlohmann::json j = {{"model", model}, {"messages", std::move(msgs)}, {"temperature", temperature},
                      {"max_tokens", max_tokens}};
  if (seed) j["seed"] = *seed;
  return j;
}

std::string GenerationRequest::cache_key() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({m.role, m.content});
  nlohmann::json key = {{"model", model}, {"messages", std::move(msgs)}, {"temperature", temperature}};
  key["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return sha256_hex(key.dump());
}

const std::string& GenerationRequest::prompt() const {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == "user") return it->content;
  }
  throw ConfigError("generation request has no user message");
}

void ClientConfig::validate() const {
  if (retry.max_retries < 0) throw ConfigError("retry count must be >= 0");
  if (max_concurrency < 1) throw ConfigError("max_concurrency must be >= 1");
  if (max_requests_per_second < 0) throw ConfigError("max_requests_per_second must be >= 0");
  if (!(temperature >= 0.0 && temperature <= 2.0)) throw ConfigError("temperature must be in [0, 2]");
}

nlohmann::json to_json(const ClientConfig& c) {
  nlohmann::json j = {{"base_url", c.base_url},
                      {"model", c.model},
                      {"api_key_env", c.api_key_env},
                      {"max_concurrency", c.max_concurrency},
                      {"max_requests_per_second", c.max_requests_per_second},
                      {"retries", c.retry.max_retries},
                      {"initial_backoff_ms", c.retry.initial_backoff.count()},
                      {"backoff_factor", c.retry.backoff_factor},
                      {"max_backoff_ms", c.retry.max_backoff.count()},
                      {"memory_cache", c.memory_cache},
                      {"timeout_s", c.timeout.count()},
                      {"temperature", c.temperature},
                      {"max_tokens", c.max_tokens}};
  j["cache_dir"] = c.cache_dir ? nlohmann::json(c.cache_dir->string()) : nlohmann::json(nullptr);
  return j;
}

ClientConfig client_config_from_json(const nlohmann::json& j, ClientConfig c) {
  c.base_url = j.value("base_url", c.base_url);
  c.model = j.value("model", c.model);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.max_concurrency = j.value("max_concurrency", c.max_concurrency);
  c.max_requests_per_second = j.value("max_requests_per_second", c.max_requests_per_second);
  c.retry.max_retries = j.value("retries", c.retry.max_retries);
  c.retry.initial_backoff = std::chrono::milliseconds(j.value("initial_backoff_ms", c.retry.initial_backoff.count()));
  c.retry.backoff_factor = j.value("backoff_factor", c.retry.backoff_factor);
  c.retry.max_backoff = std::chrono::milliseconds(j.value("max_backoff_ms", c.retry.max_backoff.count()));
  c.memory_cache = j.value("memory_cache", c.memory_cache);
  c.timeout = std::chrono::seconds(j.value("timeout_s", c.timeout.count()));
  c.temperature = j.value("temperature", c.temperature);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  if (j.contains("cache_dir")) {
    if (j["cache_dir"].is_null()) c.cache_dir.reset();
    else c.cache_dir = j["cache_dir"].get<std::string>();
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------

HttpChatBackend::HttpChatBackend(ClientConfig config) : config_(std::move(config)) {
  detail::parse_url(config_.base_url);
}

std::string HttpChatBackend::send(const GenerationRequest& request) {
  auto url = config_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/chat/completions";
  const auto body = detail::post_json(url, request.to_json().dump(), config_.api_key_env, config_.timeout);
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw EndpointError(200, std::string("malformed chat completion response: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

MockChatBackend::MockChatBackend(Responder responder, std::chrono::microseconds latency)
    : responder_(std::move(responder)), latency_(latency) {}

std::shared_ptr<MockChatBackend> MockChatBackend::canned(std::map<std::string, std::string> responses) {
  return std::make_shared<MockChatBackend>([responses = std::move(responses)](const GenerationRequest& r) {
    const auto it = responses.find(r.prompt());
    if (it == responses.end()) throw EndpointError(404, "no canned response");
    return it->second;
  });
}

std::string MockChatBackend::send(const GenerationRequest& request) {
  ++calls_;
  const auto now = ++in_flight_;
  auto peak = peak_.load();
  while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
  }
  {
    std::lock_guard lock(log_mutex_);
    log_.push_back(request);
  }
  struct Leave {
    std::atomic<std::size_t>& counter;
    ~Leave() { --counter; }
  } leave{in_flight_};
  if (latency_.count() > 0) std::this_thread::sleep_for(latency_);
  return responder_(request);
}

std::vector<GenerationRequest> MockChatBackend::requests() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

// ---------------------------------------------------------------------------

LlmClient::LlmClient(std::shared_ptr<ChatBackend> backend, ClientConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
  if (!backend_) throw ConfigError("LlmClient needs a backend");
  config_.validate();
  if (config_.cache_dir) std::filesystem::create_directories(*config_.cache_dir);
}

std::string LlmClient::complete(const GenerationRequest& request) {
  request.validate();
  const auto key = request.cache_key();

  std::promise<std::string> promise;
  {
    std::unique_lock lock(mutex_);
    if (const auto hit = memory_.find(key); hit != memory_.end()) {
      ++cache_hits_;
      return hit->second;
    }
    if (const auto pending = in_flight_.find(key); pending != in_flight_.end()) {
      auto shared = pending->second;
      lock.unlock();
      ++cache_hits_;
      return shared.get();
    }
    in_flight_.emplace(key, promise.get_future().share());
  }

  try {
    std::string text;
    if (auto cached = read_disk_cache(key)) {
      ++cache_hits_;
      text = std::move(*cached);
    } else {
      text = send_with_retries(request);
      write_disk_cache(key, request, text);
    }
    std::lock_guard lock(mutex_);
    if (config_.memory_cache) memory_.emplace(key, text);
    in_flight_.erase(key);
    promise.set_value(text);
    return text;
  } catch (...) {
    std::lock_guard lock(mutex_);
    in_flight_.erase(key);
    promise.set_exception(std::current_exception());
    throw;
  }
}

std::string LlmClient::send_with_retries(const GenerationRequest& request) {
  auto delay = config_.retry.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= config_.retry.max_retries; ++attempt) {
    if (attempt > 0 && delay.count() > 0) {
      std::this_thread::sleep_for(delay);
      const auto grown = std::chrono::milliseconds(
          static_cast<long long>(std::llround(static_cast<double>(delay.count()) * config_.retry.backoff_factor)));
      delay = std::min(grown, config_.retry.max_backoff);
    }
    try {
      return fetch(request);
    } catch (const EndpointError& e) {
      if (!e.retryable()) throw;
      last_error = e.what();
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw TransportError("giving up after " + std::to_string(config_.retry.max_retries + 1) +
                       " attempt(s): " + last_error);
}

std::string LlmClient::fetch(const GenerationRequest& request) {
  acquire_slot();
  struct Release {
    LlmClient* self;
    ~Release() { self->release_slot(); }
  } release{this};
  pace();
  ++upstream_calls_;
  return backend_->send(request);
}

void LlmClient::acquire_slot() {
  std::unique_lock lock(slot_mutex_);
  slot_cv_.wait(lock, [this] { return active_ < config_.max_concurrency; });
  ++active_;
}

void LlmClient::release_slot() {
  {
    std::lock_guard lock(slot_mutex_);
    --active_;
  }
  slot_cv_.notify_one();
}

void LlmClient::pace() {
  if (config_.max_requests_per_second <= 0) return;
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / config_.max_requests_per_second));
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(pace_mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_send_);
    next_send_ = slot + interval;
  }
  std::this_thread::sleep_until(slot);
}

std::optional<std::string> LlmClient::read_disk_cache(const std::string& key) const {
  if (!config_.cache_dir) return std::nullopt;
  const auto path = *config_.cache_dir / (key + ".json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    return j.at("response").get<std::string>();
  } catch (const std::exception& e) {
    log_warn("ignoring unreadable cache entry " + path.string() + ": " + e.what());
    return std::nullopt;
  }
}

void LlmClient::write_disk_cache(const std::string& key, const GenerationRequest& request,
                                 const std::string& response) const {
  if (!config_.cache_dir) return;
  const nlohmann::json entry = {
      {"cache_key", key}, {"request", request.to_json()}, {"response", response}, {"timestamp", utc_timestamp()}};
  write_file_atomic(*config_.cache_dir / (key + ".json"), entry.dump(2) + "\n");
}

std::vector<BatchResult> LlmClient::complete_batch(std::span<const GenerationRequest> requests) {
  std::vector<BatchResult> results(requests.size());
  parallel_for(requests.size(), config_.max_concurrency, [&](std::size_t i) {
    results[i].index = i;
    try {
      results[i].text = complete(requests[i]);
    } catch (const std::exception& e) {
      results[i].error = e.what();
      results[i].exception = std::current_exception();
    }
  });
  return results;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const auto n_threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      threads.emplace_back([&] {
        for (auto i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace grip
