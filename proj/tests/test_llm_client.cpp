// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <cstdlib>

#include "grip/llm_client.hpp"
#include "grip/token_counter.hpp"
#include "http_server.hpp"
#include "support.hpp"

using namespace grip;
using namespace std::chrono_literals;

namespace {

ClientConfig fast_config() {
  ClientConfig c;
  c.model = "test-model";
  c.retry.initial_backoff = 1ms;
  c.retry.max_backoff = 4ms;
  return c;
}

std::string chat_reply(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

}  // namespace

TEST_CASE("chat completions over http") {
  grip::testing::LocalServer srv;
  std::atomic<int> hits{0};
  std::string seen_auth;
  nlohmann::json seen_body;
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    seen_auth = req.get_header_value("Authorization");
    seen_body = nlohmann::json::parse(req.body);
    res.set_content(chat_reply("hello " + seen_body["messages"][0]["content"].get<std::string>()), "application/json");
  });
  srv.start();

  ::setenv("GRIP_TEST_KEY", "sekrit", 1);
  auto config = fast_config();
  config.base_url = srv.url("/v1");
  config.api_key_env = "GRIP_TEST_KEY";
  LlmClient client(std::make_shared<HttpChatBackend>(config), config);

  const auto request = GenerationRequest::user("test-model", "world", 0.2, 42);
  CHECK(client.complete(request) == "hello world");
  CHECK(seen_auth == "Bearer sekrit");
  CHECK(seen_body["model"] == "test-model");
  CHECK(seen_body["seed"] == 42);
  CHECK(seen_body["temperature"] == doctest::Approx(0.2));

  // second identical request is served from memory
  CHECK(client.complete(request) == "hello world");
  CHECK(hits == 1);
  CHECK(client.cache_hits() == 1);
}

TEST_CASE("server errors are retried then surface as transport errors") {
  grip::testing::LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 500;
    res.set_content("boom", "text/plain");
  });
  srv.start();
  auto config = fast_config();
  config.base_url = srv.url("/v1");
  config.retry.max_retries = 2;
  LlmClient client(std::make_shared<HttpChatBackend>(config), config);
  CHECK_THROWS_AS(client.complete(GenerationRequest::user("m", "x", 0.0)), TransportError);
  CHECK(hits == 3);
}

TEST_CASE("client errors are not retried") {
  grip::testing::LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 400;
  });
  srv.start();
  auto config = fast_config();
  config.base_url = srv.url("/v1");
  LlmClient client(std::make_shared<HttpChatBackend>(config), config);
  try {
    client.complete(GenerationRequest::user("m", "x", 0.0));
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    CHECK(e.status() == 400);
  }
  CHECK(hits == 1);
}

TEST_CASE("rate limited responses recover") {
  grip::testing::LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++hits < 3) {
      res.status = 429;
      return;
    }
    res.set_content(chat_reply("ok"), "application/json");
  });
  srv.start();
  auto config = fast_config();
  config.base_url = srv.url("/v1");
  LlmClient client(std::make_shared<HttpChatBackend>(config), config);
  CHECK(client.complete(GenerationRequest::user("m", "x", 0.0)) == "ok");
  CHECK(hits == 3);
}

TEST_CASE("unreachable endpoint is a transport error") {
  auto config = fast_config();
  config.base_url = "http://127.0.0.1:1/v1";
  config.retry.max_retries = 1;
  config.timeout = 2s;
  LlmClient client(std::make_shared<HttpChatBackend>(config), config);
  CHECK_THROWS_AS(client.complete(GenerationRequest::user("m", "x", 0.0)), TransportError);
}

TEST_CASE("disk cache survives a new client") {
  grip::testing::TempDir dir;
  auto backend = std::make_shared<MockChatBackend>([](const GenerationRequest& r) { return "echo " + r.prompt(); });
  auto config = fast_config();
  config.cache_dir = dir / "cache";
  const auto request = GenerationRequest::user("m", "persist me", 0.7, 1);
  {
    LlmClient client(backend, config);
    CHECK(client.complete(request) == "echo persist me");
  }
  LlmClient again(backend, config);
  CHECK(again.complete(request) == "echo persist me");
  CHECK(backend->calls() == 1);
  CHECK(again.upstream_calls() == 0);
}

TEST_CASE("cache key separates seeds and temperatures") {
  const auto a = GenerationRequest::user("m", "p", 0.7, 1);
  CHECK(a.cache_key() == GenerationRequest::user("m", "p", 0.7, 1).cache_key());
  CHECK(a.cache_key() != GenerationRequest::user("m", "p", 0.7, 2).cache_key());
  CHECK(a.cache_key() != GenerationRequest::user("m", "p", 0.8, 1).cache_key());
  CHECK(a.cache_key() != GenerationRequest::user("n", "p", 0.7, 1).cache_key());
}

TEST_CASE("batch respects the concurrency limit and keeps order") {
  auto backend = std::make_shared<MockChatBackend>([](const GenerationRequest& r) { return r.prompt() + "!"; }, 2ms);
  auto config = fast_config();
  config.max_concurrency = 3;
  LlmClient client(backend, config);
  std::vector<GenerationRequest> requests;
  for (int i = 0; i < 40; ++i) requests.push_back(GenerationRequest::user("m", "p" + std::to_string(i), 0.5));
  const auto results = client.complete_batch(requests);
  REQUIRE(results.size() == 40);
  for (int i = 0; i < 40; ++i) {
    CHECK(results[i].index == static_cast<std::size_t>(i));
    CHECK(results[i].text == "p" + std::to_string(i) + "!");
  }
  CHECK(backend->peak_in_flight() <= 3);
}

TEST_CASE("identical requests in flight share one call") {
  auto backend = std::make_shared<MockChatBackend>([](const GenerationRequest&) { return std::string("same"); }, 20ms);
  auto config = fast_config();
  config.max_concurrency = 8;
  LlmClient client(backend, config);
  const std::vector<GenerationRequest> requests(8, GenerationRequest::user("m", "dup", 0.5, 3));
  for (const auto& r : client.complete_batch(requests)) CHECK(r.text == "same");
  CHECK(backend->calls() == 1);
}

TEST_CASE("batch reports per-item failures") {
  auto backend = MockChatBackend::canned({{"known", "yes"}});
  LlmClient client(backend, fast_config());
  const std::vector<GenerationRequest> requests{GenerationRequest::user("m", "known", 0.1),
                                                GenerationRequest::user("m", "unknown", 0.1)};
  const auto results = client.complete_batch(requests);
  CHECK(results[0].ok());
  CHECK_FALSE(results[1].ok());
  CHECK(results[1].error.find("404") != std::string::npos);
}

TEST_CASE("rate pacing spaces out calls") {
  auto backend = std::make_shared<MockChatBackend>([](const GenerationRequest& r) { return r.prompt(); });
  auto config = fast_config();
  config.max_requests_per_second = 50;
  LlmClient client(backend, config);
  std::vector<GenerationRequest> requests;
  for (int i = 0; i < 6; ++i) requests.push_back(GenerationRequest::user("m", std::to_string(i), 0.5));
  const auto start = std::chrono::steady_clock::now();
  client.complete_batch(requests);
  // six calls at 50/s need at least five 20 ms gaps
  CHECK(std::chrono::steady_clock::now() - start >= 95ms);
}

TEST_CASE("request and config validation") {
  CHECK_THROWS_AS(GenerationRequest::user("m", "p", 3.0).validate(), ConfigError);
  ClientConfig c;
  c.max_concurrency = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  const auto parsed = client_config_from_json(nlohmann::json::parse(R"({"model":"x","retries":5,"cache_dir":"c"})"));
  CHECK(parsed.model == "x");
  CHECK(parsed.retry.max_retries == 5);
  CHECK(parsed.cache_dir == std::filesystem::path("c"));
}

TEST_CASE("token counting endpoint") {
  grip::testing::LocalServer srv;
  srv.server().Post("/tokenize", [](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json counts = nlohmann::json::array();
    const auto body = nlohmann::json::parse(req.body);
    for (const auto& t : body.at("texts")) counts.push_back(t.get<std::string>().size());
    res.set_content(nlohmann::json{{"counts", counts}}.dump(), "application/json");
  });
  srv.start();
  const TokenCounter counter(CounterEndpoint{srv.url("/tokenize"), "", 5s});
  CHECK(counter.mode() == CounterMode::Endpoint);
  CHECK(counter.count("abcd") == 4);
  CHECK(counter.count("") == 0);
  const std::vector<std::string> texts{"a", "", "abc"};
  CHECK(counter.count_many(texts) == std::vector<std::size_t>{1, 0, 3});
}
