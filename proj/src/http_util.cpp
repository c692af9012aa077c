// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "http_util.hpp"

#include <cstdlib>

#include <httplib.h>

#include "grip/errors.hpp"

namespace grip::detail {

ParsedUrl parse_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw ConfigError("URL needs a scheme: " + std::string(url));
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported URL scheme: " + std::string(url));
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl parsed;
  if (path_start == std::string_view::npos) {
    parsed.origin = std::string(url);
    parsed.path = "/";
  } else {
    parsed.origin = std::string(url.substr(0, path_start));
    parsed.path = std::string(url.substr(path_start));
  }
  if (parsed.origin.size() <= scheme_end + 3) throw ConfigError("URL has no host: " + std::string(url));
  return parsed;
}

std::string post_json(std::string_view url, const std::string& body, const std::string& api_key_env,
                      std::chrono::seconds timeout) {
  const auto parsed = parse_url(url);
  httplib::Client client(parsed.origin);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!api_key_env.empty()) {
    if (const char* token = std::getenv(api_key_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }
  auto result = client.Post(parsed.path, headers, body, "application/json");
  if (!result) {
    throw TransportError("request to " + std::string(url) + " failed: " + httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) throw EndpointError(result->status, result->body);
  return result->body;
}

}  // namespace grip::detail
