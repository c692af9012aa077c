// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace grip::detail {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/', may be just "/"
};

/// Splits an http(s) URL into origin and path. Throws ConfigError.
ParsedUrl parse_url(std::string_view url);

/// POSTs a JSON body. Sends "Authorization: Bearer $<api_key_env>" when that
/// variable is set. Throws TransportError on connection failure and
/// EndpointError on a non-2xx status; returns the response body.
std::string post_json(std::string_view url, const std::string& body, const std::string& api_key_env,
                      std::chrono::seconds timeout);

}  // namespace grip::detail
