// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grip {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(line ? "line " + std::to_string(line) + ": " + reason : reason), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const std::string& id) : Error("unknown node id: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Connection failure, or a retryable endpoint failure that outlived the retry budget.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Non-2xx HTTP answer from an endpoint.
class EndpointError : public Error {
 public:
  EndpointError(int status, std::string body)
      : Error("endpoint returned HTTP " + std::to_string(status) + ": " + body),
        status_(status),
        body_(std::move(body)) {}
  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }
  bool retryable() const noexcept { return status_ == 429 || status_ >= 500; }

 private:
  int status_;
  std::string body_;
};

/// A model response that does not follow the requested output format.
class ParseFailure : public Error {
 public:
  using Error::Error;
};

class VocabTooSmall : public Error {
 public:
  explicit VocabTooSmall(std::size_t size)
      : Error("relation vocabulary has " + std::to_string(size) + " entries, need at least 10") {}
};

}  // namespace grip
