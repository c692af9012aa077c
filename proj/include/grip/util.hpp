// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace grip {

/// Deterministic 64-bit generator (splitmix64-seeded xoshiro256**).
/// Bounded draws use rejection so results are identical on every platform,
/// unlike std::uniform_int_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  double uniform01();

  /// Moves a uniformly chosen k-subset of `items` to its front, in random order.
  template <class T>
  void partial_shuffle(std::vector<T>& items, std::size_t k) {
    k = std::min(k, items.size());
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(below(items.size() - i));
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent stream: mixes the base seed with a stream tag and an index.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream, std::uint64_t index = 0);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
/// Lower-cases, trims and collapses internal whitespace runs to one space.
std::string normalize_answer(std::string_view s);
std::vector<std::string_view> split(std::string_view s, std::string_view sep);
std::string join(std::span<const std::string> parts, std::string_view sep);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// UTC timestamp, ISO-8601 with seconds.
std::string utc_timestamp();

void log_warn(std::string_view message);
void log_info(std::string_view message);
void set_log_quiet(bool quiet);

}  // namespace grip
