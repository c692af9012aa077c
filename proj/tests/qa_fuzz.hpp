// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "grip/taskgen.hpp"
#include "grip/util.hpp"

// Fuzzed generator replies for the QA parser. Every word of pair i carries a
// tag: "q<i>x.." in the question, "a<i>x.." in the answer. A parsed pair whose
// tags disagree was mis-paired.
namespace grip::testing {

struct FuzzCase {
  std::string text;
  std::vector<QAPair> pairs;
};

inline std::string tagged_words(Rng& rng, char kind, std::size_t pair, std::size_t min, std::size_t max) {
  static constexpr std::array<std::string_view, 10> stems = {"red", "tree", "sits", "above", "left",
                                                             "bird", "chair", "near", "blue", "cup"};
  const auto n = min + rng.below(max - min + 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += kind;
    out += std::to_string(pair);
    out += 'x';
    out += stems[rng.below(stems.size())];
  }
  return out;
}

inline std::string_view pick(Rng& rng, std::initializer_list<std::string_view> options) {
  return *(options.begin() + rng.below(options.size()));
}

/// A reply in one of the layouts generators produce for the QA prompts.
inline FuzzCase well_formed(Rng& rng, std::size_t expected) {
  FuzzCase c;
  if (rng.below(2)) c.text += "Evidence: " + tagged_words(rng, 'e', 0, 2, 6) + ".\n";
  for (std::size_t i = 0; i < expected; ++i) {
    QAPair p;
    p.question = tagged_words(rng, 'q', i, 1, 8) + "?";
    p.answer = tagged_words(rng, 'a', i, 1, 4);
    if (i) c.text += pick(rng, {" <|> ", "\n<|>\n", "<|>", " <|>\n"});
    if (rng.below(3) == 0) c.text += "Referred question: " + tagged_words(rng, 'r', i, 1, 4) + "? ";
    const auto gap = [&] { return std::string(pick(rng, {" ", "  ", "\n", " \n"})); };
    c.text += "Question:" + gap();
    switch (rng.below(4)) {
      case 0: c.text += p.question; break;
      case 1: c.text += p.question + "."; break;
      case 2: c.text += "\"" + p.question + "\""; break;
      default: c.text += "\xE2\x80\x9C" + p.question + "\xE2\x80\x9D"; break;
    }
    c.text += gap() + "Answer:" + gap();
    switch (rng.below(4)) {
      case 0: c.text += p.answer; break;
      case 1: c.text += p.answer + "."; break;
      case 2: c.text += "\"" + p.answer + "\"."; break;
      default: c.text += "'" + p.answer + "'"; break;
    }
    c.pairs.push_back(std::move(p));
  }
  if (rng.below(2)) c.text += pick(rng, {"\n", " ", "\n\n"});
  return c;
}

/// One random corruption of `text`.
inline std::string mutate(const std::string& text, Rng& rng) {
  auto s = text;
  const auto pos = [&] { return static_cast<std::size_t>(rng.below(s.size() + 1)); };
  switch (rng.below(7)) {
    case 0: {  // delete a span
      const auto at = pos();
      s.erase(at, 1 + rng.below(20));
      break;
    }
    case 1:  // insert a structural token
      s.insert(pos(), std::string(pick(rng, {"<|>", "Question:", "Answer:", "\n", "\"", ".", " Answer: ", "?"})));
      break;
    case 2: {  // duplicate a span, its words re-tagged as noise, at a word boundary
      auto piece = s.substr(pos(), 1 + rng.below(30));
      for (std::size_t i = 0; i + 1 < piece.size(); ++i) {
        if ((piece[i] == 'q' || piece[i] == 'a') && std::isdigit(static_cast<unsigned char>(piece[i + 1]))) piece[i] = 'n';
      }
      auto at = pos();
      while (at < s.size() && !std::isspace(static_cast<unsigned char>(s[at]))) ++at;
      s.insert(at, piece);
      break;
    }
    case 3: {  // reorder the pairs
      const auto parts = split(s, "<|>");
      std::vector<std::string> owned(parts.begin(), parts.end());
      rng.partial_shuffle(owned, owned.size());
      s = join(owned, "<|>");
      break;
    }
    case 4:  // truncate
      s.resize(pos());
      break;
    case 5: {  // misspell a marker
      const auto marker = std::string(pick(rng, {"Answer:", "Question:", "<|>"}));
      if (const auto at = s.find(marker); at != std::string::npos) s.replace(at, marker.size(), marker.substr(1));
      break;
    }
    default: {  // replace a span with noise
      const auto at = pos();
      s.replace(at, std::min<std::size_t>(5, s.size() - std::min(at, s.size())), tagged_words(rng, 'n', 0, 1, 2));
      break;
    }
  }
  return s;
}

/// Pair index carried by the tagged words of `field`, or nullopt when the
/// field has none. Returns -1 on a mix of indices or of kinds.
inline std::optional<long> tag_of(const std::string& field, char kind) {
  std::optional<long> index;
  for (auto word : split(field, " ")) {
    word = trim(word);
    while (!word.empty() && !std::isalnum(static_cast<unsigned char>(word.front()))) word.remove_prefix(1);
    if (word.size() < 3 || !std::isdigit(static_cast<unsigned char>(word[1]))) continue;
    const auto x = word.find('x');
    if (x == std::string_view::npos) continue;
    const char k = word[0];
    if (k != 'q' && k != 'a') continue;
    const long i = std::stol(std::string(word.substr(1, x - 1)));
    if (k != kind) return -1;
    if (index && *index != i) return -1;
    index = i;
  }
  return index;
}

/// True when no parsed pair joins words from different source pairs or
/// swaps question and answer words.
inline bool consistently_paired(const std::vector<QAPair>& parsed) {
  for (const auto& p : parsed) {
    const auto q = tag_of(p.question, 'q');
    const auto a = tag_of(p.answer, 'a');
    if ((q && *q < 0) || (a && *a < 0)) return false;
    if (q && a && *q != *a) return false;
  }
  return true;
}

}  // namespace grip::testing
