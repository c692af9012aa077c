// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "grip/llm_client.hpp"

// Offline stand-ins for the generator, judge and evaluated model. All of
// them are pure functions of the request, so runs stay reproducible.
namespace grip::mock {

/// Answers every generator prompt in the format it asks for, built from the
/// prompt's own context. Anything it does not recognize gets an unparseable
/// reply.
MockChatBackend::Responder cooperative();

/// Judge that replies EQUIVALENT when the normalized reference and model
/// answers match.
MockChatBackend::Responder judge();

/// Evaluated model that knows the gold answer of every question. Lookup is by
/// the full prompt, then by the text after the first blank line (the question
/// when a context is prepended).
MockChatBackend::Responder oracle(std::map<std::string, std::string> gold_by_question);

/// Evaluated model that picks one of the lettered options "A. ..." .. "J. ..."
/// uniformly, seeded by `seed` and the prompt.
MockChatBackend::Responder random_choice(std::uint64_t seed);

}  // namespace grip::mock
