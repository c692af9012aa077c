// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace grip {

/// Version of the bundled prompt/template asset set; recorded in manifests.
inline constexpr std::string_view kPromptAssetVersion = "1";

enum class PromptId {
  Summary,
  Rephrase,
  NodeQa,
  MultiHopQa,
  GlobalQa,
  BinaryQa,
  KShotQa,
  EdgeQaRephrase,
  Judge,
};

enum class TemplateId {
  NodeContext,
  EdgeContext,
  SummaryRecord,
  SrcPrompt,
  SrcAnswer,
  RelPrompt,
  RelAnswer,
  TgtPrompt,
  TgtAnswer,
  KgQuestion,
};

/// Asset key, e.g. "prompts/summary".
std::string_view asset_name(PromptId id);
std::string_view asset_name(TemplateId id);

std::string_view prompt_text(PromptId id);
std::string_view template_text(TemplateId id);

/// False for prompts authored here rather than taken word for word from
/// the reference task-generation prompts.
bool is_verbatim(PromptId id);

/// All bundled assets by name.
const std::map<std::string, std::string_view, std::less<>>& all_assets();

/// Per-asset SHA-256 prefixes plus the set version.
nlohmann::json asset_versions();

/// Single-pass `{name}` substitution. Names may contain spaces. Substituted
/// values are not rescanned and nothing is escaped. Throws ConfigError for
/// a placeholder without a value or an unused value.
std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values);

/// Placeholder names in order of appearance.
std::vector<std::string> placeholders(std::string_view tmpl);

inline std::string fill(PromptId id, const std::map<std::string, std::string>& values) {
  return fill(prompt_text(id), values);
}
inline std::string fill(TemplateId id, const std::map<std::string, std::string>& values) {
  return fill(template_text(id), values);
}

}  // namespace grip
