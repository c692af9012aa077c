// Copyright 2026 The GRIP Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "grip/prompts.hpp"

#include <set>

#include "grip/errors.hpp"
#include "grip/util.hpp"

namespace grip {
namespace detail {
const std::map<std::string, std::string_view, std::less<>>& embedded_assets();
}  // namespace detail

namespace {

std::string_view lookup(std::string_view name) {
  const auto& assets = detail::embedded_assets();
  const auto it = assets.find(name);
  if (it == assets.end()) throw Error("missing bundled asset " + std::string(name));
  return it->second;
}

}  // namespace

std::string_view asset_name(PromptId id) {
  switch (id) {
    case PromptId::Summary: return "prompts/summary";
    case PromptId::Rephrase: return "prompts/rephrase";
    case PromptId::NodeQa: return "prompts/node_qa";
    case PromptId::MultiHopQa: return "prompts/multi_hop_qa";
    case PromptId::GlobalQa: return "prompts/global_qa";
    case PromptId::BinaryQa: return "prompts/binary_qa";
    case PromptId::KShotQa: return "prompts/k_shot_qa";
    case PromptId::EdgeQaRephrase: return "prompts/edge_qa_rephrase";
    case PromptId::Judge: return "prompts/judge";
  }
  return {};
}

std::string_view asset_name(TemplateId id) {
  switch (id) {
    case TemplateId::NodeContext: return "templates/node_context";
    case TemplateId::EdgeContext: return "templates/edge_context";
    case TemplateId::SummaryRecord: return "templates/summary_record";
    case TemplateId::SrcPrompt: return "templates/src_prompt";
    case TemplateId::SrcAnswer: return "templates/src_answer";
    case TemplateId::RelPrompt: return "templates/rel_prompt";
    case TemplateId::RelAnswer: return "templates/rel_answer";
    case TemplateId::TgtPrompt: return "templates/tgt_prompt";
    case TemplateId::TgtAnswer: return "templates/tgt_answer";
    case TemplateId::KgQuestion: return "templates/kg_question";
  }
  return {};
}

std::string_view prompt_text(PromptId id) { return lookup(asset_name(id)); }
std::string_view template_text(TemplateId id) { return lookup(asset_name(id)); }

bool is_verbatim(PromptId id) {
  switch (id) {
    case PromptId::Summary:
    case PromptId::Rephrase:
    case PromptId::NodeQa:
    case PromptId::MultiHopQa:
    case PromptId::KShotQa:
      return true;
    default:
      return false;
  }
}

const std::map<std::string, std::string_view, std::less<>>& all_assets() { return detail::embedded_assets(); }

nlohmann::json asset_versions() {
  nlohmann::json j = {{"version", kPromptAssetVersion}};
  for (const auto& [name, text] : all_assets()) j["assets"][name] = sha256_hex(text).substr(0, 16);
  return j;
}

std::vector<std::string> placeholders(std::string_view tmpl) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = tmpl.find('{', pos)) != std::string_view::npos) {
    const auto close = tmpl.find('}', pos + 1);
    if (close == std::string_view::npos) break;
    names.emplace_back(tmpl.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return names;
}

std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::set<std::string> used;
  std::size_t pos = 0;
  while (true) {
    const auto open = tmpl.find('{', pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find('}', open + 1);
    if (close == std::string_view::npos) break;
    const std::string name(tmpl.substr(open + 1, close - open - 1));
    const auto it = values.find(name);
    if (it == values.end()) throw ConfigError("no value for template placeholder {" + name + "}");
    out.append(tmpl.substr(pos, open - pos));
    out.append(it->second);
    used.insert(name);
    pos = close + 1;
  }
  out.append(tmpl.substr(pos));
  for (const auto& [name, _] : values) {
    if (!used.contains(name)) throw ConfigError("template has no placeholder {" + name + "}");
  }
  return out;
}

}  // namespace grip
