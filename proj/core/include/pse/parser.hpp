#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pse/relation.hpp"

namespace pse {

struct PromptParse {
  std::vector<RelationSpec> relations;
  /// One message per clause that yielded no relation.
  std::vector<std::string> diagnostics;
};

/// Rule-based extraction for benchmark-style prompts of the form
/// "<article> X <relation phrase> <article> Y", with clauses joined by "and"
/// or sentence breaks. Never throws on unrecognized text.
PromptParse parse_prompt(std::string_view text);

/// Canonical template sentence for a spec; parse_prompt inverts it.
std::string render_prompt(const RelationSpec& spec);

/// Pre-extracted relations: a JSON array of {subject, object, kind[, c]} or
/// one "(subject, object, relation)" tuple per line. Throws FormatError
/// naming the line (or array element) of an unknown relation keyword.
std::vector<RelationSpec> parse_relations(const std::string& text,
                                          const std::string& origin = "<memory>");
std::vector<RelationSpec> load_relations(const std::filesystem::path& path);

}  // namespace pse
