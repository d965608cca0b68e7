#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pse/pipeline.hpp"
#include "pse/relation.hpp"

namespace pse {

/// Fixed float formatting for every emitted number: 9 significant digits,
/// negative zero printed as 0.
std::string format_number(double v);

std::string quote_json(std::string_view s);

/// Builds one JSON object with fields in insertion order.
class JsonObject {
 public:
  JsonObject& add(std::string_view key, std::string_view value);
  JsonObject& add(std::string_view key, const char* value) {
    return add(key, std::string_view(value));
  }
  JsonObject& add(std::string_view key, double value);
  JsonObject& add(std::string_view key, std::int64_t value);
  JsonObject& add(std::string_view key, bool value);
  JsonObject& add(std::string_view key, const std::optional<double>& value);
  JsonObject& add_null(std::string_view key);
  /// `json` must already be valid JSON text.
  JsonObject& add_raw(std::string_view key, std::string_view json);

  std::string str() const { return body_ + "}"; }

 private:
  void key(std::string_view k);
  std::string body_ = "{";
};

std::string to_json(const RelationSpec& spec);
std::string to_json_line(const ScoreRecord& record);

/// Inverse of to_json_line. Throws FormatError on malformed input.
ScoreRecord record_from_json(std::string_view line);

/// Reads every non-blank line of a ScoreRecord JSON-lines stream.
std::vector<ScoreRecord> records_from_jsonl(std::string_view text,
                                            const std::string& origin = "<stream>");

struct ManifestEntry {
  std::string prompt_id;
  std::string candidate_id;
  std::optional<std::int64_t> seed;
  std::string mask_a;
  std::string mask_b;
  std::optional<std::string> depth;
  RelationSpec relation;
};

/// One manifest line: {prompt_id, candidate_id, seed?, mask_a, mask_b,
/// depth?, relation {subject, object, kind, c?}}.
ManifestEntry parse_manifest_line(std::string_view line, const std::string& origin = "<line>");

RelationSpec relation_from_json_text(std::string_view text, const std::string& origin);

}  // namespace pse
