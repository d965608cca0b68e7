#include "pse/jsonl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "pse/error.hpp"

namespace pse {

using nlohmann::json;

std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string quote_json(std::string_view s) { return json(std::string(s)).dump(); }

void JsonObject::key(std::string_view k) {
  if (body_.size() > 1) body_.push_back(',');
  body_ += quote_json(k);
  body_.push_back(':');
}

JsonObject& JsonObject::add(std::string_view k, std::string_view value) {
  key(k);
  body_ += quote_json(value);
  return *this;
}

JsonObject& JsonObject::add(std::string_view k, double value) {
  key(k);
  body_ += format_number(value);
  return *this;
}

JsonObject& JsonObject::add(std::string_view k, std::int64_t value) {
  key(k);
  body_ += std::to_string(value);
  return *this;
}

JsonObject& JsonObject::add(std::string_view k, bool value) {
  key(k);
  body_ += value ? "true" : "false";
  return *this;
}

JsonObject& JsonObject::add(std::string_view k, const std::optional<double>& value) {
  if (value) return add(k, *value);
  return add_null(k);
}

JsonObject& JsonObject::add_null(std::string_view k) {
  key(k);
  body_ += "null";
  return *this;
}

JsonObject& JsonObject::add_raw(std::string_view k, std::string_view text) {
  key(k);
  body_ += text;
  return *this;
}

std::string to_json(const RelationSpec& spec) {
  JsonObject o;
  o.add("subject", spec.subject).add("object", spec.object).add("kind", spec.kind_string());
  if (spec.distance_c) o.add("c", *spec.distance_c);
  return o.str();
}

std::string to_json_line(const ScoreRecord& r) {
  JsonObject o;
  o.add("prompt_id", r.prompt_id).add("candidate_id", r.candidate_id);
  if (r.seed) o.add("seed", *r.seed);
  o.add_raw("relation", to_json(r.relation));
  o.add("pse", r.pse)
      .add("pos_forward", r.pos_forward)
      .add("pos_backward", r.pos_backward)
      .add("present_a", r.present_a)
      .add("present_b", r.present_b);
  if (r.center_verdict) o.add("center_verdict", *r.center_verdict);
  if (!r.components.empty()) {
    std::string arr = "[";
    for (const ComponentScore& c : r.components) {
      if (arr.size() > 1) arr.push_back(',');
      JsonObject co;
      co.add("kind", to_string(c.kind))
          .add("pse", c.pse)
          .add("pos_forward", c.pos_forward)
          .add("pos_backward", c.pos_backward);
      arr += co.str();
    }
    arr.push_back(']');
    o.add_raw("components", arr);
  }
  if (r.distance_score) o.add("distance_score", *r.distance_score);
  return o.str();
}

namespace {

json parse_json(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(origin + ": invalid JSON: " + e.what());
  }
}

const json& field(const json& obj, const char* name, const std::string& origin) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw FormatError(origin + ": missing field '" + name + "'");
  }
  return obj[name];
}

std::string string_field(const json& obj, const char* name, const std::string& origin) {
  const json& v = field(obj, name, origin);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw FormatError(origin + ": field '" + name + "' must be a string");
}

double number_field(const json& obj, const char* name, const std::string& origin) {
  const json& v = field(obj, name, origin);
  if (!v.is_number()) throw FormatError(origin + ": field '" + name + "' must be a number");
  return v.get<double>();
}

bool bool_field(const json& obj, const char* name, const std::string& origin) {
  const json& v = field(obj, name, origin);
  if (!v.is_boolean()) throw FormatError(origin + ": field '" + name + "' must be a boolean");
  return v.get<bool>();
}

std::optional<std::int64_t> seed_field(const json& obj, const std::string& origin) {
  if (!obj.contains("seed") || obj["seed"].is_null()) return std::nullopt;
  if (!obj["seed"].is_number_integer()) throw FormatError(origin + ": seed must be an integer");
  return obj["seed"].get<std::int64_t>();
}

RelationSpec relation_from(const json& rel, const std::string& origin) {
  if (!rel.is_object()) throw FormatError(origin + ": relation must be an object");
  RelationSpec spec;
  spec.subject = string_field(rel, "subject", origin);
  spec.object = string_field(rel, "object", origin);
  const json& kind = field(rel, "kind", origin);
  if (kind.is_string()) {
    auto kinds = parse_kind_list(kind.get<std::string>());
    if (!kinds) throw FormatError(origin + ": unknown relation '" + kind.get<std::string>() + "'");
    spec.kinds = *kinds;
  } else if (kind.is_array()) {
    for (const auto& k : kind) {
      auto parsed = k.is_string() ? parse_relation_kind(k.get<std::string>()) : std::nullopt;
      if (!parsed) throw FormatError(origin + ": unknown relation entry " + k.dump());
      spec.kinds.push_back(*parsed);
    }
    std::stable_sort(spec.kinds.begin(), spec.kinds.end(), [](RelationKind x, RelationKind y) {
      const auto vertical = [](RelationKind k) {
        return k == RelationKind::Above || k == RelationKind::Below;
      };
      return vertical(x) && !vertical(y);
    });
  } else {
    throw FormatError(origin + ": relation kind must be a string or array");
  }
  if (rel.contains("c") && !rel["c"].is_null()) spec.distance_c = number_field(rel, "c", origin);
  try {
    spec.validate();
  } catch (const ContractError& e) {
    throw FormatError(origin + ": " + e.what());
  }
  return spec;
}

}  // namespace

RelationSpec relation_from_json_text(std::string_view text, const std::string& origin) {
  return relation_from(parse_json(text, origin), origin);
}

ScoreRecord record_from_json(std::string_view line) {
  const std::string origin = "record";
  const json obj = parse_json(line, origin);
  if (!obj.is_object()) throw FormatError("record: expected a JSON object");
  ScoreRecord r;
  r.prompt_id = string_field(obj, "prompt_id", origin);
  r.candidate_id = string_field(obj, "candidate_id", origin);
  r.seed = seed_field(obj, origin);
  r.relation = relation_from(field(obj, "relation", origin), origin);
  r.pse = number_field(obj, "pse", origin);
  r.pos_forward = number_field(obj, "pos_forward", origin);
  r.pos_backward = number_field(obj, "pos_backward", origin);
  r.present_a = bool_field(obj, "present_a", origin);
  r.present_b = bool_field(obj, "present_b", origin);
  if (obj.contains("center_verdict")) r.center_verdict = bool_field(obj, "center_verdict", origin);
  if (obj.contains("components")) {
    for (const auto& c : obj["components"]) {
      const auto kind = parse_relation_kind(string_field(c, "kind", origin));
      if (!kind) throw FormatError("record: unknown component kind");
      r.components.push_back({*kind, number_field(c, "pse", origin),
                              number_field(c, "pos_forward", origin),
                              number_field(c, "pos_backward", origin)});
    }
  }
  if (obj.contains("distance_score")) r.distance_score = number_field(obj, "distance_score", origin);
  if (!(r.pse >= 0.0 && r.pse <= 1.0)) throw FormatError("record: pse outside [0, 1]");
  return r;
}

std::vector<ScoreRecord> records_from_jsonl(std::string_view text, const std::string& origin) {
  std::vector<ScoreRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

ManifestEntry parse_manifest_line(std::string_view line, const std::string& origin) {
  const json obj = parse_json(line, origin);
  if (!obj.is_object()) throw FormatError(origin + ": manifest line must be a JSON object");
  ManifestEntry e;
  e.prompt_id = string_field(obj, "prompt_id", origin);
  e.candidate_id = string_field(obj, "candidate_id", origin);
  e.seed = seed_field(obj, origin);
  e.mask_a = string_field(obj, "mask_a", origin);
  e.mask_b = string_field(obj, "mask_b", origin);
  if (obj.contains("depth") && !obj["depth"].is_null()) {
    e.depth = string_field(obj, "depth", origin);
  }
  e.relation = relation_from(field(obj, "relation", origin), origin);
  return e;
}

}  // namespace pse
