#include "pse/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "pse/error.hpp"

namespace pse {

namespace {

using Words = std::vector<std::string>;

struct Phrase {
  Words words;
  std::vector<RelationKind> kinds;
};

const std::vector<Phrase>& phrases() {
  static const std::vector<Phrase> table = [] {
    std::vector<Phrase> t;
    const std::array<std::pair<const char*, RelationKind>, 4> vertical{{
        {"top", RelationKind::Above},
        {"upper", RelationKind::Above},
        {"bottom", RelationKind::Below},
        {"lower", RelationKind::Below},
    }};
    const std::array<std::pair<const char*, RelationKind>, 2> horizontal{{
        {"left", RelationKind::Left},
        {"right", RelationKind::Right},
    }};
    for (const char* lead : {"to", "on", "at"}) {
      for (const auto& [v, vk] : vertical) {
        for (const auto& [h, hk] : horizontal) {
          t.push_back({{lead, "the", v, h, "of"}, {vk, hk}});
          t.push_back({{lead, "the", std::string(v) + "-" + h, "of"}, {vk, hk}});
        }
      }
      for (const auto& [h, hk] : horizontal) t.push_back({{lead, "the", h, "of"}, {hk}});
    }
    t.push_back({{"on", "top", "of"}, {RelationKind::Above}});
    t.push_back({{"in", "front", "of"}, {RelationKind::InFront}});
    t.push_back({{"hidden", "behind"}, {RelationKind::Behind}});
    for (const char* w : {"above", "over"}) t.push_back({{w}, {RelationKind::Above}});
    for (const char* w : {"below", "under", "beneath", "underneath"}) {
      t.push_back({{w}, {RelationKind::Below}});
    }
    t.push_back({{"behind"}, {RelationKind::Behind}});
    std::stable_sort(t.begin(), t.end(), [](const Phrase& a, const Phrase& b) {
      return a.words.size() > b.words.size();
    });
    return t;
  }();
  return table;
}

bool is_article(const std::string& w) { return w == "a" || w == "an" || w == "the"; }
bool is_copula(const std::string& w) {
  return w == "is" || w == "are" || w == "was" || w == "were";
}

Words split_words(std::string_view text) {
  Words out;
  std::string cur;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc) || c == '-' || c == '\'' || c == '#' || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Sentences split on terminal punctuation, clauses on the word "and".
std::vector<Words> clauses(std::string_view text) {
  std::vector<Words> out;
  std::string sentence;
  auto flush_sentence = [&] {
    Words words = split_words(sentence);
    sentence.clear();
    Words cur;
    for (auto& w : words) {
      if (w == "and") {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(std::move(w));
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
  };
  for (char c : text) {
    if (c == '.' || c == ';' || c == '!' || c == '?' || c == '\n') {
      flush_sentence();
    } else {
      sentence.push_back(c);
    }
  }
  flush_sentence();
  return out;
}

std::string join(const Words& w, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += w[i];
  }
  return out;
}

std::string noun_phrase(const Words& w, std::size_t begin, std::size_t end, bool subject) {
  if (subject) {
    // "a horse is running to the left of ..." keeps only "horse".
    for (std::size_t i = begin; i < end; ++i) {
      if (is_copula(w[i])) {
        end = i;
        break;
      }
    }
  }
  while (begin < end && is_article(w[begin])) ++begin;
  return join(w, begin, end);
}

std::optional<std::pair<std::size_t, const Phrase*>> find_phrase(const Words& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (const Phrase& p : phrases()) {
      if (i + p.words.size() > w.size()) continue;
      if (std::equal(p.words.begin(), p.words.end(), w.begin() + static_cast<std::ptrdiff_t>(i))) {
        return std::pair{i, &p};
      }
    }
  }
  return std::nullopt;
}

std::string_view phrase_for(const std::vector<RelationKind>& kinds) {
  if (kinds.size() == 2) {
    const bool top = std::find(kinds.begin(), kinds.end(), RelationKind::Above) != kinds.end();
    const bool left = std::find(kinds.begin(), kinds.end(), RelationKind::Left) != kinds.end();
    if (top) return left ? "to the top left of" : "to the top right of";
    return left ? "to the bottom left of" : "to the bottom right of";
  }
  switch (kinds.front()) {
    case RelationKind::Left: return "to the left of";
    case RelationKind::Right: return "to the right of";
    case RelationKind::Above: return "above";
    case RelationKind::Below: return "below";
    case RelationKind::InFront: return "in front of";
    case RelationKind::Behind: return "behind";
  }
  return "";
}

void disambiguate(RelationSpec& spec) {
  if (spec.subject == spec.object) spec.object += "#2";
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lowered(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<RelationKind> kinds_or_throw(const std::string& keyword, const std::string& where) {
  auto kinds = parse_kind_list(keyword);
  if (!kinds) throw FormatError(where + ": unknown relation '" + keyword + "'");
  return *kinds;
}

std::vector<RelationSpec> parse_tuple_lines(const std::string& text, const std::string& origin) {
  std::vector<RelationSpec> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (body.front() != '(' || body.back() != ')') {
      throw FormatError(where + ": expected '(object1, object2, relationship)'");
    }
    body = body.substr(1, body.size() - 2);
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
      const auto comma = body.find(',', begin);
      fields.push_back(trim(body.substr(begin, comma == std::string::npos ? std::string::npos
                                                                          : comma - begin)));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    if (fields.size() != 3 && fields.size() != 4) {
      throw FormatError(where + ": expected 3 fields (or 4 with a distance), got " +
                        std::to_string(fields.size()));
    }
    RelationSpec spec{lowered(fields[0]), lowered(fields[1]), kinds_or_throw(fields[2], where),
                      std::nullopt};
    if (fields.size() == 4) {
      try {
        spec.distance_c = std::stod(fields[3]);
      } catch (const std::exception&) {
        throw FormatError(where + ": bad distance '" + fields[3] + "'");
      }
    }
    disambiguate(spec);
    try {
      spec.validate();
    } catch (const ContractError& e) {
      throw FormatError(where + ": " + e.what());
    }
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<RelationSpec> parse_json_array(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(origin + ": invalid JSON: " + e.what());
  }
  if (!doc.is_array()) throw FormatError(origin + ": expected a JSON array of relations");
  std::vector<RelationSpec> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = origin + "[" + std::to_string(i) + "]";
    const auto& item = doc[i];
    if (!item.is_object() || !item.contains("subject") || !item.contains("object") ||
        !item.contains("kind") || !item["subject"].is_string() || !item["object"].is_string()) {
      throw FormatError(where + ": expected {subject, object, kind}");
    }
    RelationSpec spec{lowered(item["subject"].get<std::string>()),
                      lowered(item["object"].get<std::string>()), {}, std::nullopt};
    const auto& kind = item["kind"];
    if (kind.is_string()) {
      spec.kinds = kinds_or_throw(kind.get<std::string>(), where);
    } else if (kind.is_array()) {
      for (const auto& k : kind) {
        if (!k.is_string()) throw FormatError(where + ": kind entries must be strings");
        auto parsed = parse_relation_kind(k.get<std::string>());
        if (!parsed) throw FormatError(where + ": unknown relation '" + k.get<std::string>() + "'");
        spec.kinds.push_back(*parsed);
      }
      if (spec.kinds.size() == 2 && is_planar(spec.kinds[1]) &&
          (spec.kinds[1] == RelationKind::Above || spec.kinds[1] == RelationKind::Below)) {
        std::swap(spec.kinds[0], spec.kinds[1]);
      }
    } else {
      throw FormatError(where + ": kind must be a string or an array of strings");
    }
    for (const char* key : {"c", "distance_c"}) {
      if (item.contains(key)) {
        if (!item[key].is_number()) throw FormatError(where + ": distance must be a number");
        spec.distance_c = item[key].get<double>();
      }
    }
    disambiguate(spec);
    try {
      spec.validate();
    } catch (const ContractError& e) {
      throw FormatError(where + ": " + e.what());
    }
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace

PromptParse parse_prompt(std::string_view text) {
  PromptParse result;
  for (const Words& clause : clauses(text)) {
    const auto found = find_phrase(clause);
    if (!found) {
      result.diagnostics.push_back("no spatial relation in \"" + join(clause, 0, clause.size()) +
                                   "\"");
      continue;
    }
    const auto [at, phrase] = *found;
    RelationSpec spec{noun_phrase(clause, 0, at, true),
                      noun_phrase(clause, at + phrase->words.size(), clause.size(), false),
                      phrase->kinds, std::nullopt};
    if (spec.subject.empty() || spec.object.empty()) {
      result.diagnostics.push_back("missing object name in \"" + join(clause, 0, clause.size()) +
                                   "\"");
      continue;
    }
    disambiguate(spec);
    result.relations.push_back(std::move(spec));
  }
  return result;
}

std::string render_prompt(const RelationSpec& spec) {
  spec.validate();
  return "a " + spec.subject + " " + std::string(phrase_for(spec.kinds)) + " a " + spec.object;
}

std::vector<RelationSpec> parse_relations(const std::string& text, const std::string& origin) {
  const std::string body = trim(text);
  if (body.empty()) return {};
  if (body.front() == '[') return parse_json_array(body, origin);
  return parse_tuple_lines(text, origin);
}

std::vector<RelationSpec> load_relations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_relations(ss.str(), path.string());
}

}  // namespace pse
