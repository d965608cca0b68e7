#include "pse/relation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "pse/error.hpp"

namespace pse {

namespace {

std::string normalize_keyword(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char c : in) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc) || c == '_' || c == '-') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

int vertical_rank(RelationKind k) {
  return (k == RelationKind::Above || k == RelationKind::Below) ? 0 : 1;
}

}  // namespace

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Left: return "left";
    case RelationKind::Right: return "right";
    case RelationKind::Above: return "above";
    case RelationKind::Below: return "below";
    case RelationKind::InFront: return "in_front";
    case RelationKind::Behind: return "behind";
  }
  return "unknown";
}

std::optional<RelationKind> parse_relation_kind(std::string_view keyword) {
  static const std::array<std::pair<std::string_view, RelationKind>, 22> kAliases{{
      {"left", RelationKind::Left},
      {"to the left of", RelationKind::Left},
      {"right", RelationKind::Right},
      {"to the right of", RelationKind::Right},
      {"above", RelationKind::Above},
      {"top", RelationKind::Above},
      {"on top of", RelationKind::Above},
      {"over", RelationKind::Above},
      {"up", RelationKind::Above},
      {"below", RelationKind::Below},
      {"bottom", RelationKind::Below},
      {"under", RelationKind::Below},
      {"beneath", RelationKind::Below},
      {"down", RelationKind::Below},
      {"in front", RelationKind::InFront},
      {"front", RelationKind::InFront},
      {"in front of", RelationKind::InFront},
      {"infront", RelationKind::InFront},
      {"behind", RelationKind::Behind},
      {"hidden", RelationKind::Behind},
      {"hidden behind", RelationKind::Behind},
      {"back", RelationKind::Behind},
  }};
  const std::string key = normalize_keyword(keyword);
  for (const auto& [alias, kind] : kAliases) {
    if (key == alias) return kind;
  }
  return std::nullopt;
}

RelationKind inverse(RelationKind kind) {
  switch (kind) {
    case RelationKind::Left: return RelationKind::Right;
    case RelationKind::Right: return RelationKind::Left;
    case RelationKind::Above: return RelationKind::Below;
    case RelationKind::Below: return RelationKind::Above;
    case RelationKind::InFront: return RelationKind::Behind;
    case RelationKind::Behind: return RelationKind::InFront;
  }
  return kind;
}

bool is_planar(RelationKind kind) {
  return kind != RelationKind::InFront && kind != RelationKind::Behind;
}

ProjectionAxis canonical_axis(RelationKind kind, double bin_width) {
  switch (kind) {
    case RelationKind::Left: return ProjectionAxis::left(bin_width);
    case RelationKind::Right: return ProjectionAxis::right(bin_width);
    case RelationKind::Above: return ProjectionAxis::up(bin_width);
    case RelationKind::Below: return ProjectionAxis::down(bin_width);
    default: break;
  }
  throw ContractError("relation '" + std::string(to_string(kind)) +
                      "' has no image-plane axis");
}

bool RelationSpec::is_3d() const {
  return std::any_of(kinds.begin(), kinds.end(), [](RelationKind k) { return !is_planar(k); });
}

void RelationSpec::validate() const {
  if (kinds.empty()) throw ContractError("relation: no kind given");
  if (kinds.size() > 2) throw ContractError("relation: at most two composite kinds");
  if (subject.empty() || object.empty()) {
    throw ContractError("relation: subject and object must be named");
  }
  if (subject == object) {
    throw ContractError("relation: subject and object are both '" + subject + "'");
  }
  if (kinds.size() == 2) {
    if (!is_planar(kinds[0]) || !is_planar(kinds[1])) {
      throw ContractError("relation: composites may only combine planar kinds");
    }
    if (vertical_rank(kinds[0]) == vertical_rank(kinds[1])) {
      throw ContractError("relation: contradictory composite " + kind_string());
    }
  }
  if (distance_c && !(*distance_c >= 0.0)) {
    throw ContractError("relation: distance constraint must be nonnegative");
  }
}

std::string RelationSpec::kind_string() const {
  std::vector<RelationKind> ordered = kinds;
  std::stable_sort(ordered.begin(), ordered.end(), [](RelationKind a, RelationKind b) {
    return vertical_rank(a) < vertical_rank(b);
  });
  std::string out;
  for (RelationKind k : ordered) {
    if (!out.empty()) out.push_back('_');
    out += to_string(k);
  }
  return out;
}

RelationSpec RelationSpec::inverted() const {
  RelationSpec out{object, subject, {}, distance_c};
  for (RelationKind k : kinds) out.kinds.push_back(inverse(k));
  return out;
}

std::optional<std::vector<RelationKind>> parse_kind_list(std::string_view text) {
  if (auto single = parse_relation_kind(text)) return std::vector<RelationKind>{*single};

  const std::string key = normalize_keyword(text);
  const auto space = key.find(' ');
  if (space == std::string::npos) return std::nullopt;
  std::string first = key.substr(0, space);
  std::string second = key.substr(space + 1);
  if (first == "upper") first = "top";
  if (first == "lower") first = "bottom";
  auto a = parse_relation_kind(first);
  auto b = parse_relation_kind(second);
  if (!a || !b) return std::nullopt;
  std::vector<RelationKind> kinds{*a, *b};
  std::stable_sort(kinds.begin(), kinds.end(), [](RelationKind x, RelationKind y) {
    return vertical_rank(x) < vertical_rank(y);
  });
  return kinds;
}

}  // namespace pse
