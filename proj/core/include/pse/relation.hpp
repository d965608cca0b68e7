#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pse/mass_map.hpp"

namespace pse {

enum class RelationKind { Left, Right, Above, Below, InFront, Behind };

/// Canonical lowercase name ("left", "in_front", ...).
std::string_view to_string(RelationKind kind);

/// Accepts canonical names and aliases ("top", "bottom", "under", "front",
/// "in front", "hidden", ...). Returns nullopt for unknown keywords.
std::optional<RelationKind> parse_relation_kind(std::string_view keyword);

RelationKind inverse(RelationKind kind);
bool is_planar(RelationKind kind);

/// Canonical image-plane direction for a planar kind (image rows grow
/// downward, so `Above` is (0, -1)). Throws ContractError for 3D kinds.
ProjectionAxis canonical_axis(RelationKind kind, double bin_width = 1.0);

/// (subject, object, relation) triple. `kinds` holds either one kind or a
/// composite of two non-contradictory planar kinds (e.g. above + left).
struct RelationSpec {
  std::string subject;
  std::string object;
  std::vector<RelationKind> kinds;
  std::optional<double> distance_c;

  bool is_composite() const { return kinds.size() > 1; }
  bool is_3d() const;

  /// Throws ContractError when the spec breaks its invariants.
  void validate() const;

  /// Kinds joined with '_' in vertical-then-horizontal order ("above_left").
  std::string kind_string() const;

  /// Same objects, every kind inverted, subject and object swapped.
  RelationSpec inverted() const;

  bool operator==(const RelationSpec&) const = default;
};

/// Parses "right", "top_left", "top-left", "top left", ... into a kind list.
/// Returns nullopt on any unknown component.
std::optional<std::vector<RelationKind>> parse_kind_list(std::string_view text);

}  // namespace pse
