#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pse/mass_map.hpp"
#include "pse/pos.hpp"
#include "pse/relation.hpp"

namespace pse {

struct ComponentScore {
  RelationKind kind;
  double pse = 0.0;
  double pos_forward = 0.0;
  double pos_backward = 0.0;

  bool operator==(const ComponentScore&) const = default;
};

/// Outcome of evaluating one relation on one candidate image.
struct ScoreRecord {
  std::string prompt_id;
  std::string candidate_id;
  std::optional<std::int64_t> seed;
  RelationSpec relation;
  double pse = 0.0;
  double pos_forward = 0.0;
  double pos_backward = 0.0;
  bool present_a = false;
  bool present_b = false;
  std::optional<bool> center_verdict;
  /// Per-component scores, filled only for composite relations. The
  /// top-level forward/backward values are then component means.
  std::vector<ComponentScore> components;
  /// pos_distance_omni at the relation's distance constraint, when it has one.
  std::optional<double> distance_score;

  bool both_present() const { return present_a && present_b; }
  bool operator==(const ScoreRecord&) const = default;
};

struct EvalOptions {
  PseOptions pse;
  bool compute_center_baseline = true;
};

/// Scores `relation` between two masks. A missing object (zero-total mask)
/// gives pse = 0 with the presence flag cleared; it is not an error. Throws
/// DimensionError on mismatched frames and ContractError when a depth
/// relation is given without a depth map.
ScoreRecord evaluate_pair(const MassMap2D& mask_a, const MassMap2D& mask_b,
                          const RelationSpec& relation, const DepthMap* depth = nullptr,
                          const EvalOptions& options = {});

struct BoundingBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }
};

/// Axis-aligned box of the positive-weight pixels. Throws EmptyMapError.
BoundingBox bounding_box(const MassMap2D& mask);

/// Center-based baseline: compares box centers along the relation axis with a
/// strict inequality. Composite relations require every component to hold.
bool center_baseline(const MassMap2D& mask_a, const MassMap2D& mask_b,
                     const RelationSpec& relation);

}  // namespace pse
