#include "pse/pipeline.hpp"

#include <algorithm>
#include <limits>

#include "pse/error.hpp"

namespace pse {

ScoreRecord evaluate_pair(const MassMap2D& mask_a, const MassMap2D& mask_b,
                          const RelationSpec& relation, const DepthMap* depth,
                          const EvalOptions& options) {
  relation.validate();
  if (mask_a.width() != mask_b.width() || mask_a.height() != mask_b.height()) {
    throw DimensionError("masks differ in size: " + std::to_string(mask_a.width()) + "x" +
                         std::to_string(mask_a.height()) + " vs " +
                         std::to_string(mask_b.width()) + "x" +
                         std::to_string(mask_b.height()));
  }
  if (relation.is_3d()) {
    if (depth == nullptr) {
      throw ContractError("relation " + relation.kind_string() + " requires a depth map");
    }
    if (depth->width() != mask_a.width() || depth->height() != mask_a.height()) {
      throw DimensionError("depth map is " + std::to_string(depth->width()) + "x" +
                           std::to_string(depth->height()) + " but masks are " +
                           std::to_string(mask_a.width()) + "x" +
                           std::to_string(mask_a.height()));
    }
  }

  ScoreRecord rec;
  rec.relation = relation;
  rec.present_a = !mask_a.empty();
  rec.present_b = !mask_b.empty();
  if (!rec.both_present()) return rec;

  std::vector<double> scores;
  double forward_sum = 0.0;
  double backward_sum = 0.0;
  for (RelationKind kind : relation.kinds) {
    const DirectionalPos d =
        is_planar(kind)
            ? directional_pos(mask_a, mask_b, kind, options.pse.bin_width)
            : directional_pos_3d(mask_a, mask_b, *depth, kind, options.pse.depth_bins);
    scores.push_back(d.pse());
    forward_sum += d.forward;
    backward_sum += d.backward;
    if (relation.is_composite()) {
      rec.components.push_back({kind, d.pse(), d.forward, d.backward});
    }
  }
  const auto n = static_cast<double>(relation.kinds.size());
  rec.pos_forward = relation.is_composite() ? forward_sum / n : forward_sum;
  rec.pos_backward = relation.is_composite() ? backward_sum / n : backward_sum;
  rec.pse = combine_scores(scores, options.pse.combine);

  if (options.compute_center_baseline && !relation.is_3d()) {
    rec.center_verdict = center_baseline(mask_a, mask_b, relation);
  }
  if (relation.distance_c) {
    rec.distance_score =
        pos_distance_omni(mask_a, mask_b, *relation.distance_c, options.pse.bin_width);
  }
  return rec;
}

BoundingBox bounding_box(const MassMap2D& mask) {
  BoundingBox box{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(), -1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y) > 0.0) {
        box.x_min = std::min(box.x_min, x);
        box.y_min = std::min(box.y_min, y);
        box.x_max = std::max(box.x_max, x);
        box.y_max = std::max(box.y_max, y);
      }
    }
  }
  if (box.x_max < 0) throw EmptyMapError("bounding_box: mask is empty");
  return box;
}

bool center_baseline(const MassMap2D& mask_a, const MassMap2D& mask_b,
                     const RelationSpec& relation) {
  relation.validate();
  const BoundingBox a = bounding_box(mask_a);
  const BoundingBox b = bounding_box(mask_b);
  return std::all_of(relation.kinds.begin(), relation.kinds.end(), [&](RelationKind k) {
    switch (k) {
      case RelationKind::Right: return a.center_x() > b.center_x();
      case RelationKind::Left: return a.center_x() < b.center_x();
      case RelationKind::Above: return a.center_y() < b.center_y();
      case RelationKind::Below: return a.center_y() > b.center_y();
      default: break;
    }
    throw ContractError("center_baseline: depth relations have no box-center rule");
  });
}

}  // namespace pse
