#include "pse/pos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pse/error.hpp"

namespace pse {

namespace {

// Σ_{i >= j} w_a(i) for every j in [a.start(), a.last() + 1].
std::vector<double> suffix_sums(const DiscreteDistribution1D& a) {
  const auto w = a.weights();
  std::vector<double> s(w.size() + 1, 0.0);
  for (std::size_t i = w.size(); i-- > 0;) s[i] = s[i + 1] + w[i];
  return s;
}

double suffix_at(const std::vector<double>& suffix, const DiscreteDistribution1D& a,
                 std::int64_t j) {
  if (j <= a.start()) return suffix.front();
  if (j > a.last()) return 0.0;
  return suffix[static_cast<std::size_t>(j - a.start())];
}

// Σ_j w_b(j) · Σ_{i >= j + offset} w_a(i), normalized by both totals.
double superiority_with_offset(const DiscreteDistribution1D& a,
                               const DiscreteDistribution1D& b, std::int64_t offset) {
  const auto suffix = suffix_sums(a);
  const auto wb = b.weights();
  double numerator = 0.0;
  for (std::size_t k = 0; k < wb.size(); ++k) {
    if (wb[k] == 0.0) continue;
    const std::int64_t j = b.start() + static_cast<std::int64_t>(k);
    numerator += wb[k] * suffix_at(suffix, a, j + offset);
  }
  const double p = numerator / (a.total_weight() * b.total_weight());
  return std::clamp(p, 0.0, 1.0);
}

void require_same_frame(const MassMap2D& a, const MassMap2D& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError("maps differ in size: " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                         "x" + std::to_string(b.height()));
  }
}

void require_nonempty(const MassMap2D& m, const char* which) {
  if (m.pixel_count() == 0 || m.empty()) {
    throw EmptyMapError(std::string("map ") + which + " has zero total weight");
  }
}

DiscreteDistribution1D project_with(const PixelBinning& binning, const MassMap2D& map) {
  return DiscreteDistribution1D::from_weights(0, binning.accumulate(map.weights()));
}

std::pair<DiscreteDistribution1D, DiscreteDistribution1D> project_both(
    const MassMap2D& a, const MassMap2D& b, const ProjectionAxis& axis) {
  require_same_frame(a, b);
  require_nonempty(a, "A");
  require_nonempty(b, "B");
  const auto binning = PixelBinning::compute(a.width(), a.height(), axis);
  return {project_with(binning, a), project_with(binning, b)};
}

}  // namespace

double pos_discrete(const DiscreteDistribution1D& a, const DiscreteDistribution1D& b) {
  return superiority_with_offset(a, b, 0);
}

double tie_mass(const DiscreteDistribution1D& a, const DiscreteDistribution1D& b) {
  const std::int64_t lo = std::max(a.start(), b.start());
  const std::int64_t hi = std::min(a.last(), b.last());
  double numerator = 0.0;
  for (std::int64_t i = lo; i <= hi; ++i) {
    numerator += a.weights()[static_cast<std::size_t>(i - a.start())] *
                 b.weights()[static_cast<std::size_t>(i - b.start())];
  }
  return std::clamp(numerator / (a.total_weight() * b.total_weight()), 0.0, 1.0);
}

double pos_distance(const DiscreteDistribution1D& a, const DiscreteDistribution1D& b,
                    double c, double bin_width) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw ContractError("pos_distance: c must be finite and nonnegative");
  }
  if (!(bin_width > 0.0)) throw ContractError("pos_distance: bin width must be positive");
  const auto margin = static_cast<std::int64_t>(std::ceil(c / bin_width));
  return superiority_with_offset(a, b, margin + 1);
}

DiscreteDistribution1D project_mass_map(const MassMap2D& map, const ProjectionAxis& axis) {
  require_nonempty(map, "to project");
  return project_with(PixelBinning::compute(map.width(), map.height(), axis), map);
}

double pos_projected(const MassMap2D& a, const MassMap2D& b, const ProjectionAxis& axis) {
  const auto [pa, pb] = project_both(a, b, axis);
  return pos_discrete(pa, pb);
}

double DirectionalPos::pse() const { return std::max(forward - backward, 0.0); }

DirectionalPos directional_pos(const MassMap2D& a, const MassMap2D& b, RelationKind kind,
                               double bin_width) {
  if (!is_planar(kind)) {
    throw ContractError("directional_pos: '" + std::string(to_string(kind)) +
                        "' is not a planar relation");
  }
  const bool horizontal = kind == RelationKind::Left || kind == RelationKind::Right;
  const bool swapped = kind == RelationKind::Left || kind == RelationKind::Below;
  const ProjectionAxis base =
      horizontal ? ProjectionAxis::right(bin_width) : ProjectionAxis::up(bin_width);
  const auto [pa, pb] = project_both(a, b, base);
  const auto& lead = swapped ? pb : pa;
  const auto& trail = swapped ? pa : pb;
  return {pos_discrete(lead, trail), pos_discrete(trail, lead)};
}

double combine_scores(std::span<const double> scores, Combine combine) {
  if (scores.empty()) throw ContractError("combine_scores: no component scores");
  if (combine == Combine::Min) return *std::min_element(scores.begin(), scores.end());
  double s = 0.0;
  for (double v : scores) s += v;
  return s / static_cast<double>(scores.size());
}

double pse(const MassMap2D& a, const MassMap2D& b, const RelationSpec& relation,
           const PseOptions& options) {
  relation.validate();
  if (relation.is_3d()) {
    throw ContractError("pse: relation " + relation.kind_string() +
                        " needs a depth map; use pse_3d");
  }
  std::vector<double> scores;
  for (RelationKind k : relation.kinds) {
    scores.push_back(directional_pos(a, b, k, options.bin_width).pse());
  }
  return combine_scores(scores, options.combine);
}

bool pse_binary(double score, double threshold) { return score >= threshold; }

DiscreteDistribution1D depth_distribution(const MassMap2D& mask, const DepthMap& depth,
                                          int bins) {
  if (bins < 2) throw ContractError("depth_distribution: need at least 2 bins");
  if (mask.width() != depth.width() || mask.height() != depth.height()) {
    throw DimensionError("depth map is " + std::to_string(depth.width()) + "x" +
                         std::to_string(depth.height()) + " but mask is " +
                         std::to_string(mask.width()) + "x" + std::to_string(mask.height()));
  }
  require_nonempty(mask, "for depth");

  const auto values = depth.values();
  const bool flip = depth.convention() == DepthConvention::Disparity;
  auto as_depth = [flip](double v) { return flip ? -v : v; };

  double lo = as_depth(values[0]);
  double hi = lo;
  for (double v : values) {
    lo = std::min(lo, as_depth(v));
    hi = std::max(hi, as_depth(v));
  }
  const double range = hi - lo;

  std::vector<double> weights(static_cast<std::size_t>(bins), 0.0);
  const auto mw = mask.weights();
  for (std::size_t i = 0; i < mw.size(); ++i) {
    if (mw[i] == 0.0) continue;
    int bin = 0;
    if (range > 0.0) {
      const double unit = (as_depth(values[i]) - lo) / range;
      bin = std::min(bins - 1, static_cast<int>(std::floor(unit * bins)));
    }
    weights[static_cast<std::size_t>(bin)] += mw[i];
  }
  return DiscreteDistribution1D::from_weights(0, std::move(weights));
}

DirectionalPos directional_pos_3d(const MassMap2D& a, const MassMap2D& b,
                                  const DepthMap& depth, RelationKind kind, int bins) {
  if (is_planar(kind)) {
    throw ContractError("directional_pos_3d: '" + std::string(to_string(kind)) +
                        "' is not a depth relation");
  }
  require_same_frame(a, b);
  require_nonempty(a, "A");
  require_nonempty(b, "B");
  const auto da = depth_distribution(a, depth, bins);
  const auto db = depth_distribution(b, depth, bins);
  // in_front points toward smaller depth: PoS_front(A, B) = P(depth_A <= depth_B).
  const auto& lead = kind == RelationKind::InFront ? db : da;
  const auto& trail = kind == RelationKind::InFront ? da : db;
  return {pos_discrete(lead, trail), pos_discrete(trail, lead)};
}

double pse_3d(const MassMap2D& a, const MassMap2D& b, const DepthMap& depth,
              const RelationSpec& relation, const PseOptions& options) {
  relation.validate();
  if (relation.kinds.size() != 1 || is_planar(relation.kinds.front())) {
    throw ContractError("pse_3d: relation must be in_front or behind");
  }
  return directional_pos_3d(a, b, depth, relation.kinds.front(), options.depth_bins).pse();
}

double pos_distance_omni(const MassMap2D& a, const MassMap2D& b, double c,
                         double bin_width) {
  double total = 0.0;
  for (const auto& axis : {ProjectionAxis::right(bin_width), ProjectionAxis::left(bin_width),
                           ProjectionAxis::up(bin_width), ProjectionAxis::down(bin_width)}) {
    const auto [pa, pb] = project_both(a, b, axis);
    total += pos_distance(pa, pb, c, bin_width);
  }
  return total;
}

}  // namespace pse
