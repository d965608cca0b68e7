#pragma once

#include "pse/distribution.hpp"
#include "pse/mass_map.hpp"
#include "pse/relation.hpp"

namespace pse {

// ---------------------------------------------------------------------------
// Probability of superiority on bounded integer grids.
//
// pos_discrete(a, b) = Σ_j Σ_{i >= j} P_a(i) P_b(j) = P(X >= Y) with
// X ~ a, Y ~ b. Ties count as superiority, so
//     pos_discrete(a, b) + pos_discrete(b, a) = 1 + tie_mass(a, b).
// The tie mass cancels in the PSE difference below.
// ---------------------------------------------------------------------------

double pos_discrete(const DiscreteDistribution1D& a, const DiscreteDistribution1D& b);

/// P(X = Y) for independent X ~ a, Y ~ b.
double tie_mass(const DiscreteDistribution1D& a, const DiscreteDistribution1D& b);

/// P(X > Y + c) with the separation rounded up to whole bins:
/// index(X) > index(Y) + ceil(c / bin_width). Throws ContractError for c < 0.
double pos_distance(const DiscreteDistribution1D& a, const DiscreteDistribution1D& b,
                    double c, double bin_width = 1.0);

/// Normalized projection of a map onto `axis`, on the frame-wide bin grid
/// (bin 0 holds the smallest projected pixel center of the frame). Throws
/// EmptyMapError for a zero-total map.
DiscreteDistribution1D project_mass_map(const MassMap2D& map, const ProjectionAxis& axis);

/// PoS_v(a, b): PoS of the two projections on their shared grid.
double pos_projected(const MassMap2D& a, const MassMap2D& b, const ProjectionAxis& axis);

/// Forward and backward Projected-PoS for one relation component:
/// forward = PoS_{v_r}(A, B), backward = PoS_{-v_r}(A, B).
struct DirectionalPos {
  double forward = 0.0;
  double backward = 0.0;

  /// [forward - backward]^+
  double pse() const;
};

enum class Combine { Mean, Min };

struct PseOptions {
  Combine combine = Combine::Mean;
  double bin_width = 1.0;
  int depth_bins = 256;
};

/// Directional PoS pair for a planar kind. Left and below are evaluated as
/// right and above with the operands swapped, so
/// directional_pos(a, b, k) == directional_pos(b, a, inverse(k)) bit-for-bit.
DirectionalPos directional_pos(const MassMap2D& a, const MassMap2D& b, RelationKind kind,
                               double bin_width = 1.0);

/// Merges per-component scores according to `combine`.
double combine_scores(std::span<const double> scores, Combine combine);

/// PSE(A, B; r) for a planar relation (single or composite).
double pse(const MassMap2D& a, const MassMap2D& b, const RelationSpec& relation,
           const PseOptions& options = {});

inline constexpr double kDefaultThreshold = 0.5;

/// Inclusive at the threshold.
bool pse_binary(double score, double threshold = kDefaultThreshold);

/// Depth histogram of a mask: the full depth map is min–max normalized
/// (after the disparity flip when applicable) and quantized into `bins`
/// equal-width levels. A constant depth map puts all mass into bin 0.
DiscreteDistribution1D depth_distribution(const MassMap2D& mask, const DepthMap& depth,
                                          int bins = 256);

/// Directional PoS pair along the depth axis for in_front / behind.
DirectionalPos directional_pos_3d(const MassMap2D& a, const MassMap2D& b,
                                  const DepthMap& depth, RelationKind kind, int bins = 256);

double pse_3d(const MassMap2D& a, const MassMap2D& b, const DepthMap& depth,
              const RelationSpec& relation, const PseOptions& options = {});

/// Sum of pos_distance over the right, left, up and down projections; in [0, 4].
double pos_distance_omni(const MassMap2D& a, const MassMap2D& b, double c,
                         double bin_width = 1.0);

}  // namespace pse
