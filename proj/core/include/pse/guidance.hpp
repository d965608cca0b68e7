#pragma once

#include <map>
#include <string>
#include <vector>

#include "pse/mass_map.hpp"
#include "pse/relation.hpp"

namespace pse {

/// Loss L = -PoS_v(Â, B̂)² and its gradient with respect to the raw
/// (unnormalized) weights of both maps.
struct GradientResult {
  double loss = 0.0;
  double pos = 0.0;
  RealGrid grad_a;
  RealGrid grad_b;
};

/// Analytic gradient of -PoS² through sum-normalization and projection
/// binning. With per-bin sensitivities g_A(i) = F_B(i) and
/// g_B(j) = P(X_A >= j), each raw weight w_k in bin i receives
///     dL/dw_k = -2p · (g(i) - Σ_m w_m g(m) / Σ w) / Σ w.
/// Throws EmptyMapError / DimensionError / ContractError on bad inputs.
GradientResult pos_loss_grad(const MassMap2D& a_raw, const MassMap2D& b_raw,
                             const ProjectionAxis& axis);

/// Loss only (no gradient buffers); shares the evaluation path of
/// pos_loss_grad.
double pos_loss(const MassMap2D& a_raw, const MassMap2D& b_raw, const ProjectionAxis& axis);

struct CombinedGradient {
  double loss = 0.0;
  std::map<std::string, RealGrid> grads;
};

/// Sum of per-relation losses over token-keyed attention maps. Composite
/// relations contribute one loss per component axis. Throws ContractError
/// naming any token that has no map, and for depth relations.
CombinedGradient combined_loss_grad(const std::map<std::string, MassMap2D>& maps,
                                    const std::vector<RelationSpec>& relations,
                                    double bin_width = 1.0);

/// Gradient entries that a nonnegativity-projected descent step can act on:
/// an entry is zeroed where the weight is already 0 and the gradient would
/// push it negative.
RealGrid projected_gradient(const RealGrid& grad, const MassMap2D& weights);

enum class ScaleSchedule { Constant, LinearDecay };

struct GuidanceConfig {
  double scale_0 = 1000.0;
  int steps = 10;
  ScaleSchedule schedule = ScaleSchedule::Constant;

  void validate() const;

  /// Guided-step presets for the two reference backbones.
  static GuidanceConfig sdxl() { return {1000.0, 10, ScaleSchedule::Constant}; }
  static GuidanceConfig sd14() { return {20.0, 25, ScaleSchedule::Constant}; }
};

/// α_t for denoising step t (0-based); zero outside the guided window.
double step_scale(int t, const GuidanceConfig& config);

}  // namespace pse
