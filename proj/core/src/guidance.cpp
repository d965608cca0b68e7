#include "pse/guidance.hpp"

#include <cmath>
#include <string>

#include "pse/error.hpp"

namespace pse {

namespace {

struct BinnedPair {
  PixelBinning binning;
  std::vector<double> wa;
  std::vector<double> wb;
  double total_a = 0.0;
  double total_b = 0.0;
};

BinnedPair bin_pair(const MassMap2D& a, const MassMap2D& b, const ProjectionAxis& axis) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError("attention maps differ in size");
  }
  BinnedPair out{PixelBinning::compute(a.width(), a.height(), axis), {}, {}, 0.0, 0.0};
  out.wa = out.binning.accumulate(a.weights());
  out.wb = out.binning.accumulate(b.weights());
  for (double w : out.wa) out.total_a += w;
  for (double w : out.wb) out.total_b += w;
  if (!(out.total_a > 0.0)) throw EmptyMapError("attention map A has zero total weight");
  if (!(out.total_b > 0.0)) throw EmptyMapError("attention map B has zero total weight");
  return out;
}

// Σ_{j <= i} w_b(j), raw.
std::vector<double> prefix(const std::vector<double>& w) {
  std::vector<double> out(w.size());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = (s += w[i]);
  return out;
}

// Σ_{i >= j} w_a(i), raw.
std::vector<double> suffix(const std::vector<double>& w) {
  std::vector<double> out(w.size());
  double s = 0.0;
  for (std::size_t i = w.size(); i-- > 0;) out[i] = (s += w[i]);
  return out;
}

double pos_of(const BinnedPair& p, const std::vector<double>& surv_a) {
  double numerator = 0.0;
  for (std::size_t j = 0; j < p.wb.size(); ++j) numerator += p.wb[j] * surv_a[j];
  return std::min(1.0, numerator / (p.total_a * p.total_b));
}

// Centered per-bin sensitivity scattered to pixels and scaled by dL/dp / total.
RealGrid scatter(const BinnedPair& p, const std::vector<double>& bin_weights, double total,
                 const std::vector<double>& sensitivity, double dl_dp) {
  double centering = 0.0;
  for (std::size_t i = 0; i < bin_weights.size(); ++i) {
    centering += bin_weights[i] * sensitivity[i];
  }
  centering /= total;
  std::vector<double> per_bin(sensitivity.size());
  for (std::size_t i = 0; i < sensitivity.size(); ++i) {
    per_bin[i] = dl_dp * (sensitivity[i] - centering) / total;
  }
  RealGrid grid(p.binning.width, p.binning.height);
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    grid.values[k] = per_bin[p.binning.bin_of_pixel[k]];
  }
  return grid;
}

}  // namespace

GradientResult pos_loss_grad(const MassMap2D& a_raw, const MassMap2D& b_raw,
                             const ProjectionAxis& axis) {
  const BinnedPair p = bin_pair(a_raw, b_raw, axis);

  const auto cdf_b_raw = prefix(p.wb);
  const auto surv_a_raw = suffix(p.wa);
  const double pos = pos_of(p, surv_a_raw);

  std::vector<double> sens_a(cdf_b_raw.size());
  std::vector<double> sens_b(surv_a_raw.size());
  for (std::size_t i = 0; i < sens_a.size(); ++i) sens_a[i] = cdf_b_raw[i] / p.total_b;
  for (std::size_t j = 0; j < sens_b.size(); ++j) sens_b[j] = surv_a_raw[j] / p.total_a;

  const double dl_dp = -2.0 * pos;
  GradientResult out;
  out.pos = pos;
  out.loss = -pos * pos;
  out.grad_a = scatter(p, p.wa, p.total_a, sens_a, dl_dp);
  out.grad_b = scatter(p, p.wb, p.total_b, sens_b, dl_dp);
  return out;
}

double pos_loss(const MassMap2D& a_raw, const MassMap2D& b_raw, const ProjectionAxis& axis) {
  const BinnedPair p = bin_pair(a_raw, b_raw, axis);
  const double pos = pos_of(p, suffix(p.wa));
  return -pos * pos;
}

CombinedGradient combined_loss_grad(const std::map<std::string, MassMap2D>& maps,
                                    const std::vector<RelationSpec>& relations,
                                    double bin_width) {
  CombinedGradient out;
  for (const auto& rel : relations) {
    for (const std::string* token : {&rel.subject, &rel.object}) {
      if (!maps.contains(*token)) {
        throw ContractError("combined_loss_grad: no attention map for token '" + *token + "'");
      }
    }
    if (rel.is_3d()) {
      throw ContractError("combined_loss_grad: depth relation " + rel.kind_string() +
                          " cannot be guided on attention maps");
    }
  }
  for (const auto& [token, map] : maps) {
    out.grads.emplace(token, RealGrid(map.width(), map.height()));
  }
  for (const auto& rel : relations) {
    const MassMap2D& a = maps.at(rel.subject);
    const MassMap2D& b = maps.at(rel.object);
    for (RelationKind kind : rel.kinds) {
      const auto g = pos_loss_grad(a, b, canonical_axis(kind, bin_width));
      out.loss += g.loss;
      for (const auto& [token, grad] : {std::pair{&rel.subject, &g.grad_a},
                                        std::pair{&rel.object, &g.grad_b}}) {
        auto& acc = out.grads.at(*token).values;
        for (std::size_t k = 0; k < grad->values.size(); ++k) acc[k] += grad->values[k];
      }
    }
  }
  return out;
}

RealGrid projected_gradient(const RealGrid& grad, const MassMap2D& weights) {
  if (grad.width != weights.width() || grad.height != weights.height()) {
    throw DimensionError("projected_gradient: gradient and weights differ in size");
  }
  RealGrid out = grad;
  const auto w = weights.weights();
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    if (w[k] == 0.0 && out.values[k] > 0.0) out.values[k] = 0.0;
  }
  return out;
}

void GuidanceConfig::validate() const {
  if (!(scale_0 > 0.0) || !std::isfinite(scale_0)) {
    throw ContractError("guidance: scale_0 must be positive");
  }
  if (steps < 1) throw ContractError("guidance: steps must be at least 1");
}

double step_scale(int t, const GuidanceConfig& config) {
  config.validate();
  if (t < 0) throw ContractError("step_scale: t must be nonnegative");
  if (t >= config.steps) return 0.0;
  if (config.schedule == ScaleSchedule::LinearDecay) {
    return config.scale_0 * (1.0 - static_cast<double>(t) / config.steps);
  }
  return config.scale_0;
}

}  // namespace pse
