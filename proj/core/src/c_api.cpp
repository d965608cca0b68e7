#include "pse/c_api.h"

#include <algorithm>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "pse/error.hpp"
#include "pse/guidance.hpp"
#include "pse/opse.hpp"
#include "pse/pipeline.hpp"

namespace {

void write_error(char* err, size_t err_len, const char* msg) {
  if (err == nullptr || err_len == 0) return;
  std::strncpy(err, msg, err_len - 1);
  err[err_len - 1] = '\0';
}

template <typename F>
int guarded(char* err, size_t err_len, F&& body) {
  try {
    body();
    return PSE_OK;
  } catch (const pse::Error& e) {
    write_error(err, err_len, e.what());
    return PSE_ERR_INPUT;
  } catch (const std::exception& e) {
    write_error(err, err_len, e.what());
    return PSE_ERR_INTERNAL;
  } catch (...) {
    write_error(err, err_len, "unknown error");
    return PSE_ERR_INTERNAL;
  }
}

std::size_t checked_size(int64_t height, int64_t width) {
  if (height <= 0 || width <= 0 || height > (1 << 20) || width > (1 << 20)) {
    throw pse::DimensionError("buffer dimensions must be positive");
  }
  return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
}

pse::MassMap2D view(const double* data, int64_t height, int64_t width, const char* name) {
  if (data == nullptr) throw pse::ContractError(std::string("null buffer: ") + name);
  const std::size_t n = checked_size(height, width);
  return pse::MassMap2D(static_cast<int>(width), static_cast<int>(height),
                        std::vector<double>(data, data + n));
}

pse::RelationSpec relation_of(const char* text) {
  if (text == nullptr) throw pse::ContractError("null relation");
  auto kinds = pse::parse_kind_list(text);
  if (!kinds) throw pse::ContractError(std::string("unknown relation '") + text + "'");
  pse::RelationSpec spec{"a", "b", *kinds, std::nullopt};
  spec.validate();
  return spec;
}

}  // namespace

extern "C" {

int pse_score_buffers(const double* mask_a, const double* mask_b, int64_t height,
                      int64_t width, const char* relation, const double* depth,
                      int depth_convention, int combine, int depth_bins,
                      pse_score_result* out, char* err, size_t err_len) {
  return guarded(err, err_len, [&] {
    if (out == nullptr) throw pse::ContractError("null result pointer");
    const auto a = view(mask_a, height, width, "mask_a");
    const auto b = view(mask_b, height, width, "mask_b");
    const auto spec = relation_of(relation);
    std::optional<pse::DepthMap> d;
    if (depth != nullptr) {
      const std::size_t n = checked_size(height, width);
      d.emplace(static_cast<int>(width), static_cast<int>(height),
                std::vector<double>(depth, depth + n),
                depth_convention == PSE_DISPARITY ? pse::DepthConvention::Disparity
                                                  : pse::DepthConvention::Depth);
    }
    pse::EvalOptions opts;
    opts.pse.combine = combine == PSE_COMBINE_MIN ? pse::Combine::Min : pse::Combine::Mean;
    if (depth_bins > 0) opts.pse.depth_bins = depth_bins;
    const auto rec = pse::evaluate_pair(a, b, spec, d ? &*d : nullptr, opts);
    out->pse = rec.pse;
    out->pos_forward = rec.pos_forward;
    out->pos_backward = rec.pos_backward;
    out->present_a = rec.present_a ? 1 : 0;
    out->present_b = rec.present_b ? 1 : 0;
    out->center_verdict = rec.center_verdict ? (*rec.center_verdict ? 1 : 0) : -1;
  });
}

int pse_loss_grad_buffers(const double* attn_a, const double* attn_b, int64_t height,
                          int64_t width, const char* relation, double* loss,
                          double* grad_a, double* grad_b, char* err, size_t err_len) {
  return guarded(err, err_len, [&] {
    if (loss == nullptr || grad_a == nullptr || grad_b == nullptr) {
      throw pse::ContractError("null output buffer");
    }
    std::map<std::string, pse::MassMap2D> maps;
    maps.emplace("a", view(attn_a, height, width, "attn_a"));
    maps.emplace("b", view(attn_b, height, width, "attn_b"));
    const auto result = pse::combined_loss_grad(maps, {relation_of(relation)});
    *loss = result.loss;
    const auto& ga = result.grads.at("a").values;
    const auto& gb = result.grads.at("b").values;
    std::copy(ga.begin(), ga.end(), grad_a);
    std::copy(gb.begin(), gb.end(), grad_b);
  });
}

int pse_ucb_value(int64_t pull_count, double score_sum, int64_t t, double alpha, double* out,
                  char* err, size_t err_len) {
  return guarded(err, err_len, [&] {
    if (out == nullptr) throw pse::ContractError("null result pointer");
    *out = pse::ucb_value({pull_count, score_sum}, t, alpha);
  });
}

int pse_select_arm(const int64_t* pull_counts, const double* score_sums, size_t arm_count,
                   double alpha, size_t* out, char* err, size_t err_len) {
  return guarded(err, err_len, [&] {
    if (out == nullptr || pull_counts == nullptr || score_sums == nullptr) {
      throw pse::ContractError("null buffer");
    }
    std::vector<pse::ArmStats> arms(arm_count);
    for (size_t i = 0; i < arm_count; ++i) arms[i] = {pull_counts[i], score_sums[i]};
    *out = pse::BanditState::from_arms(std::move(arms), alpha).select_arm();
  });
}

}  // extern "C"
