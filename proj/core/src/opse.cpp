#include "pse/opse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pse/corruption.hpp"
#include "pse/error.hpp"

namespace pse {

double ucb_value(const ArmStats& arm, std::int64_t t, double alpha) {
  if (arm.pull_count < 1) throw ContractError("ucb_value: arm has not been pulled");
  if (t < 1) throw ContractError("ucb_value: t must be at least 1");
  const auto n = static_cast<double>(arm.pull_count);
  return arm.score_sum / n + alpha * std::sqrt(std::log(static_cast<double>(t)) / n);
}

BanditState::BanditState(std::size_t arm_count, double alpha)
    : arms_(arm_count), alpha_(alpha) {
  if (arm_count == 0) throw ContractError("bandit: need at least one arm");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ContractError("bandit: alpha must be finite and nonnegative");
  }
}

BanditState BanditState::from_arms(std::vector<ArmStats> arms, double alpha) {
  BanditState state(arms.size(), alpha);
  for (const ArmStats& a : arms) {
    if (a.pull_count < 0) throw ContractError("bandit: negative pull count");
    if (!(a.score_sum >= 0.0 && a.score_sum <= static_cast<double>(a.pull_count))) {
      throw ContractError("bandit: score sum outside [0, pull_count]");
    }
    state.t_ += a.pull_count;
  }
  state.arms_ = std::move(arms);
  return state;
}

std::size_t BanditState::select_arm() const {
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (arms_[i].pull_count == 0) return i;
  }
  std::size_t best = 0;
  double best_value = ucb_value(arms_[0], t_, alpha_);
  for (std::size_t i = 1; i < arms_.size(); ++i) {
    const double v = ucb_value(arms_[i], t_, alpha_);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

void BanditState::update(std::size_t arm, double score) {
  if (arm >= arms_.size()) {
    throw ContractError("bandit: arm " + std::to_string(arm) + " out of range (" +
                        std::to_string(arms_.size()) + " arms)");
  }
  if (!(score >= 0.0 && score <= 1.0)) {
    throw ContractError("bandit: score " + std::to_string(score) + " outside [0, 1]");
  }
  ++arms_[arm].pull_count;
  arms_[arm].score_sum += score;
  ++t_;
}

long SimulationResult::plurality_arm() const {
  if (pull_counts.empty()) return -1;
  const auto it = std::max_element(pull_counts.begin(), pull_counts.end());
  if (std::count(pull_counts.begin(), pull_counts.end(), *it) > 1) return -1;
  return static_cast<long>(it - pull_counts.begin());
}

namespace {

double draw_score(std::mt19937_64& rng, double mean, const SimulationConfig& config) {
  if (config.model == ScoreModel::Bernoulli) return uniform_unit(rng) < mean ? 1.0 : 0.0;
  if (mean <= 0.0 || mean >= 1.0) return mean;
  std::gamma_distribution<double> ga(mean * config.beta_concentration, 1.0);
  std::gamma_distribution<double> gb((1.0 - mean) * config.beta_concentration, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x + y > 0.0 ? x / (x + y) : mean;
}

}  // namespace

SimulationResult simulate(const SimulationConfig& config) {
  if (config.arm_means.empty()) throw ContractError("simulate: no arms");
  for (double m : config.arm_means) {
    if (!(m >= 0.0 && m <= 1.0)) throw ContractError("simulate: arm means must lie in [0, 1]");
  }
  if (config.rounds < static_cast<std::int64_t>(config.arm_means.size())) {
    throw ContractError("simulate: rounds must be at least the number of arms");
  }
  if (config.model == ScoreModel::Beta && !(config.beta_concentration > 0.0)) {
    throw ContractError("simulate: beta concentration must be positive");
  }

  BanditState state(config.arm_means.size(), config.alpha);
  std::mt19937_64 rng(config.seed);
  SimulationResult result;
  result.trace.reserve(static_cast<std::size_t>(config.rounds));
  result.scores.reserve(static_cast<std::size_t>(config.rounds));
  for (std::int64_t round = 0; round < config.rounds; ++round) {
    const std::size_t arm = state.select_arm();
    const double score = draw_score(rng, config.arm_means[arm], config);
    state.update(arm, score);
    result.trace.push_back(arm);
    result.scores.push_back(score);
  }
  for (const ArmStats& a : state.arms()) result.pull_counts.push_back(a.pull_count);
  return result;
}

}  // namespace pse
