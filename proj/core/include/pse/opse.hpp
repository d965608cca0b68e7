#pragma once

#include <cstdint>
#include <vector>

namespace pse {

struct ArmStats {
  std::int64_t pull_count = 0;
  double score_sum = 0.0;

  double mean() const { return score_sum / static_cast<double>(pull_count); }
  bool operator==(const ArmStats&) const = default;
};

inline constexpr double kDefaultExplorationAlpha = 2.0;

/// mean + alpha·sqrt(ln t / n). Throws ContractError for n < 1 or t < 1.
double ucb_value(const ArmStats& arm, std::int64_t t, double alpha);

/// UCB bookkeeping for online model selection over PSE score streams. Each
/// arm is one generator; scores are per-sample PSE values in [0, 1].
/// Not synchronized: callers feeding it from several threads serialize
/// update().
class BanditState {
 public:
  explicit BanditState(std::size_t arm_count, double alpha = kDefaultExplorationAlpha);

  /// Restores a state from per-arm statistics; t becomes Σ pull_count.
  /// Throws ContractError unless 0 <= score_sum <= pull_count for every arm.
  static BanditState from_arms(std::vector<ArmStats> arms,
                               double alpha = kDefaultExplorationAlpha);

  std::size_t arm_count() const { return arms_.size(); }
  const std::vector<ArmStats>& arms() const { return arms_; }
  std::int64_t t() const { return t_; }
  double alpha() const { return alpha_; }

  /// Unpulled arms first (lowest index), then the highest UCB with ties to
  /// the lowest index.
  std::size_t select_arm() const;

  /// Records one score for `arm`. Throws ContractError for a bad arm index or
  /// a score outside [0, 1].
  void update(std::size_t arm, double score);

 private:
  std::vector<ArmStats> arms_;
  std::int64_t t_ = 0;
  double alpha_;
};

enum class ScoreModel {
  /// Score ~ Bernoulli(mean): a thresholded (binary) PSE stream.
  Bernoulli,
  /// Score ~ Beta(mean·κ, (1 − mean)·κ): a continuous PSE stream.
  Beta,
};

struct SimulationConfig {
  std::vector<double> arm_means;
  std::int64_t rounds = 100;
  double alpha = kDefaultExplorationAlpha;
  std::uint64_t seed = 0;
  ScoreModel model = ScoreModel::Bernoulli;
  double beta_concentration = 10.0;
};

struct SimulationResult {
  std::vector<std::int64_t> pull_counts;
  std::vector<std::size_t> trace;
  std::vector<double> scores;

  /// Index of the arm with strictly the most pulls, or -1 when tied.
  long plurality_arm() const;
};

/// Runs the select/update loop with scores drawn from a seeded 64-bit
/// Mersenne Twister. Bit-reproducible per seed.
SimulationResult simulate(const SimulationConfig& config);

}  // namespace pse
