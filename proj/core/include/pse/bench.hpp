#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pse/pipeline.hpp"

namespace pse {

/// Per prompt, the record with the highest PSE. Ties go to the
/// lexicographically smallest candidate_id, so input order never matters.
/// Throws ContractError on an empty input or when a prompt mixes relations.
std::map<std::string, ScoreRecord> best_of_n(std::span<const ScoreRecord> records);

/// Confusion-matrix metrics. A metric whose denominator is zero is nullopt.
struct ClassificationMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> specificity;
  std::optional<double> f1;
};

ClassificationMetrics classification_metrics(std::span<const bool> predicted,
                                             std::span<const bool> truth);

/// Correlation coefficients; nullopt where a coefficient is undefined
/// (constant input). Kendall is tau-b; Spearman is Pearson on mid-ranks.
struct Correlations {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> kendall;
};

Correlations correlations(std::span<const double> x, std::span<const double> y);

std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// 1-based ranks with ties sharing their mean rank.
std::vector<double> average_ranks(std::span<const double> values);

struct AggregateReport {
  double mean_pse = 0.0;
  /// Over records where both objects are present; nullopt if there are none.
  std::optional<double> mean_pse_conditional;
  double object_accuracy = 0.0;
  /// visor[n-1]: fraction of prompts with at least n passing seeds. Entries
  /// beyond the smallest per-prompt seed count are nullopt.
  std::array<std::optional<double>, 4> visor{};
  std::size_t count = 0;
  std::size_t prompt_count = 0;
  std::vector<std::string> warnings;
};

/// A record passes when pse_binary(pse, threshold) holds and both objects are
/// present.
AggregateReport aggregate(std::span<const ScoreRecord> records,
                          double threshold = kDefaultThreshold);

}  // namespace pse
