#include "pse/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pse/error.hpp"

namespace pse {

std::map<std::string, ScoreRecord> best_of_n(std::span<const ScoreRecord> records) {
  if (records.empty()) throw ContractError("best_of_n: no records");
  std::map<std::string, ScoreRecord> best;
  for (const ScoreRecord& r : records) {
    auto [it, inserted] = best.try_emplace(r.prompt_id, r);
    if (inserted) continue;
    ScoreRecord& cur = it->second;
    if (cur.relation.kinds != r.relation.kinds || cur.relation.subject != r.relation.subject ||
        cur.relation.object != r.relation.object) {
      throw ContractError("best_of_n: prompt '" + r.prompt_id + "' mixes relations");
    }
    if (r.pse > cur.pse || (r.pse == cur.pse && r.candidate_id < cur.candidate_id)) cur = r;
  }
  return best;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassificationMetrics classification_metrics(std::span<const bool> predicted,
                                             std::span<const bool> truth) {
  if (predicted.size() != truth.size()) {
    throw ContractError("classification_metrics: " + std::to_string(predicted.size()) +
                        " predictions vs " + std::to_string(truth.size()) + " labels");
  }
  if (predicted.empty()) throw ContractError("classification_metrics: empty input");
  ClassificationMetrics m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] && truth[i]) ++m.tp;
    else if (predicted[i]) ++m.fp;
    else if (truth[i]) ++m.fn;
    else ++m.tn;
  }
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  m.accuracy = ratio(m.tp + m.tn, predicted.size());
  m.specificity = ratio(m.tn, m.tn + m.fp);
  // 2TP / (2TP + FP + FN) equals 2PR / (P + R) and stays defined when P = R = 0.
  if (m.precision && m.recall) m.f1 = ratio(2 * m.tp, 2 * m.tp + m.fp + m.fn);
  return m;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("pearson: length mismatch");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("kendall_tau_b: length mismatch");
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = (x[i] < x[j]) - (x[i] > x[j]);
      const int sy = (y[i] < y[j]) - (y[i] > y[j]);
      if (sx == 0 && sy == 0) continue;
      if (sx == 0) ++ties_x;
      else if (sy == 0) ++ties_y;
      else if (sx == sy) ++concordant;
      else ++discordant;
    }
  }
  const double n1 = static_cast<double>(concordant + discordant + ties_x);
  const double n2 = static_cast<double>(concordant + discordant + ties_y);
  if (n1 == 0.0 || n2 == 0.0) return std::nullopt;
  return static_cast<double>(concordant - discordant) / std::sqrt(n1 * n2);
}

Correlations correlations(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractError("correlations: " + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + " values");
  }
  if (x.size() < 3) throw ContractError("correlations: need at least 3 pairs");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return {pearson(x, y), pearson(rx, ry), kendall_tau_b(x, y)};
}

AggregateReport aggregate(std::span<const ScoreRecord> records, double threshold) {
  AggregateReport report;
  report.count = records.size();
  if (records.empty()) {
    for (auto& v : report.visor) v = 0.0;
    return report;
  }
  double sum = 0.0, sum_cond = 0.0;
  std::size_t present = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_prompt;  // seeds, passes
  for (const ScoreRecord& r : records) {
    sum += r.pse;
    auto& [seeds, passes] = per_prompt[r.prompt_id];
    ++seeds;
    if (r.both_present()) {
      ++present;
      sum_cond += r.pse;
      if (pse_binary(r.pse, threshold)) ++passes;
    }
  }
  const auto n = static_cast<double>(records.size());
  report.mean_pse = sum / n;
  if (present > 0) report.mean_pse_conditional = sum_cond / static_cast<double>(present);
  report.object_accuracy = static_cast<double>(present) / n;
  report.prompt_count = per_prompt.size();

  std::size_t min_seeds = records.size();
  for (const auto& [id, stats] : per_prompt) {
    min_seeds = std::min(min_seeds, stats.first);
    if (stats.first != 4) {
      report.warnings.push_back("prompt '" + id + "' has " + std::to_string(stats.first) +
                                " seeds; VISOR_n expects 4");
    }
  }
  for (std::size_t k = 1; k <= report.visor.size(); ++k) {
    if (k > min_seeds) break;
    std::size_t hits = 0;
    for (const auto& [id, stats] : per_prompt) hits += stats.second >= k ? 1 : 0;
    report.visor[k - 1] = static_cast<double>(hits) / static_cast<double>(per_prompt.size());
  }
  return report;
}

}  // namespace pse
