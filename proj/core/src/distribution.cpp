#include "pse/distribution.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pse/error.hpp"

namespace pse {

namespace {

double checked_total(const std::vector<double>& weights) {
  if (weights.empty()) {
    throw ContractError("distribution: empty support");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw ContractError("distribution: bin " + std::to_string(i) +
                          " has invalid weight " + std::to_string(w));
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw ContractError("distribution: total weight is zero");
  }
  return total;
}

}  // namespace

DiscreteDistribution1D DiscreteDistribution1D::from_weights(
    std::int64_t start, std::vector<double> weights) {
  const double total = checked_total(weights);
  return DiscreteDistribution1D(start, std::move(weights), total);
}

DiscreteDistribution1D DiscreteDistribution1D::from_masses(
    std::int64_t start, std::vector<double> masses) {
  const double total = checked_total(masses);
  if (std::abs(total - 1.0) > 1e-9) {
    throw ContractError("distribution: masses sum to " +
                        std::to_string(total) + ", expected 1");
  }
  return DiscreteDistribution1D(start, std::move(masses), total);
}

DiscreteDistribution1D DiscreteDistribution1D::point_mass(std::int64_t at) {
  return DiscreteDistribution1D(at, {1.0}, 1.0);
}

DiscreteDistribution1D DiscreteDistribution1D::uniform(std::int64_t start,
                                                       std::size_t count) {
  return from_weights(start, std::vector<double>(count, 1.0));
}

double DiscreteDistribution1D::mass_at(std::int64_t i) const {
  if (i < start_ || i > last()) return 0.0;
  return weights_[static_cast<std::size_t>(i - start_)] / total_;
}

std::vector<double> DiscreteDistribution1D::masses() const {
  std::vector<double> out(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) out[i] = weights_[i] / total_;
  return out;
}

DiscreteDistribution1D DiscreteDistribution1D::shifted(
    std::int64_t offset) const {
  return DiscreteDistribution1D(start_ + offset, weights_, total_);
}

}  // namespace pse
