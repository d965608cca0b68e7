#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pse {

/// Probability masses on the bounded integer grid [start, start + size() - 1].
///
/// The raw (unnormalized) bin weights are retained next to the total so that
/// PoS sums can be accumulated on the raw weights and divided once at the end.
/// For integer-valued weights (binary masks) every partial sum is then exact,
/// which makes the symmetry identities of the statistic hold bit-for-bit.
class DiscreteDistribution1D {
 public:
  /// Normalizes `weights`. Throws ContractError on negative or non-finite
  /// entries and on a zero total.
  static DiscreteDistribution1D from_weights(std::int64_t start,
                                             std::vector<double> weights);

  /// Accepts already-normalized masses; throws ContractError when they do not
  /// sum to one within 1e-9.
  static DiscreteDistribution1D from_masses(std::int64_t start,
                                            std::vector<double> masses);

  static DiscreteDistribution1D point_mass(std::int64_t at);
  static DiscreteDistribution1D uniform(std::int64_t start, std::size_t count);

  std::int64_t start() const { return start_; }
  std::int64_t last() const {
    return start_ + static_cast<std::int64_t>(weights_.size()) - 1;
  }
  std::size_t size() const { return weights_.size(); }

  std::span<const double> weights() const { return weights_; }
  double total_weight() const { return total_; }

  /// Normalized mass at integer index `i`; zero outside the support range.
  double mass_at(std::int64_t i) const;
  std::vector<double> masses() const;

  /// Copy with every index shifted by `offset`.
  DiscreteDistribution1D shifted(std::int64_t offset) const;

 private:
  DiscreteDistribution1D(std::int64_t start, std::vector<double> weights,
                         double total)
      : start_(start), weights_(std::move(weights)), total_(total) {}

  std::int64_t start_ = 0;
  std::vector<double> weights_;
  double total_ = 1.0;
};

}  // namespace pse
