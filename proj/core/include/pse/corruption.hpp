#pragma once

#include <cstdint>
#include <random>

#include "pse/mass_map.hpp"

namespace pse {

enum class CorruptionKind { Dropout, Jitter, Opening };

/// param is the dropout fraction in [0, 1], the jitter radius in pixels, or
/// the opening iteration count (a nonnegative integer).
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::Dropout;
  double param = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Applies the degradation to a binary mask (positive weight = member). The
/// output is binary. Deterministic for a given spec.
MassMap2D corrupt_mask(const MassMap2D& mask, const CorruptionSpec& spec);

MassMap2D erode3x3(const MassMap2D& mask);
MassMap2D dilate3x3(const MassMap2D& mask);

/// Integer in [0, n) from a 64-bit Mersenne Twister by rejection sampling;
/// unlike std::uniform_int_distribution the mapping is the same on every
/// standard library.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform_unit(std::mt19937_64& rng);

}  // namespace pse
