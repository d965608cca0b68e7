#include "pse/corruption.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pse/error.hpp"

namespace pse {

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw ContractError("uniform_index: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = 0;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void CorruptionSpec::validate() const {
  if (!std::isfinite(param)) throw ContractError("corruption: parameter must be finite");
  switch (kind) {
    case CorruptionKind::Dropout:
      if (param < 0.0 || param > 1.0) {
        throw ContractError("corruption: dropout fraction must lie in [0, 1]");
      }
      break;
    case CorruptionKind::Jitter:
      if (param < 0.0) throw ContractError("corruption: jitter radius must be nonnegative");
      break;
    case CorruptionKind::Opening:
      if (param < 0.0 || param != std::floor(param)) {
        throw ContractError("corruption: opening iterations must be a nonnegative integer");
      }
      break;
  }
}

namespace {

MassMap2D binarized(const MassMap2D& mask) {
  std::vector<double> w(mask.pixel_count());
  const auto src = mask.weights();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = src[i] > 0.0 ? 1.0 : 0.0;
  return MassMap2D(mask.width(), mask.height(), std::move(w));
}

MassMap2D dropout(const MassMap2D& mask, double fraction, std::mt19937_64& rng) {
  std::vector<std::size_t> members;
  const auto w = mask.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) members.push_back(i);
  }
  const auto remove = static_cast<std::size_t>(std::floor(fraction * members.size()));
  // Partial Fisher–Yates: the first `remove` slots become a uniform sample.
  for (std::size_t i = 0; i < remove; ++i) {
    const auto j = i + uniform_index(rng, members.size() - i);
    std::swap(members[i], members[j]);
  }
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] > 0.0 ? 1.0 : 0.0;
  for (std::size_t i = 0; i < remove; ++i) out[members[i]] = 0.0;
  return MassMap2D(mask.width(), mask.height(), std::move(out));
}

MassMap2D jitter(const MassMap2D& mask, double radius, std::mt19937_64& rng) {
  const auto r = static_cast<std::int64_t>(std::floor(radius));
  const auto span = static_cast<std::uint64_t>(2 * r + 1);
  const auto dx = static_cast<int>(static_cast<std::int64_t>(uniform_index(rng, span)) - r);
  const auto dy = static_cast<int>(static_cast<std::int64_t>(uniform_index(rng, span)) - r);
  MassMap2D out = MassMap2D::zeros(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!(mask.at(x, y) > 0.0)) continue;
      const int nx = x + dx;
      const int ny = y + dy;
      if (nx < 0 || ny < 0 || nx >= mask.width() || ny >= mask.height()) continue;
      out.set(nx, ny, 1.0);
    }
  }
  return out;
}

// Out-of-frame neighbours are ignored, so a mask touching the border is not
// eroded from the border side.
template <bool kErode>
MassMap2D morph3x3(const MassMap2D& mask) {
  MassMap2D out = MassMap2D::zeros(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      bool acc = kErode;
      for (int oy = -1; oy <= 1; ++oy) {
        for (int ox = -1; ox <= 1; ++ox) {
          const int nx = x + ox;
          const int ny = y + oy;
          if (nx < 0 || ny < 0 || nx >= mask.width() || ny >= mask.height()) continue;
          const bool member = mask.at(nx, ny) > 0.0;
          acc = kErode ? (acc && member) : (acc || member);
        }
      }
      if (acc) out.set(x, y, 1.0);
    }
  }
  return out;
}

}  // namespace

MassMap2D erode3x3(const MassMap2D& mask) { return morph3x3<true>(mask); }
MassMap2D dilate3x3(const MassMap2D& mask) { return morph3x3<false>(mask); }

MassMap2D corrupt_mask(const MassMap2D& mask, const CorruptionSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case CorruptionKind::Dropout: return dropout(mask, spec.param, rng);
    case CorruptionKind::Jitter: return jitter(mask, spec.param, rng);
    case CorruptionKind::Opening: {
      const auto iterations = static_cast<int>(spec.param);
      MassMap2D m = binarized(mask);
      for (int i = 0; i < iterations; ++i) m = erode3x3(m);
      for (int i = 0; i < iterations; ++i) m = dilate3x3(m);
      return m;
    }
  }
  return binarized(mask);
}

}  // namespace pse
