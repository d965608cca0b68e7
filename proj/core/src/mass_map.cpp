#include "pse/mass_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pse/error.hpp"

namespace pse {

namespace {

void check_dims(int width, int height, std::size_t n, const char* what) {
  if (width <= 0 || height <= 0) {
    throw DimensionError(std::string(what) + ": dimensions must be positive, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  if (n != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionError(std::string(what) + ": expected " +
                         std::to_string(static_cast<std::size_t>(width) * height) +
                         " values, got " + std::to_string(n));
  }
}

}  // namespace

MassMap2D::MassMap2D(int width, int height, std::vector<double> weights)
    : width_(width), height_(height), weights_(std::move(weights)) {
  check_dims(width_, height_, weights_.size(), "mass map");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw ContractError("mass map: pixel (" + std::to_string(i % width_) + ", " +
                          std::to_string(i / width_) + ") has invalid weight " +
                          std::to_string(w));
    }
  }
}

MassMap2D MassMap2D::zeros(int width, int height) {
  return MassMap2D(width, height,
                   std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                       static_cast<std::size_t>(std::max(height, 0))));
}

void MassMap2D::set(int x, int y, double w) {
  if (!std::isfinite(w) || w < 0.0) {
    throw ContractError("mass map: invalid weight " + std::to_string(w));
  }
  weights_[static_cast<std::size_t>(y) * width_ + x] = w;
}

double MassMap2D::total() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

std::size_t MassMap2D::member_count() const {
  return static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; }));
}

MassMap2D MassMap2D::flipped_horizontal() const {
  MassMap2D out = *this;
  for (int y = 0; y < height_; ++y) {
    auto row = out.weights_.begin() + static_cast<std::ptrdiff_t>(y) * width_;
    std::reverse(row, row + width_);
  }
  return out;
}

MassMap2D MassMap2D::flipped_vertical() const {
  MassMap2D out = *this;
  for (int y = 0; y < height_ / 2; ++y) {
    auto a = out.weights_.begin() + static_cast<std::ptrdiff_t>(y) * width_;
    auto b = out.weights_.begin() + static_cast<std::ptrdiff_t>(height_ - 1 - y) * width_;
    std::swap_ranges(a, a + width_, b);
  }
  return out;
}

DepthMap::DepthMap(int width, int height, std::vector<double> values,
                   DepthConvention convention)
    : width_(width), height_(height), values_(std::move(values)), convention_(convention) {
  check_dims(width_, height_, values_.size(), "depth map");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ContractError("depth map: non-finite value at pixel (" +
                          std::to_string(i % width_) + ", " + std::to_string(i / width_) +
                          ")");
    }
  }
}

ProjectionAxis::ProjectionAxis(double vx, double vy, double bin_width)
    : vx_(vx), vy_(vy), bin_width_(bin_width) {
  const double norm = std::hypot(vx, vy);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9) {
    throw ContractError("projection axis: direction must be a unit vector");
  }
  if (!std::isfinite(bin_width) || !(bin_width > 0.0)) {
    throw ContractError("projection axis: bin width must be positive");
  }
}

PixelBinning PixelBinning::compute(int width, int height, const ProjectionAxis& axis) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("binning: dimensions must be positive");
  }
  // Axes pointing left or downward reuse the grid of their negation, reversed,
  // so that v and -v always share bin boundaries.
  const bool reversed = axis.vx() < 0.0 || (axis.vx() == 0.0 && axis.vy() > 0.0);
  if (reversed) {
    PixelBinning b = compute(width, height, axis.negated());
    const auto last = static_cast<std::int32_t>(b.bin_count) - 1;
    for (auto& bin : b.bin_of_pixel) bin = last - bin;
    return b;
  }
  PixelBinning b;
  b.width = width;
  b.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> t(n);
  double t_min = std::numeric_limits<double>::infinity();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = (x + 0.5) * axis.vx() + (y + 0.5) * axis.vy();
      t[static_cast<std::size_t>(y) * width + x] = v;
      t_min = std::min(t_min, v);
    }
  }
  // Slack keeps exact multiples of the bin width from falling one bin short
  // after rounding in the projection.
  constexpr double kSlack = 1e-9;
  b.bin_of_pixel.resize(n);
  std::int32_t max_bin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto bin =
        static_cast<std::int32_t>(std::floor((t[i] - t_min) / axis.bin_width() + kSlack));
    b.bin_of_pixel[i] = bin;
    max_bin = std::max(max_bin, bin);
  }
  b.bin_count = static_cast<std::size_t>(max_bin) + 1;
  return b;
}

std::vector<double> PixelBinning::accumulate(std::span<const double> weights) const {
  if (weights.size() != bin_of_pixel.size()) {
    throw DimensionError("binning: weight count does not match frame");
  }
  std::vector<double> bins(bin_count, 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) bins[bin_of_pixel[i]] += weights[i];
  return bins;
}

}  // namespace pse
