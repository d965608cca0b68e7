#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pse {

/// Row-major real-valued grid with no sign constraint (used for gradients).
struct RealGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  RealGrid() = default;
  RealGrid(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const RealGrid&) const = default;
};

/// Nonnegative weights over image pixels: a binary segmentation mask or a
/// cross-attention map. A zero-total map is a valid value (objects can be
/// missing after detection); scoring operations reject it.
class MassMap2D {
 public:
  MassMap2D() = default;

  /// Throws DimensionError on bad sizes and ContractError on negative or
  /// non-finite weights.
  MassMap2D(int width, int height, std::vector<double> weights);

  static MassMap2D zeros(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return weights_.size(); }

  std::span<const double> weights() const { return weights_; }
  double at(int x, int y) const {
    return weights_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, double w);

  double total() const;
  bool empty() const { return !(total() > 0.0); }

  /// Number of pixels with positive weight.
  std::size_t member_count() const;

  MassMap2D flipped_horizontal() const;
  MassMap2D flipped_vertical() const;

  bool operator==(const MassMap2D&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> weights_;
};

enum class DepthConvention { Depth, Disparity };

/// Per-pixel monocular depth estimate. With `Depth`, larger values are
/// farther; with `Disparity`, larger values are closer.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, std::vector<double> values,
           DepthConvention convention = DepthConvention::Depth);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const double> values() const { return values_; }
  DepthConvention convention() const { return convention_; }
  void set_convention(DepthConvention c) { convention_ = c; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
  DepthConvention convention_ = DepthConvention::Depth;
};

/// Unit direction in image coordinates (x to the right, y downward) plus the
/// bin width used when projected coordinates are discretized.
class ProjectionAxis {
 public:
  /// Throws ContractError unless ‖(vx, vy)‖ = 1 within 1e-9 and
  /// bin_width > 0.
  ProjectionAxis(double vx, double vy, double bin_width = 1.0);

  static ProjectionAxis right(double bin_width = 1.0) { return {1.0, 0.0, bin_width}; }
  static ProjectionAxis left(double bin_width = 1.0) { return {-1.0, 0.0, bin_width}; }
  static ProjectionAxis up(double bin_width = 1.0) { return {0.0, -1.0, bin_width}; }
  static ProjectionAxis down(double bin_width = 1.0) { return {0.0, 1.0, bin_width}; }

  double vx() const { return vx_; }
  double vy() const { return vy_; }
  double bin_width() const { return bin_width_; }

  ProjectionAxis negated() const { return {-vx_, -vy_, bin_width_}; }

 private:
  double vx_;
  double vy_;
  double bin_width_;
};

/// Assignment of every pixel of a width×height frame to a bin along an axis.
/// Bins are indexed from the smallest projected pixel center of the frame, so
/// any two maps over the same frame share one comparable grid. Axes with
/// vx < 0, or vx = 0 and vy > 0, take the reversed grid of their negation.
struct PixelBinning {
  int width = 0;
  int height = 0;
  std::size_t bin_count = 0;
  std::vector<std::int32_t> bin_of_pixel;

  static PixelBinning compute(int width, int height, const ProjectionAxis& axis);

  /// Per-bin sums of `weights` (which must have width·height entries).
  std::vector<double> accumulate(std::span<const double> weights) const;
};

}  // namespace pse
