#pragma once

#include <cstddef>
#include <vector>

#include "stmd/frame.hpp"
#include "stmd/kernels.hpp"

namespace stmd {

// ---------------------------------------------------------------------------
// Spatial filtering. All spatial operations use replicate borders: reads
// outside the image clamp to the nearest edge pixel.

/// Dense 2-D convolution (correlation with the flipped kernel; every kernel in
/// this library is point-symmetric so the two coincide).
Frame conv2d(const Frame& frame, const DiscreteKernel2D& kernel);

/// Row pass then column pass with the same symmetric 1-D taps.
Frame conv_separable(const Frame& frame, const std::vector<double>& taps);

/// A 2-D kernel expressed as a weighted sum of separable symmetric terms plus
/// a sparse residual. Applying it equals conv2d with the dense kernel it was
/// built from, at a fraction of the cost for wide difference-of-Gaussian
/// kernels.
class SpatialFilter {
 public:
  struct SeparableTerm {
    double weight = 0.0;
    std::vector<double> taps;  // odd length, symmetric
  };
  struct SparseTap {
    int dx = 0;
    int dy = 0;
    double weight = 0.0;
  };

  SpatialFilter() = default;

  /// Direct evaluation over the non-zero taps of `kernel`.
  static SpatialFilter from_dense(const DiscreteKernel2D& kernel);

  SpatialFilter& add_separable(double weight, std::vector<double> taps);
  SpatialFilter& add_sparse(const DiscreteKernel2D& kernel, double weight = 1.0);

  /// Largest reach in pixels of any term.
  int radius() const;

  /// Dense kernel equivalent to this filter.
  DiscreteKernel2D to_dense() const;

  Frame apply(const Frame& frame) const;

 private:
  std::vector<SeparableTerm> separable_;
  std::vector<SparseTap> sparse_;
};

// ---------------------------------------------------------------------------
// Temporal filtering.

/// Ring buffer of past frames, newest first. Missing history reads as zero.
class TemporalStream {
 public:
  TemporalStream() = default;
  explicit TemporalStream(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t frames_seen() const { return frames_seen_; }
  std::size_t history_length() const;
  int width() const { return width_; }
  int height() const { return height_; }

  /// Appends a frame; throws DimensionError if its shape differs from earlier frames.
  void push(const Frame& frame);

  /// Pointer to the pixels of the frame `lag` steps back (lag 0 = newest).
  const double* history(std::size_t lag) const;

  /// sum_k taps[k] * history[k], with missing history treated as zero.
  Frame convolve(const DiscreteKernel1D& kernel) const;

  void reset();

 private:
  std::size_t capacity_ = 0;
  std::size_t frames_seen_ = 0;
  std::size_t head_ = 0;  // slot of the newest frame
  int width_ = 0;
  int height_ = 0;
  std::vector<double> storage_;
};

/// Pushes `new_frame` and returns the causal FIR output for `kernel`.
Frame temporal_step(TemporalStream& stream, const Frame& new_frame,
                    const DiscreteKernel1D& kernel);

// ---------------------------------------------------------------------------
// Pointwise.

Frame rectify_pos(const Frame& frame);
/// Magnitude of the negative part: -min(v, 0).
Frame rectify_neg(const Frame& frame);

/// Bilinear interpolation with coordinates clamped to the image.
double sample_bilinear(const Frame& frame, double x, double y);

/// out(x, y) = sample_bilinear(frame, x + dx, y + dy) for every pixel.
Frame shift_bilinear(const Frame& frame, double dx, double dy);

}  // namespace stmd
