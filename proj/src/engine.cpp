#include "stmd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stmd/error.hpp"

namespace stmd {

namespace {

int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

void check_radius(const Frame& frame, int radius) {
  if (radius >= std::min(frame.width(), frame.height()))
    throw DimensionError("kernel radius " + std::to_string(radius) + " does not fit a " +
                         std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                         " frame");
}

// Frame with `pad` replicated columns on each side of every row.
class PaddedRows {
 public:
  PaddedRows(const Frame& frame, int pad)
      : pad_(pad), stride_(frame.width() + 2 * pad), height_(frame.height()) {
    data_.resize(static_cast<std::size_t>(stride_) * height_);
    const int w = frame.width();
    for (int y = 0; y < height_; ++y) {
      const double* src = frame.row(y);
      double* dst = data_.data() + static_cast<std::size_t>(y) * stride_;
      std::fill(dst, dst + pad, src[0]);
      std::copy(src, src + w, dst + pad);
      std::fill(dst + pad + w, dst + stride_, src[w - 1]);
    }
  }

  // Pointer such that ptr[x] is pixel x of (clamped) row y; valid for x in [-pad, w+pad).
  const double* row(int y) const {
    return data_.data() + static_cast<std::size_t>(clamp_index(y, height_)) * stride_ + pad_;
  }

 private:
  int pad_;
  int stride_;
  int height_;
  std::vector<double> data_;
};

}  // namespace

Frame conv2d(const Frame& frame, const DiscreteKernel2D& kernel) {
  const int r = kernel.radius;
  check_radius(frame, r);
  const int w = frame.width();
  const int h = frame.height();
  Frame out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int sy = clamp_index(y - dy, h);
        for (int dx = -r; dx <= r; ++dx)
          acc += kernel.at(dx, dy) * frame.at(clamp_index(x - dx, w), sy);
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

Frame conv_separable(const Frame& frame, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size() / 2);
  check_radius(frame, r);
  const int w = frame.width();
  const int h = frame.height();

  Frame rows(w, h);
  std::vector<double> buffer(static_cast<std::size_t>(w + 2 * r));
  for (int y = 0; y < h; ++y) {
    const double* src = frame.row(y);
    std::fill(buffer.begin(), buffer.begin() + r, src[0]);
    std::copy(src, src + w, buffer.begin() + r);
    std::fill(buffer.begin() + r + w, buffer.end(), src[w - 1]);
    double* dst = rows.row(y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      const double* b = buffer.data() + x;
      for (int i = 0; i <= 2 * r; ++i) acc += taps[i] * b[i];
      dst[x] = acc;
    }
  }

  Frame out(w, h);
  for (int y = 0; y < h; ++y) {
    double* dst = out.row(y);
    for (int i = 0; i <= 2 * r; ++i) {
      const double t = taps[i];
      const double* src = rows.row(clamp_index(y + i - r, h));
      for (int x = 0; x < w; ++x) dst[x] += t * src[x];
    }
  }
  return out;
}

SpatialFilter SpatialFilter::from_dense(const DiscreteKernel2D& kernel) {
  SpatialFilter f;
  f.add_sparse(kernel);
  return f;
}

SpatialFilter& SpatialFilter::add_separable(double weight, std::vector<double> taps) {
  if (taps.size() % 2 != 1) throw DimensionError("separable taps must have odd length");
  if (weight != 0.0) separable_.push_back({weight, std::move(taps)});
  return *this;
}

SpatialFilter& SpatialFilter::add_sparse(const DiscreteKernel2D& kernel, double weight) {
  for (int dy = -kernel.radius; dy <= kernel.radius; ++dy)
    for (int dx = -kernel.radius; dx <= kernel.radius; ++dx) {
      const double v = weight * kernel.at(dx, dy);
      if (v != 0.0) sparse_.push_back({dx, dy, v});
    }
  return *this;
}

int SpatialFilter::radius() const {
  int r = 0;
  for (const auto& term : separable_) r = std::max(r, static_cast<int>(term.taps.size() / 2));
  for (const auto& tap : sparse_) r = std::max({r, std::abs(tap.dx), std::abs(tap.dy)});
  return r;
}

DiscreteKernel2D SpatialFilter::to_dense() const {
  DiscreteKernel2D k = DiscreteKernel2D::zeros(radius());
  for (const auto& term : separable_) {
    const int r = static_cast<int>(term.taps.size() / 2);
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        k.at(dx, dy) += term.weight * term.taps[dy + r] * term.taps[dx + r];
  }
  for (const auto& tap : sparse_) k.at(tap.dx, tap.dy) += tap.weight;
  return k;
}

Frame SpatialFilter::apply(const Frame& frame) const {
  check_radius(frame, radius());
  const int w = frame.width();
  const int h = frame.height();
  Frame out(w, h);

  for (const auto& term : separable_) {
    const Frame part = conv_separable(frame, term.taps);
    auto dst = out.pixels();
    auto src = part.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += term.weight * src[i];
  }

  if (!sparse_.empty()) {
    int pad = 0;
    for (const auto& tap : sparse_) pad = std::max(pad, std::abs(tap.dx));
    const PaddedRows padded(frame, pad);
    for (int y = 0; y < h; ++y) {
      double* dst = out.row(y);
      for (const auto& tap : sparse_) {
        // out(x, y) += k(dx, dy) * in(x - dx, y - dy)
        const double* src = padded.row(y - tap.dy) - tap.dx;
        const double wgt = tap.weight;
        for (int x = 0; x < w; ++x) dst[x] += wgt * src[x];
      }
    }
  }
  return out;
}

TemporalStream::TemporalStream(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw DimensionError("temporal stream capacity must be positive");
}

std::size_t TemporalStream::history_length() const { return std::min(frames_seen_, capacity_); }

void TemporalStream::push(const Frame& frame) {
  if (capacity_ == 0) throw DimensionError("temporal stream has no capacity");
  if (frames_seen_ == 0) {
    width_ = frame.width();
    height_ = frame.height();
    storage_.assign(capacity_ * frame.size(), 0.0);
    head_ = capacity_ - 1;
  } else if (frame.width() != width_ || frame.height() != height_) {
    throw DimensionError("frame shape changed mid-stream");
  }
  head_ = (head_ + 1) % capacity_;
  std::copy(frame.pixels().begin(), frame.pixels().end(),
            storage_.begin() + static_cast<std::ptrdiff_t>(head_ * frame.size()));
  ++frames_seen_;
}

const double* TemporalStream::history(std::size_t lag) const {
  const std::size_t slot = (head_ + capacity_ - lag % capacity_) % capacity_;
  return storage_.data() + slot * static_cast<std::size_t>(width_) * height_;
}

Frame TemporalStream::convolve(const DiscreteKernel1D& kernel) const {
  if (kernel.size() > capacity_)
    throw DimensionError("kernel longer than the stream history capacity");
  Frame out(width_, height_);
  const std::size_t n = out.size();
  const std::size_t lags = std::min(kernel.size(), frames_seen_);
  double* dst = out.pixels().data();
  for (std::size_t k = 0; k < lags; ++k) {
    const double t = kernel.taps[k];
    if (t == 0.0) continue;
    const double* src = history(k);
    for (std::size_t i = 0; i < n; ++i) dst[i] += t * src[i];
  }
  return out;
}

void TemporalStream::reset() {
  frames_seen_ = 0;
  head_ = 0;
  storage_.clear();
}

Frame temporal_step(TemporalStream& stream, const Frame& new_frame,
                    const DiscreteKernel1D& kernel) {
  stream.push(new_frame);
  return stream.convolve(kernel);
}

Frame rectify_pos(const Frame& frame) {
  Frame out = frame;
  for (double& v : out.pixels()) v = std::max(v, 0.0);
  return out;
}

Frame rectify_neg(const Frame& frame) {
  Frame out = frame;
  for (double& v : out.pixels()) v = v < 0.0 ? -v : 0.0;
  return out;
}

double sample_bilinear(const Frame& frame, double x, double y) {
  const int w = frame.width();
  const int h = frame.height();
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (1.0 - fx) * frame.at(x0, y0) + fx * frame.at(x1, y0);
  const double bottom = (1.0 - fx) * frame.at(x0, y1) + fx * frame.at(x1, y1);
  return (1.0 - fy) * top + fy * bottom;
}

Frame shift_bilinear(const Frame& frame, double dx, double dy) {
  const int w = frame.width();
  const int h = frame.height();
  const double fx_floor = std::floor(dx);
  const double fy_floor = std::floor(dy);
  const int ix = static_cast<int>(fx_floor);
  const int iy = static_cast<int>(fy_floor);
  const double fx = dx - fx_floor;
  const double fy = dy - fy_floor;

  Frame out(w, h);
  std::vector<int> x0(w), x1(w);
  for (int x = 0; x < w; ++x) {
    x0[x] = clamp_index(x + ix, w);
    x1[x] = clamp_index(x + ix + 1, w);
  }
  for (int y = 0; y < h; ++y) {
    const double* r0 = frame.row(clamp_index(y + iy, h));
    const double* r1 = frame.row(clamp_index(y + iy + 1, h));
    double* dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      const double top = (1.0 - fx) * r0[x0[x]] + fx * r0[x1[x]];
      const double bottom = (1.0 - fx) * r1[x0[x]] + fx * r1[x1[x]];
      dst[x] = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

}  // namespace stmd
