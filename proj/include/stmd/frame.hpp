#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stmd {

/// One grayscale grid at a single time step, row-major, double precision.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y) { return data_[index(x, y)]; }
  double at(int x, int y) const { return data_[index(x, y)]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> pixels() { return data_; }
  std::span<const double> pixels() const { return data_; }
  double* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
  const double* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

  bool same_shape(const Frame& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  void fill(double value);
  double max() const;
  double min() const;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

}  // namespace stmd
