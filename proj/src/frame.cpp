#include "stmd/frame.hpp"

#include <algorithm>
#include <string>

#include "stmd/error.hpp"

namespace stmd {

Frame::Frame(int width, int height, double fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw DimensionError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

void Frame::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

double Frame::max() const { return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end()); }

double Frame::min() const { return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end()); }

}  // namespace stmd
