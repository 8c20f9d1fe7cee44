#include "stmd/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "stmd/error.hpp"

namespace stmd {

double wrap_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a -= two_pi;
  return a;
}

std::vector<Detection> detect_peaks(const Frame& strength, double gamma, int suppress_radius,
                                    std::int64_t frame_index) {
  if (gamma < 0.0) throw ParameterError("detection threshold must be non-negative");
  const int w = strength.width();
  const int h = strength.height();
  std::vector<Detection> candidates;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = strength.at(x, y);
      if (!(v > gamma)) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (strength.at(nx, ny) > v) {
            is_max = false;
            break;
          }
        }
      if (is_max) candidates.push_back({frame_index, x, y, v, std::nullopt});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Detection& a, const Detection& b) {
    return std::tie(b.response, a.y, a.x) < std::tie(a.response, b.y, b.x);
  });

  const long r2 = static_cast<long>(suppress_radius) * suppress_radius;
  std::vector<Detection> kept;
  for (const Detection& c : candidates) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      const long dx = c.x - k.x;
      const long dy = c.y - k.y;
      return dx * dx + dy * dy <= r2;
    });
    if (!suppressed) kept.push_back(c);
  }
  return kept;
}

std::vector<Detection> detect(const DirectionalResponse& E, double gamma, int suppress_radius) {
  return detect_peaks(E.max_over_directions(), gamma, suppress_radius, E.frame_index);
}

std::vector<Pixel> select_target_pixels(const Frame& strength, const Detection& detection,
                                        int radius, double gamma) {
  std::vector<Pixel> out;
  const long r2 = static_cast<long>(radius) * radius;
  for (int y = std::max(0, detection.y - radius); y <= std::min(strength.height() - 1, detection.y + radius); ++y)
    for (int x = std::max(0, detection.x - radius); x <= std::min(strength.width() - 1, detection.x + radius); ++x) {
      const long dx = x - detection.x;
      const long dy = y - detection.y;
      if (dx * dx + dy * dy <= r2 && strength.at(x, y) > gamma) out.push_back({x, y});
    }
  return out;
}

std::vector<Pixel> select_target_pixels(const DirectionalResponse& E, const Detection& detection,
                                        int radius, double gamma) {
  return select_target_pixels(E.max_over_directions(), detection, radius, gamma);
}

double population_vector(const DirectionalResponse& E, const std::vector<Pixel>& pixels) {
  if (pixels.empty()) throw UndefinedDirectionError("population vector over an empty pixel set");
  double vx = 0.0;
  double vy = 0.0;
  double mass = 0.0;
  for (std::size_t c = 0; c < E.channels.size(); ++c) {
    const double cs = std::cos(E.directions[c]);
    const double sn = std::sin(E.directions[c]);
    double total = 0.0;
    for (const Pixel& p : pixels) total += E.channels[c].at(p.x, p.y);
    mass += std::abs(total);
    vx += total * cs;
    vy += total * sn;
  }
  // Absolute 1e-12 floor, scaled up for large responses so cancellation
  // residue is not mistaken for a direction.
  if (std::hypot(vx, vy) < 1e-12 * std::max(1.0, mass))
    throw UndefinedDirectionError("isotropic response has no direction");
  return wrap_angle(std::atan2(vy, vx));
}

void estimate_directions(const DirectionalResponse& E, std::vector<Detection>& detections,
                         int radius, double gamma) {
  const Frame strength = E.max_over_directions();
  for (Detection& d : detections) {
    try {
      d.direction = population_vector(E, select_target_pixels(strength, d, radius, gamma));
    } catch (const UndefinedDirectionError&) {
      d.direction.reset();
    }
  }
}

}  // namespace stmd
