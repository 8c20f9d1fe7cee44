#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stmd/dstmd.hpp"
#include "stmd/frame.hpp"

namespace stmd {

struct Detection {
  std::int64_t frame_index = 0;
  int x = 0;
  int y = 0;
  double response = 0.0;             // max over directions at (x, y)
  std::optional<double> direction;   // radians in [0, 2pi)
};

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

inline constexpr int kDefaultSuppressRadius = 5;
inline constexpr int kDefaultTargetRadius = 5;

/// Local maxima of `strength` above gamma, strongest first. A maximum is kept
/// unless a stronger kept maximum lies within `suppress_radius` (inclusive).
std::vector<Detection> detect_peaks(const Frame& strength, double gamma,
                                    int suppress_radius = kDefaultSuppressRadius,
                                    std::int64_t frame_index = 0);

/// detect_peaks on max over directions of E.
std::vector<Detection> detect(const DirectionalResponse& E, double gamma,
                              int suppress_radius = kDefaultSuppressRadius);

/// Pixels within `radius` of the detection whose strength exceeds gamma.
std::vector<Pixel> select_target_pixels(const Frame& strength, const Detection& detection,
                                        int radius, double gamma);
std::vector<Pixel> select_target_pixels(const DirectionalResponse& E, const Detection& detection,
                                        int radius, double gamma);

/// Angle of sum over pixels and directions of E * (cos, sin), in [0, 2pi).
/// Throws UndefinedDirectionError when the summed vector is shorter than 1e-12.
double population_vector(const DirectionalResponse& E, const std::vector<Pixel>& pixels);

/// Fills `direction` of every detection from its target pixel set.
void estimate_directions(const DirectionalResponse& E, std::vector<Detection>& detections,
                         int radius, double gamma);

/// Wraps an angle into [0, 2pi).
double wrap_angle(double radians);

}  // namespace stmd
