#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "stmd/frame.hpp"

namespace stmd {

/// Constant-velocity motion from `start`; velocity in px/s.
struct LinearMotion {
  double start_x = 0.0;
  double start_y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
};

/// x(s) = x0 - vx * (s + offset), y(s) = y0 + amplitude * sin(omega * (s + offset)),
/// with s the clip time in seconds. Defaults give the curvilinear test trace
/// (500 - 250 (t+300)/1000, 125 + 15 sin(4 pi (t+300)/1000)), t in ms.
struct SinusoidMotion {
  double x0 = 500.0;
  double vx = 250.0;
  double y0 = 125.0;
  double amplitude = 15.0;
  double angular_frequency = 4.0 * 3.14159265358979323846;  // rad/s
  double time_offset = 0.3;                                  // s
};

struct Trajectory {
  std::variant<LinearMotion, SinusoidMotion> motion = SinusoidMotion{};

  struct Point {
    double x = 0.0;
    double y = 0.0;
  };
  /// Target centre at frame t.
  Point position(double t, double fps) const;
  /// d(position)/dt in px/s.
  Point velocity(double t, double fps) const;
};

/// Angle of the analytic velocity in image coordinates (y down), in [0, 2pi).
/// Throws UndefinedDirectionError when the target is momentarily at rest.
double actual_direction(const Trajectory& trajectory, double t, double fps);

struct SolidBackground {
  double luminance = 255.0;
};

/// A still image panned horizontally with wraparound. Positive velocity moves
/// the content to the right.
struct PanningBackground {
  Frame image;
  double pan_velocity = 0.0;  // px/s
};

struct TargetSpec {
  int width = 5;
  int height = 5;
  double luminance = 0.0;
  Trajectory trajectory;
};

struct StimulusSpec {
  int width = 500;
  int height = 250;
  double fps = 1000.0;
  int duration = 1000;  // frames
  std::variant<SolidBackground, PanningBackground> background = SolidBackground{};
  std::optional<TargetSpec> target = TargetSpec{};
  bool antialias = false;  // sub-pixel target and pan rendering

  /// Throws ParameterError/DimensionError when the spec cannot be rendered.
  void validate() const;
};

struct TruthSample {
  std::int64_t frame = 0;
  double x = 0.0;
  double y = 0.0;
  double direction = 0.0;  // radians
};

/// Renders frame t, quantised to 8-bit luminance.
Frame render_frame(const StimulusSpec& spec, int t);

/// Analytic target track; empty when the spec has no target.
std::vector<TruthSample> ground_truth(const StimulusSpec& spec);

/// Renders every frame in order, handing each to `sink` with its index.
std::vector<TruthSample> render_sequence(const StimulusSpec& spec,
                                         const std::function<void(int, const Frame&)>& sink);

/// Integer pan offset (nearest mode) or exact offset (antialias) at frame t.
double pan_offset(const PanningBackground& bg, double t, double fps, bool antialias);

/// Top-left pixel of a w x h box centred at (cx, cy) under nearest placement.
struct BoxOrigin {
  int left = 0;
  int top = 0;
};
BoxOrigin box_origin(double cx, double cy, int w, int h);

/// |mean(target box) - mean(ring of margin d)| / 255.
double weber_contrast(const Frame& frame, double cx, double cy, int w, int h, int d = 10);

struct ClutterParams {
  int width = 1000;
  int height = 250;
  std::uint64_t seed = 1;
  double noise_sigma = 2.0;    // blur of the finest noise octave, px
  int octaves = 5;             // each octave doubles the blur
  double mean = 170.0;
  double spread = 40.0;        // std of the summed noise
  int blobs = 12;              // dark blobs, radius 10..30 px
  int bars = 4;                // dark vertical bars
};

/// Deterministic multi-scale noise with equal contrast per octave (roughly a
/// 1/f spectrum), large dark blobs and vertical bars.
Frame generate_clutter(const ClutterParams& params);

}  // namespace stmd
