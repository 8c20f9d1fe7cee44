#include "stmd/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "stmd/engine.hpp"
#include "stmd/error.hpp"
#include "stmd/kernels.hpp"

namespace stmd {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double quantize(double v) { return std::clamp(std::round(v), 0.0, 255.0); }

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

int wrap(long i, int n) {
  long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 rng_;
};

void paint_background(const StimulusSpec& spec, int t, Frame& frame) {
  std::visit(Overloaded{
                 [&](const SolidBackground& bg) { frame.fill(bg.luminance); },
                 [&](const PanningBackground& bg) {
                   const int bw = bg.image.width();
                   const double shift = pan_offset(bg, t, spec.fps, spec.antialias);
                   const double base = std::floor(shift);
                   const double frac = shift - base;
                   const long ishift = static_cast<long>(base);
                   for (int y = 0; y < spec.height; ++y) {
                     const double* src = bg.image.row(y);
                     double* dst = frame.row(y);
                     for (int x = 0; x < spec.width; ++x) {
                       // Content moves right: pixel x shows source column x - shift.
                       const double a = src[wrap(x - ishift, bw)];
                       if (frac == 0.0) {
                         dst[x] = a;
                       } else {
                         const double b = src[wrap(x - ishift - 1, bw)];
                         dst[x] = (1.0 - frac) * a + frac * b;
                       }
                     }
                   }
                 },
             },
             spec.background);
}

void paint_target(const StimulusSpec& spec, int t, Frame& frame) {
  const TargetSpec& target = *spec.target;
  const auto p = target.trajectory.position(t, spec.fps);
  if (!spec.antialias) {
    const BoxOrigin o = box_origin(p.x, p.y, target.width, target.height);
    for (int y = o.top; y < o.top + target.height; ++y)
      for (int x = o.left; x < o.left + target.width; ++x)
        if (x >= 0 && y >= 0 && x < frame.width() && y < frame.height())
          frame.at(x, y) = target.luminance;
    return;
  }
  const double x0 = p.x - target.width / 2.0;
  const double x1 = p.x + target.width / 2.0;
  const double y0 = p.y - target.height / 2.0;
  const double y1 = p.y + target.height / 2.0;
  for (int y = std::max(0, static_cast<int>(std::floor(y0)));
       y <= std::min(frame.height() - 1, static_cast<int>(std::ceil(y1))); ++y)
    for (int x = std::max(0, static_cast<int>(std::floor(x0)));
         x <= std::min(frame.width() - 1, static_cast<int>(std::ceil(x1))); ++x) {
      const double a = overlap(x - 0.5, x + 0.5, x0, x1) * overlap(y - 0.5, y + 0.5, y0, y1);
      if (a > 0.0) frame.at(x, y) = (1.0 - a) * frame.at(x, y) + a * target.luminance;
    }
}

}  // namespace

Trajectory::Point Trajectory::position(double t, double fps) const {
  const double s = t / fps;
  return std::visit(Overloaded{
                        [&](const LinearMotion& m) {
                          return Point{m.start_x + m.vx * s, m.start_y + m.vy * s};
                        },
                        [&](const SinusoidMotion& m) {
                          const double u = s + m.time_offset;
                          return Point{m.x0 - m.vx * u,
                                       m.y0 + m.amplitude * std::sin(m.angular_frequency * u)};
                        },
                    },
                    motion);
}

Trajectory::Point Trajectory::velocity(double t, double fps) const {
  const double s = t / fps;
  return std::visit(Overloaded{
                        [&](const LinearMotion& m) { return Point{m.vx, m.vy}; },
                        [&](const SinusoidMotion& m) {
                          const double u = s + m.time_offset;
                          return Point{-m.vx, m.amplitude * m.angular_frequency *
                                                  std::cos(m.angular_frequency * u)};
                        },
                    },
                    motion);
}

double actual_direction(const Trajectory& trajectory, double t, double fps) {
  const auto v = trajectory.velocity(t, fps);
  if (v.x == 0.0 && v.y == 0.0) throw UndefinedDirectionError("target at rest has no direction");
  double a = std::atan2(v.y, v.x);
  if (a < 0.0) a += 2.0 * 3.14159265358979323846;
  return a;
}

BoxOrigin box_origin(double cx, double cy, int w, int h) {
  return {static_cast<int>(std::lround(cx - (w - 1) / 2.0)),
          static_cast<int>(std::lround(cy - (h - 1) / 2.0))};
}

double pan_offset(const PanningBackground& bg, double t, double fps, bool antialias) {
  const double shift = bg.pan_velocity * t / fps;
  return antialias ? shift : std::round(shift);
}

void StimulusSpec::validate() const {
  if (width <= 0 || height <= 0) throw ParameterError("stimulus dimensions must be positive");
  if (!(fps > 0.0)) throw ParameterError("fps must be positive");
  if (duration <= 0) throw ParameterError("duration must be positive");
  if (const auto* bg = std::get_if<PanningBackground>(&background)) {
    if (bg->image.width() < width || bg->image.height() < height)
      throw DimensionError("background image is smaller than the frame");
  }
  if (target) {
    if (target->width <= 0 || target->height <= 0)
      throw ParameterError("target dimensions must be positive");
    for (int t = 0; t < duration; ++t) {
      const auto p = target->trajectory.position(t, fps);
      const BoxOrigin o = box_origin(p.x, p.y, target->width, target->height);
      if (o.left < 0 || o.top < 0 || o.left + target->width > width ||
          o.top + target->height > height)
        throw ParameterError("target leaves the frame at frame " + std::to_string(t));
    }
  }
}

Frame render_frame(const StimulusSpec& spec, int t) {
  Frame frame(spec.width, spec.height);
  paint_background(spec, t, frame);
  if (spec.target) paint_target(spec, t, frame);
  for (double& v : frame.pixels()) v = quantize(v);
  return frame;
}

std::vector<TruthSample> ground_truth(const StimulusSpec& spec) {
  std::vector<TruthSample> truth;
  if (!spec.target) return truth;
  truth.reserve(spec.duration);
  for (int t = 0; t < spec.duration; ++t) {
    const auto p = spec.target->trajectory.position(t, spec.fps);
    truth.push_back({t, p.x, p.y, actual_direction(spec.target->trajectory, t, spec.fps)});
  }
  return truth;
}

std::vector<TruthSample> render_sequence(const StimulusSpec& spec,
                                         const std::function<void(int, const Frame&)>& sink) {
  spec.validate();
  for (int t = 0; t < spec.duration; ++t) sink(t, render_frame(spec, t));
  return ground_truth(spec);
}

double weber_contrast(const Frame& frame, double cx, double cy, int w, int h, int d) {
  const BoxOrigin o = box_origin(cx, cy, w, h);
  const int ol = o.left - d;
  const int ot = o.top - d;
  const int ow = w + 2 * d;
  const int oh = h + 2 * d;
  if (ol < 0 || ot < 0 || ol + ow > frame.width() || ot + oh > frame.height())
    throw DimensionError("contrast rectangle falls outside the frame");
  double target_sum = 0.0;
  double ring_sum = 0.0;
  for (int y = ot; y < ot + oh; ++y)
    for (int x = ol; x < ol + ow; ++x) {
      const bool inside = x >= o.left && x < o.left + w && y >= o.top && y < o.top + h;
      (inside ? target_sum : ring_sum) += frame.at(x, y);
    }
  const double mu_t = target_sum / (static_cast<double>(w) * h);
  const double mu_b = ring_sum / (static_cast<double>(ow) * oh - static_cast<double>(w) * h);
  return std::abs(mu_t - mu_b) / 255.0;
}

Frame generate_clutter(const ClutterParams& params) {
  if (params.width <= 0 || params.height <= 0 || params.octaves < 1 || !(params.noise_sigma > 0.0))
    throw ParameterError("invalid clutter parameters");
  const double coarsest = params.noise_sigma * std::ldexp(1.0, params.octaves - 1);
  const int reach = static_cast<int>(gaussian1d(coarsest).size() / 2);
  if (reach >= std::min(params.width, params.height))
    throw ParameterError("coarsest clutter octave (blur radius " + std::to_string(reach) +
                         " px) does not fit a " + std::to_string(params.width) + "x" +
                         std::to_string(params.height) + " image; use fewer octaves");
  Uniform uniform(params.seed);
  Frame noise(params.width, params.height);
  double sigma = params.noise_sigma;
  for (int octave = 0; octave < params.octaves; ++octave, sigma *= 2.0) {
    Frame layer(params.width, params.height);
    for (double& v : layer.pixels()) v = uniform() - 0.5;
    layer = conv_separable(layer, gaussian1d(sigma));
    // Blurring white noise by sigma scales its std by ~1/sigma; undoing that
    // gives every octave equal contrast, i.e. a 1/f amplitude spectrum.
    const double gain = sigma;
    auto dst = noise.pixels();
    auto src = layer.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += gain * src[i];
  }

  double mean = 0.0;
  for (double v : noise.pixels()) mean += v;
  mean /= static_cast<double>(noise.size());
  double var = 0.0;
  for (double v : noise.pixels()) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(noise.size()));
  for (double& v : noise.pixels()) v = params.mean + params.spread * (v - mean) / sd;

  for (int i = 0; i < params.bars; ++i) {
    const double x0 = uniform(0.0, params.width);
    const double bar_width = uniform(8.0, 30.0);
    const double lum = uniform(40.0, 100.0);
    for (int y = 0; y < params.height; ++y)
      for (int x = 0; x < params.width; ++x) {
        // Horizontal distance on the wrapped strip.
        double dx = std::fmod(x - x0 + params.width, static_cast<double>(params.width));
        if (dx < bar_width) noise.at(x, y) = lum;
      }
  }
  for (int i = 0; i < params.blobs; ++i) {
    const double cx = uniform(0.0, params.width);
    const double cy = uniform(0.0, params.height);
    const double r = uniform(10.0, 30.0);
    const double lum = uniform(30.0, 120.0);
    for (int y = std::max(0, static_cast<int>(cy - r - 1));
         y <= std::min(params.height - 1, static_cast<int>(cy + r + 1)); ++y)
      for (int x = static_cast<int>(cx - r - 1); x <= static_cast<int>(cx + r + 1); ++x) {
        const int wx = wrap(x, params.width);
        const double dist = std::hypot(x - cx, y - cy);
        const double a = std::clamp(r + 0.5 - dist, 0.0, 1.0);
        noise.at(wx, y) = (1.0 - a) * noise.at(wx, y) + a * lum;
      }
  }
  for (double& v : noise.pixels()) v = quantize(v);
  return noise;
}

}  // namespace stmd
