#pragma once

#include <cstdint>
#include <vector>

#include "stmd/config.hpp"
#include "stmd/engine.hpp"
#include "stmd/frame.hpp"
#include "stmd/kernels.hpp"

namespace stmd {

/// Output of the directional pipeline: one response grid per preferred direction.
struct DirectionalResponse {
  std::int64_t frame_index = 0;
  bool warmup = false;
  std::vector<double> directions;  // radians, image convention (y down)
  std::vector<Frame> channels;

  int width() const { return channels.empty() ? 0 : channels.front().width(); }
  int height() const { return channels.empty() ? 0 : channels.front().height(); }
  double at(std::size_t channel, int x, int y) const { return channels[channel].at(x, y); }

  /// max over directions, per pixel.
  Frame max_over_directions() const;
  /// Largest value anywhere.
  double peak() const;
};

struct LaminaOutput {
  Frame L;    // band-passed luminance change
  Frame L_I;  // after spatiotemporal lateral inhibition
};

/// Per-pixel medulla maps. ON/OFF are the rectified lamina output; the other
/// three are Gamma-delayed copies feeding the two-point correlation.
struct MedullaState {
  Frame on;              // Tm3
  Frame off;             // Tm2
  Frame delayed_on;      // Mi1, Gamma(n4, tau4) on ON
  Frame delayed_off_5;   // Tm1, Gamma(n5, tau5) on OFF
  Frame delayed_off_6;   // Tm1, Gamma(n6, tau6) on OFF
};

/// Gaussian blur of the raw luminance.
class Retina {
 public:
  explicit Retina(const PipelineConfig& cfg);
  Frame step(const Frame& raw) const;

 private:
  std::vector<double> blur_;
};

Frame retina_step(const Frame& raw, const PipelineConfig& cfg);

/// Temporal band-pass followed by lateral inhibition with the
/// space-time separable W1 = W_S^P W_T^P + W_S^N W_T^N.
class Lamina {
 public:
  explicit Lamina(const PipelineConfig& cfg);

  LaminaOutput step(const Frame& photoreceptor);
  void reset();

  const DiscreteKernel1D& bandpass() const { return bandpass_; }
  const DiscreteKernel1D& fast_decay() const { return fast_decay_; }
  const DiscreteKernel1D& slow_decay() const { return slow_decay_; }
  const DogSplit& spatial() const { return spatial_; }

 private:
  DiscreteKernel1D bandpass_;
  DiscreteKernel1D fast_decay_;
  DiscreteKernel1D slow_decay_;
  DogSplit spatial_;
  SpatialFilter positive_filter_;
  SpatialFilter negative_filter_;
  TemporalStream photoreceptor_history_;
  TemporalStream change_history_;
};

LaminaOutput lamina_step(const Frame& photoreceptor, Lamina& state);

/// ON/OFF split and the three Gamma delay lines.
class Medulla {
 public:
  explicit Medulla(const PipelineConfig& cfg);

  const MedullaState& step(const Frame& lamina_output);
  const MedullaState& state() const { return state_; }
  void reset();

 private:
  DiscreteKernel1D delay_on_;
  DiscreteKernel1D delay_off_5_;
  DiscreteKernel1D delay_off_6_;
  TemporalStream on_history_;
  TemporalStream off_history_;
  MedullaState state_;
};

const MedullaState& medulla_step(const Frame& lamina_output, Medulla& state);

/// Sampling offset of the upstream correlation partner for preferred
/// direction theta. The partner sits alpha1 pixels behind the receptive
/// field centre along theta, so a target moving along theta passes it first.
struct CorrelationOffset {
  double dx = 0.0;
  double dy = 0.0;
};
CorrelationOffset correlation_offset(double theta, double alpha1);

/// Two-point directional correlation (before any inhibition).
DirectionalResponse lobula_correlate(const MedullaState& med, const PipelineConfig& cfg);

/// Second-order lateral inhibition of every direction channel.
DirectionalResponse spatial_inhibition(const DirectionalResponse& D, const SpatialFilter& w2);
DirectionalResponse spatial_inhibition(const DirectionalResponse& D, const PipelineConfig& cfg);

/// Circular convolution across direction channels with W3, rectified.
DirectionalResponse direction_inhibition(const DirectionalResponse& D_I, const DiscreteKernel1D& w3);
DirectionalResponse direction_inhibition(const DirectionalResponse& D_I, const PipelineConfig& cfg);

/// W2 as separable Gaussians plus a sparse excitatory residual.
SpatialFilter make_w2_filter(const PipelineConfig& cfg);

/// The full directional pipeline with its streaming state.
class DstmdModel {
 public:
  explicit DstmdModel(PipelineConfig cfg = {});

  DirectionalResponse process_frame(const Frame& raw);

  const PipelineConfig& config() const { return cfg_; }
  const MedullaState& medulla() const { return medulla_.state(); }
  const LaminaOutput& lamina() const { return lamina_out_; }
  std::int64_t frames_processed() const { return frame_index_; }
  void reset();

 private:
  PipelineConfig cfg_;
  Retina retina_;
  Lamina lamina_;
  Medulla medulla_;
  SpatialFilter w2_;
  DiscreteKernel1D w3_;
  LaminaOutput lamina_out_;
  std::int64_t frame_index_ = 0;
  int width_ = 0;
  int height_ = 0;
};

}  // namespace stmd
