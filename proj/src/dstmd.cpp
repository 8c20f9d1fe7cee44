#include "stmd/dstmd.hpp"

#include <algorithm>
#include <cmath>

#include "stmd/error.hpp"

namespace stmd {

namespace {

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

}  // namespace

Frame DirectionalResponse::max_over_directions() const {
  if (channels.empty()) return {};
  Frame out = channels.front();
  for (std::size_t c = 1; c < channels.size(); ++c) {
    auto dst = out.pixels();
    auto src = channels[c].pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(dst[i], src[i]);
  }
  return out;
}

double DirectionalResponse::peak() const {
  double p = 0.0;
  for (const Frame& f : channels) p = std::max(p, f.max());
  return p;
}

// ---------------------------------------------------------------------------

Retina::Retina(const PipelineConfig& cfg) : blur_(gaussian1d(cfg.sigma1, cfg.truncation_sigmas)) {}

Frame Retina::step(const Frame& raw) const { return conv_separable(raw, blur_); }

Frame retina_step(const Frame& raw, const PipelineConfig& cfg) { return Retina(cfg).step(raw); }

// ---------------------------------------------------------------------------

Lamina::Lamina(const PipelineConfig& cfg)
    : bandpass_(temporal_bandpass(cfg.n1, cfg.tau1, cfg.n2, cfg.tau2, cfg.step, cfg.mass_cutoff)),
      fast_decay_(exp_kernel(cfg.lambda1, cfg.step, cfg.mass_cutoff)),
      slow_decay_(exp_kernel(cfg.lambda2, cfg.step, cfg.mass_cutoff)),
      spatial_(dog_split(cfg.sigma2, cfg.sigma3, cfg.truncation_sigmas)),
      photoreceptor_history_(bandpass_.size()),
      change_history_(std::max(fast_decay_.size(), slow_decay_.size())) {
  positive_filter_ = SpatialFilter::from_dense(spatial_.positive_part);
  // [G2 - G3]^- = G2 - G3 - [G2 - G3]^+ ; the Gaussians run separably.
  negative_filter_.add_separable(1.0, gaussian1d(cfg.sigma2, cfg.truncation_sigmas))
      .add_separable(-1.0, gaussian1d(cfg.sigma3, cfg.truncation_sigmas))
      .add_sparse(spatial_.positive_part, -1.0);
}

LaminaOutput Lamina::step(const Frame& photoreceptor) {
  LaminaOutput out;
  out.L = temporal_step(photoreceptor_history_, photoreceptor, bandpass_);
  change_history_.push(out.L);
  // Spatial and temporal factors of each W1 term commute.
  out.L_I = positive_filter_.apply(change_history_.convolve(fast_decay_));
  const Frame negative = negative_filter_.apply(change_history_.convolve(slow_decay_));
  auto dst = out.L_I.pixels();
  auto src = negative.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

void Lamina::reset() {
  photoreceptor_history_.reset();
  change_history_.reset();
}

LaminaOutput lamina_step(const Frame& photoreceptor, Lamina& state) {
  return state.step(photoreceptor);
}

// ---------------------------------------------------------------------------

Medulla::Medulla(const PipelineConfig& cfg)
    : delay_on_(gamma_kernel(cfg.n4, cfg.tau4, cfg.step, cfg.mass_cutoff)),
      delay_off_5_(gamma_kernel(cfg.n5, cfg.tau5, cfg.step, cfg.mass_cutoff)),
      delay_off_6_(gamma_kernel(cfg.n6, cfg.tau6, cfg.step, cfg.mass_cutoff)),
      on_history_(delay_on_.size()),
      off_history_(std::max(delay_off_5_.size(), delay_off_6_.size())) {}

const MedullaState& Medulla::step(const Frame& lamina_output) {
  state_.on = rectify_pos(lamina_output);
  state_.off = rectify_neg(lamina_output);
  state_.delayed_on = temporal_step(on_history_, state_.on, delay_on_);
  off_history_.push(state_.off);
  state_.delayed_off_5 = off_history_.convolve(delay_off_5_);
  state_.delayed_off_6 = off_history_.convolve(delay_off_6_);
  return state_;
}

void Medulla::reset() {
  on_history_.reset();
  off_history_.reset();
  state_ = {};
}

const MedullaState& medulla_step(const Frame& lamina_output, Medulla& state) {
  return state.step(lamina_output);
}

// ---------------------------------------------------------------------------

CorrelationOffset correlation_offset(double theta, double alpha1) {
  return {snap(-alpha1 * std::cos(theta)), snap(-alpha1 * std::sin(theta))};
}

DirectionalResponse lobula_correlate(const MedullaState& med, const PipelineConfig& cfg) {
  if (!med.on.same_shape(med.off) || !med.on.same_shape(med.delayed_on) ||
      !med.on.same_shape(med.delayed_off_5) || !med.on.same_shape(med.delayed_off_6))
    throw DimensionError("medulla maps differ in shape");
  DirectionalResponse out;
  out.directions = cfg.directions;
  out.channels.reserve(cfg.directions.size());
  for (double theta : cfg.directions) {
    const CorrelationOffset off = correlation_offset(theta, cfg.alpha1);
    const Frame partner_on = shift_bilinear(med.delayed_on, off.dx, off.dy);
    const Frame partner_off = shift_bilinear(med.delayed_off_6, off.dx, off.dy);
    Frame d(med.on.width(), med.on.height());
    auto dst = d.pixels();
    auto on = med.on.pixels();
    auto local_off = med.delayed_off_5.pixels();
    auto p_on = partner_on.pixels();
    auto p_off = partner_off.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = on[i] * (local_off[i] + p_on[i]) * p_off[i];
    out.channels.push_back(std::move(d));
  }
  return out;
}

SpatialFilter make_w2_filter(const PipelineConfig& cfg) {
  const std::vector<double> center = gaussian1d(cfg.sigma4, cfg.truncation_sigmas);
  const std::vector<double> surround = gaussian1d(cfg.sigma5, cfg.truncation_sigmas);
  const int radius = static_cast<int>(std::max(center.size(), surround.size()) / 2);

  // Excitatory part [g]^+ of g = G4 - e G5 - rho, evaluated exactly as w2_kernel does.
  const DiscreteKernel2D c = pad_to_radius(gaussian2d(cfg.sigma4, cfg.truncation_sigmas), radius);
  const DiscreteKernel2D s = pad_to_radius(gaussian2d(cfg.sigma5, cfg.truncation_sigmas), radius);
  DiscreteKernel2D excitatory = DiscreteKernel2D::zeros(radius);
  for (std::size_t i = 0; i < excitatory.taps.size(); ++i)
    excitatory.taps[i] = std::max(c.taps[i] - cfg.e * s.taps[i] - cfg.rho, 0.0);

  // A[g]^+ + B[g]^- = B g + (A - B)[g]^+
  SpatialFilter f;
  f.add_separable(cfg.B, center)
      .add_separable(-cfg.B * cfg.e, surround)
      .add_separable(-cfg.B * cfg.rho, std::vector<double>(2 * radius + 1, 1.0))
      .add_sparse(excitatory, cfg.A - cfg.B);
  return f;
}

DirectionalResponse spatial_inhibition(const DirectionalResponse& D, const SpatialFilter& w2) {
  DirectionalResponse out;
  out.frame_index = D.frame_index;
  out.warmup = D.warmup;
  out.directions = D.directions;
  out.channels.reserve(D.channels.size());
  for (const Frame& channel : D.channels) {
    if (channel.max() == 0.0 && channel.min() == 0.0) {
      out.channels.emplace_back(channel.width(), channel.height());
      continue;
    }
    out.channels.push_back(rectify_pos(w2.apply(channel)));
  }
  return out;
}

DirectionalResponse spatial_inhibition(const DirectionalResponse& D, const PipelineConfig& cfg) {
  return spatial_inhibition(D, make_w2_filter(cfg));
}

DirectionalResponse direction_inhibition(const DirectionalResponse& D_I, const DiscreteKernel1D& w3) {
  const std::size_t bins = D_I.channels.size();
  if (w3.size() != bins) throw DimensionError("W3 bin count differs from the direction channel count");
  DirectionalResponse out;
  out.frame_index = D_I.frame_index;
  out.warmup = D_I.warmup;
  out.directions = D_I.directions;
  if (bins == 0) return out;
  const int w = D_I.width();
  const int h = D_I.height();
  for (std::size_t i = 0; i < bins; ++i) {
    Frame e(w, h);
    auto dst = e.pixels();
    for (std::size_t j = 0; j < bins; ++j) {
      const double tap = w3_tap(w3, static_cast<int>(i) - static_cast<int>(j));
      auto src = D_I.channels[j].pixels();
      for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += tap * src[p];
    }
    for (double& v : dst) v = std::max(v, 0.0);
    out.channels.push_back(std::move(e));
  }
  return out;
}

DirectionalResponse direction_inhibition(const DirectionalResponse& D_I, const PipelineConfig& cfg) {
  return direction_inhibition(
      D_I, w3_kernel(cfg.sigma6, cfg.sigma7, static_cast<int>(cfg.directions.size())));
}

// ---------------------------------------------------------------------------

DstmdModel::DstmdModel(PipelineConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      retina_(cfg_),
      lamina_(cfg_),
      medulla_(cfg_),
      w2_(make_w2_filter(cfg_)),
      w3_(w3_kernel(cfg_.sigma6, cfg_.sigma7, static_cast<int>(cfg_.directions.size()))) {}

DirectionalResponse DstmdModel::process_frame(const Frame& raw) {
  if (frame_index_ == 0) {
    width_ = raw.width();
    height_ = raw.height();
  } else if (raw.width() != width_ || raw.height() != height_) {
    throw DimensionError("frame dimensions changed mid-stream");
  }
  const Frame photoreceptor = retina_.step(raw);
  lamina_out_ = lamina_.step(photoreceptor);
  const MedullaState& med = medulla_.step(lamina_out_.L_I);
  DirectionalResponse D = lobula_correlate(med, cfg_);
  D.frame_index = frame_index_;
  D.warmup = frame_index_ < cfg_.warmup;
  DirectionalResponse E = direction_inhibition(spatial_inhibition(D, w2_), w3_);
  ++frame_index_;
  return E;
}

void DstmdModel::reset() {
  lamina_.reset();
  medulla_.reset();
  lamina_out_ = {};
  frame_index_ = 0;
}

}  // namespace stmd
