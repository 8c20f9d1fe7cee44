#pragma once

#include <cstdint>

#include "stmd/config.hpp"
#include "stmd/dstmd.hpp"
#include "stmd/engine.hpp"
#include "stmd/frame.hpp"

namespace stmd {

/// Non-directional baseline output.
struct EstmdResponse {
  std::int64_t frame_index = 0;
  bool warmup = false;
  Frame response;  // D-tilde, >= 0
};

/// Medulla maps of the baseline: ON/OFF pass through W2 before correlation.
struct EstmdMedullaMaps {
  Frame on;           // inhibited Tm3
  Frame off;          // inhibited Tm2
  Frame delayed_off;  // Tm1, Gamma(n3, tau3) on the inhibited OFF map
};

class EstmdMedulla {
 public:
  explicit EstmdMedulla(const PipelineConfig& cfg);

  const EstmdMedullaMaps& step(const Frame& lamina_output);
  const EstmdMedullaMaps& maps() const { return maps_; }
  void reset();

 private:
  SpatialFilter w2_;
  DiscreteKernel1D delay_;
  TemporalStream off_history_;
  EstmdMedullaMaps maps_;
};

const EstmdMedullaMaps& medulla_step_estmd(const Frame& lamina_output, EstmdMedulla& state);

/// Single-position correlation: inhibited ON times delayed inhibited OFF.
EstmdResponse estmd_correlate(const EstmdMedullaMaps& maps);

class EstmdModel {
 public:
  explicit EstmdModel(PipelineConfig cfg = {});

  EstmdResponse process_frame(const Frame& raw);

  const PipelineConfig& config() const { return cfg_; }
  const EstmdMedullaMaps& medulla() const { return medulla_.maps(); }
  void reset();

 private:
  PipelineConfig cfg_;
  Retina retina_;
  Lamina lamina_;
  EstmdMedulla medulla_;
  std::int64_t frame_index_ = 0;
  int width_ = 0;
  int height_ = 0;
};

}  // namespace stmd
