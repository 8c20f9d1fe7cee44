#include "stmd/estmd.hpp"

#include "stmd/error.hpp"

namespace stmd {

EstmdMedulla::EstmdMedulla(const PipelineConfig& cfg)
    : w2_(make_w2_filter(cfg)),
      delay_(gamma_kernel(cfg.n3, cfg.tau3, cfg.step, cfg.mass_cutoff)),
      off_history_(delay_.size()) {}

const EstmdMedullaMaps& EstmdMedulla::step(const Frame& lamina_output) {
  maps_.on = rectify_pos(w2_.apply(rectify_pos(lamina_output)));
  maps_.off = rectify_pos(w2_.apply(rectify_neg(lamina_output)));
  maps_.delayed_off = temporal_step(off_history_, maps_.off, delay_);
  return maps_;
}

void EstmdMedulla::reset() {
  off_history_.reset();
  maps_ = {};
}

const EstmdMedullaMaps& medulla_step_estmd(const Frame& lamina_output, EstmdMedulla& state) {
  return state.step(lamina_output);
}

EstmdResponse estmd_correlate(const EstmdMedullaMaps& maps) {
  if (!maps.on.same_shape(maps.delayed_off)) throw DimensionError("ESTMD maps differ in shape");
  EstmdResponse out;
  out.response = maps.on;
  auto dst = out.response.pixels();
  auto delayed = maps.delayed_off.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= delayed[i];
  return out;
}

EstmdModel::EstmdModel(PipelineConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))), retina_(cfg_), lamina_(cfg_), medulla_(cfg_) {}

EstmdResponse EstmdModel::process_frame(const Frame& raw) {
  if (frame_index_ == 0) {
    width_ = raw.width();
    height_ = raw.height();
  } else if (raw.width() != width_ || raw.height() != height_) {
    throw DimensionError("frame dimensions changed mid-stream");
  }
  const LaminaOutput lamina = lamina_.step(retina_.step(raw));
  EstmdResponse out = estmd_correlate(medulla_.step(lamina.L_I));
  out.frame_index = frame_index_;
  out.warmup = frame_index_ < cfg_.warmup;
  ++frame_index_;
  return out;
}

void EstmdModel::reset() {
  lamina_.reset();
  medulla_.reset();
  frame_index_ = 0;
}

}  // namespace stmd
