#include "stmd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "stmd/error.hpp"

namespace stmd {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

std::string fmt(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::variant<DstmdModel, EstmdModel> make_model(ModelKind kind, const PipelineConfig& cfg) {
  if (kind == ModelKind::dstmd) return DstmdModel(cfg);
  return EstmdModel(cfg);
}

// Index of the trajectory sample in frames max(0, t - window) .. t closest to
// the detection.
std::size_t nearest_trace_point(const std::vector<TruthSample>& truth, const Detection& d, int t,
                                int window) {
  std::size_t best = static_cast<std::size_t>(t);
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int k = t; k >= std::max(0, t - window); --k) {
    const double dx = truth[k].x - d.x;
    const double dy = truth[k].y - d.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<std::size_t>(k);
    }
  }
  return best;
}

}  // namespace

ModelKind parse_model_kind(const std::string& name) {
  if (name == "dstmd") return ModelKind::dstmd;
  if (name == "estmd") return ModelKind::estmd;
  throw ConfigError("unknown model '" + name + "' (expected dstmd or estmd)");
}

const char* to_string(ModelKind kind) { return kind == ModelKind::dstmd ? "dstmd" : "estmd"; }

ModelRunner::ModelRunner(ModelKind kind, const PipelineConfig& cfg)
    : kind_(kind), cfg_(cfg), model_(make_model(kind, cfg)) {}

ModelStep ModelRunner::step(const Frame& raw) {
  ModelStep out;
  if (auto* dstmd = std::get_if<DstmdModel>(&model_)) {
    DirectionalResponse E = dstmd->process_frame(raw);
    out.frame_index = E.frame_index;
    out.warmup = E.warmup;
    out.strength = E.max_over_directions();
    out.directional = std::move(E);
  } else {
    EstmdResponse r = std::get<EstmdModel>(model_).process_frame(raw);
    out.frame_index = r.frame_index;
    out.warmup = r.warmup;
    out.strength = std::move(r.response);
  }
  return out;
}

// ---------------------------------------------------------------------------

MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::vector<Point2>& trace, double radius) {
  MatchResult result;
  double best = radius * radius;
  for (std::size_t i = 0; i < detections.size() && !trace.empty(); ++i) {
    double d2 = std::numeric_limits<double>::infinity();
    for (const Point2& p : trace) {
      const double dx = detections[i].x - p.x;
      const double dy = detections[i].y - p.y;
      d2 = std::min(d2, dx * dx + dy * dy);
    }
    if (d2 <= best && (!result.matched || d2 < best)) {
      best = d2;
      result.matched = i;
    }
  }
  result.true_count = result.matched ? 1 : 0;
  result.false_count = static_cast<int>(detections.size()) - result.true_count;
  return result;
}

MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::optional<Point2>& truth, double radius) {
  std::vector<Point2> trace;
  if (truth) trace.push_back(*truth);
  return match_detections(detections, trace, radius);
}

std::vector<Point2> recent_trace(const std::vector<TruthSample>& truth, int t, int window) {
  if (window < 0) throw ParameterError("trace window must be non-negative");
  std::vector<Point2> trace;
  if (t < 0 || static_cast<std::size_t>(t) >= truth.size()) return trace;
  for (int k = std::max(0, t - window); k <= t; ++k) trace.push_back({truth[k].x, truth[k].y});
  return trace;
}

std::vector<RocPoint> roc_sweep(const std::vector<FrameDetections>& frames,
                                const std::vector<double>& gamma_grid, double match_radius) {
  if (gamma_grid.empty()) throw ParameterError("gamma grid must not be empty");
  std::vector<RocPoint> roc;
  std::vector<Detection> kept;
  for (double gamma : gamma_grid) {
    long true_count = 0;
    long false_count = 0;
    long targets = 0;
    for (const FrameDetections& f : frames) {
      kept.clear();
      for (const Detection& d : f.candidates)
        if (d.response > gamma) kept.push_back(d);
      const MatchResult m = match_detections(kept, f.trace, match_radius);
      true_count += m.true_count;
      false_count += m.false_count;
      if (!f.trace.empty()) ++targets;
    }
    RocPoint p;
    p.gamma = gamma;
    p.dr = targets > 0 ? static_cast<double>(true_count) / targets : 0.0;
    p.fa = frames.empty() ? 0.0 : static_cast<double>(false_count) / frames.size();
    roc.push_back(p);
  }
  return roc;
}

std::vector<double> log_gamma_grid(double lo, double hi, int points) {
  if (points < 1) throw ParameterError("gamma grid needs at least one point");
  if (!(lo > 0.0) || !(hi >= lo)) throw ParameterError("gamma grid needs 0 < lo <= hi");
  std::vector<double> grid;
  if (points == 1) return {lo};
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) grid.push_back(std::exp(a + (b - a) * i / (points - 1)));
  return grid;
}

std::vector<double> observed_gamma_grid(const std::vector<FrameDetections>& frames, int points) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& f : frames)
    for (const auto& d : f.candidates)
      if (d.response > 0.0) {
        lo = std::min(lo, d.response);
        hi = std::max(hi, d.response);
      }
  if (hi <= 0.0) return {1.0};
  // The weakest local maxima are numerical dust; keep six decades below the peak.
  lo = std::max(lo, hi * 1e-6);
  return log_gamma_grid(lo, hi, points);
}

double detection_rate_at(const std::vector<RocPoint>& roc, double fa) {
  double best = 0.0;
  for (const RocPoint& p : roc)
    if (p.fa <= fa + 1e-12) best = std::max(best, p.dr);
  return best;
}

DetectionClip collect_detections(const StimulusSpec& spec, ModelKind kind, const RunConfig& cfg,
                                 double base_gamma) {
  spec.validate();
  const std::vector<TruthSample> truth = ground_truth(spec);
  ModelRunner runner(kind, cfg.pipeline);
  DetectionClip clip;
  for (int t = 0; t < spec.duration; ++t) {
    ModelStep step = runner.step(render_frame(spec, t));
    if (step.warmup) continue;
    FrameDetections fd;
    fd.frame_index = step.frame_index;
    fd.candidates = detect_peaks(step.strength, base_gamma, cfg.eval.suppress_radius, step.frame_index);
    fd.trace = recent_trace(truth, t, cfg.eval.trace_window);
    clip.peak_response = std::max(clip.peak_response, step.strength.max());

    std::optional<double> err;
    if (step.directional && !fd.trace.empty()) {
      const MatchResult m = match_detections(fd.candidates, fd.trace, cfg.eval.match_radius);
      if (m.matched) {
        Detection& d = fd.candidates[*m.matched];
        const auto pixels =
          select_target_pixels(step.strength, d, cfg.eval.target_radius, base_gamma);
        try {
          d.direction = population_vector(*step.directional, pixels);
          const std::size_t at = nearest_trace_point(truth, d, t, cfg.eval.trace_window);
          err = angular_difference_deg(*d.direction * kDegPerRad, truth[at].direction * kDegPerRad);
        } catch (const UndefinedDirectionError&) {
        }
      }
    }
    clip.true_direction_error_deg.push_back(err);
    clip.frames.push_back(std::move(fd));
  }
  return clip;
}

// ---------------------------------------------------------------------------

TuningParameter parse_tuning_parameter(const std::string& name) {
  if (name == "contrast") return TuningParameter::contrast;
  if (name == "velocity") return TuningParameter::velocity;
  if (name == "width") return TuningParameter::width;
  if (name == "height") return TuningParameter::height;
  throw ConfigError("unknown tuning parameter '" + name + "'");
}

const char* to_string(TuningParameter p) {
  switch (p) {
    case TuningParameter::contrast: return "contrast";
    case TuningParameter::velocity: return "velocity";
    case TuningParameter::width: return "width";
    case TuningParameter::height: return "height";
  }
  return "?";
}

StimulusSpec make_tuning_stimulus(const TuningProtocol& protocol, TuningParameter parameter,
                                  double value) {
  double background = protocol.background;
  double velocity = protocol.velocity;
  int w = protocol.width;
  int h = protocol.height;
  switch (parameter) {
    case TuningParameter::contrast: background = protocol.target_luminance + value * 255.0; break;
    case TuningParameter::velocity: velocity = value; break;
    case TuningParameter::width: w = static_cast<int>(std::lround(value)); break;
    case TuningParameter::height: h = static_cast<int>(std::lround(value)); break;
  }
  if (w < 1 || h < 1 || !(velocity > 0.0)) throw ParameterError("invalid tuning value");

  const double travel = velocity * protocol.duration / protocol.fps;
  StimulusSpec spec;
  spec.fps = protocol.fps;
  spec.duration = protocol.duration;
  spec.antialias = protocol.antialias;
  spec.width = static_cast<int>(std::ceil(travel)) + w + 2 * protocol.margin;
  spec.height = h + 2 * protocol.margin;
  spec.background = SolidBackground{background};
  TargetSpec target;
  target.width = w;
  target.height = h;
  target.luminance = protocol.target_luminance;
  target.trajectory.motion = LinearMotion{spec.width - 1 - protocol.margin - (w - 1) / 2.0,
                                          (spec.height - 1) / 2.0, -velocity, 0.0};
  spec.target = target;
  return spec;
}

double measure_response(const StimulusSpec& spec, ModelKind kind, const PipelineConfig& cfg,
                        const TuningProtocol& protocol) {
  spec.validate();
  const std::vector<TruthSample> truth = ground_truth(spec);
  const int first = cfg.warmup + protocol.edge_frames;
  const int last = spec.duration - protocol.edge_frames;  // exclusive
  if (first >= last) throw ParameterError("tuning clip too short for its measurement window");
  const double r = protocol.measure_radius;
  ModelRunner runner(kind, cfg);
  double total = 0.0;
  int count = 0;
  for (int t = 0; t < last; ++t) {
    const ModelStep step = runner.step(render_frame(spec, t));
    if (t < first) continue;
    const Frame& s = step.strength;
    double best = 0.0;
    const std::vector<Point2> trace = recent_trace(truth, t, protocol.trace_window);
    double x0 = trace.front().x, x1 = x0, y0 = trace.front().y, y1 = y0;
    for (const Point2& p : trace) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    for (int y = std::max(0, static_cast<int>(std::floor(y0 - r)));
         y <= std::min(s.height() - 1, static_cast<int>(std::ceil(y1 + r))); ++y)
      for (int x = std::max(0, static_cast<int>(std::floor(x0 - r)));
           x <= std::min(s.width() - 1, static_cast<int>(std::ceil(x1 + r))); ++x) {
        if (s.at(x, y) <= best) continue;
        for (const Point2& p : trace)
          if ((x - p.x) * (x - p.x) + (y - p.y) * (y - p.y) <= r * r) {
            best = s.at(x, y);
            break;
          }
      }
    total += best;
    ++count;
  }
  return total / count;
}

std::size_t TuningCurve::argmax() const {
  if (responses.empty()) throw ParameterError("empty tuning curve");
  return static_cast<std::size_t>(std::max_element(responses.begin(), responses.end()) -
                                  responses.begin());
}

TuningCurve normalize_curve(std::string parameter, std::vector<double> values,
                            std::vector<double> raw) {
  TuningCurve curve;
  curve.parameter = std::move(parameter);
  curve.values = std::move(values);
  curve.raw = std::move(raw);
  const double peak = curve.raw.empty() ? 0.0 : *std::max_element(curve.raw.begin(), curve.raw.end());
  for (double v : curve.raw) curve.responses.push_back(peak > 0.0 ? v / peak : 0.0);
  return curve;
}

TuningCurve tuning_curve(TuningParameter parameter, const std::vector<double>& values,
                         const TuningProtocol& protocol, const PipelineConfig& cfg, ModelKind kind) {
  std::vector<double> raw;
  raw.reserve(values.size());
  for (double v : values)
    raw.push_back(measure_response(make_tuning_stimulus(protocol, parameter, v), kind, cfg, protocol));
  return normalize_curve(to_string(parameter), values, std::move(raw));
}

// ---------------------------------------------------------------------------

double angular_difference_deg(double a_deg, double b_deg) {
  double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

std::vector<std::optional<double>> direction_error_series(
    const std::vector<std::optional<double>>& estimates_deg, const std::vector<double>& truth_deg) {
  if (estimates_deg.size() != truth_deg.size())
    throw DimensionError("estimate and truth series differ in length");
  std::vector<std::optional<double>> errors;
  errors.reserve(truth_deg.size());
  for (std::size_t i = 0; i < truth_deg.size(); ++i) {
    if (estimates_deg[i])
      errors.emplace_back(angular_difference_deg(*estimates_deg[i], truth_deg[i]));
    else
      errors.emplace_back(std::nullopt);
  }
  return errors;
}

std::vector<DirectionSample> direction_experiment(const StimulusSpec& spec, const RunConfig& cfg) {
  spec.validate();
  if (!spec.target) throw ParameterError("direction experiment needs a target");
  const std::vector<TruthSample> truth = ground_truth(spec);
  const double gamma = std::max(cfg.eval.gamma, 0.0);
  DstmdModel model(cfg.pipeline);
  std::vector<std::optional<double>> estimates;
  std::vector<double> truth_deg;
  std::vector<std::int64_t> frames;
  for (int t = 0; t < spec.duration; ++t) {
    const DirectionalResponse E = model.process_frame(render_frame(spec, t));
    if (E.warmup) continue;
    const Frame strength = E.max_over_directions();
    std::optional<double> estimate;
    const auto detections = detect_peaks(strength, gamma, cfg.eval.suppress_radius, t);
    if (!detections.empty()) {
      const Detection& best = detections.front();
      const auto pixels = select_target_pixels(strength, best, cfg.eval.target_radius, gamma);
      try {
        estimate = population_vector(E, pixels) * kDegPerRad;
      } catch (const UndefinedDirectionError&) {
      }
    }
    estimates.push_back(estimate);
    std::size_t at = static_cast<std::size_t>(t);
    if (!detections.empty())
      at = nearest_trace_point(truth, detections.front(), t, cfg.eval.trace_window);
    truth_deg.push_back(truth[at].direction * kDegPerRad);
    frames.push_back(t);
  }
  const auto errors = direction_error_series(estimates, truth_deg);
  std::vector<DirectionSample> out;
  for (std::size_t i = 0; i < frames.size(); ++i)
    out.push_back({frames[i], estimates[i], truth_deg[i], errors[i]});
  return out;
}

// ---------------------------------------------------------------------------

void write_roc_csv(const std::filesystem::path& path, const std::vector<RocPoint>& roc) {
  auto out = open_csv(path);
  out << "gamma,dr,fa\n";
  for (const RocPoint& p : roc) out << fmt(p.gamma, 12) << ',' << fmt(p.dr) << ',' << fmt(p.fa) << '\n';
}

void write_tuning_csv(const std::filesystem::path& path, const TuningCurve& curve) {
  auto out = open_csv(path);
  out << "value,response\n";
  for (std::size_t i = 0; i < curve.values.size(); ++i)
    out << fmt(curve.values[i]) << ',' << fmt(curve.responses[i]) << '\n';
}

void write_direction_csv(const std::filesystem::path& path,
                         const std::vector<DirectionSample>& samples) {
  auto out = open_csv(path);
  out << "frame,est_deg,true_deg,err_deg\n";
  for (const DirectionSample& s : samples) {
    out << s.frame << ',';
    if (s.estimate_deg) out << fmt(*s.estimate_deg, 8);
    out << ',' << fmt(s.truth_deg, 8) << ',';
    if (s.error_deg) out << fmt(*s.error_deg, 8);
    out << '\n';
  }
}

void write_detections_csv(const std::filesystem::path& path,
                          const std::vector<Detection>& detections) {
  auto out = open_csv(path);
  out << "frame,x,y,response,direction_deg\n";
  for (const Detection& d : detections) {
    out << d.frame_index << ',' << d.x << ',' << d.y << ',' << fmt(d.response, 12) << ',';
    if (d.direction) out << fmt(*d.direction * kDegPerRad, 8);
    out << '\n';
  }
}

}  // namespace stmd
