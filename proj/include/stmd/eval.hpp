#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stmd/config.hpp"
#include "stmd/dstmd.hpp"
#include "stmd/estimation.hpp"
#include "stmd/estmd.hpp"
#include "stmd/stimulus.hpp"

namespace stmd {

enum class ModelKind { dstmd, estmd };

ModelKind parse_model_kind(const std::string& name);
const char* to_string(ModelKind kind);

/// One frame of model output in a model-independent form.
struct ModelStep {
  std::int64_t frame_index = 0;
  bool warmup = false;
  Frame strength;  // DSTMD: max over directions of E; ESTMD: D-tilde
  std::optional<DirectionalResponse> directional;
};

/// Runs either model behind one interface.
class ModelRunner {
 public:
  ModelRunner(ModelKind kind, const PipelineConfig& cfg);

  ModelStep step(const Frame& raw);
  ModelKind kind() const { return kind_; }
  const PipelineConfig& config() const { return cfg_; }

 private:
  ModelKind kind_;
  PipelineConfig cfg_;
  std::variant<DstmdModel, EstmdModel> model_;
};

// ---------------------------------------------------------------------------
// Detection scoring.

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct MatchResult {
  int true_count = 0;
  int false_count = 0;
  std::optional<std::size_t> matched;  // index of the detection that claimed the truth
};

/// A detection is true when it is the nearest one within `radius`
/// (inclusive) of the frame's target; every other detection is false.
MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::optional<Point2>& truth, double radius = 5.0);

/// Same rule with the target given as its recent trace: the distance to the
/// target is the distance to the closest trace point. An empty trace means no
/// target in the frame.
MatchResult match_detections(const std::vector<Detection>& detections,
                             const std::vector<Point2>& trace, double radius = 5.0);

/// Target positions of frames max(0, t - window) .. t, oldest first.
std::vector<Point2> recent_trace(const std::vector<TruthSample>& truth, int t, int window);

struct RocPoint {
  double gamma = 0.0;
  double dr = 0.0;  // true detections / actual targets
  double fa = 0.0;  // false detections / frames
};

/// Detections of one frame at the lowest threshold of interest. Raising the
/// threshold only removes entries (greedy suppression is nested in gamma).
struct FrameDetections {
  std::int64_t frame_index = 0;
  std::vector<Detection> candidates;
  std::vector<Point2> trace;  // empty when the frame has no target
};

std::vector<RocPoint> roc_sweep(const std::vector<FrameDetections>& frames,
                                const std::vector<double>& gamma_grid, double match_radius = 5.0);

/// `points` thresholds log-spaced over [lo, hi].
std::vector<double> log_gamma_grid(double lo, double hi, int points);

/// Grid spanning the positive candidate responses in `frames`.
std::vector<double> observed_gamma_grid(const std::vector<FrameDetections>& frames, int points);

/// Best detection rate reachable with a false-alarm rate of at most `fa`.
double detection_rate_at(const std::vector<RocPoint>& roc, double fa);

struct DetectionClip {
  std::vector<FrameDetections> frames;       // post-warm-up frames only
  std::vector<std::optional<double>> true_direction_error_deg;  // per frame, DSTMD only
  double peak_response = 0.0;
};

/// Runs a model over a rendered clip and keeps every local maximum above
/// `base_gamma` on post-warm-up frames. For DSTMD the detection that matches
/// the truth also gets a direction decoded from pixels above `base_gamma`.
DetectionClip collect_detections(const StimulusSpec& spec, ModelKind kind, const RunConfig& cfg,
                                 double base_gamma = 0.0);

// ---------------------------------------------------------------------------
// Tuning curves.

enum class TuningParameter { contrast, velocity, width, height };

TuningParameter parse_tuning_parameter(const std::string& name);
const char* to_string(TuningParameter p);

/// White-background protocol: a dark target moving left on a canvas sized to
/// its travel. One parameter is swept while the others stay at the base.
struct TuningProtocol {
  double background = 255.0;
  double target_luminance = 0.0;
  double velocity = 250.0;  // px/s
  int width = 5;
  int height = 5;
  double fps = 1000.0;
  int duration = 400;       // frames
  int margin = 24;          // px between target and canvas edge
  int edge_frames = 50;     // dropped at each end of the post-warm-up window
  double measure_radius = 5.0;
  int trace_window = 40;    // frames of trace the measurement disc follows
  bool antialias = false;
};

StimulusSpec make_tuning_stimulus(const TuningProtocol& protocol, TuningParameter parameter,
                                  double value);

/// Mean over the measurement window of the strongest response within
/// `measure_radius` of the target's recent trace.
double measure_response(const StimulusSpec& spec, ModelKind kind, const PipelineConfig& cfg,
                        const TuningProtocol& protocol);

struct TuningCurve {
  std::string parameter;
  std::vector<double> values;
  std::vector<double> responses;  // normalised, max = 1
  std::vector<double> raw;

  std::size_t argmax() const;
  double peak_value() const { return values.at(argmax()); }
};

/// Self-normalised curve; all-zero responses stay zero.
TuningCurve normalize_curve(std::string parameter, std::vector<double> values,
                            std::vector<double> raw);

TuningCurve tuning_curve(TuningParameter parameter, const std::vector<double>& values,
                         const TuningProtocol& protocol, const PipelineConfig& cfg,
                         ModelKind kind = ModelKind::dstmd);

// ---------------------------------------------------------------------------
// Direction estimation.

/// Circular difference in degrees, in [0, 180]; absent when the estimate is.
std::vector<std::optional<double>> direction_error_series(
    const std::vector<std::optional<double>>& estimates_deg, const std::vector<double>& truth_deg);

double angular_difference_deg(double a_deg, double b_deg);

struct DirectionSample {
  std::int64_t frame = 0;
  std::optional<double> estimate_deg;
  double truth_deg = 0.0;
  std::optional<double> error_deg;
};

/// Decodes the strongest detection of every post-warm-up frame from the pixels
/// above the detection threshold. The reference direction is the trajectory
/// tangent at the point of the recent trace nearest the detection: the response
/// trails the target, so it describes where the target was, not where it is now.
std::vector<DirectionSample> direction_experiment(const StimulusSpec& spec, const RunConfig& cfg);

// ---------------------------------------------------------------------------
// CSV artefacts.

void write_roc_csv(const std::filesystem::path& path, const std::vector<RocPoint>& roc);
void write_tuning_csv(const std::filesystem::path& path, const TuningCurve& curve);
void write_direction_csv(const std::filesystem::path& path,
                         const std::vector<DirectionSample>& samples);
void write_detections_csv(const std::filesystem::path& path,
                          const std::vector<Detection>& detections);

}  // namespace stmd
