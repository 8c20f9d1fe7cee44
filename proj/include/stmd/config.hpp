#pragma once

#include <string>
#include <vector>

namespace stmd {

/// Every model parameter with its default value.
struct PipelineConfig {
  // retina
  double sigma1 = 1.0;
  // lamina band-pass and lateral inhibition
  int n1 = 2;
  double tau1 = 3.0;
  int n2 = 6;
  double tau2 = 9.0;
  double sigma2 = 1.5;
  double sigma3 = 3.0;
  double lambda1 = 3.0;
  double lambda2 = 9.0;
  // second-order lateral inhibition
  double A = 1.0;
  double B = 3.0;
  double sigma4 = 1.5;
  double sigma5 = 3.0;
  double e = 1.0;
  double rho = 0.0;
  // medulla delay lines
  int n3 = 5;
  double tau3 = 25.0;  // ESTMD
  int n4 = 3;
  double tau4 = 15.0;
  int n5 = 5;
  double tau5 = 25.0;
  int n6 = 8;
  double tau6 = 40.0;
  // lobula
  double alpha1 = 3.0;
  double sigma6 = 1.5;
  double sigma7 = 3.0;
  std::vector<double> directions = uniform_directions(8);
  // engine
  double step = 1.0;
  int warmup = 200;
  double mass_cutoff = 1e-3;
  double truncation_sigmas = 3.0;

  static std::vector<double> uniform_directions(int count);

  /// Throws ParameterError when a field is outside its domain.
  void validate() const;
};

/// Evaluation and detection knobs.
struct EvalConfig {
  double gamma = 0.0;            // absolute detection threshold; <= 0 selects `relative_gamma`
  double relative_gamma = 0.5;   // fraction of the clip's peak response
  int suppress_radius = 5;       // non-maximum suppression, px
  int target_radius = 5;         // population-vector pixel set, px
  double match_radius = 5.0;     // detection/truth matching, px
  int trace_window = 40;         // frames of target trace that count as truth; 0 = current position only
  int edge_frames = 50;          // excluded at each end of the tuning window
  int roc_points = 50;

  void validate() const;
};

struct RunConfig {
  PipelineConfig pipeline;
  EvalConfig eval;
};

/// Parses `key = value` lines grouped under [retina], [lamina], [medulla],
/// [lobula], [engine] and [eval] sections. '#' starts a comment. Unknown
/// keys, keys under the wrong section and malformed values raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Inverse of parse_config.
std::string format_config(const RunConfig& config);

}  // namespace stmd
