// dstmd: command-line front end for stimulus generation, model runs and the
// evaluation experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stimulus_json.hpp"
#include "stmd/error.hpp"
#include "stmd/eval.hpp"
#include "stmd/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stmd;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string config_path;
  std::string model = "dstmd";
  std::optional<double> gamma;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Options& o, bool with_gamma, bool with_seed) {
  cmd->add_option("--config", o.config_path, "model configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--model", o.model, "model variant")
      ->check(CLI::IsMember({"dstmd", "estmd"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  if (with_gamma) cmd->add_option("--gamma", o.gamma, "absolute detection threshold");
  if (with_seed) cmd->add_option("--seed", o.seed, "clutter seed");
}

RunConfig load(const Options& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.gamma) cfg.eval.gamma = *o.gamma;
  return cfg;
}

// Config snapshot as {section: {key: value}}, taken from the canonical text form.
json config_json(const RunConfig& cfg) {
  json out = json::object();
  std::istringstream in(format_config(cfg));
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find(" = ");
    const std::string value = line.substr(eq + 3);
    if (value.find_first_of(".eE") == std::string::npos)
      out[section][line.substr(0, eq)] = std::stoll(value);
    else
      out[section][line.substr(0, eq)] = std::stod(value);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                    const std::string& model, const std::string& input,
                    const std::vector<fs::path>& outputs, const Options& o) {
  json m;
  m["tool"] = "dstmd";
  m["version"] = STMD_VERSION;
  m["command"] = command;
  m["model"] = model;
  m["input"] = input;
  m["outputs"] = json::array();
  for (const auto& p : outputs) m["outputs"].push_back(p.filename().string());
  m["config"] = config_json(cfg);
  if (o.seed) m["seed"] = *o.seed;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

fs::path prepare_out(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out + ": " + ec.message());
  return out;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError(path + ": " + e.what());
  }
}

StimulusSpec load_spec(const std::string& path, const Options& o, const json& fallback) {
  if (path.empty()) return cli::spec_from_json(fallback, fs::current_path(), o.seed);
  return cli::spec_from_json(read_json(path), fs::path(path).parent_path(), o.seed);
}

// Default clip for ROC runs: the curvilinear target over panning clutter.
json default_clutter_json() {
  json j = cli::default_spec_json();
  j["duration"] = 600;
  j["background"] = {{"type", "clutter"}, {"pan_velocity", 250.0}, {"seed", 7}};
  return j;
}

int cmd_gen(const std::string& spec_path, const Options& o) {
  const json j = spec_path.empty() ? cli::default_spec_json() : read_json(spec_path);
  const StimulusSpec spec =
      cli::spec_from_json(j, spec_path.empty() ? fs::current_path() : fs::path(spec_path).parent_path(), o.seed);
  const fs::path out = prepare_out(o.out);
  const fs::path frames = out / "frames";
  fs::create_directories(frames);
  const auto truth = render_sequence(spec, [&](int t, const Frame& f) {
    io::write_pgm(frames / io::frame_filename(t), f);
  });
  io::write_truth_csv(out / "truth.csv", truth);
  write_text(out / "stimulus.json", j.dump(2) + "\n");
  write_manifest(out, "gen", RunConfig{}, "", spec_path, {frames, out / "truth.csv", out / "stimulus.json"}, o);
  std::printf("wrote %d frames to %s\n", spec.duration, frames.string().c_str());
  return 0;
}

int cmd_run(const std::string& frames_dir, const Options& o) {
  const RunConfig cfg = load(o);
  const ModelKind kind = parse_model_kind(o.model);
  const auto files = io::list_frames(frames_dir);
  if (files.empty()) throw IoError("no frames in " + frames_dir);

  double gamma = cfg.eval.gamma;
  if (gamma <= 0.0) {
    // Relative threshold: a first pass finds the clip's peak response.
    ModelRunner runner(kind, cfg.pipeline);
    double peak = 0.0;
    for (const auto& f : files) {
      const ModelStep s = runner.step(io::read_image(f));
      if (s.warmup) continue;
      for (double v : s.strength.pixels()) peak = std::max(peak, v);
    }
    gamma = cfg.eval.relative_gamma * peak;
  }

  ModelRunner runner(kind, cfg.pipeline);
  std::vector<Detection> all;
  std::int64_t frames_used = 0;
  for (const auto& f : files) {
    const ModelStep s = runner.step(io::read_image(f));
    if (s.warmup) continue;
    ++frames_used;
    auto dets = detect_peaks(s.strength, gamma, cfg.eval.suppress_radius, s.frame_index);
    if (s.directional) estimate_directions(*s.directional, dets, cfg.eval.target_radius, gamma);
    all.insert(all.end(), dets.begin(), dets.end());
  }

  const fs::path out = prepare_out(o.out);
  write_detections_csv(out / "detections.csv", all);
  write_manifest(out, "run", cfg, o.model, frames_dir, {out / "detections.csv"}, o);
  std::printf("gamma %.6g: %zu detections over %lld post-warm-up frames\n", gamma, all.size(),
              static_cast<long long>(frames_used));
  return 0;
}

std::vector<double> default_values(TuningParameter p) {
  std::vector<double> v;
  switch (p) {
    case TuningParameter::contrast:
      for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
      break;
    case TuningParameter::velocity:
      for (int s = 100; s <= 700; s += 50) v.push_back(s);
      break;
    case TuningParameter::width:
    case TuningParameter::height:
      for (int s = 1; s <= 15; ++s) v.push_back(s);
      break;
  }
  return v;
}

int cmd_tune(const std::string& parameter, std::vector<double> values, const Options& o) {
  const RunConfig cfg = load(o);
  const TuningParameter p = parse_tuning_parameter(parameter);
  if (values.empty()) values = default_values(p);
  TuningProtocol protocol;
  protocol.edge_frames = cfg.eval.edge_frames;
  protocol.trace_window = cfg.eval.trace_window;
  protocol.measure_radius = cfg.eval.match_radius;
  const TuningCurve curve = tuning_curve(p, values, protocol, cfg.pipeline, parse_model_kind(o.model));
  const fs::path out = prepare_out(o.out);
  const fs::path csv = out / ("tuning_" + parameter + ".csv");
  write_tuning_csv(csv, curve);
  write_manifest(out, "tune " + parameter, cfg, o.model, "", {csv}, o);
  std::printf("%s tuning peaks at %g\n", parameter.c_str(), curve.peak_value());
  return 0;
}

int cmd_roc(const std::string& spec_path, const Options& o) {
  const RunConfig cfg = load(o);
  const StimulusSpec spec = load_spec(spec_path, o, default_clutter_json());
  const DetectionClip clip = collect_detections(spec, parse_model_kind(o.model), cfg);
  const auto roc = roc_sweep(clip.frames, observed_gamma_grid(clip.frames, cfg.eval.roc_points),
                             cfg.eval.match_radius);
  const fs::path out = prepare_out(o.out);
  write_roc_csv(out / "roc.csv", roc);
  write_manifest(out, "roc", cfg, o.model, spec_path, {out / "roc.csv"}, o);
  std::printf("D_R at F_A <= 1: %.4f\n", detection_rate_at(roc, 1.0));
  return 0;
}

int cmd_direction(const std::string& spec_path, const Options& o) {
  if (o.model != "dstmd") throw ParameterError("direction estimation needs the dstmd model");
  const RunConfig cfg = load(o);
  const StimulusSpec spec = load_spec(spec_path, o, cli::default_spec_json());
  const auto samples = direction_experiment(spec, cfg);
  const fs::path out = prepare_out(o.out);
  write_direction_csv(out / "direction.csv", samples);
  write_manifest(out, "direction", cfg, o.model, spec_path, {out / "direction.csv"}, o);
  double worst = 0.0;
  int missing = 0;
  for (const auto& s : samples) {
    if (s.error_deg)
      worst = std::max(worst, *s.error_deg);
    else
      ++missing;
  }
  std::printf("max direction error %.3f deg over %zu frames (%d undecoded)\n", worst,
              samples.size(), missing);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directionally selective small target motion detection"};
  app.set_version_flag("--version", STMD_VERSION);
  app.require_subcommand(1);
  Options o;
  std::string spec_path, frames_dir, parameter;
  std::vector<double> values;

  auto* gen = app.add_subcommand("gen", "render a stimulus description to frames and truth");
  gen->add_option("spec", spec_path, "stimulus JSON (default: curvilinear test clip)");
  add_common(gen, o, false, true);

  auto* run = app.add_subcommand("run", "run a model over a frame directory");
  run->add_option("frames", frames_dir, "directory of PGM/PPM frames")->required();
  add_common(run, o, true, false);

  auto* tune = app.add_subcommand("tune", "tuning curve for one stimulus parameter");
  tune->add_option("parameter", parameter, "contrast, velocity, width or height")
      ->required()
      ->check(CLI::IsMember({"contrast", "velocity", "width", "height"}));
  tune->add_option("--values", values, "sweep values (default: standard grid)")->delimiter(',');
  add_common(tune, o, false, false);

  auto* roc = app.add_subcommand("roc", "detection/false-alarm curve over a clip");
  roc->add_option("spec", spec_path, "stimulus JSON (default: target over panning clutter)");
  add_common(roc, o, false, true);

  auto* direction = app.add_subcommand("direction", "per-frame direction estimation error");
  direction->add_option("spec", spec_path, "stimulus JSON (default: curvilinear test clip)");
  add_common(direction, o, false, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(spec_path, o);
    if (*run) return cmd_run(frames_dir, o);
    if (*tune) return cmd_tune(parameter, values, o);
    if (*roc) return cmd_roc(spec_path, o);
    if (*direction) return cmd_direction(spec_path, o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
