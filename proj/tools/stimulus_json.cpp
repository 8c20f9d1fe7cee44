#include "stimulus_json.hpp"

#include "stmd/error.hpp"
#include "stmd/io.hpp"

namespace stmd::cli {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

// Rejects keys outside `allowed` so typos fail loudly.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ParameterError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParameterError("unknown key '" + key + "' in " + where);
  }
}

Trajectory trajectory_from_json(const json& j) {
  Trajectory tr;
  const std::string type = j.value("type", "sinusoid");
  if (type == "sinusoid") {
    check_keys(j, {"type", "x0", "vx", "y0", "amplitude", "angular_frequency", "time_offset"},
               "sinusoid motion");
    SinusoidMotion m;
    read(j, "x0", m.x0);
    read(j, "vx", m.vx);
    read(j, "y0", m.y0);
    read(j, "amplitude", m.amplitude);
    read(j, "angular_frequency", m.angular_frequency);
    read(j, "time_offset", m.time_offset);
    tr.motion = m;
  } else if (type == "linear") {
    check_keys(j, {"type", "start_x", "start_y", "vx", "vy"}, "linear motion");
    LinearMotion m;
    read(j, "start_x", m.start_x);
    read(j, "start_y", m.start_y);
    read(j, "vx", m.vx);
    read(j, "vy", m.vy);
    tr.motion = m;
  } else {
    throw ParameterError("unknown motion type '" + type + "'");
  }
  return tr;
}

}  // namespace

StimulusSpec spec_from_json(const json& j, const std::filesystem::path& base_dir,
                            std::optional<std::uint64_t> seed) {
  try {
    check_keys(j, {"width", "height", "fps", "duration", "antialias", "background", "target"},
               "stimulus");
    StimulusSpec spec;
    read(j, "width", spec.width);
    read(j, "height", spec.height);
    read(j, "fps", spec.fps);
    read(j, "duration", spec.duration);
    read(j, "antialias", spec.antialias);

    if (j.contains("background")) {
      const json& b = j.at("background");
      const std::string type = b.value("type", "solid");
      if (type == "solid") {
        check_keys(b, {"type", "luminance"}, "solid background");
        SolidBackground bg;
        read(b, "luminance", bg.luminance);
        spec.background = bg;
      } else if (type == "clutter") {
        check_keys(b, {"type", "pan_velocity", "width", "height", "seed", "noise_sigma", "octaves",
                       "mean", "spread", "blobs", "bars"},
                   "clutter background");
        ClutterParams p;
        p.width = 2 * spec.width;
        p.height = spec.height;
        read(b, "width", p.width);
        read(b, "height", p.height);
        read(b, "seed", p.seed);
        read(b, "noise_sigma", p.noise_sigma);
        read(b, "octaves", p.octaves);
        read(b, "mean", p.mean);
        read(b, "spread", p.spread);
        read(b, "blobs", p.blobs);
        read(b, "bars", p.bars);
        if (seed) p.seed = *seed;
        spec.background = PanningBackground{generate_clutter(p), b.value("pan_velocity", 0.0)};
      } else if (type == "image") {
        check_keys(b, {"type", "path", "pan_velocity"}, "image background");
        std::filesystem::path path = b.at("path").get<std::string>();
        if (path.is_relative()) path = base_dir / path;
        spec.background = PanningBackground{io::read_image(path), b.value("pan_velocity", 0.0)};
      } else {
        throw ParameterError("unknown background type '" + type + "'");
      }
    }

    if (j.contains("target")) {
      const json& t = j.at("target");
      if (t.is_null()) {
        spec.target.reset();
      } else {
        check_keys(t, {"width", "height", "luminance", "motion"}, "target");
        TargetSpec target;
        read(t, "width", target.width);
        read(t, "height", target.height);
        read(t, "luminance", target.luminance);
        if (t.contains("motion")) target.trajectory = trajectory_from_json(t.at("motion"));
        spec.target = target;
      }
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed stimulus description: ") + e.what());
  }
}

json default_spec_json() {
  const StimulusSpec spec;
  const SinusoidMotion m;
  return {{"width", spec.width},
          {"height", spec.height},
          {"fps", spec.fps},
          {"duration", spec.duration},
          {"antialias", spec.antialias},
          {"background", {{"type", "solid"}, {"luminance", 255.0}}},
          {"target",
           {{"width", 5},
            {"height", 5},
            {"luminance", 0.0},
            {"motion",
             {{"type", "sinusoid"},
              {"x0", m.x0},
              {"vx", m.vx},
              {"y0", m.y0},
              {"amplitude", m.amplitude},
              {"angular_frequency", m.angular_frequency},
              {"time_offset", m.time_offset}}}}}};
}

}  // namespace stmd::cli
