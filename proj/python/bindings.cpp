#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "stmd/config.hpp"
#include "stmd/dstmd.hpp"
#include "stmd/error.hpp"
#include "stmd/estimation.hpp"
#include "stmd/estmd.hpp"
#include "stmd/eval.hpp"
#include "stmd/kernels.hpp"
#include "stmd/stimulus.hpp"

namespace py = pybind11;
using namespace stmd;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Frame to_frame(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array (height, width)");
  Frame f(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::memcpy(f.pixels().data(), a.data(), f.size() * sizeof(double));
  return f;
}

Array to_array(const Frame& f) {
  Array a({f.height(), f.width()});
  std::memcpy(a.mutable_data(), f.pixels().data(), f.size() * sizeof(double));
  return a;
}

// (directions, height, width)
Array to_array(const DirectionalResponse& r) {
  Array a({static_cast<py::ssize_t>(r.channels.size()), static_cast<py::ssize_t>(r.height()),
           static_cast<py::ssize_t>(r.width())});
  double* dst = a.mutable_data();
  for (const Frame& c : r.channels) {
    std::memcpy(dst, c.pixels().data(), c.size() * sizeof(double));
    dst += c.size();
  }
  return a;
}

DirectionalResponse from_array(const Array& a, const std::vector<double>& directions) {
  if (a.ndim() != 3 || static_cast<std::size_t>(a.shape(0)) != directions.size())
    throw DimensionError("expected an array of shape (directions, height, width)");
  DirectionalResponse r;
  r.directions = directions;
  const int h = static_cast<int>(a.shape(1));
  const int w = static_cast<int>(a.shape(2));
  const double* src = a.data();
  for (std::size_t c = 0; c < directions.size(); ++c) {
    Frame f(w, h);
    std::memcpy(f.pixels().data(), src, f.size() * sizeof(double));
    src += f.size();
    r.channels.push_back(std::move(f));
  }
  return r;
}

py::dict detection_dict(const Detection& d) {
  py::dict out;
  out["frame"] = d.frame_index;
  out["x"] = d.x;
  out["y"] = d.y;
  out["response"] = d.response;
  out["direction"] = d.direction ? py::cast(*d.direction) : py::none();
  return out;
}

StimulusSpec linear_clip(int width, int height, int duration, int target_width, int target_height,
                         double start_x, double start_y, double vx, double vy,
                         double background, double luminance, bool antialias) {
  StimulusSpec spec;
  spec.width = width;
  spec.height = height;
  spec.duration = duration;
  spec.antialias = antialias;
  spec.background = SolidBackground{background};
  TargetSpec t;
  t.width = target_width;
  t.height = target_height;
  t.luminance = luminance;
  t.trajectory.motion = LinearMotion{start_x, start_y, vx, vy};
  spec.target = t;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Small target motion detection models and stimulus tools";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<UndefinedDirectionError>(m, "UndefinedDirectionError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("sigma1", &PipelineConfig::sigma1)
      .def_readwrite("n1", &PipelineConfig::n1)
      .def_readwrite("tau1", &PipelineConfig::tau1)
      .def_readwrite("n2", &PipelineConfig::n2)
      .def_readwrite("tau2", &PipelineConfig::tau2)
      .def_readwrite("sigma2", &PipelineConfig::sigma2)
      .def_readwrite("sigma3", &PipelineConfig::sigma3)
      .def_readwrite("lambda1", &PipelineConfig::lambda1)
      .def_readwrite("lambda2", &PipelineConfig::lambda2)
      .def_readwrite("A", &PipelineConfig::A)
      .def_readwrite("B", &PipelineConfig::B)
      .def_readwrite("sigma4", &PipelineConfig::sigma4)
      .def_readwrite("sigma5", &PipelineConfig::sigma5)
      .def_readwrite("e", &PipelineConfig::e)
      .def_readwrite("rho", &PipelineConfig::rho)
      .def_readwrite("n3", &PipelineConfig::n3)
      .def_readwrite("tau3", &PipelineConfig::tau3)
      .def_readwrite("n4", &PipelineConfig::n4)
      .def_readwrite("tau4", &PipelineConfig::tau4)
      .def_readwrite("n5", &PipelineConfig::n5)
      .def_readwrite("tau5", &PipelineConfig::tau5)
      .def_readwrite("n6", &PipelineConfig::n6)
      .def_readwrite("tau6", &PipelineConfig::tau6)
      .def_readwrite("alpha1", &PipelineConfig::alpha1)
      .def_readwrite("sigma6", &PipelineConfig::sigma6)
      .def_readwrite("sigma7", &PipelineConfig::sigma7)
      .def_readwrite("directions", &PipelineConfig::directions)
      .def_readwrite("step", &PipelineConfig::step)
      .def_readwrite("warmup", &PipelineConfig::warmup)
      .def_readwrite("mass_cutoff", &PipelineConfig::mass_cutoff)
      .def_readwrite("truncation_sigmas", &PipelineConfig::truncation_sigmas)
      .def("validate", &PipelineConfig::validate);

  py::class_<EvalConfig>(m, "EvalConfig")
      .def(py::init<>())
      .def_readwrite("gamma", &EvalConfig::gamma)
      .def_readwrite("relative_gamma", &EvalConfig::relative_gamma)
      .def_readwrite("suppress_radius", &EvalConfig::suppress_radius)
      .def_readwrite("target_radius", &EvalConfig::target_radius)
      .def_readwrite("match_radius", &EvalConfig::match_radius)
      .def_readwrite("trace_window", &EvalConfig::trace_window)
      .def_readwrite("edge_frames", &EvalConfig::edge_frames)
      .def_readwrite("roc_points", &EvalConfig::roc_points);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("pipeline", &RunConfig::pipeline)
      .def_readwrite("eval", &RunConfig::eval);

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("format_config", &format_config, py::arg("config"));

  m.def("gamma_kernel",
        [](int n, double tau) { return gamma_kernel(n, tau).taps; }, py::arg("n"), py::arg("tau"));
  m.def("w3_kernel",
        [](double s6, double s7, int bins) { return w3_kernel(s6, s7, bins).taps; },
        py::arg("sigma6"), py::arg("sigma7"), py::arg("bins") = 8);

  py::class_<DstmdModel>(m, "DstmdModel")
      .def(py::init<PipelineConfig>(), py::arg("config") = PipelineConfig{})
      .def(
          "process_frame",
          [](DstmdModel& model, const Array& frame) {
            const DirectionalResponse r = model.process_frame(to_frame(frame));
            return py::make_tuple(to_array(r), r.warmup);
          },
          py::arg("frame"),
          "Returns (E, warmup) with E shaped (directions, height, width).")
      .def_property_readonly("frames_processed", &DstmdModel::frames_processed)
      .def_property_readonly("directions", [](const DstmdModel& m) { return m.config().directions; })
      .def("reset", &DstmdModel::reset);

  py::class_<EstmdModel>(m, "EstmdModel")
      .def(py::init<PipelineConfig>(), py::arg("config") = PipelineConfig{})
      .def(
          "process_frame",
          [](EstmdModel& model, const Array& frame) {
            const EstmdResponse r = model.process_frame(to_frame(frame));
            return py::make_tuple(to_array(r.response), r.warmup);
          },
          py::arg("frame"))
      .def("reset", &EstmdModel::reset);

  m.def(
      "detect",
      [](const Array& strength, double gamma, int suppress_radius) {
        py::list out;
        for (const Detection& d : detect_peaks(to_frame(strength), gamma, suppress_radius))
          out.append(detection_dict(d));
        return out;
      },
      py::arg("strength"), py::arg("gamma"), py::arg("suppress_radius") = kDefaultSuppressRadius,
      "Suppressed local maxima above gamma, strongest first.");

  m.def(
      "population_vector",
      [](const Array& E, const std::vector<double>& directions, int x, int y, int radius,
         double gamma) {
        const DirectionalResponse r = from_array(E, directions);
        Detection d;
        d.x = x;
        d.y = y;
        return population_vector(r, select_target_pixels(r, d, radius, gamma));
      },
      py::arg("E"), py::arg("directions"), py::arg("x"), py::arg("y"),
      py::arg("radius") = kDefaultTargetRadius, py::arg("gamma") = 0.0,
      "Direction in radians decoded from the pixels near (x, y).");

  m.def(
      "render_default_clip",
      [](int duration) {
        StimulusSpec spec;
        spec.duration = duration;
        py::list frames;
        const auto truth = render_sequence(spec, [&](int, const Frame& f) { frames.append(to_array(f)); });
        py::list track;
        for (const TruthSample& s : truth) track.append(py::make_tuple(s.x, s.y, s.direction));
        return py::make_tuple(frames, track);
      },
      py::arg("duration") = 1000,
      "Frames and (x, y, direction) truth of the curvilinear white-background clip.");

  m.def(
      "render_linear_clip",
      [](int width, int height, int duration, int target_width, int target_height, double start_x,
         double start_y, double vx, double vy, double background, double luminance, bool antialias) {
        const StimulusSpec spec = linear_clip(width, height, duration, target_width, target_height,
                                              start_x, start_y, vx, vy, background, luminance, antialias);
        py::list frames;
        const auto truth = render_sequence(spec, [&](int, const Frame& f) { frames.append(to_array(f)); });
        py::list track;
        for (const TruthSample& s : truth) track.append(py::make_tuple(s.x, s.y, s.direction));
        return py::make_tuple(frames, track);
      },
      py::arg("width"), py::arg("height"), py::arg("duration"), py::arg("target_width") = 5,
      py::arg("target_height") = 5, py::arg("start_x") = 0.0, py::arg("start_y") = 0.0,
      py::arg("vx") = 0.0, py::arg("vy") = 0.0, py::arg("background") = 255.0,
      py::arg("luminance") = 0.0, py::arg("antialias") = false);

  m.def(
      "clutter",
      [](int width, int height, std::uint64_t seed, int octaves) {
        ClutterParams p;
        p.width = width;
        p.height = height;
        p.seed = seed;
        p.octaves = octaves;
        return to_array(generate_clutter(p));
      },
      py::arg("width") = 1000, py::arg("height") = 250, py::arg("seed") = 1,
      py::arg("octaves") = ClutterParams{}.octaves,
      "Procedural background: multi-scale noise with dark blobs and bars, 8-bit range.");

  m.def("angular_difference_deg", &angular_difference_deg, py::arg("a_deg"), py::arg("b_deg"));
}
