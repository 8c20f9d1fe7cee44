#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "stmd/error.hpp"
#include "stmd/eval.hpp"

using namespace stmd;
namespace fs = std::filesystem;

namespace {

Detection det(int x, int y, double r) { return {0, x, y, r, std::nullopt}; }

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("nearest detection within the radius is the true one") {
  const std::vector<Detection> d{det(10, 10, 1.0), det(13, 10, 5.0), det(40, 40, 9.0)};
  const MatchResult m = match_detections(d, Point2{14.0, 10.0});
  CHECK(m.true_count == 1);
  CHECK(m.false_count == 2);
  REQUIRE(m.matched);
  CHECK(*m.matched == 1);

  CHECK(match_detections(d, Point2{18.0, 10.0}).true_count == 1);  // 5 px: inclusive
  CHECK(match_detections(d, Point2{18.1, 10.0}).true_count == 0);
  const MatchResult none = match_detections(d, std::nullopt);
  CHECK(none.true_count == 0);
  CHECK(none.false_count == 3);
  CHECK(match_detections({}, Point2{0, 0}).false_count == 0);
}

TEST_CASE("trace matching uses the closest trace point") {
  const std::vector<Detection> d{det(10, 10, 1.0)};
  const std::vector<Point2> trace{{30, 10}, {20, 10}, {14, 13}};
  CHECK(match_detections(d, trace).true_count == 1);
  CHECK(match_detections(d, std::vector<Point2>{{30, 10}}).true_count == 0);
}

TEST_CASE("recent trace spans the window") {
  std::vector<TruthSample> truth;
  for (int t = 0; t < 10; ++t) truth.push_back({t, double(t), 0.0, 0.0});
  const auto tr = recent_trace(truth, 6, 3);
  REQUIRE(tr.size() == 4);
  CHECK(tr.front().x == 3.0);
  CHECK(tr.back().x == 6.0);
  CHECK(recent_trace(truth, 1, 5).size() == 2);
  CHECK(recent_trace(truth, 4, 0).size() == 1);
  CHECK(recent_trace(truth, 10, 3).empty());
  CHECK(recent_trace({}, 0, 3).empty());
  CHECK_THROWS_AS(recent_trace(truth, 3, -1), ParameterError);
}

TEST_CASE("ROC sweep agrees with a brute-force count") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> pos(0.0, 60.0);
  std::uniform_real_distribution<double> resp(0.0, 1.0);
  std::vector<FrameDetections> frames(200);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    frames[i].frame_index = static_cast<std::int64_t>(i);
    const int n = static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k)
      frames[i].candidates.push_back(det(int(pos(rng)), int(pos(rng)), resp(rng)));
    if (i % 5 != 0) frames[i].trace = {{pos(rng), pos(rng)}, {pos(rng), pos(rng)}};
  }
  const auto grid = log_gamma_grid(0.01, 0.99, 25);
  const auto roc = roc_sweep(frames, grid, 6.0);
  REQUIRE(roc.size() == grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    int hits = 0, kept = 0, targets = 0;
    for (const auto& f : frames) {
      bool hit = false;
      for (const auto& c : f.candidates) {
        if (!(c.response > grid[g])) continue;
        ++kept;
        for (const auto& p : f.trace) hit = hit || std::hypot(c.x - p.x, c.y - p.y) <= 6.0;
      }
      hits += hit;
      targets += !f.trace.empty();
    }
    CHECK(roc[g].dr == doctest::Approx(double(hits) / targets));
    CHECK(roc[g].fa == doctest::Approx(double(kept - hits) / frames.size()));
    if (g > 0) {
      CHECK(roc[g].dr <= roc[g - 1].dr);
      CHECK(roc[g].fa <= roc[g - 1].fa);
    }
  }
  CHECK_THROWS_AS(roc_sweep(frames, {}), ParameterError);
}

TEST_CASE("gamma grids") {
  const auto g = log_gamma_grid(1e-3, 10.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g[2] == doctest::Approx(0.1));
  CHECK(g.back() == doctest::Approx(10.0));
  CHECK_THROWS_AS(log_gamma_grid(0.0, 1.0, 5), ParameterError);
  CHECK_THROWS_AS(log_gamma_grid(2.0, 1.0, 5), ParameterError);

  std::vector<FrameDetections> frames(1);
  frames[0].candidates = {det(0, 0, 1e-20), det(0, 0, 4.0), det(0, 0, 0.5)};
  const auto o = observed_gamma_grid(frames, 7);
  CHECK(o.front() == doctest::Approx(4e-6));  // six decades below the peak
  CHECK(o.back() == doctest::Approx(4.0));
  CHECK(observed_gamma_grid({}, 7) == std::vector<double>{1.0});
}

TEST_CASE("detection rate at a false-alarm budget") {
  const std::vector<RocPoint> roc{{3.0, 0.2, 0.0}, {2.0, 0.6, 0.5}, {1.0, 0.9, 2.0}};
  CHECK(detection_rate_at(roc, 0.0) == 0.2);
  CHECK(detection_rate_at(roc, 1.0) == 0.6);
  CHECK(detection_rate_at(roc, 5.0) == 0.9);
}

TEST_CASE("angular differences wrap around the circle") {
  CHECK(angular_difference_deg(144.25, 143.12) == doctest::Approx(1.13));
  CHECK(angular_difference_deg(0.0, 359.0) == doctest::Approx(1.0));
  CHECK(angular_difference_deg(10.0, 190.0) == doctest::Approx(180.0));
  CHECK(angular_difference_deg(-90.0, 270.0) == doctest::Approx(0.0));
  const auto e = direction_error_series({1.0, std::nullopt, 350.0}, {3.0, 5.0, 10.0});
  REQUIRE(e.size() == 3);
  CHECK(*e[0] == doctest::Approx(2.0));
  CHECK_FALSE(e[1].has_value());
  CHECK(*e[2] == doctest::Approx(20.0));
}

TEST_CASE("tuning stimuli sweep one parameter on a fitted canvas") {
  TuningProtocol protocol;
  const StimulusSpec s = make_tuning_stimulus(protocol, TuningParameter::velocity, 500.0);
  CHECK(s.duration == protocol.duration);
  CHECK(s.width == 200 + 5 + 48);
  CHECK(s.height == 53);
  CHECK_NOTHROW(s.validate());
  const auto start = s.target->trajectory.position(0, s.fps);
  const auto end = s.target->trajectory.position(s.duration - 1, s.fps);
  CHECK(start.x > end.x);
  CHECK(start.y == doctest::Approx(26.0));
  CHECK(start.x - end.x == doctest::Approx(500.0 * (s.duration - 1) / 1000.0));

  const StimulusSpec c = make_tuning_stimulus(protocol, TuningParameter::contrast, 0.4);
  CHECK(std::get<SolidBackground>(c.background).luminance == doctest::Approx(102.0));
  CHECK(make_tuning_stimulus(protocol, TuningParameter::height, 11.0).target->height == 11);
  CHECK(make_tuning_stimulus(protocol, TuningParameter::width, 3.0).target->width == 3);
  CHECK_THROWS_AS(make_tuning_stimulus(protocol, TuningParameter::width, 0.0), ParameterError);
  CHECK(parse_tuning_parameter("height") == TuningParameter::height);
  CHECK_THROWS(parse_tuning_parameter("colour"));
}

TEST_CASE("tuning measurement on a short clip") {
  TuningProtocol protocol;
  protocol.duration = 90;
  protocol.edge_frames = 10;
  PipelineConfig cfg;
  cfg.warmup = 40;
  const double moving =
      measure_response(make_tuning_stimulus(protocol, TuningParameter::contrast, 1.0),
                       ModelKind::dstmd, cfg, protocol);
  const double blank =
      measure_response(make_tuning_stimulus(protocol, TuningParameter::contrast, 0.0),
                       ModelKind::dstmd, cfg, protocol);
  CHECK(moving > 0.0);
  CHECK(blank == 0.0);
  protocol.duration = 50;
  CHECK_THROWS_AS(measure_response(make_tuning_stimulus(protocol, TuningParameter::contrast, 1.0),
                                   ModelKind::dstmd, cfg, protocol),
                  ParameterError);
}

TEST_CASE("tuning curves normalise to their peak") {
  const TuningCurve c = normalize_curve("width", {1, 2, 3}, {2.0, 8.0, 4.0});
  CHECK(c.responses == std::vector<double>{0.25, 1.0, 0.5});
  CHECK(c.argmax() == 1);
  CHECK(c.peak_value() == 2.0);
  const TuningCurve z = normalize_curve("width", {1, 2}, {0.0, 0.0});
  CHECK(z.responses == std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(normalize_curve("x", {}, {}).argmax(), ParameterError);
}

TEST_CASE("model names parse") {
  CHECK(parse_model_kind("dstmd") == ModelKind::dstmd);
  CHECK(parse_model_kind("estmd") == ModelKind::estmd);
  CHECK(std::string(to_string(ModelKind::estmd)) == "estmd");
  CHECK_THROWS(parse_model_kind("emd"));
}

TEST_CASE("CSV artefacts carry their headers") {
  const fs::path dir = fs::temp_directory_path() / "stmd_eval_csv";
  fs::create_directories(dir);
  write_roc_csv(dir / "roc.csv", {{1.0, 0.5, 0.1}});
  write_tuning_csv(dir / "tuning.csv", normalize_curve("velocity", {100}, {1.0}));
  write_direction_csv(dir / "dir.csv", {{3, 180.0, 181.0, 1.0}, {4, std::nullopt, 182.0, std::nullopt}});
  write_detections_csv(dir / "det.csv", {det(1, 2, 0.5)});
  CHECK(first_line(dir / "roc.csv") == "gamma,dr,fa");
  CHECK(first_line(dir / "tuning.csv") == "value,response");
  CHECK(first_line(dir / "dir.csv") == "frame,est_deg,true_deg,err_deg");
  CHECK(first_line(dir / "det.csv") == "frame,x,y,response,direction_deg");
  CHECK_THROWS_AS(write_roc_csv(dir / "missing" / "roc.csv", {}), IoError);
  fs::remove_all(dir);
}
