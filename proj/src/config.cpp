#include "stmd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <variant>

#include "stmd/error.hpp"

namespace stmd {

namespace {

struct Field {
  const char* section;
  const char* key;
  std::variant<int PipelineConfig::*, double PipelineConfig::*, int EvalConfig::*,
               double EvalConfig::*>
      member;
};

// Direction count is handled separately (it rebuilds the direction list).
const std::vector<Field>& fields() {
  using P = PipelineConfig;
  using E = EvalConfig;
  static const std::vector<Field> table = {
      {"retina", "sigma1", &P::sigma1},
      {"lamina", "n1", &P::n1},
      {"lamina", "tau1", &P::tau1},
      {"lamina", "n2", &P::n2},
      {"lamina", "tau2", &P::tau2},
      {"lamina", "sigma2", &P::sigma2},
      {"lamina", "sigma3", &P::sigma3},
      {"lamina", "lambda1", &P::lambda1},
      {"lamina", "lambda2", &P::lambda2},
      {"medulla", "n3", &P::n3},
      {"medulla", "tau3", &P::tau3},
      {"medulla", "n4", &P::n4},
      {"medulla", "tau4", &P::tau4},
      {"medulla", "n5", &P::n5},
      {"medulla", "tau5", &P::tau5},
      {"medulla", "n6", &P::n6},
      {"medulla", "tau6", &P::tau6},
      {"lobula", "A", &P::A},
      {"lobula", "B", &P::B},
      {"lobula", "sigma4", &P::sigma4},
      {"lobula", "sigma5", &P::sigma5},
      {"lobula", "e", &P::e},
      {"lobula", "rho", &P::rho},
      {"lobula", "alpha1", &P::alpha1},
      {"lobula", "sigma6", &P::sigma6},
      {"lobula", "sigma7", &P::sigma7},
      {"engine", "step", &P::step},
      {"engine", "warmup", &P::warmup},
      {"engine", "mass_cutoff", &P::mass_cutoff},
      {"engine", "truncation_sigmas", &P::truncation_sigmas},
      {"eval", "gamma", &E::gamma},
      {"eval", "relative_gamma", &E::relative_gamma},
      {"eval", "suppress_radius", &E::suppress_radius},
      {"eval", "target_radius", &E::target_radius},
      {"eval", "match_radius", &E::match_radius},
      {"eval", "trace_window", &E::trace_window},
      {"eval", "edge_frames", &E::edge_frames},
      {"eval", "roc_points", &E::roc_points},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& text, int line) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("line " + std::to_string(line) + ": cannot parse '" + text + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value))
      throw ConfigError("line " + std::to_string(line) + ": non-finite value");
  }
  return value;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<double> PipelineConfig::uniform_directions(int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(2.0 * std::numbers::pi * i / count);
  return out;
}

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
  };
  require(sigma1 > 0, "sigma1 must be positive");
  require(n1 >= 1 && n2 >= 1 && n3 >= 1 && n4 >= 1 && n5 >= 1 && n6 >= 1,
          "gamma orders must be >= 1");
  require(tau1 > 0 && tau2 > 0 && tau3 > 0 && tau4 > 0 && tau5 > 0 && tau6 > 0,
          "gamma time constants must be positive");
  require(sigma3 > sigma2 && sigma2 > 0, "lamina inhibition needs sigma3 > sigma2 > 0");
  require(lambda1 > 0 && lambda2 > 0, "lambda1 and lambda2 must be positive");
  require(sigma5 > sigma4 && sigma4 > 0, "second-order inhibition needs sigma5 > sigma4 > 0");
  require(sigma7 >= sigma6 && sigma6 > 0, "direction inhibition needs sigma7 >= sigma6 > 0");
  require(alpha1 >= 0, "alpha1 must be non-negative");
  require(directions.size() >= 2, "at least two preferred directions are required");
  require(step > 0, "step must be positive");
  require(warmup >= 0, "warmup must be non-negative");
  require(mass_cutoff > 0 && mass_cutoff < 1, "mass_cutoff must lie in (0, 1)");
  require(truncation_sigmas > 0, "truncation_sigmas must be positive");
}

void EvalConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
  };
  require(relative_gamma >= 0 && relative_gamma <= 1, "relative_gamma must lie in [0, 1]");
  require(suppress_radius >= 0 && target_radius >= 0, "radii must be non-negative");
  require(match_radius >= 0, "match_radius must be non-negative");
  require(trace_window >= 0, "trace_window must be non-negative");
  require(edge_frames >= 0, "edge_frames must be non-negative");
  require(roc_points >= 1, "roc_points must be positive");
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"retina", "lamina", "medulla", "lobula", "engine", "eval"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    auto check_section = [&](const char* expected) {
      if (!section.empty() && section != expected)
        throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                          "' belongs to section [" + expected + "]");
    };

    if (key == "directions") {
      check_section("lobula");
      const int count = parse_number<int>(value, line_no);
      if (count < 2) throw ConfigError("directions must be >= 2");
      config.pipeline.directions = PipelineConfig::uniform_directions(count);
      continue;
    }

    bool found = false;
    for (const Field& f : fields()) {
      if (key != f.key) continue;
      check_section(f.section);
      std::visit(
          [&](auto member) {
            using M = decltype(member);
            if constexpr (std::is_same_v<M, int PipelineConfig::*>)
              config.pipeline.*member = parse_number<int>(value, line_no);
            else if constexpr (std::is_same_v<M, double PipelineConfig::*>)
              config.pipeline.*member = parse_number<double>(value, line_no);
            else if constexpr (std::is_same_v<M, int EvalConfig::*>)
              config.eval.*member = parse_number<int>(value, line_no);
            else if constexpr (std::is_same_v<M, double EvalConfig::*>)
              config.eval.*member = parse_number<double>(value, line_no);
          },
          f.member);
      found = true;
      break;
    }
    if (!found) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  try {
    config.pipeline.validate();
    config.eval.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_config(const RunConfig& config) {
  std::ostringstream os;
  std::string section;
  for (const Field& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) os << '\n';
      section = f.section;
      os << '[' << section << "]\n";
    }
    os << f.key << " = ";
    std::visit(
        [&](auto member) {
          using M = decltype(member);
          if constexpr (std::is_same_v<M, int PipelineConfig::*>)
            os << config.pipeline.*member;
          else if constexpr (std::is_same_v<M, double PipelineConfig::*>)
            os << format_double(config.pipeline.*member);
          else if constexpr (std::is_same_v<M, int EvalConfig::*>)
            os << config.eval.*member;
          else if constexpr (std::is_same_v<M, double EvalConfig::*>)
            os << format_double(config.eval.*member);
        },
        f.member);
    os << '\n';
    if (f.key == std::string("sigma7")) os << "directions = " << config.pipeline.directions.size() << '\n';
  }
  return os.str();
}

}  // namespace stmd
