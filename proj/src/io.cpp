#include "stmd/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "stmd/error.hpp"

namespace stmd::io {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  while (in) {
    const int c = in.peek();
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  in >> token;
  return token;
}

int header_int(std::istream& in, const std::filesystem::path& path) {
  const std::string token = header_token(in);
  try {
    return std::stoi(token);
  } catch (const std::exception&) {
    throw IoError("malformed image header in " + path.string());
  }
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  std::vector<unsigned char> bytes(frame.size());
  auto px = frame.pixels();
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<unsigned char>(std::clamp(std::round(px[i]), 0.0, 255.0));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Frame read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = header_token(in);
  const bool binary = magic == "P5" || magic == "P6";
  const bool colour = magic == "P3" || magic == "P6";
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6")
    throw IoError(path.string() + " is not a PGM/PPM image");
  const int width = header_int(in, path);
  const int height = header_int(in, path);
  const int maxval = header_int(in, path);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    throw IoError("unsupported image geometry or bit depth in " + path.string());
  const int channels = colour ? 3 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  std::vector<double> values(count);
  if (binary) {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
      throw IoError("truncated pixel data in " + path.string());
    std::copy(bytes.begin(), bytes.end(), values.begin());
  } else {
    for (double& v : values) {
      int x = 0;
      if (!(in >> x)) throw IoError("truncated pixel data in " + path.string());
      v = x;
    }
  }
  const double scale = 255.0 / maxval;
  Frame frame(width, height);
  auto px = frame.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (colour)
      px[i] = scale * (0.299 * values[3 * i] + 0.587 * values[3 * i + 1] + 0.114 * values[3 * i + 2]);
    else
      px[i] = scale * values[i];
  }
  return frame;
}

std::string frame_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06d.pgm", index);
  return buf;
}

std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

void write_truth_csv(const std::filesystem::path& path, const std::vector<TruthSample>& truth) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "frame,x,y,direction_deg\n";
  for (const TruthSample& s : truth)
    out << s.frame << ',' << format_fixed(s.x, 6) << ',' << format_fixed(s.y, 6) << ','
        << format_fixed(s.direction * 180.0 / std::numbers::pi, 6) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<TruthSample> read_truth_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("frame,x,y,direction_deg", 0) != 0)
    throw IoError("unexpected truth CSV header in " + path.string());
  std::vector<TruthSample> truth;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    TruthSample s;
    char c1 = 0, c2 = 0, c3 = 0;
    double deg = 0.0;
    if (!(row >> s.frame >> c1 >> s.x >> c2 >> s.y >> c3 >> deg) || c1 != ',' || c2 != ',' || c3 != ',')
      throw IoError("malformed truth row '" + line + "' in " + path.string());
    s.direction = deg * std::numbers::pi / 180.0;
    truth.push_back(s);
  }
  return truth;
}

}  // namespace stmd::io
