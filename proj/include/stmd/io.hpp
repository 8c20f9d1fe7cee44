#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stmd/frame.hpp"
#include "stmd/stimulus.hpp"

namespace stmd::io {

/// Writes an 8-bit binary portable graymap; values are rounded and clamped to 0..255.
void write_pgm(const std::filesystem::path& path, const Frame& frame);

/// Reads P2/P5 graymaps and P3/P6 pixmaps (8-bit). Colour input is reduced
/// to luminance with the Rec. 601 weights 0.299, 0.587, 0.114.
Frame read_image(const std::filesystem::path& path);

/// frame_%06d.pgm
std::string frame_filename(int index);

/// Image files (.pgm/.ppm/.pnm) in `dir`, lexicographically ordered.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

/// frame,x,y,direction_deg
void write_truth_csv(const std::filesystem::path& path, const std::vector<TruthSample>& truth);
std::vector<TruthSample> read_truth_csv(const std::filesystem::path& path);

}  // namespace stmd::io
