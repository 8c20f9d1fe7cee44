#pragma once

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "stmd/stimulus.hpp"

namespace stmd::cli {

/// Builds a StimulusSpec from its JSON description. Missing fields keep the
/// library defaults. Image backgrounds resolve relative paths against
/// `base_dir`; `seed` overrides the clutter seed.
StimulusSpec spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir,
                            std::optional<std::uint64_t> seed = std::nullopt);

/// The canonical JSON of the default curvilinear white-background clip.
nlohmann::json default_spec_json();

}  // namespace stmd::cli
