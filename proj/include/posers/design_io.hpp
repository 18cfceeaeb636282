#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "posers/core.hpp"

namespace posers {

inline constexpr int kDesignFormatVersion = 1;

/// JSON text: {version, id, L, rules:[{position, allowed}], flank5, flank3,
/// ratios?, seed}. `allowed` is the IUPAC code.
std::string encode_design(const Design& design);

/// Throws ParseError (naming the field) on malformed input, VersionError on
/// an unknown version, ValidationError if the content breaks an invariant.
Design decode_design(std::string_view text);

Design load_design(const std::filesystem::path& path);
void save_design(const std::filesystem::path& path, const Design& design);

}  // namespace posers
