#pragma once

#include "dhopf/exact.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace dhopf {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Parses JSON keeping floating-point literals verbatim (as strings) so they
/// can be converted to exact rationals. Integers stay integers.
nlohmann::json parse_json_exact(std::string_view text);

/// Number, verbatim-number string, or "p/q" string -> exact rational.
Rational rational_from_json(const nlohmann::json& value);

}  // namespace dhopf
