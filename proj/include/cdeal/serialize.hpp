#pragma once

#include "cdeal/core.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace cdeal {

using Json = nlohmann::ordered_json;

/// Round to 12 significant digits, the precision of every emitted number.
double round12(double value);

/// Locale-independent text with 12 significant digits ('.' separator).
std::string format_number(double value);

/// Shortest text that reads back to the same double. Used for input data
/// (probabilities) whose sums are validated tightly on reload.
std::string format_exact(double value);

Json json_array(const Vector& values);

/// Parse a JSON document, rejecting duplicate object keys anywhere in it.
Json parse_json_strict(std::string_view text, std::string_view what);

/// Locale-independent number parsing; throws ParseError mentioning `where`.
double parse_number(std::string_view text, std::string_view where);

std::string read_text_file(const std::string& path);

}  // namespace cdeal
