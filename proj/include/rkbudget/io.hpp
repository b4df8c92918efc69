#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace rkbudget {

using Json = nlohmann::ordered_json;

/// Locale-independent scientific notation with 17 significant digits.
/// Non-finite values print as "nan", "inf" or "-inf".
std::string format_real(double v);

/// Empty string for an absent value.
std::string format_real(const std::optional<double>& v);

/// Like Json::dump, but floats use format_real and non-finite floats
/// become null.
void write_json(std::ostream& out, const Json& j, int indent = 2);

}  // namespace rkbudget
