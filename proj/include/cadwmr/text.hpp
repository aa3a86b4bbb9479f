#pragma once

#include <string>
#include <string_view>

namespace cadwmr {

/// Shortest round-trip decimal representation ('.' decimal point, locale independent).
std::string format_double(double value);

/// Parses the whole of `text` as a double; false on any leftover characters.
bool parse_double(std::string_view text, double& out);

}  // namespace cadwmr
