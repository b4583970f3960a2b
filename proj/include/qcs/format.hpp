#pragma once

#include <string>
#include <string_view>

namespace qcs {

/// Shortest round-trip decimal text; infinities as "inf" / "-inf", NaN as "nan".
std::string format_double(double v);

/// Parses format_double output (and ordinary decimal/scientific text).
/// Throws std::invalid_argument on anything else.
double parse_double(std::string_view text);

long long parse_integer(std::string_view text);

}  // namespace qcs
