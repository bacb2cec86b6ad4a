#pragma once

#include <string>
#include <string_view>

namespace capcurv::harness {

/// Shortest round-trip text of x cut to 12 significant digits ("%.12g"
/// style). Non-finite values become "nan" / "inf" / "-inf".
std::string format_number(double x);

/// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(std::string_view s);

/// Lower-case [a-z0-9._-] rendition for file names.
std::string file_token(std::string_view s);

}  // namespace capcurv::harness
