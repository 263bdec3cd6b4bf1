#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace hetnet {

/// Shortest round-trip decimal form, locale independent. Non-finite values
/// print as nan/inf/-inf.
std::string fmt(double v);
/// Fixed number of significant digits (general format), locale independent.
std::string fmt(double v, int precision);
std::string fmt(std::complex<double> z, int precision = 12);

/// Locale-independent parse of a full decimal token. Throws
/// std::invalid_argument on trailing garbage or empty input.
double parse_double(std::string_view s);

}  // namespace hetnet
