#include "hetnet/format.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace hetnet {

namespace {

std::string non_finite(double v) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string fmt(double v) {
    if (!std::isfinite(v)) return non_finite(v);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt(double v, int precision) {
    if (!std::isfinite(v)) return non_finite(v);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

std::string fmt(std::complex<double> z, int precision) {
    std::string s = fmt(z.real(), precision);
    if (z.imag() != 0.0) {
        s += z.imag() < 0 ? "-" : "+";
        s += fmt(std::abs(z.imag()), precision) + "i";
    }
    return s;
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || first == last)
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

}  // namespace hetnet
