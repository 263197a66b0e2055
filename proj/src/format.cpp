#include "nilgeo/format.hpp"

#include <charconv>
#include <system_error>

namespace nilgeo {

namespace {

std::string to_chars_string(double v, int precision) {
  char buf[64];
  const auto res = precision < 0
                       ? std::to_chars(buf, buf + sizeof(buf), v)
                       : std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                                       precision);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

}  // namespace

std::string fmt_double_shortest(double v) { return to_chars_string(v, -1); }

std::string fmt_double_sig12(double v) { return to_chars_string(v, 12); }

std::string fmt_rational(const Rational& r) {
  const ZInt den = denominator(r);
  if (den == 1) return numerator(r).str();
  return numerator(r).str() + "/" + den.str();
}

}  // namespace nilgeo
