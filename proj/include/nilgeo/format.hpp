#pragma once

#include <string>

#include "nilgeo/rational.hpp"

namespace nilgeo {

/** Shortest decimal string that round-trips to the same double. */
std::string fmt_double_shortest(double v);

/** Decimal string with up to 12 significant digits, trailing zeros trimmed. */
std::string fmt_double_sig12(double v);

/** Lowest-terms "p/q", or plain "p" for integers. */
std::string fmt_rational(const Rational& r);

}  // namespace nilgeo
