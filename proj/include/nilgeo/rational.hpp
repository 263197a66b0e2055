#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "nilgeo/errors.hpp"

namespace nilgeo {

using ZInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const ZInt& z) { return z.convert_to<double>(); }

/** Parses "p/q" or a bare integer "p"; denominators must be nonzero. */
Rational parse_rational(std::string_view text);

/** Formats as "p/q" in lowest terms, denominator always present ("3/1", "-5/2"). */
std::string format_rational(const Rational& r);

/** Largest integer n with n ≤ r. */
ZInt floor_rational(const Rational& r);

/** Smallest integer n with n ≥ r. */
ZInt ceil_rational(const Rational& r);

/** Exact rank of the matrix whose rows are the given equal-length vectors. */
int matrix_rank(std::vector<std::vector<Rational>> rows);

/**
 * Exact value of the form v (rational) or sqrt(v), v ≥ 0.
 *
 * Quasi-norm layers contribute either a rational length or the square root of
 * one; keeping the radical symbolic lets boundary cases (where doubles tie)
 * be compared exactly.
 */
struct NormValue {
  bool is_sqrt = false;
  Rational v;
};

inline NormValue norm_rational(Rational r) { return NormValue{false, std::move(r)}; }
NormValue norm_sqrt(Rational radicand);  // radicand must be ≥ 0

double to_double(const NormValue& x);

/** Exact test a ≤ b. */
bool norm_leq(const NormValue& a, const NormValue& b);

/** Exact max. */
NormValue norm_max(const NormValue& a, const NormValue& b);

/** Exact test x ≤ a + b for non-negative values. */
bool norm_leq_sum(const NormValue& x, const NormValue& a, const NormValue& b);

}  // namespace nilgeo
