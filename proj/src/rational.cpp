#include "nilgeo/rational.hpp"

#include <cctype>
#include <cmath>

namespace nilgeo {

namespace {

ZInt parse_integer(std::string_view text) {
  if (text.empty()) throw InputError("empty integer literal");
  size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (i == text.size()) throw InputError("sign without digits in integer literal");
  for (size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j])))
      throw InputError("invalid integer literal: '" + std::string(text) + "'");
  }
  return ZInt(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const size_t slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const ZInt num = parse_integer(text.substr(0, slash));
  const ZInt den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in rational literal: '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

ZInt floor_rational(const Rational& r) {
  const ZInt n = numerator(r), d = denominator(r);  // d > 0 canonical
  ZInt q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

ZInt ceil_rational(const Rational& r) { return -floor_rational(-r); }

int matrix_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const size_t ncols = rows[0].size();
  for (const auto& row : rows)
    if (row.size() != ncols) throw std::logic_error("matrix_rank: ragged rows");
  int rank = 0;
  for (size_t col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    size_t pivot = rows.size();
    for (size_t r = rank; r < rows.size(); ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (size_t c = col; c < ncols; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

NormValue norm_sqrt(Rational radicand) {
  if (radicand < 0) throw std::logic_error("norm_sqrt: negative radicand");
  return NormValue{true, std::move(radicand)};
}

double to_double(const NormValue& x) {
  const double d = to_double(x.v);
  return x.is_sqrt ? std::sqrt(d) : d;
}

bool norm_leq(const NormValue& a, const NormValue& b) {
  if (!a.is_sqrt && !b.is_sqrt) return a.v <= b.v;
  if (!a.is_sqrt) return a.v <= 0 || a.v * a.v <= b.v;  // a ≤ sqrt(b.v)
  if (!b.is_sqrt) return b.v >= 0 && a.v <= b.v * b.v;  // sqrt(a.v) ≤ b
  return a.v <= b.v;
}

NormValue norm_max(const NormValue& a, const NormValue& b) { return norm_leq(a, b) ? b : a; }

bool norm_leq_sum(const NormValue& x, const NormValue& a, const NormValue& b) {
  // All arguments are non-negative; at most one squaring per radical suffices.
  if (!a.is_sqrt && !b.is_sqrt) return norm_leq(x, norm_rational(a.v + b.v));
  if (a.is_sqrt && b.is_sqrt) {
    if (!x.is_sqrt) {
      // x ≤ √a+√b  ⇔  x ≤ 0, or x² ≤ a+b+2√(ab)  ⇔  t ≤ 0 or t² ≤ 4ab, t = x²−a−b.
      if (x.v <= 0) return true;
      const Rational t = x.v * x.v - a.v - b.v;
      return t <= 0 || t * t <= 4 * a.v * b.v;
    }
    // √x ≤ √a+√b  ⇔  t ≤ 0 or t² ≤ 4ab, t = x−a−b.
    const Rational t = x.v - a.v - b.v;
    return t <= 0 || t * t <= 4 * a.v * b.v;
  }
  // Exactly one radical on the right; put it in s, the rational part in r.
  const NormValue& s = a.is_sqrt ? a : b;
  const Rational& r = a.is_sqrt ? b.v : a.v;
  if (!x.is_sqrt) {
    // x ≤ r+√s  ⇔  x−r ≤ 0 or (x−r)² ≤ s.
    const Rational t = x.v - r;
    return t <= 0 || t * t <= s.v;
  }
  // √x ≤ r+√s (r ≥ 0)  ⇔  t ≤ 0 or t² ≤ 4r²s, t = x−r²−s.
  const Rational t = x.v - r * r - s.v;
  return t <= 0 || t * t <= 4 * r * r * s.v;
}

}  // namespace nilgeo
