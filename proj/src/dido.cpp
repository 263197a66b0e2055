#include "nilgeo/dido.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilgeo/errors.hpp"
#include "nilgeo/format.hpp"

namespace nilgeo {
namespace {

Rational rabs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/** CCW edge data of the isoperimetrix of P, with exact P-lengths. */
struct Cycle {
  std::vector<RatPt2> edge;
  std::vector<Rational> len;
  Rational perim = 0;
  Rational area = 0;  // enclosed area of the isoperimetrix
};

Cycle make_cycle(const PolygonalNorm& P) {
  const PolygonalNorm iso = isoperimetrix(P);
  const auto& w = iso.vertices;
  const int k = static_cast<int>(w.size());
  Cycle c;
  c.edge.reserve(k);
  c.len.reserve(k);
  for (int t = 0; t < k; ++t) {
    RatPt2 e = w[(t + 1) % k] - w[t];
    c.len.push_back(gauge(P, e));
    c.perim += c.len.back();
    c.edge.push_back(std::move(e));
  }
  c.area = polygon_area(w);
  return c;
}

/** Signed sweep area ½ Σ cross(p_t, p_{t+1}) of a path starting anywhere. */
Rational sweep_area(const std::vector<RatPt2>& pts) {
  Rational s = 0;
  for (size_t t = 0; t + 1 < pts.size(); ++t) s += cross(pts[t], pts[t + 1]);
  return s / 2;
}

/** Drops repeated vertices and merges straight-ahead interior vertices. */
std::vector<RatPt2> canonical_path(const std::vector<RatPt2>& in) {
  std::vector<RatPt2> out;
  for (const auto& p : in) {
    if (!out.empty() && p == out.back()) continue;
    while (out.size() >= 2) {
      const RatPt2 d1 = out.back() - out[out.size() - 2];
      const RatPt2 d2 = p - out.back();
      if (cross(d1, d2) == 0 && dot(d1, d2) > 0) out.pop_back();
      else break;
    }
    out.push_back(p);
  }
  return out;
}

std::string path_key(const std::vector<RatPt2>& pts) {
  std::string k;
  for (const auto& p : pts) {
    k += format_rational(p.x);
    k += ',';
    k += format_rational(p.y);
    k += ';';
  }
  return k;
}

struct Candidate {
  Rational area;
  std::vector<RatPt2> path;
  bool family = false;
};

/** det of the 3×3 matrix with columns (c·x, c·y, l). */
Rational det3(const RatPt2& c1, const Rational& l1, const RatPt2& c2, const Rational& l2,
              const RatPt2& c3, const Rational& l3) {
  return l1 * cross(c2, c3) - l2 * cross(c1, c3) + l3 * cross(c1, c2);
}

/**
 * Path of one sub-chain configuration: partial first edge a·E_i, mm complete
 * edges at scale s, partial last edge b·E_{i+mm+1}. Values may be formal
 * (infeasible) when used to evaluate the area polynomial.
 */
std::vector<RatPt2> chain_path(const Cycle& c, int i, int mm, const Rational& a,
                               const Rational& s, const Rational& b) {
  const int k = static_cast<int>(c.edge.size());
  std::vector<RatPt2> pts;
  pts.reserve(mm + 3);
  pts.push_back({0, 0});
  pts.push_back(a * c.edge[i % k]);
  for (int t = 1; t <= mm; ++t) pts.push_back(pts.back() + s * c.edge[(i + t) % k]);
  pts.push_back(pts.back() + b * c.edge[(i + mm + 1) % k]);
  return pts;
}

struct LinSol {
  bool consistent = false;
  int rank = 0;
  std::array<Rational, 3> part{};
  std::vector<std::array<Rational, 3>> null;
};

/** Exact Gauss-Jordan solve of a 3×3 system with augmented column. */
LinSol solve3(std::array<std::array<Rational, 4>, 3> m) {
  std::array<int, 3> pivot_col{-1, -1, -1};
  int row = 0;
  for (int col = 0; col < 3 && row < 3; ++col) {
    int p = -1;
    for (int r = row; r < 3; ++r) {
      if (m[r][col] != 0) {
        p = r;
        break;
      }
    }
    if (p < 0) continue;
    std::swap(m[p], m[row]);
    for (int r = 0; r < 3; ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col] / m[row][col];
      for (int cc = col; cc < 4; ++cc) m[r][cc] -= f * m[row][cc];
    }
    pivot_col[row] = col;
    ++row;
  }
  LinSol out;
  out.rank = row;
  for (int r = row; r < 3; ++r)
    if (m[r][3] != 0) return out;
  out.consistent = true;
  std::array<bool, 3> is_pivot{false, false, false};
  for (int r = 0; r < row; ++r) is_pivot[pivot_col[r]] = true;
  for (int r = 0; r < row; ++r) out.part[pivot_col[r]] = m[r][3] / m[r][pivot_col[r]];
  for (int col = 0; col < 3; ++col) {
    if (is_pivot[col]) continue;
    std::array<Rational, 3> dir{};
    dir[col] = 1;
    for (int r = 0; r < row; ++r) dir[pivot_col[r]] = -m[r][col] / m[r][pivot_col[r]];
    out.null.push_back(dir);
  }
  return out;
}

/**
 * All candidate optimal paths: connected sub-chains of a scaled isoperimetrix
 * from the origin to v with P-length exactly L. Wrapped configurations (both
 * partial pieces on the same edge) exist only for v parallel to that edge and
 * carry a sliding family of equal-area paths.
 */
void enumerate_chain_configs(const Cycle& c, const RatPt2& v, const Rational& L,
                             std::vector<Candidate>& out) {
  const int k = static_cast<int>(c.edge.size());
  for (int i = 0; i < k; ++i) {
    if (cross(v, c.edge[i]) == 0) {
      const Rational tau =
          c.edge[i].x != 0 ? Rational(v.x / c.edge[i].x) : Rational(v.y / c.edge[i].y);
      const Rational s = (L - tau * c.len[i]) / c.perim;
      const Rational gamma = s + tau;
      if (s > 0 && gamma >= 0 && gamma <= s) {
        const Rational a = gamma / 2;
        auto path = chain_path(c, i, k - 1, a, s, gamma - a);
        out.push_back({s * s * c.area, std::move(path), gamma > 0});
      }
    }
    for (int mm = 1; mm <= k - 2; ++mm) {
      const int j = (i + mm + 1) % k;
      RatPt2 mid{0, 0};
      Rational lenm = 0;
      for (int t = 1; t <= mm; ++t) {
        mid = mid + c.edge[(i + t) % k];
        lenm += c.len[(i + t) % k];
      }
      const RatPt2& ei = c.edge[i];
      const RatPt2& ej = c.edge[j];
      const Rational li = c.len[i];
      const Rational lj = c.len[j];
      const Rational det = det3(ei, li, mid, lenm, ej, lj);
      if (det != 0) {
        const Rational a = det3(v, L, mid, lenm, ej, lj) / det;
        const Rational s = det3(ei, li, v, L, ej, lj) / det;
        const Rational b = det3(ei, li, mid, lenm, v, L) / det;
        if (s >= 0 && a >= 0 && a <= s && b >= 0 && b <= s) {
          auto path = chain_path(c, i, mm, a, s, b);
          if (!(path.back() == v)) throw std::logic_error("dido: endpoint mismatch");
          out.push_back({sweep_area(path), std::move(path), false});
        }
        continue;
      }
      // singular configuration: solutions form a line; maximize the quadratic
      // area polynomial over the feasible segment
      LinSol sol = solve3({{{ei.x, mid.x, ej.x, v.x},
                            {ei.y, mid.y, ej.y, v.y},
                            {li, lenm, lj, L}}});
      if (!sol.consistent) continue;
      if (sol.null.size() != 1) throw std::logic_error("dido: degenerate configuration space");
      const auto& d = sol.null[0];
      const auto& p0 = sol.part;
      // constraints: a ≥ 0, s − a ≥ 0, b ≥ 0, s − b ≥ 0, s ≥ 0
      const std::array<std::pair<Rational, Rational>, 5> cons{{
          {p0[0], d[0]},
          {p0[1] - p0[0], d[1] - d[0]},
          {p0[2], d[2]},
          {p0[1] - p0[2], d[1] - d[2]},
          {p0[1], d[1]},
      }};
      std::optional<Rational> lo, hi;
      bool infeasible = false;
      for (const auto& [alpha, beta] : cons) {
        if (beta == 0) {
          if (alpha < 0) infeasible = true;
        } else if (beta > 0) {
          const Rational bound = -alpha / beta;
          if (!lo || bound > *lo) lo = bound;
        } else {
          const Rational bound = -alpha / beta;
          if (!hi || bound < *hi) hi = bound;
        }
        if (infeasible) break;
      }
      if (infeasible) continue;
      if (!lo || !hi) throw std::logic_error("dido: unbounded configuration line");
      if (*lo > *hi) continue;
      auto at = [&](const Rational& sigma) {
        return std::array<Rational, 3>{p0[0] + sigma * d[0], p0[1] + sigma * d[1],
                                       p0[2] + sigma * d[2]};
      };
      auto area_at = [&](const Rational& sigma) {
        const auto x = at(sigma);
        return sweep_area(chain_path(c, i, mm, x[0], x[1], x[2]));
      };
      const Rational q0 = area_at(0);
      const Rational ap = area_at(1);
      const Rational am = area_at(-1);
      const Rational q1 = (ap - am) / 2;
      const Rational q2 = (ap + am) / 2 - q0;
      std::vector<std::pair<Rational, bool>> sigmas;
      if (q2 == 0 && q1 == 0) {
        sigmas.push_back({(*lo + *hi) / 2, *lo < *hi});
      } else if (q2 < 0) {
        const Rational vert = -q1 / (2 * q2);
        if (vert > *lo && vert < *hi) {
          sigmas.push_back({vert, false});
        } else {
          sigmas.push_back({*lo, false});
          if (*hi != *lo) sigmas.push_back({*hi, false});
        }
      } else {
        sigmas.push_back({*lo, false});
        if (*hi != *lo) sigmas.push_back({*hi, false});
      }
      for (const auto& [sigma, fam] : sigmas) {
        const auto x = at(sigma);
        auto path = chain_path(c, i, mm, x[0], x[1], x[2]);
        if (!(path.back() == v)) throw std::logic_error("dido: endpoint mismatch");
        out.push_back({sweep_area(path), std::move(path), fam});
      }
    }
  }
}

double to_d(const Rational& r) { return to_double(r); }

/** Exact square root of a non-negative rational if it is a perfect square. */
std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  const ZInt num = boost::multiprecision::numerator(r);
  const ZInt den = boost::multiprecision::denominator(r);
  const ZInt sn = boost::multiprecision::sqrt(num);
  const ZInt sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(Rational(sn) / Rational(sd));
}

struct Affine {
  Rational ax, ay, c0;  // value ax·x + ay·y + c0
};

struct Quad {
  Rational xx, xy, yy, x, y, c;

  Quad operator-(const Quad& o) const {
    return {xx - o.xx, xy - o.xy, yy - o.yy, x - o.x, y - o.y, c - o.c};
  }
  bool is_zero() const {
    return xx == 0 && xy == 0 && yy == 0 && x == 0 && y == 0 && c == 0;
  }
};

Quad mul_affine(const Affine& u, const Affine& w) {
  Quad q;
  q.xx = u.ax * w.ax;
  q.xy = u.ax * w.ay + u.ay * w.ax;
  q.yy = u.ay * w.ay;
  q.x = u.ax * w.c0 + u.c0 * w.ax;
  q.y = u.ay * w.c0 + u.c0 * w.ay;
  q.c = u.c0 * w.c0;
  return q;
}

void add_scaled(Quad& q, const Quad& o, const Rational& f) {
  q.xx += f * o.xx;
  q.xy += f * o.xy;
  q.yy += f * o.yy;
  q.x += f * o.x;
  q.y += f * o.y;
  q.c += f * o.c;
}

/** Expands (n1·p + b1)(n2·p + b2) for verification of a line factorization. */
Quad line_product(const RatPt2& n1, const Rational& b1, const RatPt2& n2, const Rational& b2) {
  return mul_affine({n1.x, n1.y, b1}, {n2.x, n2.y, b2});
}

bool proportional(const Quad& a, const Quad& b) {
  // a == f·b for some nonzero rational f
  const std::array<std::pair<Rational, Rational>, 6> pairs{{{a.xx, b.xx},
                                                            {a.xy, b.xy},
                                                            {a.yy, b.yy},
                                                            {a.x, b.x},
                                                            {a.y, b.y},
                                                            {a.c, b.c}}};
  std::optional<Rational> f;
  for (const auto& [u, w] : pairs) {
    if (w == 0) {
      if (u != 0) return false;
      continue;
    }
    const Rational r = u / w;
    if (f && *f != r) return false;
    f = r;
  }
  return f.has_value() && *f != 0;
}

/** Splits a degenerate quadratic into rational lines; empty when it is not one. */
std::vector<std::pair<RatPt2, Rational>> factor_quadratic(const Quad& d) {
  std::vector<std::pair<RatPt2, Rational>> lines;
  if (d.xx == 0 && d.xy == 0 && d.yy == 0) {
    if (d.x != 0 || d.y != 0) lines.push_back({{d.x, d.y}, d.c});
    return lines;
  }
  auto try_split = [&](bool swap_xy) -> bool {
    // treat as quadratic in the first variable
    const Rational A = swap_xy ? d.yy : d.xx;
    const Rational B = d.xy;
    const Rational C = swap_xy ? d.xx : d.yy;
    const Rational D = swap_xy ? d.y : d.x;
    const Rational E = swap_xy ? d.x : d.y;
    if (A == 0) return false;
    // discriminant in the second variable: (B t + D)² − 4A(C t² + E t + c)
    const Rational aa = B * B - 4 * A * C;
    const Rational bb = 2 * B * D - 4 * A * E;
    const Rational cc = D * D - 4 * A * d.c;
    Rational p, q;
    if (aa == 0) {
      if (bb != 0) return false;
      const auto sq = rational_sqrt(cc);
      if (!sq) return false;
      p = 0;
      q = *sq;
    } else {
      const auto sp = rational_sqrt(aa);
      if (!sp) return false;
      p = *sp;
      q = bb / (2 * p);
      if (q * q != cc) return false;
    }
    // 2A u + B t + D = ±(p t + q), with (u, t) = (x, y) or (y, x)
    for (int sign = -1; sign <= 1; sign += 2) {
      const Rational nt = B - sign * p;
      const Rational nb = D - sign * q;
      RatPt2 n = swap_xy ? RatPt2{nt, 2 * A} : RatPt2{2 * A, nt};
      lines.push_back({n, nb});
    }
    // verify: product of the two lines must be proportional to d
    const Quad prod = line_product(lines[lines.size() - 2].first, lines[lines.size() - 2].second,
                                   lines[lines.size() - 1].first, lines[lines.size() - 1].second);
    Quad dd = d;
    if (!proportional(prod, dd)) {
      lines.clear();
      return false;
    }
    return true;
  };
  if (d.xx != 0) {
    try_split(false);
    return lines;
  }
  if (d.yy != 0) {
    try_split(true);
    return lines;
  }
  // d = xy·x·y + x·x + y·y + c
  if (d.x * d.y == d.xy * d.c) {
    lines.push_back({{d.xy, Rational(0)}, d.y});
    lines.push_back({{Rational(0), d.xy}, d.x});
  }
  return lines;
}

/** Affine Cramer solution for one unknown of the 3×3 chain system. */
Affine cramer_affine(int slot, const RatPt2& c1, const Rational& l1, const RatPt2& c2,
                     const Rational& l2, const RatPt2& c3, const Rational& l3, const Rational& L,
                     const Rational& det) {
  auto with = [&](const RatPt2& v, const Rational& lv) {
    switch (slot) {
      case 0: return det3(v, lv, c2, l2, c3, l3);
      case 1: return det3(c1, l1, v, lv, c3, l3);
      default: return det3(c1, l1, c2, l2, v, lv);
    }
  };
  Affine r;
  r.ax = with({1, 0}, 0) / det;
  r.ay = with({0, 1}, 0) / det;
  r.c0 = with({0, 0}, L) / det;
  return r;
}

std::string line_key(const RatPt2& n, const Rational& b) {
  // canonical scale: leading nonzero coefficient becomes 1
  Rational nx = n.x, ny = n.y, nb = b;
  const Rational lead = nx != 0 ? nx : ny;
  nx /= lead;
  ny /= lead;
  nb /= lead;
  return format_rational(nx) + "," + format_rational(ny) + "," + format_rational(nb);
}

const std::vector<ProfilePiece>& h3_pieces_static() {
  static const std::vector<ProfilePiece> pieces = h3_profile_pieces();
  return pieces;
}

Rational eval_piece(const ProfilePiece& q, const Rational& x, const Rational& y) {
  return q.cxx * x * x + q.cxy * x * y + q.cyy * y * y + q.cx * x + q.cy * y + q.c0;
}

constexpr double kDomainCollar = 1e-9;

double gauge_double(const PolygonalNorm& P, double x, double y) {
  double g = 0.0;
  for (const auto& h : edge_halfplanes(P)) {
    const double num = to_d(h.n.x) * x + to_d(h.n.y) * y;
    g = std::max(g, num / to_d(h.b));
  }
  return g;
}

std::string fmt_fixed4(double v) {
  std::array<char, 48> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 4);
  return std::string(buf.data(), res.ptr);
}

bool is_l1_ball(const PolygonalNorm& P) {
  if (P.vertices.size() != 4) return false;
  std::set<std::pair<long long, long long>> want{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& v : P.vertices) {
    bool hit = false;
    for (const auto& [a, b] : want) {
      if (v.x == a && v.y == b) hit = true;
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace

struct DidoSolver::Impl {
  PolygonalNorm P;
  Cycle c;
  std::vector<double> ex, ey, el;  // double image of the cycle
};

DidoSolver::DidoSolver(const PolygonalNorm& P) : impl_(std::make_unique<Impl>()) {
  impl_->P = P;
  impl_->c = make_cycle(P);
  const int k = static_cast<int>(impl_->c.edge.size());
  impl_->ex.resize(k);
  impl_->ey.resize(k);
  impl_->el.resize(k);
  for (int t = 0; t < k; ++t) {
    impl_->ex[t] = to_d(impl_->c.edge[t].x);
    impl_->ey[t] = to_d(impl_->c.edge[t].y);
    impl_->el[t] = to_d(impl_->c.len[t]);
  }
}

DidoSolver::~DidoSolver() = default;
DidoSolver::DidoSolver(DidoSolver&&) noexcept = default;
DidoSolver& DidoSolver::operator=(DidoSolver&&) noexcept = default;

DidoResult DidoSolver::solve(const RatPt2& v, const Rational& L) const {
  if (L < 0) throw InputError("dido: negative length budget");
  if (gauge(impl_->P, v) > L) throw InputError("dido: endpoint farther than the length budget");
  if (L == 0) return {Rational(0), 1, false};
  std::vector<Candidate> cands;
  enumerate_chain_configs(impl_->c, v, L, cands);
  Rational best = 0;
  for (const auto& cand : cands)
    if (cand.area > best) best = cand.area;
  if (best == 0) return {Rational(0), 1, false};  // only boundary chords have no bulge
  std::set<std::string> shapes;
  bool family = false;
  for (auto& cand : cands) {
    if (cand.area != best) continue;
    shapes.insert(path_key(canonical_path(cand.path)));
    family = family || cand.family;
  }
  return {best, static_cast<int>(shapes.size()), family};
}

double DidoSolver::solve_value(double vx, double vy, double L) const {
  const Cycle& c = impl_->c;
  const std::vector<double>&ex = impl_->ex, &ey = impl_->ey, &el = impl_->el;
  const int k = static_cast<int>(c.edge.size());
  auto cross_d = [](double ax, double ay, double bx, double by) { return ax * by - ay * bx; };
  double best = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int mm = 1; mm <= k - 2; ++mm) {
      const int j = (i + mm + 1) % k;
      double mx = 0, my = 0, ml = 0;
      for (int t = 1; t <= mm; ++t) {
        mx += ex[(i + t) % k];
        my += ey[(i + t) % k];
        ml += el[(i + t) % k];
      }
      const double d1 = cross_d(mx, my, ex[j], ey[j]);
      const double d2 = cross_d(ex[i], ey[i], ex[j], ey[j]);
      const double d3 = cross_d(ex[i], ey[i], mx, my);
      const double det = el[i] * d1 - ml * d2 + el[j] * d3;
      const double scale = std::abs(el[i] * d1) + std::abs(ml * d2) + std::abs(el[j] * d3);
      if (std::abs(det) <= 1e-12 * std::max(scale, 1e-30)) continue;
      auto det3d = [&](double cx, double cy, double cl, int slot) {
        const double cols[3][3] = {{slot == 0 ? cx : ex[i], slot == 1 ? cx : mx, slot == 2 ? cx : ex[j]},
                                   {slot == 0 ? cy : ey[i], slot == 1 ? cy : my, slot == 2 ? cy : ey[j]},
                                   {slot == 0 ? cl : el[i], slot == 1 ? cl : ml, slot == 2 ? cl : el[j]}};
        return cols[2][0] * cross_d(cols[0][1], cols[1][1], cols[0][2], cols[1][2]) -
               cols[2][1] * cross_d(cols[0][0], cols[1][0], cols[0][2], cols[1][2]) +
               cols[2][2] * cross_d(cols[0][0], cols[1][0], cols[0][1], cols[1][1]);
      };
      const double a = det3d(vx, vy, L, 0) / det;
      const double s = det3d(vx, vy, L, 1) / det;
      const double b = det3d(vx, vy, L, 2) / det;
      const double eps = 1e-9 * (1.0 + std::abs(s));
      if (s < -eps || a < -eps || a > s + eps || b < -eps || b > s + eps) continue;
      // sweep area of the path 0 → aE_i → (+sE_t …) → v
      double px = a * ex[i], py = a * ey[i];
      double area = 0.0;  // twice the area, accumulated
      double qx = px, qy = py;
      for (int t = 1; t <= mm; ++t) {
        const double nx2 = qx + s * ex[(i + t) % k];
        const double ny2 = qy + s * ey[(i + t) % k];
        area += cross_d(qx, qy, nx2, ny2);
        qx = nx2;
        qy = ny2;
      }
      area += cross_d(qx, qy, qx + b * ex[j], qy + b * ey[j]);
      best = std::max(best, 0.5 * area);
    }
  }
  return best;
}

DidoResult dido_max_area(const PolygonalNorm& P, const RatPt2& v, const Rational& L) {
  return DidoSolver(P).solve(v, L);
}

double dido_max_area_value(const PolygonalNorm& P, double vx, double vy, double L) {
  return DidoSolver(P).solve_value(vx, vy, L);
}

DidoDpOracle::DidoDpOracle(const PolygonalNorm& P, int quanta, int step_range) {
  if (quanta < 1 || step_range < 1) throw InputError("dp oracle: parameters must be positive");
  const int W = 2 * kGrid + 1;
  struct Step {
    int dx, dy, cost;
  };
  std::vector<Step> steps;
  for (int dx = -step_range; dx <= step_range; ++dx) {
    for (int dy = -step_range; dy <= step_range; ++dy) {
      if (dx == 0 && dy == 0) continue;
      if (std::gcd(dx, dy) != 1) continue;
      const Rational g = gauge(P, {Rational(dx), Rational(dy)});
      const Rational q = g * quanta / kGrid;
      const ZInt cz = ceil_rational(q);  // round up: never overshoot the budget
      if (cz > quanta) continue;
      steps.push_back({dx, dy, static_cast<int>(cz)});
    }
  }
  const float ninf = -std::numeric_limits<float>::infinity();
  std::vector<float> f(static_cast<size_t>(quanta + 1) * W * W, ninf);
  f[static_cast<size_t>(kGrid) * W + kGrid] = 0.0f;
  const double h2 = 1.0 / (static_cast<double>(kGrid) * kGrid);
  for (int q = 1; q <= quanta; ++q) {
    float* cur = f.data() + static_cast<size_t>(q) * W * W;
    const float* prev = cur - static_cast<size_t>(W) * W;
    std::copy(prev, prev + static_cast<size_t>(W) * W, cur);
    for (const auto& st : steps) {
      if (st.cost > q) continue;
      const float* src = f.data() + static_cast<size_t>(q - st.cost) * W * W;
      const int y_lo = std::max(0, st.dy);
      const int y_hi = std::min(W, W + st.dy);
      const int x_lo = std::max(0, st.dx);
      const int x_hi = std::min(W, W + st.dx);
      for (int y = y_lo; y < y_hi; ++y) {
        const int sy = y - st.dy;
        const float* srow = src + static_cast<size_t>(sy) * W;
        float* drow = cur + static_cast<size_t>(y) * W;
        // increment ½·cross(p_prev, step)·h² is linear along the row
        const double base =
            0.5 * h2 * (static_cast<double>(x_lo - st.dx - kGrid) * st.dy -
                        static_cast<double>(sy - kGrid) * st.dx);
        const double slope = 0.5 * h2 * st.dy;
        double inc = base;
        for (int x = x_lo; x < x_hi; ++x, inc += slope) {
          const float cand = srow[x - st.dx] + static_cast<float>(inc);
          if (cand > drow[x]) drow[x] = cand;
        }
      }
    }
  }
  best_.assign(f.end() - static_cast<size_t>(W) * W, f.end());
}

double DidoDpOracle::at_grid(int gx, int gy) const {
  if (std::abs(gx) > kGrid || std::abs(gy) > kGrid)
    throw InputError("dp oracle: grid point out of range");
  const int W = 2 * kGrid + 1;
  return best_[static_cast<size_t>(gy + kGrid) * W + (gx + kGrid)];
}

std::vector<ProfilePiece> h3_profile_pieces() {
  const std::vector<RatLine> cone{{{0, -1}, 0}, {{-1, 1}, 0}, {{1, 1}, 1}};
  ProfilePiece three_sides;  // y ≤ 3x − 1: three sides of a rectangle
  three_sides.region = cone;
  three_sides.region.push_back({{-3, 1}, -1});
  three_sides.cxx = Rational(-1, 2);
  three_sides.cx = Rational(1, 2);
  ProfilePiece wrapped;  // y ≥ 3x − 1: wrapped rectangle with a sliding seam
  wrapped.region = cone;
  wrapped.region.push_back({{3, -1}, 1});
  wrapped.cxx = Rational(1, 16);
  wrapped.cyy = Rational(1, 16);
  wrapped.cxy = Rational(-3, 8);
  wrapped.cx = Rational(1, 8);
  wrapped.cy = Rational(1, 8);
  wrapped.c0 = Rational(1, 16);
  return {three_sides, wrapped};
}

Rational z_profile_h3_exact(const Rational& x, const Rational& y) {
  Rational ax = rabs(x), ay = rabs(y);
  if (ay > ax) std::swap(ax, ay);
  if (ax + ay > 1) throw InputError("z profile: point outside the unit ball");
  const ProfilePiece* hit = nullptr;
  for (const auto& piece : h3_pieces_static()) {
    bool inside = true;
    for (const auto& hp : piece.region) {
      if (hp.n.x * ax + hp.n.y * ay > hp.b) {
        inside = false;
        break;
      }
    }
    if (inside) hit = &piece;  // pieces agree on the seam; the later one wins
  }
  if (hit == nullptr) throw std::logic_error("z profile: pieces do not cover the cone");
  return eval_piece(*hit, ax, ay);
}

double z_profile_h3(double x, double y) {
  double ax = std::abs(x), ay = std::abs(y);
  if (ay > ax) std::swap(ax, ay);
  const double sum = ax + ay;
  if (sum > 1.0 + kDomainCollar) throw InputError("z profile: point outside the unit ball");
  if (sum > 1.0) {
    ax /= sum;
    ay /= sum;
  }
  if (ay < 3.0 * ax - 1.0) return 0.5 * ax * (1.0 - ax);
  const double t = 1.0 + ax + ay;
  return t * t / 16.0 - 0.5 * ax * ay;
}

Rational z_profile_h5_exact(Rational x1, Rational y1, Rational x2, Rational y2) {
  x1 = rabs(x1);
  y1 = rabs(y1);
  x2 = rabs(x2);
  y2 = rabs(y2);
  if (y1 > x1) std::swap(x1, y1);
  if (y2 > x2) std::swap(x2, y2);
  if (x2 - y2 < x1 - y1) {
    std::swap(x1, x2);
    std::swap(y1, y2);
  }
  const Rational sum = x1 + y1 + x2 + y2;
  if (sum > 1) throw InputError("z profile: point outside the unit ball");
  const Rational m = (1 - sum) / 2;
  const Rational d1 = x1 * y1 / 2 + x2 * (1 - x1 - y1 - x2) / 2;
  const Rational d2 = x2 * y2 / 2 + x1 * (1 - x2 - y2 - x1) / 2;
  const Rational u1 = 1 + x1 + y1 - x2 - y2;
  const Rational u2 = 1 + x2 + y2 - x1 - y1;
  const Rational c1 = u1 * u1 / 16 + (x2 * y2 - x1 * y1) / 2;
  const Rational c2 = u2 * u2 / 16 + (x1 * y1 - x2 * y2) / 2;
  if (m <= x1 - y1) return std::max(d1, d2);
  if (m >= x2 - y2) return std::max(c1, c2);
  return std::max(d1, c1);
}

double z_profile_h5(double x1, double y1, double x2, double y2) {
  x1 = std::abs(x1);
  y1 = std::abs(y1);
  x2 = std::abs(x2);
  y2 = std::abs(y2);
  if (y1 > x1) std::swap(x1, y1);
  if (y2 > x2) std::swap(x2, y2);
  if (x2 - y2 < x1 - y1) {
    std::swap(x1, x2);
    std::swap(y1, y2);
  }
  const double sum = x1 + y1 + x2 + y2;
  if (sum > 1.0 + kDomainCollar) throw InputError("z profile: point outside the unit ball");
  if (sum > 1.0) {
    x1 /= sum;
    y1 /= sum;
    x2 /= sum;
    y2 /= sum;
  }
  const double m = 0.5 * (1.0 - (x1 + y1 + x2 + y2));
  const double d1 = 0.5 * x1 * y1 + 0.5 * x2 * (1.0 - x1 - y1 - x2);
  const double d2 = 0.5 * x2 * y2 + 0.5 * x1 * (1.0 - x2 - y2 - x1);
  const double u1 = 1.0 + x1 + y1 - x2 - y2;
  const double u2 = 1.0 + x2 + y2 - x1 - y1;
  const double c1 = u1 * u1 / 16.0 + 0.5 * (x2 * y2 - x1 * y1);
  const double c2 = u2 * u2 / 16.0 + 0.5 * (x1 * y1 - x2 * y2);
  if (m <= x1 - y1) return std::max(d1, d2);
  if (m >= x2 - y2) return std::max(c1, c2);
  return std::max(d1, c1);
}

Rational z_profile_h5_split_sup(Rational x1, Rational y1, Rational x2, Rational y2) {
  x1 = rabs(x1);
  y1 = rabs(y1);
  x2 = rabs(x2);
  y2 = rabs(y2);
  if (y1 > x1) std::swap(x1, y1);
  if (y2 > x2) std::swap(x2, y2);
  if (x2 - y2 < x1 - y1) {
    std::swap(x1, x2);
    std::swap(y1, y2);
  }
  if (x1 + y1 + x2 + y2 > 1) throw InputError("z profile: point outside the unit ball");
  auto z_scaled = [](const Rational& t, const Rational& x, const Rational& y) -> Rational {
    if (t == 0) return 0;  // reached only with x = y = 0
    return t * t * z_profile_h3_exact(x / t, y / t);
  };
  // split value f(t) = t²z(x1/t, y1/t) + (1−t)²z(x2/(1−t), y2/(1−t)) is convex
  // in t, so the supremum over the feasible interval sits at an endpoint
  const Rational a = x1 + y1;
  const Rational b = 1 - (x2 + y2);
  const Rational va = z_scaled(a, x1, y1) + z_scaled(1 - a, x2, y2);
  const Rational vb = z_scaled(b, x1, y1) + z_scaled(1 - b, x2, y2);
  return std::max(va, vb);
}

namespace {

struct ConfigPoly {
  std::array<Affine, 5> feasible;  // a, s−a, b, s−b, s; each must be ≥ 0
  Quad area;                       // sweep area of the configuration path in v
};

/** Affine solutions and area polynomials of every non-singular configuration. */
std::vector<ConfigPoly> config_polynomials(const Cycle& c, const Rational& L) {
  const int k = static_cast<int>(c.edge.size());
  std::vector<ConfigPoly> out;
  for (int i = 0; i < k; ++i) {
    for (int mm = 1; mm <= k - 2; ++mm) {
      const int j = (i + mm + 1) % k;
      RatPt2 mid{0, 0};
      Rational lenm = 0;
      for (int t = 1; t <= mm; ++t) {
        mid = mid + c.edge[(i + t) % k];
        lenm += c.len[(i + t) % k];
      }
      const Rational det = det3(c.edge[i], c.len[i], mid, lenm, c.edge[j], c.len[j]);
      if (det == 0) continue;  // measure-zero configurations carry no cell
      const Affine a = cramer_affine(0, c.edge[i], c.len[i], mid, lenm, c.edge[j], c.len[j], L, det);
      const Affine s = cramer_affine(1, c.edge[i], c.len[i], mid, lenm, c.edge[j], c.len[j], L, det);
      const Affine b = cramer_affine(2, c.edge[i], c.len[i], mid, lenm, c.edge[j], c.len[j], L, det);
      ConfigPoly cp;
      cp.feasible = {{a,
                      {s.ax - a.ax, s.ay - a.ay, s.c0 - a.c0},
                      b,
                      {s.ax - b.ax, s.ay - b.ay, s.c0 - b.c0},
                      s}};
      // sweep area of the configuration path as a quadratic in v = (x, y)
      std::vector<std::array<Affine, 2>> verts;
      verts.push_back({Affine{a.ax * c.edge[i].x, a.ay * c.edge[i].x, a.c0 * c.edge[i].x},
                       Affine{a.ax * c.edge[i].y, a.ay * c.edge[i].y, a.c0 * c.edge[i].y}});
      for (int t = 1; t <= mm; ++t) {
        const auto& prev = verts.back();
        const RatPt2& e = c.edge[(i + t) % k];
        verts.push_back({Affine{prev[0].ax + s.ax * e.x, prev[0].ay + s.ay * e.x, prev[0].c0 + s.c0 * e.x},
                         Affine{prev[1].ax + s.ax * e.y, prev[1].ay + s.ay * e.y, prev[1].c0 + s.c0 * e.y}});
      }
      // final vertex is v itself
      verts.push_back({Affine{1, 0, 0}, Affine{0, 1, 0}});
      Quad area{};
      for (size_t t = 0; t + 1 < verts.size(); ++t) {
        add_scaled(area, mul_affine(verts[t][0], verts[t + 1][1]), Rational(1, 2));
        add_scaled(area, mul_affine(verts[t][1], verts[t + 1][0]), Rational(-1, 2));
      }
      cp.area = area;
      out.push_back(std::move(cp));
    }
  }
  return out;
}

Rational eval_quad(const Quad& q, const RatPt2& p) {
  return q.xx * p.x * p.x + q.xy * p.x * p.y + q.yy * p.y * p.y + q.x * p.x + q.y * p.y + q.c;
}

/** Exact global maximum of the sweep-area profile over the unit ball of P. */
Rational max_profile_over_ball(const PolygonalNorm& P) {
  const Cycle c = make_cycle(P);
  Rational best = 0;
  for (const auto& cp : config_polynomials(c, 1)) {
    std::vector<RatPt2> region = P.vertices;
    for (const auto& f : cp.feasible) {
      if (region.empty()) break;
      region = clip_halfplane(region, {{-f.ax, -f.ay}, f.c0});  // f(v) ≥ 0
    }
    if (region.size() < 3) continue;
    std::vector<RatPt2> cands = region;
    const Quad& q = cp.area;
    const int n = static_cast<int>(region.size());
    for (int t = 0; t < n; ++t) {
      // 1-d restriction to the edge: interior critical point of a quadratic
      const RatPt2& u = region[t];
      const RatPt2 d = region[(t + 1) % n] - u;
      const Rational f2 = q.xx * d.x * d.x + q.xy * d.x * d.y + q.yy * d.y * d.y;
      if (f2 >= 0) continue;
      const Rational f1 = 2 * q.xx * u.x * d.x + q.xy * (u.x * d.y + u.y * d.x) +
                          2 * q.yy * u.y * d.y + q.x * d.x + q.y * d.y;
      const Rational tc = -f1 / (2 * f2);
      if (tc > 0 && tc < 1) cands.push_back(u + tc * d);
    }
    const Rational hdet = 4 * q.xx * q.yy - q.xy * q.xy;
    if (hdet > 0 && q.xx < 0) {
      // stationary point of a concave quadratic, kept when feasible
      const RatPt2 crit{(q.xy * q.y - 2 * q.yy * q.x) / hdet, (q.xy * q.x - 2 * q.xx * q.y) / hdet};
      bool inside = gauge(P, crit) <= 1;
      for (const auto& f : cp.feasible)
        inside = inside && f.ax * crit.x + f.ay * crit.y + f.c0 >= 0;
      if (inside) cands.push_back(crit);
    }
    for (const auto& p : cands) best = std::max(best, eval_quad(q, p));
  }
  return best;
}

}  // namespace

std::vector<RatLine> profile_breaklines(const PolygonalNorm& P) {
  const Cycle c = make_cycle(P);
  const auto configs = config_polynomials(c, 1);
  std::vector<std::pair<RatPt2, Rational>> raw;  // lines as n·p + b = 0
  for (const auto& cp : configs)
    for (const auto& f : cp.feasible)
      if (f.ax != 0 || f.ay != 0) raw.push_back({{f.ax, f.ay}, f.c0});
  for (size_t u = 0; u < configs.size(); ++u) {
    for (size_t w = u + 1; w < configs.size(); ++w) {
      const Quad diff = configs[u].area - configs[w].area;
      if (diff.is_zero()) continue;
      for (auto& ln : factor_quadratic(diff)) raw.push_back(std::move(ln));
    }
  }
  std::vector<RatLine> out;
  std::set<std::string> seen;
  for (const auto& [n, b] : raw) {
    if (n.x == 0 && n.y == 0) continue;
    const std::string key = line_key(n, -b);
    if (seen.insert(key).second) out.push_back({n, -b});  // n·p + b = 0 ⟺ n·p = −b
  }
  return out;
}

PolygonalNorm limit_norm(const GeneratingSet& omega) {
  if (omega.group.m != 2) throw InputError("limit_norm: requires a 2-d abelianized layer");
  std::vector<RatPt2> pts;
  pts.reserve(omega.elems.size());
  for (const auto& e : omega.elems) {
    const auto p = pi1(e);
    pts.push_back({Rational(p[0]), Rational(p[1])});
  }
  auto hull = convex_hull(std::move(pts));
  if (hull.size() < 3) throw InputError("limit_norm: generator images are degenerate");
  return make_polygonal_norm(std::move(hull));
}

bool h5_limit_hull_is_cross_polytope(const GeneratingSet& omega) {
  if (omega.group.m != 4) return false;
  std::array<bool, 8> seen{};
  for (const auto& e : omega.elems) {
    const auto p = pi1(e);
    long long l1 = 0;
    for (const long long v : p) l1 += std::abs(v);
    if (l1 > 1) return false;
    if (l1 == 0) continue;
    for (int i = 0; i < 4; ++i) {
      if (p[i] == 1) seen[2 * i] = true;
      if (p[i] == -1) seen[2 * i + 1] = true;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

LimitShape make_limit_shape(const GeneratingSet& omega) {
  LimitShape shape;
  shape.group = omega.group;
  const int m = omega.group.m;
  const int c = omega.group.c;
  if (m == 4 && c == 1) {
    if (!h5_limit_hull_is_cross_polytope(omega))
      throw InputError("limit shape: only the standard cross-polytope hull is supported in 4-d");
    const auto& Q = omega.group.Q[0];
    auto bracket = [&](int i, int j) { return Q[i][j] - Q[j][i]; };
    const bool pairs_ok = std::abs(bracket(0, 1)) == 1 && std::abs(bracket(2, 3)) == 1 &&
                          bracket(0, 2) == 0 && bracket(0, 3) == 0 && bracket(1, 2) == 0 &&
                          bracket(1, 3) == 0;
    if (!pairs_ok) throw InputError("limit shape: unsupported bracket structure in 4-d");
    shape.h5_standard = true;
    shape.z_max = 1.0 / 8.0;  // attained when one factor carries the whole budget
    return shape;
  }
  if (m != 2) throw InputError("limit shape: unsupported abelianized dimension");
  if (c > 1) throw InputError("limit shape: at most one central coordinate is supported");
  shape.polygon = limit_norm(omega);
  if (c == 0) {
    shape.bracket_scale = 0;
    return shape;
  }
  const auto& Q = omega.group.Q[0];
  Rational beta = Rational(Q[0][1] - Q[1][0]);
  if (beta < 0) beta = -beta;
  if (beta == 0) throw InputError("limit shape: bracket does not reach the central layer");
  shape.bracket_scale = beta;
  shape.l1_closed_form = is_l1_ball(shape.polygon);
  shape.z_max = to_d(beta * max_profile_over_ball(shape.polygon));
  return shape;
}

double LimitShape::profile(double x, double y) const {
  if (h5_standard) throw InputError("profile: shape has a 4-d horizontal layer");
  const double g = gauge_double(polygon, x, y);
  if (g > 1.0 + kDomainCollar) throw InputError("profile: point outside the unit ball");
  if (g > 1.0) {
    x /= g;
    y /= g;
  }
  if (bracket_scale == 0) return 0.0;
  const double beta = to_d(bracket_scale);
  if (l1_closed_form) return beta * z_profile_h3(x, y);
  return beta * dido_max_area_value(polygon, x, y, 1.0);
}

double LimitShape::profile4(double x1, double y1, double x2, double y2) const {
  if (!h5_standard) throw InputError("profile4: shape does not have a 4-d horizontal layer");
  return z_profile_h5(x1, y1, x2, y2);
}

TriMesh shape_boundary_mesh(const LimitShape& shape, int resolution) {
  if (shape.h5_standard) throw InputError("boundary mesh: requires a 3-d limit shape");
  if (resolution < 1) throw InputError("boundary mesh: resolution must be at least 1");
  const auto& W = shape.polygon.vertices;
  const int K = static_cast<int>(W.size());
  const int r = resolution;
  TriMesh mesh;
  std::map<std::string, int> index;  // point key → top vertex id; bottom is id + 1
  auto vertex_pair = [&](const RatPt2& p) {
    std::string key = format_rational(p.x) + "," + format_rational(p.y);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const double x = to_d(p.x);
    const double y = to_d(p.y);
    const double z = shape.profile(x, y);
    const int id = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back({x, y, z});
    mesh.vertices.push_back({x, y, -z});
    index.emplace(std::move(key), id);
    return id;
  };
  for (int k = 0; k < K; ++k) {
    const RatPt2& A = W[k];
    const RatPt2& B = W[(k + 1) % K];
    // barycentric nodes (i·A + j·B)/r of the fan triangle (origin, A, B)
    std::vector<std::vector<int>> node(r + 1);
    for (int i = 0; i <= r; ++i) {
      node[i].resize(r - i + 1);
      for (int j = 0; j <= r - i; ++j) {
        const RatPt2 p{(Rational(i) * A.x + Rational(j) * B.x) / r,
                       (Rational(i) * A.y + Rational(j) * B.y) / r};
        node[i][j] = vertex_pair(p);
      }
    }
    for (int i = 0; i < r; ++i) {
      for (int j = 0; i + j < r; ++j) {
        const int n00 = node[i][j], n10 = node[i + 1][j], n01 = node[i][j + 1];
        mesh.triangles.push_back({n00, n10, n01});
        mesh.triangles.push_back({n00 + 1, n01 + 1, n10 + 1});
        if (i + j < r - 1) {
          const int n11 = node[i + 1][j + 1];
          mesh.triangles.push_back({n10, n11, n01});
          mesh.triangles.push_back({n10 + 1, n01 + 1, n11 + 1});
        }
      }
    }
    // side wall over this polygon edge where the profile is positive
    for (int t = 0; t < r; ++t) {
      const int u = node[r - t][t];
      const int w2 = node[r - t - 1][t + 1];
      const double zu = mesh.vertices[u][2];
      const double zw = mesh.vertices[w2][2];
      if (std::abs(zu) < 1e-13 && std::abs(zw) < 1e-13) continue;
      mesh.triangles.push_back({u, w2, w2 + 1});
      mesh.triangles.push_back({u, w2 + 1, u + 1});
    }
  }
  return mesh;
}

std::string shape_to_json(const LimitShape& shape, int resolution) {
  if (shape.h5_standard)
    throw InputError("shape json: 4-d shapes have no polygon description");
  if (resolution < 1) throw InputError("shape json: resolution must be at least 1");
  nlohmann::ordered_json j;
  j["group"] = shape.group.name.empty() ? "custom" : shape.group.name;
  j["central_rank"] = shape.group.c;
  nlohmann::ordered_json poly = nlohmann::ordered_json::array();
  for (const auto& v : shape.polygon.vertices)
    poly.push_back({format_rational(v.x), format_rational(v.y)});
  j["polygon"] = std::move(poly);
  j["z_max"] = shape.z_max;
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  std::set<std::string> seen;
  const auto& W = shape.polygon.vertices;
  const int K = static_cast<int>(W.size());
  for (int k = 0; k < K; ++k) {
    const RatPt2& A = W[k];
    const RatPt2& B = W[(k + 1) % K];
    for (int i = 0; i <= resolution; ++i) {
      for (int jj = 0; i + jj <= resolution; ++jj) {
        const RatPt2 p{(Rational(i) * A.x + Rational(jj) * B.x) / resolution,
                       (Rational(i) * A.y + Rational(jj) * B.y) / resolution};
        const std::string key = format_rational(p.x) + "," + format_rational(p.y);
        if (!seen.insert(key).second) continue;
        const double x = to_d(p.x);
        const double y = to_d(p.y);
        samples.push_back({x, y, shape.profile(x, y)});
      }
    }
  }
  j["profile_samples"] = std::move(samples);
  return j.dump(2) + "\n";
}

std::string mesh_to_svg(const TriMesh& mesh) {
  // fixed orthographic projection, uniformly fitted into the view box
  std::vector<std::pair<double, double>> proj;
  proj.reserve(mesh.vertices.size());
  double extent = 1e-9;
  for (const auto& v : mesh.vertices) {
    const double u = 0.6 * (v[0] - v[1]);
    const double w = -(0.35 * (v[0] + v[1]) + 2.0 * v[2]);
    proj.push_back({u, w});
    extent = std::max({extent, std::abs(u), std::abs(w)});
  }
  const double scale = 1.1 / extent;
  std::set<std::pair<int, int>> edges;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  std::string d;
  for (const auto& [a, b] : edges) {
    d += "M" + fmt_fixed4(proj[a].first * scale) + " " + fmt_fixed4(proj[a].second * scale);
    d += "L" + fmt_fixed4(proj[b].first * scale) + " " + fmt_fixed4(proj[b].second * scale);
  }
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.2 -1.2 2.4 2.4\">\n";
  svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.004\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace nilgeo
