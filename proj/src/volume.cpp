#include "nilgeo/volume.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nilgeo/dido.hpp"
#include "nilgeo/errors.hpp"
#include "nilgeo/format.hpp"

namespace nilgeo {
namespace {

struct ProfileCache {
  DidoSolver solver;
  std::map<std::string, Rational> memo;

  explicit ProfileCache(const PolygonalNorm& P) : solver(P) {}

  const Rational& at(const RatPt2& p) {
    std::string key = format_rational(p.x) + "," + format_rational(p.y);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(std::move(key), solver.solve(p, 1).area).first;
    return it->second;
  }
};

RatPt2 midpoint(const RatPt2& a, const RatPt2& b) { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }

/** Midpoint-rule integral over one triangle, exact for quadratic integrands. */
Rational tri_integral(ProfileCache& z, const RatPt2& p0, const RatPt2& p1, const RatPt2& p2) {
  Rational area = cross(p1 - p0, p2 - p0) / 2;
  if (area < 0) area = -area;
  return area * (z.at(midpoint(p0, p1)) + z.at(midpoint(p0, p2)) + z.at(midpoint(p1, p2))) / 3;
}

Rational certified_tri_integral(ProfileCache& z, const RatPt2& p0, const RatPt2& p1,
                                const RatPt2& p2) {
  const Rational coarse = tri_integral(z, p0, p1, p2);
  const RatPt2 m01 = midpoint(p0, p1), m02 = midpoint(p0, p2), m12 = midpoint(p1, p2);
  const Rational fine = tri_integral(z, p0, m01, m02) + tri_integral(z, m01, p1, m12) +
                        tri_integral(z, m02, m12, p2) + tri_integral(z, m01, m12, m02);
  if (coarse != fine)
    throw ConvergenceError("shape volume: refinement changed a cell integral; partition missed a seam");
  const RatPt2 cen{(p0.x + p1.x + p2.x) / 3, (p0.y + p1.y + p2.y) / 3};
  const Rational interp =
      (4 * (z.at(m01) + z.at(m02) + z.at(m12)) - (z.at(p0) + z.at(p1) + z.at(p2))) / 9;
  if (interp != z.at(cen))
    throw ConvergenceError("shape volume: cell profile is not a single quadratic");
  return coarse;
}

}  // namespace

Rational shape_volume_h3(const PolygonalNorm& P) {
  std::vector<std::vector<RatPt2>> cells{P.vertices};
  for (const auto& ln : profile_breaklines(P)) {
    std::vector<std::vector<RatPt2>> next;
    next.reserve(cells.size() + 8);
    for (auto& cell : cells) {
      auto lo = clip_halfplane(cell, ln);
      auto hi = clip_halfplane(cell, {{-ln.n.x, -ln.n.y}, -ln.b});
      if (lo.size() >= 3) next.push_back(std::move(lo));
      if (hi.size() >= 3) next.push_back(std::move(hi));
    }
    cells = std::move(next);
  }
  ProfileCache z(P);
  Rational total = 0;
  for (const auto& cell : cells)
    for (size_t t = 1; t + 1 < cell.size(); ++t)
      total += certified_tri_integral(z, cell[0], cell[t], cell[t + 1]);
  return 2 * total;
}

namespace {

struct Quad1 {
  double a = 0, b = 0, c = 0;  // a t² + b t + c

  double operator()(double t) const { return (a * t + b) * t + c; }
};

/** Exact integral of max(f, g) over [lo, hi] by splitting at the crossings. */
double integrate_max(const Quad1& f, const Quad1& g, double lo, double hi) {
  if (hi <= lo) return 0.0;
  std::array<double, 4> cuts{lo, hi, lo, lo};
  int ncuts = 2;
  const double da = f.a - g.a, db = f.b - g.b, dc = f.c - g.c;
  if (std::abs(da) > 1e-300) {
    const double disc = db * db - 4 * da * dc;
    if (disc > 0) {
      const double sq = std::sqrt(disc);
      for (const double r : {(-db - sq) / (2 * da), (-db + sq) / (2 * da)})
        if (r > lo && r < hi) cuts[ncuts++] = r;
    }
  } else if (std::abs(db) > 1e-300) {
    const double r = -dc / db;
    if (r > lo && r < hi) cuts[ncuts++] = r;
  }
  std::sort(cuts.begin(), cuts.begin() + ncuts);
  double total = 0.0;
  for (int i = 0; i + 1 < ncuts; ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    const double m = 0.5 * (a + b);
    const Quad1& top = f(m) >= g(m) ? f : g;
    total += (b - a) / 6.0 * (top(a) + 4.0 * top(m) + top(b));
  }
  return total;
}

/**
 * Closed-form integral of the 4-d profile over the innermost coordinate with
 * (x1, y1, x2) fixed, over the fundamental domain slice.
 */
double inner_integral(double x1, double y1, double x2) {
  const double d1 = x1 - y1;
  const double rem = 1.0 - x1 - y1 - x2;
  const double y_hi = std::min(x2 - d1, rem);
  if (y_hi <= 0.0) return 0.0;
  const Quad1 qd1{0.0, 0.0, 0.5 * x1 * y1 + 0.5 * x2 * (1.0 - x1 - y1 - x2)};
  const Quad1 qd2{0.0, 0.5 * (x2 - x1), 0.5 * x1 * (1.0 - x2 - x1)};
  const double u = 1.0 + x1 + y1 - x2;
  const Quad1 qc1{1.0 / 16, -u / 8 + 0.5 * x2, u * u / 16 - 0.5 * x1 * y1};
  const double w = 1.0 + x2 - x1 - y1;
  const Quad1 qc2{1.0 / 16, w / 8 - 0.5 * x2, w * w / 16 + 0.5 * x1 * y1};
  const double t_alt = 1.0 - 3.0 * x1 + y1 - x2;  // above: alternating regime
  const double t_con = 3.0 * x2 + x1 + y1 - 1.0;  // above: concentric regime
  double total = 0.0;
  if (t_alt <= t_con) {
    const double split = std::clamp(t_alt, 0.0, y_hi);
    total += integrate_max(qd1, qc1, 0.0, split);
    total += integrate_max(qd1, qd2, split, y_hi);
  } else {
    const double split = std::clamp(t_con, 0.0, y_hi);
    total += integrate_max(qd1, qc1, 0.0, split);
    total += integrate_max(qc1, qc2, split, y_hi);
  }
  return total;
}

// Gauss-Kronrod 7-15 nodes on [-1, 1] (positive half; symmetric)
constexpr double kKronrodX[8] = {0.0,
                                 0.2077849550078985,
                                 0.4058451513773972,
                                 0.5860872354676911,
                                 0.7415311855993945,
                                 0.8648644233597691,
                                 0.9491079123427585,
                                 0.9914553711208126};
constexpr double kKronrodW[8] = {0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
                                 0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
                                 0.0630920926299786, 0.0229353220105292};
constexpr double kGaussW[4] = {0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
                               0.1294849661688697};

template <typename F>
void gk15(const F& f, double a, double b, double& value, double& err) {
  const double h = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double fc = f(mid);
  double ik = kKronrodW[0] * fc;
  double ig = kGaussW[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kKronrodX[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    ik += kKronrodW[i] * fsum;
    if (i % 2 == 0) ig += kGaussW[i / 2] * fsum;
  }
  value = ik * h;
  err = std::abs((ik - ig) * h);
}

template <typename F>
double adaptive_gk(const F& f, double a, double b, double tol, double& err_out, int depth = 0) {
  double v, e;
  gk15(f, a, b, v, e);
  if (e <= tol || depth >= 40) {
    err_out += e;
    return v;
  }
  const double mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, 0.5 * tol, err_out, depth + 1) +
         adaptive_gk(f, mid, b, 0.5 * tol, err_out, depth + 1);
}

}  // namespace

double shape_volume_h5(double target_abs_err) {
  if (target_abs_err <= 0) throw InputError("shape volume: error target must be positive");
  // fundamental domain: 0 ≤ y1 ≤ x1, x2 - y2 ≥ x1 - y1, sum ≤ 1; 256-fold symmetry
  double err_g_max = 0.0, err_h_max = 0.0, err_v = 0.0;
  auto G = [&](double x1, double y1) {
    const double lo = x1 - y1, hi = 1.0 - x1 - y1;
    if (hi <= lo) return 0.0;
    double err = 0.0;
    const double v =
        adaptive_gk([&](double x2) { return inner_integral(x1, y1, x2); }, lo, hi, 1e-12, err);
    err_g_max = std::max(err_g_max, err);
    return v;
  };
  auto H = [&](double x1) {
    if (x1 <= 0.0) return 0.0;
    double err = 0.0;
    const double v = adaptive_gk([&](double y1) { return G(x1, y1); }, 0.0, x1, 5e-12, err);
    err_h_max = std::max(err_h_max, err);
    return v;
  };
  const double base = adaptive_gk(H, 0.0, 0.5, 1e-10, err_v);
  // inner quadrature errors integrate against the outer measures (≤ 1/2 each)
  const double achieved = 256.0 * (err_v + 0.5 * err_h_max + 0.25 * err_g_max + 1e-13);
  if (achieved > target_abs_err)
    throw ConvergenceError("shape volume: achieved error bound " + fmt_double_shortest(achieved) +
                           " exceeds the target");
  return 256.0 * base;
}

}  // namespace nilgeo
