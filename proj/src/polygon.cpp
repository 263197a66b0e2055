#include "nilgeo/polygon.hpp"

#include <algorithm>

#include "nilgeo/errors.hpp"

namespace nilgeo {

namespace {

Rational orient(const RatPt2& o, const RatPt2& a, const RatPt2& b) {
  return cross(a - o, b - o);
}

}  // namespace

PolygonalNorm make_polygonal_norm(std::vector<RatPt2> vertices) {
  const size_t n = vertices.size();
  if (n < 4) throw InputError("polygonal norm: need at least 4 vertices");
  Rational area2 = 0;
  for (size_t i = 0; i < n; ++i) area2 += cross(vertices[i], vertices[(i + 1) % n]);
  if (area2 == 0) throw InputError("polygonal norm: degenerate vertex list");
  if (area2 < 0) std::reverse(vertices.begin(), vertices.end());

  for (size_t i = 0; i < n; ++i) {
    const RatPt2& prev = vertices[(i + n - 1) % n];
    const RatPt2& cur = vertices[i];
    const RatPt2& next = vertices[(i + 1) % n];
    if (orient(prev, cur, next) <= 0)
      throw InputError("polygonal norm: vertices must be strictly convex in cyclic order");
  }
  for (const RatPt2& v : vertices) {
    const RatPt2 neg{-v.x, -v.y};
    if (std::find(vertices.begin(), vertices.end(), neg) == vertices.end())
      throw InputError("polygonal norm: must be centrally symmetric");
  }
  // Strict convexity plus central symmetry forces the origin strictly inside,
  // but an explicit check gives a clearer error for off-center input.
  for (size_t i = 0; i < n; ++i)
    if (orient(vertices[i], vertices[(i + 1) % n], RatPt2{0, 0}) <= 0)
      throw InputError("polygonal norm: origin must be strictly interior");
  return PolygonalNorm{std::move(vertices)};
}

PolygonalNorm l1_ball() {
  return make_polygonal_norm({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
}

std::vector<RatPt2> convex_hull(std::vector<RatPt2> points) {
  std::sort(points.begin(), points.end(), [](const RatPt2& a, const RatPt2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const size_t n = points.size();
  if (n <= 2) return points;
  std::vector<RatPt2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && orient(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<RatLine> edge_halfplanes(const PolygonalNorm& P) {
  const auto& v = P.vertices;
  std::vector<RatLine> lines;
  lines.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    const RatPt2 e = v[(i + 1) % v.size()] - v[i];
    const RatPt2 normal{e.y, -e.x};  // outward for counterclockwise order
    lines.push_back({normal, dot(normal, v[i])});
  }
  return lines;
}

Rational gauge(const PolygonalNorm& P, const RatPt2& p) {
  Rational g = 0;
  for (const RatLine& l : edge_halfplanes(P)) {
    // b > 0 since the origin is interior; the gauge is the max of (n·p)/b.
    const Rational r = dot(l.n, p) / l.b;
    if (r > g) g = r;
  }
  return g;
}

PolygonalNorm polar_dual(const PolygonalNorm& P) {
  std::vector<RatPt2> verts;
  for (const RatLine& l : edge_halfplanes(P))
    verts.push_back({l.n.x / l.b, l.n.y / l.b});
  return make_polygonal_norm(std::move(verts));
}

PolygonalNorm rotate90(const PolygonalNorm& P) {
  std::vector<RatPt2> verts;
  verts.reserve(P.vertices.size());
  for (const RatPt2& v : P.vertices) verts.push_back({-v.y, v.x});
  return make_polygonal_norm(std::move(verts));
}

PolygonalNorm isoperimetrix(const PolygonalNorm& P) { return rotate90(polar_dual(P)); }

Rational polygon_area(const std::vector<RatPt2>& vertices) {
  Rational area2 = 0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) area2 += cross(vertices[i], vertices[(i + 1) % n]);
  return area2 / 2;
}

Rational perimeter_in_norm(const PolygonalNorm& P, const PolygonalNorm& Q) {
  Rational total = 0;
  const auto& v = Q.vertices;
  for (size_t i = 0; i < v.size(); ++i) total += gauge(P, v[(i + 1) % v.size()] - v[i]);
  return total;
}

std::vector<RatPt2> clip_halfplane(const std::vector<RatPt2>& poly, const RatLine& line) {
  std::vector<RatPt2> out;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const RatPt2& cur = poly[i];
    const RatPt2& nxt = poly[(i + 1) % n];
    const Rational dc = dot(line.n, cur) - line.b;
    const Rational dn = dot(line.n, nxt) - line.b;
    if (dc <= 0) out.push_back(cur);
    if ((dc < 0 && dn > 0) || (dc > 0 && dn < 0)) {
      const Rational t = dc / (dc - dn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  // Collapse exact duplicates introduced by vertices lying on the line.
  std::vector<RatPt2> dedup;
  for (const RatPt2& p : out)
    if (dedup.empty() || !(p == dedup.back())) dedup.push_back(p);
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  if (dedup.size() < 3 || polygon_area(dedup) == 0) return {};
  return dedup;
}

RatPt2 polygon_centroid(const std::vector<RatPt2>& vertices) {
  RatPt2 c{0, 0};
  for (const RatPt2& v : vertices) c = c + v;
  const Rational n(static_cast<long long>(vertices.size()));
  return {c.x / n, c.y / n};
}

}  // namespace nilgeo
