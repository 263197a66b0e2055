#pragma once

#include <vector>

#include "nilgeo/rational.hpp"

namespace nilgeo {

struct RatPt2 {
  Rational x;
  Rational y;

  bool operator==(const RatPt2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const RatPt2& o) const { return !(*this == o); }
};

inline RatPt2 operator+(const RatPt2& a, const RatPt2& b) { return {a.x + b.x, a.y + b.y}; }
inline RatPt2 operator-(const RatPt2& a, const RatPt2& b) { return {a.x - b.x, a.y - b.y}; }
inline RatPt2 operator*(const Rational& s, const RatPt2& p) { return {s * p.x, s * p.y}; }
inline Rational dot(const RatPt2& a, const RatPt2& b) { return a.x * b.x + a.y * b.y; }
inline Rational cross(const RatPt2& a, const RatPt2& b) { return a.x * b.y - a.y * b.x; }

/** Oriented line n·p = b; the half-plane n·p ≤ b is its inside. */
struct RatLine {
  RatPt2 n;
  Rational b;
};

/**
 * Unit ball of a polygonal norm: a convex, centrally symmetric polygon with
 * rational vertices, counterclockwise, origin strictly interior, no three
 * vertices collinear.
 */
struct PolygonalNorm {
  std::vector<RatPt2> vertices;
};

/**
 * Validates a cyclically ordered vertex list (either orientation) and returns
 * the counterclockwise-normalized polygon. Throws InputError on violation.
 */
PolygonalNorm make_polygonal_norm(std::vector<RatPt2> vertices);

/** Unit ball of ℓ¹: vertices (±1,0),(0,±1). */
PolygonalNorm l1_ball();

/** Exact convex hull (counterclockwise, collinear interior points dropped). */
std::vector<RatPt2> convex_hull(std::vector<RatPt2> points);

/** Minkowski gauge ‖p‖_P = min{t ≥ 0 : p ∈ tP}; exact rational. */
Rational gauge(const PolygonalNorm& P, const RatPt2& p);

/** Supporting half-planes n_i·x ≤ b_i (b_i > 0), one per edge, in edge order. */
std::vector<RatLine> edge_halfplanes(const PolygonalNorm& P);

/** Polar dual polygon {y : x·y ≤ 1 for all x in P}. */
PolygonalNorm polar_dual(const PolygonalNorm& P);

/** Rotation by +90°: (x, y) ↦ (−y, x). */
PolygonalNorm rotate90(const PolygonalNorm& P);

/** The isoperimetrix: polar dual rotated by 90°; its arcs solve the Dido problem for P. */
PolygonalNorm isoperimetrix(const PolygonalNorm& P);

/** Exact area. */
Rational polygon_area(const std::vector<RatPt2>& vertices);

/** Boundary length of Q measured in the norm with unit ball P. */
Rational perimeter_in_norm(const PolygonalNorm& P, const PolygonalNorm& Q);

/**
 * Clips a convex polygon to the half-plane n·x ≤ b (Sutherland-Hodgman).
 * Returns an empty list when nothing with positive area remains.
 */
std::vector<RatPt2> clip_halfplane(const std::vector<RatPt2>& poly, const RatLine& line);

/** Arithmetic mean of the vertices (interior for convex polygons). */
RatPt2 polygon_centroid(const std::vector<RatPt2>& vertices);

}  // namespace nilgeo
