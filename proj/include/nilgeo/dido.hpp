#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "nilgeo/ball_enum.hpp"
#include "nilgeo/group.hpp"
#include "nilgeo/polygon.hpp"
#include "nilgeo/rational.hpp"

namespace nilgeo {

/**
 * Solution of the anisotropic Dido problem for a polygonal norm: the largest
 * signed sweep area of a path with prescribed endpoints and norm length.
 */
struct DidoResult {
  Rational area;
  /** Number of distinct optimal path shapes after canonicalization. */
  int multiplicity = 1;
  /** True when a positive-length continuum of optimal paths exists. */
  bool family = false;
};

/**
 * Maximum signed sweep area ∫ ½(x dy − y dx) over paths from the origin to v
 * whose P-length is exactly L. Optimal paths are connected sub-chains of a
 * scaled isoperimetrix closed by the chord back to the origin; every
 * candidate configuration is solved exactly in rational arithmetic and the
 * best value is returned together with the number of distinct optimal paths.
 * Throws InputError when ‖v‖_P > L (no path can reach v).
 */
DidoResult dido_max_area(const PolygonalNorm& P, const RatPt2& v, const Rational& L);

/** Value-only double-precision variant of dido_max_area. */
double dido_max_area_value(const PolygonalNorm& P, double vx, double vy, double L);

/**
 * Reusable solver bound to one norm; precomputes the extremal cycle so that
 * repeated queries skip rebuilding it.
 */
class DidoSolver {
 public:
  explicit DidoSolver(const PolygonalNorm& P);
  ~DidoSolver();
  DidoSolver(DidoSolver&&) noexcept;
  DidoSolver& operator=(DidoSolver&&) noexcept;

  /** Exact maximum with achiever statistics, as dido_max_area. */
  DidoResult solve(const RatPt2& v, const Rational& L) const;

  /** Double-precision maximum over non-degenerate configurations only. */
  double solve_value(double vx, double vy, double L) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/**
 * Independent discretized check for the length-1 Dido problem: a dynamic
 * program over lattice paths on a 1/kGrid grid whose step costs are rounded
 * up to whole length quanta. Produces a certified lower bound on the true
 * maximum, tight up to the grid resolution. Deterministic and
 * single-threaded; one instance covers every grid endpoint at once.
 */
class DidoDpOracle {
 public:
  static constexpr int kGrid = 50;

  explicit DidoDpOracle(const PolygonalNorm& P, int quanta = 400, int step_range = 17);

  /** Best area over paths from the origin to (gx/kGrid, gy/kGrid). */
  double at_grid(int gx, int gy) const;

 private:
  std::vector<float> best_;  // final layer, (2*kGrid+1)^2, row-major
};

/** One closed-form profile piece: z equals a rational quadratic on a region. */
struct ProfilePiece {
  /** Half-planes n·(x,y) ≤ b carving the piece out of the fundamental cone. */
  std::vector<RatLine> region;
  // z = cxx·x² + cxy·xy + cyy·y² + cx·x + cy·y + c0 on the region
  Rational cxx, cxy, cyy, cx, cy, c0;
};

/**
 * Closed-form pieces of the first Heisenberg profile on the fundamental cone
 * 0 ≤ y ≤ x, x + y ≤ 1; the full profile follows by the dihedral symmetries
 * z(x,y) = z(−x,y) = z(x,−y) = z(y,x). Pieces are listed in evaluation
 * order; on their common boundary both pieces agree and the later one is
 * used.
 */
std::vector<ProfilePiece> h3_profile_pieces();

/**
 * Vertical profile of the limit shape of the first discrete Heisenberg group
 * with standard generators (horizontal ball ℓ¹): the largest |z| over points
 * (x, y, z) of the shape. Piecewise quadratic. Throws InputError outside
 * |x| + |y| ≤ 1 (doubles get a 1e−9 boundary collar).
 */
double z_profile_h3(double x, double y);

/** Exact-rational variant of z_profile_h3 (strict domain check). */
Rational z_profile_h3_exact(const Rational& x, const Rational& y);

/**
 * Vertical profile of the limit shape of the second discrete Heisenberg
 * group (two commuting Heisenberg factors sharing one centre) with standard
 * generators. Throws InputError outside |x1|+|y1|+|x2|+|y2| ≤ 1 (doubles get
 * a 1e−9 collar).
 */
double z_profile_h5(double x1, double y1, double x2, double y2);

/** Exact-rational variant of z_profile_h5 (strict domain check). */
Rational z_profile_h5_exact(Rational x1, Rational y1, Rational x2, Rational y2);

/**
 * Validation oracle for z_profile_h5: evaluates the profile as
 * sup over t in [0,1] of t²·z(x1/t, y1/t) + (1−t)²·z(x2/(1−t), y2/(1−t))
 * with z the first Heisenberg profile. Each split value is convex in t, so
 * the supremum sits at an endpoint of the feasible t-interval and is
 * evaluated exactly. Never exceeds the closed form by construction of the
 * shared factor profile; agreement is asserted in tests.
 */
Rational z_profile_h5_split_sup(Rational x1, Rational y1, Rational x2, Rational y2);

/**
 * Lines across which the optimal Dido configuration for the length-1 profile
 * can change: feasibility boundaries of every configuration together with
 * the pairwise tie lines that factor rationally. On each cell of the
 * arrangement of these lines inside P the profile is a single quadratic.
 */
std::vector<RatLine> profile_breaklines(const PolygonalNorm& P);

/**
 * Horizontal unit ball of the limit metric: exact convex hull of the
 * generator images in the abelianized plane. Requires a rank-2 abelianized
 * layer (m = 2); throws InputError otherwise.
 */
PolygonalNorm limit_norm(const GeneratingSet& omega);

/**
 * True when the 4-d abelianized hull of the generating set is exactly the
 * standard cross-polytope conv{±e1, ±e2, ±e3, ±e4} (m = 4 groups).
 */
bool h5_limit_hull_is_cross_polytope(const GeneratingSet& omega);

/**
 * Limit shape of the rescaled word balls: {(v, z) : ‖v‖ ≤ 1, |z| ≤ z(v)}
 * in homogeneous coordinates, star-shaped under the anisotropic dilations.
 * Supported cases: 2-d abelianized layer with at most one central
 * coordinate, and the second Heisenberg group with the standard hull.
 */
struct LimitShape {
  GroupSpec group;
  /** Horizontal unit ball (2-d cases; unused when h5_standard). */
  PolygonalNorm polygon;
  bool h5_standard = false;
  /** Central profile is z_profile_h3 scaled by bracket_scale. */
  bool l1_closed_form = false;
  /** Bracket coefficient mapping sweep area to the central coordinate. */
  Rational bracket_scale = 1;
  /** Largest central height over the whole horizontal ball. */
  double z_max = 0.0;

  /** Profile for 2-d horizontal layers; InputError when h5_standard. */
  double profile(double x, double y) const;
  /** Profile for the second Heisenberg case; InputError otherwise. */
  double profile4(double x1, double y1, double x2, double y2) const;
};

/** Builds the limit shape for a validated generating set. */
LimitShape make_limit_shape(const GeneratingSet& omega);

/** Triangulated surface of a 3-d limit shape. */
struct TriMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/**
 * Boundary mesh of a 3-d limit shape: top and bottom caps (v, ±z(v)) sampled
 * on a barycentric refinement of the polygon fan (resolution ≥ 1 subdivisions
 * per fan triangle edge) plus the vertical side wall where the profile is
 * positive over the polygon boundary. Deterministic; polygon vertices and
 * the central apexes are always mesh vertices.
 */
TriMesh shape_boundary_mesh(const LimitShape& shape, int resolution);

/**
 * JSON description of a 3-d limit shape: group name, polygon vertices as
 * exact "p/q" strings, z_max, and deterministic profile samples [x, y, z].
 */
std::string shape_to_json(const LimitShape& shape, int resolution);

/** Deterministic stroke-only orthographic wireframe (viewBox −1.2 … 2.4). */
std::string mesh_to_svg(const TriMesh& mesh);

}  // namespace nilgeo
