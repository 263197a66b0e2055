#pragma once

#include "nilgeo/polygon.hpp"
#include "nilgeo/rational.hpp"

namespace nilgeo {

/**
 * Exact volume of the 3-d limit shape {(v, z) : ‖v‖_P ≤ 1, |z| ≤ z_P(v)}.
 *
 * Partitions the unit polygon along the profile break lines into cells on
 * which z_P is a single quadratic, then integrates each quadratic exactly.
 * Every triangle is certified: its midpoint-rule integral must survive a
 * 4-way refinement unchanged and the quadratic interpolant through its six
 * standard nodes must reproduce the solver value at the centroid.
 *
 * Throws ConvergenceError when a certificate fails (the partition missed a
 * seam), InputError for invalid polygons.
 */
Rational shape_volume_h3(const PolygonalNorm& P);

/**
 * Volume of the standard 4-d limit shape, |z| ≤ z(x1,y1,x2,y2) over the unit
 * cross-polytope, to absolute error at most target_abs_err.
 *
 * The innermost coordinate is integrated in closed form piece by piece; the
 * outer three run nested deterministic adaptive Gauss-Kronrod panels over the
 * fundamental domain, multiplied by the 256-fold symmetry. Throws
 * ConvergenceError with the achieved bound when the target is not met.
 */
double shape_volume_h5(double target_abs_err = 1e-7);

}  // namespace nilgeo
