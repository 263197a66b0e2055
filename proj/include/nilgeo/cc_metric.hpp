#pragma once

#include <array>
#include <string>
#include <vector>

#include "nilgeo/ball_enum.hpp"
#include "nilgeo/dido.hpp"
#include "nilgeo/group.hpp"

namespace nilgeo {

/**
 * Per-radius comparison of the word metric against its homogeneous limit:
 * max_dev and mean_dev aggregate |n/d(g) - 1| over the radius-n sphere, and
 * hausdorff is the sampled two-sided distance between the rescaled ball and
 * the limit shape.
 */
struct ConvergenceReport {
  struct Row {
    int n = 0;
    double max_dev = 0.0;
    double mean_dev = 0.0;
    double hausdorff = 0.0;
  };
  std::vector<Row> rows;
};

/** Validates rows: strictly increasing positive n, non-negative columns. */
ConvergenceReport make_convergence_report(std::vector<ConvergenceReport::Row> rows);

/** CSV rows `n,max_dev,mean_dev,hausdorff` with values to 12 significant digits. */
std::string convergence_report_csv(const ConvergenceReport& report);

/**
 * Homogeneous distance from the identity to a real layered point: the unique
 * t with the dilate of p by 1/t on the shape boundary, found by bisection to
 * relative tolerance 1e-12. The origin maps to 0; a point with no central
 * part maps to its horizontal gauge exactly.
 *
 * Throws InputError when the coordinate counts do not match the shape's group.
 */
double cc_distance(const LimitShape& shape, const LayeredPoint& p);

/**
 * Deviation sweep of the word metric against cc_distance for n = 1..nmax.
 *
 * Each sphere element is embedded at its real coordinates; spheres larger
 * than 20000 elements are thinned by a deterministic stride. The hausdorff
 * column samples the rescaled ball against the shape's boundary mesh at the
 * given resolution. Sweeps split into fixed chunks merged in index order, so
 * results are identical for every worker count.
 */
ConvergenceReport pansu_convergence(const GeneratingSet& omega, const LimitShape& shape,
                                    int nmax, int mesh_resolution = 16, int workers = 1);

/** Sampled Hausdorff value and the sampling resolution it was measured at. */
struct HausdorffSample {
  double value = 0.0;
  /** Longest mesh edge; distances below this scale are not resolved. */
  double resolution = 0.0;
};

/**
 * Two-sided sampled Hausdorff distance between a point cloud and a 3-d limit
 * shape: cloud points inside the body (profile membership) contribute 0 and
 * outside points their distance to the boundary mesh; every mesh vertex
 * contributes its distance to the cloud. Nearest neighbours are found with a
 * spatial hash.
 */
HausdorffSample cloud_shape_hausdorff(const LimitShape& shape,
                                      const std::vector<std::array<double, 3>>& cloud,
                                      int mesh_resolution);

/** Hausdorff sample of {dilate of B(n) by 1/n} against the shape. */
HausdorffSample rescaled_ball_hausdorff(const GeneratingSet& omega, const LimitShape& shape,
                                        int n, int mesh_resolution = 16);

/**
 * Homogeneous distance on the product of a line with the first Heisenberg
 * group, with the central coordinate sheared by z0 per unit of line travel:
 * |v| + d(e, (x, y, z - v*z0)) for the standard 3-d shape.
 */
double bm_product_distance(double z0, double v, double x, double y, double z);

}  // namespace nilgeo
