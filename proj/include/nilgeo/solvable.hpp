#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nilgeo/rational.hpp"

namespace nilgeo {

/**
 * A 3-adic angle parameter alpha = sum of 3^(-e) over the exponent list.
 *
 * The value is an exact rational, so half-turn avoidance bounds on k*alpha
 * are decided exactly for every k; no working precision is involved.
 * `witnesses` lists the radii n whose avoidance bound has been verified.
 */
struct LiouvilleAlpha {
  std::vector<int> exponents;
  Rational value = 0;
  std::vector<long long> witnesses;
};

/** Validates strictly increasing positive exponents; empty list gives 0. */
LiouvilleAlpha make_liouville_alpha(std::vector<int> exponents);

/** Exact outcome of a half-turn avoidance scan over |k| <= n. */
struct LiouvilleCheck {
  bool holds = false;
  /** Non-negative k minimizing the distance (the scan is symmetric in k). */
  long long worst_k = 0;
  /** Exact min over |k| <= n of the distance from k*alpha to half-integers. */
  Rational distance = 0;
};

/**
 * Checks d(k*alpha, Z + 1/2) >= 2*delta for all |k| <= n, exactly: the
 * distances are rationals and delta converts to a rational with no rounding.
 * Scans parallelize over k-ranges with an order-independent min-reduction.
 */
LiouvilleCheck check_liouville(const LiouvilleAlpha& alpha, long long n, double delta,
                               int workers = 1);

/** Default deficit schedule 1/ln(n+2); far too aggressive to ever certify. */
double default_epsilon(long long n);

/** One certified radius of the slow-speed construction. */
struct SpeedCertificate {
  long long n = 0;
  double epsilon = 0.0;
  /** Sector half-angle (4*epsilon)^(1/3). */
  double delta = 0.0;
  long long worst_k = 0;
  /** Slack of the binding avoidance bound: min distance minus 2*delta. */
  double margin = 0.0;
  /** Implied ball-volume ceiling (1-epsilon) * (4*pi/3) * n^3. */
  double volume_bound = 0.0;
};

/** Certificates plus one rejection line per failed candidate. */
struct SpeedCertificates {
  std::vector<SpeedCertificate> certified;
  std::vector<std::string> diagnostics;
};

/**
 * Certifies ball-volume deficits at the candidate radii (n, epsilon).
 *
 * A radius certifies when three conditions hold with delta = (4*epsilon)^(1/3):
 * the exact avoidance bound (min distance cubed >= 32*epsilon), the in-sector
 * rotation bound 1 + 3*sin^2(a - delta) >= (1 + delta^2)^2 at the worst
 * angle a = pi * (min distance), and the out-of-sector bound
 * 1/cos(delta) >= 1 + delta^2/4. The two trigonometric conditions carry a
 * 1e-9 rounding guard, so vanishingly small positive epsilons are rejected
 * conservatively; epsilon = 0 certifies vacuously.
 */
SpeedCertificates slow_speed_certificate(const LiouvilleAlpha& alpha,
                                         const std::vector<std::pair<long long, double>>& candidates);

/**
 * Greedy 3-adic construction for prescribed targets: the first exponent is
 * the smallest that leaves every feasible target its required distance plus
 * a tenth-of-delta reserve at the largest target, and each later exponent
 * halves the remaining reserve. Every target is then verified exactly; the
 * ones that pass become the result's witnesses.
 */
LiouvilleAlpha construct_liouville_alpha(const std::vector<long long>& targets,
                                         const std::vector<double>& epsilons);

/** JSON object with a `certificates` array and a `diagnostics` array. */
std::string certificates_to_json(const SpeedCertificates& certs);

/** Gauge whose unit ball is the generating disc: sqrt(x1^2/4 + x2^2). */
double generator_disc_norm(double x1, double x2);

/** Rotation-invariant limit gauge, the disc of radius 2: sqrt(x1^2+x2^2)/2. */
double rotation_invariant_norm(double x1, double x2);

/**
 * Radii of the double truncated cone swept by rotating a two-slab word ball:
 * r0 is the reach of the level-0 slab, r1 half the diameter of the level-1
 * slab, r2 the rotation-averaged top radius. r2 <= r1 always.
 */
struct ConeShape {
  double r0 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

/**
 * Computes the cone radii: r0 = max Euclidean norm over omega0, r1 = half
 * the Euclidean diameter of omega1, and r2 = the average over all rotation
 * angles of the largest rotated x-projection of omega1, by adaptive
 * quadrature to absolute tolerance 1e-10. A one-point omega1 (after exact
 * deduplication) gives r2 = 0 exactly.
 *
 * Throws InputError when omega1 is empty or omega0 is not symmetric about
 * the origin (symmetry is checked by exact coordinate negation).
 */
ConeShape cone_shape(const std::vector<std::array<double, 2>>& omega0,
                     const std::vector<std::array<double, 2>>& omega1);

}  // namespace nilgeo
