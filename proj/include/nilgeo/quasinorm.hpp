#pragma once

#include <vector>

#include "nilgeo/group.hpp"
#include "nilgeo/polygon.hpp"
#include "nilgeo/rational.hpp"

namespace nilgeo {

enum class LayerNormKind { L1, Polygon, WeightedEuclidean };

/** Norm on one grading layer: ℓ¹, a polygonal gauge (2-d), or sqrt(Σ wᵢxᵢ²). */
struct LayerNorm {
  LayerNormKind kind = LayerNormKind::L1;
  PolygonalNorm polygon;           // kind == Polygon
  std::vector<Rational> weights;   // kind == WeightedEuclidean, all positive
};

LayerNorm layer_norm_l1();
LayerNorm layer_norm_polygon(PolygonalNorm p);
LayerNorm layer_norm_weighted(std::vector<Rational> weights);

/** Exact value; Polygon requires a 2-d argument. */
NormValue layer_norm_value(const LayerNorm& n, const std::vector<Rational>& x);
double layer_norm_value(const LayerNorm& n, const std::vector<double>& x);

/**
 * Homogeneous quasi-norm |x| = max_p (λ_p ‖π_p(x)‖_p)^{1/p} with λ₁ = 1.
 */
struct QuasiNormSpec {
  std::vector<LayerNorm> layer_norms;  // one per layer
  std::vector<Rational> lambdas;       // λ₁ = 1, all positive
};

QuasiNormSpec make_quasinorm_spec(std::vector<LayerNorm> layer_norms,
                                  std::vector<Rational> lambdas);

double quasinorm(const QuasiNormSpec& spec, const LayeredPoint& p);

/**
 * Exact value as a rational or a square root of one. Requires every central
 * layer norm to take rational values (ℓ¹ or polygonal).
 */
NormValue quasinorm_exact(const QuasiNormSpec& spec, const RatLayeredPoint& p);

/** Quasi-norm of a lattice element at its stratified embedding. */
NormValue quasinorm_element(const GroupSpec& g, const QuasiNormSpec& spec, const Element& x);

/**
 * Guivarc'h rescaling: returns λ₁ = 1 and the largest exactly-certified λ₂
 * with λ₂·C₂ ≤ 2, where C₂ is the maximum of ‖½B(a,a')‖₂ over unit-norm
 * horizontal arguments. The resulting quasi-norm satisfies the clean triangle
 * inequality |x∗y| ≤ |x| + |y| for the stratified law, for every ε ≥ 0.
 *
 * For polytope horizontal norms C₂ is an exact vertex-pair maximum; for
 * weighted-Euclidean layers a certified rational upper bound replaces it.
 */
QuasiNormSpec rescale_quasinorm(const GroupSpec& g, std::vector<LayerNorm> layer_norms,
                                const Rational& epsilon);

/** ℓ¹ on both layers with the rescaled λ₂; the norm used by search heuristics. */
QuasiNormSpec default_quasinorm(const GroupSpec& g);

}  // namespace nilgeo
