#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilgeo/rational.hpp"

namespace nilgeo {

/**
 * A 2-step nilpotent group in normal-form coordinates.
 *
 * Elements are pairs (a, z) with a ∈ Z^m (horizontal) and z ∈ Z^c (central);
 * the product is (a, z)·(a', z') = (a + a', z + z' + Q(a, a')) for an integer
 * bilinear cocycle Q. The bracket is B(a, a') = Q(a, a') − Q(a', a).
 */
struct GroupSpec {
  int m = 0;                                   // horizontal rank
  int c = 0;                                   // central rank
  std::vector<std::vector<std::vector<long long>>> Q;  // c matrices, each m×m

  std::string name;  // optional preset tag, informational only
};

/** Lattice element in normal form; equality is coordinate equality. */
struct Element {
  std::vector<long long> a;
  std::vector<ZInt> z;

  bool operator==(const Element& o) const { return a == o.a && z == o.z; }
  bool operator!=(const Element& o) const { return !(*this == o); }
};

/** Real point in layered coordinates (used by dilations and embeddings). */
struct LayeredPoint {
  std::vector<double> a;
  std::vector<double> z;
};

/** Rational point in layered coordinates (used by the exact stratified law). */
struct RatLayeredPoint {
  std::vector<Rational> a;
  std::vector<Rational> z;
};

/** Dimensions of the grading layers, first layer first. */
struct GradingDims {
  std::vector<int> dims;
};

/**
 * Validates and builds a GroupSpec.
 *
 * Throws InputError unless Q is a c×m×m integer tensor and the bracket image
 * spans the full c-dimensional central layer over the rationals (for c = 0
 * the tensor must be empty).
 */
GroupSpec make_group_spec(int m, int c, std::vector<std::vector<std::vector<long long>>> Q,
                          std::string name = "");

/** Discrete Heisenberg group H₃: m=2, c=1, Q(a,a') = a₁a'₂. */
GroupSpec preset_h3();
/** 5-dimensional Heisenberg group H₅: m=4, c=1, Q(a,a') = a₁a'₂ + a₃a'₄. */
GroupSpec preset_h5();
/** H₃×Z with the extra factor as horizontal coordinate v: m=3, c=1, Q(a,a') = a₂a'₃. */
GroupSpec preset_h3xz();
/** Looks up a preset by name ("H3", "H5", "H3xZ"); throws InputError otherwise. */
GroupSpec preset_group(const std::string& name);

/**
 * Parses the plain-text group format: a line "m c" followed by one line
 * "i j k value" per nonzero cocycle entry Q_k[i][j] (all indices 0-based);
 * '#' starts a comment.
 */
GroupSpec parse_group_spec(const std::string& text);
std::string format_group_spec(const GroupSpec& g);

Element identity(const GroupSpec& g);
Element multiply(const GroupSpec& g, const Element& x, const Element& y);
Element inverse(const GroupSpec& g, const Element& x);
/** Group commutator x y x⁻¹ y⁻¹ = (0, B(x.a, y.a)). */
Element commutator(const GroupSpec& g, const Element& x, const Element& y);

/** Projection to the abelianization. */
std::vector<long long> pi1(const Element& x);

/** Dilation δ_t: horizontal coordinates scale by t, central by t². t ≤ 0 → domain error. */
LayeredPoint dilate(const GroupSpec& g, double t, const LayeredPoint& p);

/**
 * Embeds a lattice element into the stratified (graded) real group:
 * (a, z) ↦ (a, z − Q(a,a)/2).
 *
 * The correction recenters the cocycle so that the embedded lattice and the
 * stratified product (a,z)∗(a',z') = (a+a', z+z'+½B(a,a')) agree; without it,
 * rescaled lattice balls converge to a sheared copy of the limit shape.
 */
RatLayeredPoint embed(const GroupSpec& g, const Element& x);
LayeredPoint embed_real(const GroupSpec& g, const Element& x);

/** Stratified real group law on rational points: (a+a', z+z'+½B(a,a')). */
RatLayeredPoint stratified_multiply(const GroupSpec& g, const RatLayeredPoint& x,
                                    const RatLayeredPoint& y);

/** Grading layer dimensions: [m] when c = 0, else [m, c]. */
GradingDims grading_dims(const GroupSpec& g);

/** Σ i·dims[i] over layers (1-based layer index). */
long long homogeneous_dimension(const GradingDims& dims);

/** 1 + Σ_k k(k+1)/2 · n_k for unipotent block sizes k with multiplicities n_k. */
long long homogeneous_dimension_jordan(const std::map<int, long long>& block_counts);

/** Parses one element from "a1 ... am z1 ... zc" (whitespace separated). */
Element parse_element(const GroupSpec& g, const std::string& line);
std::string format_element(const Element& x);

/** Canonical byte key of the normal form, for hashing in the enumeration core. */
std::string element_key(const Element& x);

}  // namespace nilgeo
