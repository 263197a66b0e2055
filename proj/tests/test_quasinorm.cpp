#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "nilgeo/errors.hpp"
#include "nilgeo/group.hpp"
#include "nilgeo/polygon.hpp"
#include "nilgeo/quasinorm.hpp"

using namespace nilgeo;

namespace {

QuasiNormSpec h3_l1_spec(const Rational& lambda2) {
  return make_quasinorm_spec({layer_norm_l1(), layer_norm_l1()}, {1, lambda2});
}

bool norm_eq(const NormValue& a, const NormValue& b) { return norm_leq(a, b) && norm_leq(b, a); }

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-16, 16);
  std::uniform_int_distribution<int> den(1, 8);
  return Rational(num(rng), den(rng));
}

RatLayeredPoint random_point(const GroupSpec& g, std::mt19937& rng) {
  RatLayeredPoint p;
  for (int i = 0; i < g.m; ++i) p.a.push_back(random_rational(rng));
  for (int k = 0; k < g.c; ++k) p.z.push_back(random_rational(rng));
  return p;
}

// |x∗y| ≤ |x| + |y| exactly, on random rational points under the stratified law.
void check_triangle_sampled(const GroupSpec& g, const QuasiNormSpec& spec, int samples,
                            unsigned seed) {
  std::mt19937 rng(seed);
  int checked = 0;
  for (int i = 0; i < samples; ++i) {
    const RatLayeredPoint x = random_point(g, rng);
    const RatLayeredPoint y = random_point(g, rng);
    const RatLayeredPoint xy = stratified_multiply(g, x, y);
    if (!norm_leq_sum(quasinorm_exact(spec, xy), quasinorm_exact(spec, x),
                      quasinorm_exact(spec, y)))
      ++checked;
  }
  CHECK(checked == 0);
}

}  // namespace

TEST_CASE("quasi-norm takes the maximum of rescaled layer norms") {
  const QuasiNormSpec spec = h3_l1_spec(1);
  CHECK(quasinorm(spec, {{0, 0}, {4}}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(quasinorm(spec, {{3, 0}, {0}}) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(quasinorm(spec, {{1, -1}, {0.25}}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(quasinorm(spec, {{0, 0}, {0}}) == 0.0);

  // λ₂ rescales the central layer before the square root.
  const QuasiNormSpec spec4 = h3_l1_spec(4);
  CHECK(quasinorm(spec4, {{0, 0}, {4}}) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("exact evaluation keeps radicals symbolic") {
  const QuasiNormSpec spec = h3_l1_spec(1);
  const NormValue two = quasinorm_exact(spec, {{0, 0}, {4}});
  CHECK(norm_eq(two, norm_rational(2)));

  const NormValue root2 = quasinorm_exact(spec, {{0, 0}, {2}});
  CHECK(root2.is_sqrt);
  CHECK(root2.v == 2);
  CHECK(!norm_leq(root2, norm_rational(Rational(141, 100))));
  CHECK(norm_leq(root2, norm_rational(Rational(142, 100))));

  // Horizontal layer dominates once it exceeds the central square root.
  const NormValue three = quasinorm_exact(spec, {{-2, 1}, {4}});
  CHECK(norm_eq(three, norm_rational(3)));
}

TEST_CASE("quasi-norm is homogeneous under dilations") {
  std::mt19937 rng(20260816);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> logt(-1.0, 1.0);
  for (const GroupSpec& g : {preset_h3(), preset_h5()}) {
    const QuasiNormSpec spec = default_quasinorm(g);
    for (int i = 0; i < 10000; ++i) {
      LayeredPoint p;
      for (int k = 0; k < g.m; ++k) p.a.push_back(coord(rng));
      for (int k = 0; k < g.c; ++k) p.z.push_back(5.0 * coord(rng));
      const double t = std::pow(10.0, logt(rng));
      const double lhs = quasinorm(spec, dilate(g, t, p));
      const double rhs = t * quasinorm(spec, p);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("rescaling certifies the clean triangle inequality") {
  const GroupSpec h3 = preset_h3();
  const QuasiNormSpec spec = rescale_quasinorm(h3, {layer_norm_l1(), layer_norm_l1()}, 0);
  REQUIRE(spec.lambdas.size() == 2);
  CHECK(spec.lambdas[1] == 4);

  // Boundary pair: |x| = |y| = 1 and the product's central square root ties
  // the horizontal sum exactly.
  const RatLayeredPoint x{{1, 0}, {0}};
  const RatLayeredPoint y{{0, 1}, {0}};
  const RatLayeredPoint xy = stratified_multiply(h3, x, y);
  CHECK(xy.z[0] == Rational(1, 2));
  CHECK(norm_eq(quasinorm_exact(spec, xy), norm_rational(2)));
  CHECK(norm_leq_sum(quasinorm_exact(spec, xy), quasinorm_exact(spec, x),
                     quasinorm_exact(spec, y)));

  check_triangle_sampled(h3, spec, 2000, 7001);

  // The certificate is slack-free, so any requested slack yields the same λ.
  const QuasiNormSpec loose = rescale_quasinorm(h3, {layer_norm_l1(), layer_norm_l1()},
                                                Rational(1, 10));
  CHECK(loose.lambdas[1] == 4);

  const GroupSpec h5 = preset_h5();
  const QuasiNormSpec spec5 = rescale_quasinorm(h5, {layer_norm_l1(), layer_norm_l1()}, 0);
  CHECK(spec5.lambdas[1] == 4);
  check_triangle_sampled(h5, spec5, 1000, 7002);
}

TEST_CASE("rescaling a polygonal horizontal norm maximizes over vertex pairs") {
  const GroupSpec h3 = preset_h3();
  const PolygonalNorm hex = make_polygonal_norm(
      {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}});
  const QuasiNormSpec spec =
      rescale_quasinorm(h3, {layer_norm_polygon(hex), layer_norm_l1()}, 0);
  CHECK(spec.lambdas[1] == 4);
  check_triangle_sampled(h3, spec, 1000, 7003);
}

TEST_CASE("abelian rescaling keeps the single layer unscaled") {
  const GroupSpec z2 = make_group_spec(2, 0, {});
  const QuasiNormSpec spec = rescale_quasinorm(z2, {layer_norm_l1()}, 0);
  CHECK(spec.lambdas == std::vector<Rational>{1});
  check_triangle_sampled(z2, spec, 500, 7004);
  CHECK_THROWS_AS(rescale_quasinorm(z2, {layer_norm_l1(), layer_norm_l1()}, 0), InputError);
}

TEST_CASE("lattice elements have inverse-symmetric norms") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<long long> coord(-9, 9);
  for (const char* name : {"H3", "H5", "H3xZ"}) {
    const GroupSpec g = preset_group(name);
    const QuasiNormSpec spec = default_quasinorm(g);
    CHECK(norm_eq(quasinorm_element(g, spec, identity(g)), norm_rational(0)));
    for (int i = 0; i < 100; ++i) {
      Element x = identity(g);
      for (auto& v : x.a) v = coord(rng);
      for (auto& v : x.z) v = coord(rng);
      CHECK(norm_eq(quasinorm_element(g, spec, x),
                    quasinorm_element(g, spec, inverse(g, x))));
    }
  }

  // Central element whose norm is exactly the bidirectional-search threshold.
  const GroupSpec h3 = preset_h3();
  Element central = identity(h3);
  central.z[0] = 16;
  CHECK(norm_eq(quasinorm_element(h3, default_quasinorm(h3), central), norm_rational(8)));
}

TEST_CASE("weighted-Euclidean layer norms") {
  const LayerNorm w = layer_norm_weighted({Rational(1, 4), 1});
  const NormValue at20 = layer_norm_value(w, std::vector<Rational>{2, 0});
  CHECK(norm_eq(at20, norm_rational(1)));
  CHECK(norm_eq(layer_norm_value(w, std::vector<Rational>{0, 1}), norm_rational(1)));
  CHECK(layer_norm_value(w, std::vector<double>{2.0, 0.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(layer_norm_value(w, std::vector<Rational>{1, 2, 3}), InputError);
  CHECK_THROWS_AS(layer_norm_weighted({Rational(0), 1}), InputError);
  CHECK_THROWS_AS(layer_norm_weighted({}), InputError);

  // Certified-bound path: caps (2, 1) give C₂ ≤ 2, hence λ₂ = 1.
  const GroupSpec h3 = preset_h3();
  const QuasiNormSpec spec = rescale_quasinorm(h3, {w, layer_norm_l1()}, 0);
  CHECK(spec.lambdas[1] == 1);
  check_triangle_sampled(h3, spec, 1000, 7005);
}

TEST_CASE("quasi-norm spec validation") {
  CHECK_THROWS_AS(make_quasinorm_spec({layer_norm_l1()}, {2}), InputError);
  CHECK_THROWS_AS(make_quasinorm_spec({layer_norm_l1(), layer_norm_l1()}, {1, 0}), InputError);
  CHECK_THROWS_AS(make_quasinorm_spec({layer_norm_l1(), layer_norm_l1()}, {1, -1}), InputError);
  CHECK_THROWS_AS(make_quasinorm_spec({layer_norm_l1()}, {1, 1}), InputError);
  CHECK_THROWS_AS(make_quasinorm_spec({}, {}), InputError);
  CHECK_THROWS_AS(rescale_quasinorm(preset_h3(), {layer_norm_l1(), layer_norm_l1()}, -1),
                  InputError);
  CHECK_THROWS_AS(rescale_quasinorm(preset_h3(), {layer_norm_l1()}, 0), InputError);

  // The exact evaluator refuses irrational central layer values.
  const QuasiNormSpec bad = make_quasinorm_spec(
      {layer_norm_l1(), layer_norm_weighted({1})}, {1, 1});
  CHECK_THROWS_AS(quasinorm_exact(bad, RatLayeredPoint{{0, 0}, {2}}), InputError);

  // Polygonal norms only apply to 2-d layers.
  const LayerNorm poly = layer_norm_polygon(l1_ball());
  CHECK_THROWS_AS(layer_norm_value(poly, std::vector<Rational>{1, 2, 3}), InputError);
}
