#include "doctest.h"

#include <random>

#include "nilgeo/group.hpp"

using namespace nilgeo;

namespace {

Element el(const GroupSpec& g, std::vector<long long> a, std::vector<long long> z) {
  Element x;
  x.a = std::move(a);
  x.z.assign(z.begin(), z.end());
  REQUIRE(static_cast<int>(x.a.size()) == g.m);
  REQUIRE(static_cast<int>(x.z.size()) == g.c);
  return x;
}

Element random_element(const GroupSpec& g, std::mt19937_64& rng, long long lo, long long hi) {
  std::uniform_int_distribution<long long> dist(lo, hi);
  Element x;
  for (int i = 0; i < g.m; ++i) x.a.push_back(dist(rng));
  for (int k = 0; k < g.c; ++k) x.z.emplace_back(dist(rng));
  return x;
}

}  // namespace

TEST_CASE("multiply follows the normal-form law") {
  const GroupSpec h3 = preset_h3();
  const Element a = el(h3, {1, 0}, {0});
  const Element b = el(h3, {0, 1}, {0});
  CHECK(multiply(h3, a, b) == el(h3, {1, 1}, {1}));
  CHECK(multiply(h3, b, a) == el(h3, {1, 1}, {0}));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Element g = random_element(h3, rng, -20, 20);
    CHECK(multiply(h3, g, identity(h3)) == g);
    CHECK(multiply(h3, identity(h3), g) == g);
  }
}

TEST_CASE("commutator of the standard pair is the central generator") {
  const GroupSpec h3 = preset_h3();
  const Element a = el(h3, {1, 0}, {0});
  const Element b = el(h3, {0, 1}, {0});
  const Element aba1b1 =
      multiply(h3, multiply(h3, multiply(h3, a, b), inverse(h3, a)), inverse(h3, b));
  CHECK(aba1b1 == el(h3, {0, 0}, {1}));
  CHECK(commutator(h3, a, b) == aba1b1);
}

TEST_CASE("inverse undoes multiply") {
  const GroupSpec h3 = preset_h3();
  CHECK(inverse(h3, identity(h3)) == identity(h3));
  CHECK(inverse(h3, el(h3, {1, 0}, {0})) == el(h3, {-1, 0}, {0}));
  CHECK(inverse(h3, el(h3, {1, 1}, {1})) == el(h3, {-1, -1}, {0}));

  std::mt19937_64 rng(11);
  for (const GroupSpec& g : {preset_h3(), preset_h5(), preset_h3xz()}) {
    for (int i = 0; i < 50; ++i) {
      const Element x = random_element(g, rng, -30, 30);
      CHECK(multiply(g, x, inverse(g, x)) == identity(g));
      CHECK(multiply(g, inverse(g, x), x) == identity(g));
    }
  }
}

TEST_CASE("commutator properties") {
  const GroupSpec h5 = preset_h5();
  // The two horizontal planes of H5 commute with each other.
  CHECK(commutator(h5, el(h5, {1, 0, 0, 0}, {0}), el(h5, {0, 0, 1, 0}, {0})) == identity(h5));

  std::mt19937_64 rng(13);
  for (const GroupSpec& g : {preset_h3(), preset_h5(), preset_h3xz()}) {
    for (int i = 0; i < 40; ++i) {
      const Element x = random_element(g, rng, -10, 10);
      const Element y = random_element(g, rng, -10, 10);
      CHECK(commutator(g, x, x) == identity(g));
      // Antisymmetry: [x,y]·[y,x] = e.
      CHECK(multiply(g, commutator(g, x, y), commutator(g, y, x)) == identity(g));
      // Chained-product definition.
      const Element chained = multiply(
          g, multiply(g, multiply(g, x, y), inverse(g, x)), inverse(g, y));
      CHECK(commutator(g, x, y) == chained);
      // Commutators project to zero in the abelianization.
      for (long long v : pi1(commutator(g, x, y))) CHECK(v == 0);
    }
  }
}

TEST_CASE("associativity on a dense coordinate sample") {
  const GroupSpec h3 = preset_h3();
  // All pairs with coordinates in [-3,3] against a fixed probe set, plus
  // every triple with coordinates in [-1,1]; full triples over [-3,3] would
  // be ~4e7 products for no extra structural coverage.
  std::vector<Element> small;
  for (long long a1 = -3; a1 <= 3; ++a1)
    for (long long a2 = -3; a2 <= 3; ++a2)
      for (long long z = -3; z <= 3; ++z) small.push_back(el(h3, {a1, a2}, {z}));
  const std::vector<Element> probes = {el(h3, {1, -2}, {3}), el(h3, {-3, 3}, {-1}),
                                       el(h3, {0, 1}, {2})};
  for (const Element& x : small)
    for (const Element& y : small)
      for (const Element& k : probes)
        REQUIRE(multiply(h3, multiply(h3, x, y), k) == multiply(h3, x, multiply(h3, y, k)));

  std::vector<Element> tiny;
  for (long long a1 = -1; a1 <= 1; ++a1)
    for (long long a2 = -1; a2 <= 1; ++a2)
      for (long long z = -1; z <= 1; ++z) tiny.push_back(el(h3, {a1, a2}, {z}));
  for (const Element& x : tiny)
    for (const Element& y : tiny)
      for (const Element& k : tiny)
        REQUIRE(multiply(h3, multiply(h3, x, y), k) == multiply(h3, x, multiply(h3, y, k)));
}

TEST_CASE("pi1 is the homomorphism to the abelianization") {
  const GroupSpec h3 = preset_h3();
  CHECK(pi1(identity(h3)) == std::vector<long long>{0, 0});
  CHECK(pi1(el(h3, {3, -2}, {7})) == std::vector<long long>{3, -2});

  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const Element x = random_element(h3, rng, -15, 15);
    const Element y = random_element(h3, rng, -15, 15);
    const auto& pxy = pi1(multiply(h3, x, y));
    for (size_t j = 0; j < pxy.size(); ++j) CHECK(pxy[j] == pi1(x)[j] + pi1(y)[j]);
  }

  // pi1(g^n) = n·pi1(g).
  const Element gen = el(h3, {2, -1}, {5});
  Element pow = identity(h3);
  for (int n = 1; n <= 8; ++n) {
    pow = multiply(h3, pow, gen);
    for (size_t j = 0; j < pow.a.size(); ++j) CHECK(pi1(pow)[j] == n * pi1(gen)[j]);
  }
}

TEST_CASE("dilate scales layers by t and t^2") {
  const GroupSpec h3 = preset_h3();
  const LayeredPoint p{{1.0, 1.0}, {1.0}};
  const LayeredPoint q = dilate(h3, 2.0, p);
  CHECK(q.a[0] == doctest::Approx(2.0));
  CHECK(q.a[1] == doctest::Approx(2.0));
  CHECK(q.z[0] == doctest::Approx(4.0));

  const LayeredPoint r = dilate(h3, 1.0, p);
  CHECK(r.a[0] == p.a[0]);
  CHECK(r.z[0] == p.z[0]);

  const LayeredPoint back = dilate(h3, 0.25, dilate(h3, 4.0, p));
  CHECK(back.a[0] == doctest::Approx(1.0));
  CHECK(back.z[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(dilate(h3, 0.0, p), InputError);
  CHECK_THROWS_AS(dilate(h3, -2.0, p), InputError);
}

TEST_CASE("grading dims and homogeneous dimension") {
  CHECK(grading_dims(preset_h3()).dims == std::vector<int>{2, 1});
  CHECK(grading_dims(preset_h5()).dims == std::vector<int>{4, 1});
  CHECK(grading_dims(preset_h3xz()).dims == std::vector<int>{3, 1});

  CHECK(homogeneous_dimension(grading_dims(preset_h3())) == 4);
  CHECK(homogeneous_dimension(grading_dims(preset_h5())) == 6);
  CHECK(homogeneous_dimension(grading_dims(preset_h3xz())) == 5);
  CHECK(homogeneous_dimension(GradingDims{{3}}) == 3);

  CHECK(homogeneous_dimension_jordan({{1, 2}}) == 3);
  CHECK(homogeneous_dimension_jordan({}) == 1);
  CHECK(homogeneous_dimension_jordan({{2, 1}}) == 4);
  CHECK_THROWS_AS(homogeneous_dimension_jordan({{0, 1}}), InputError);
}

TEST_CASE("group spec validation") {
  // Central layer must be spanned by the bracket image.
  std::vector Q2(2, std::vector(2, std::vector<long long>(2, 0)));
  Q2[0][0][1] = 1;  // second central coordinate untouched by any bracket
  CHECK_THROWS_AS(make_group_spec(2, 2, Q2), InputError);

  // Symmetric cocycle has zero bracket: cannot span a 1-dim central layer.
  std::vector Qs(1, std::vector(2, std::vector<long long>(2, 0)));
  Qs[0][0][1] = 1;
  Qs[0][1][0] = 1;
  CHECK_THROWS_AS(make_group_spec(2, 1, Qs), InputError);

  // Abelian groups are fine with c = 0.
  const GroupSpec z2 = make_group_spec(2, 0, {});
  CHECK(multiply(z2, el(z2, {1, 2}, {}), el(z2, {3, 4}, {})) == el(z2, {4, 6}, {}));

  CHECK_THROWS_AS(make_group_spec(0, 0, {}), InputError);
  CHECK_THROWS_AS(make_group_spec(2, 1, {}), InputError);
}

TEST_CASE("group spec text round trip") {
  for (const GroupSpec& g : {preset_h3(), preset_h5(), preset_h3xz()}) {
    const GroupSpec back = parse_group_spec(format_group_spec(g));
    CHECK(back.m == g.m);
    CHECK(back.c == g.c);
    CHECK(back.Q == g.Q);
  }

  const GroupSpec g = parse_group_spec("# Heisenberg\n2 1\n\n0 1 0 1  # the only entry\n");
  CHECK(g.m == 2);
  CHECK(g.Q == preset_h3().Q);

  CHECK_THROWS_AS(parse_group_spec(""), InputError);
  CHECK_THROWS_AS(parse_group_spec("2\n"), InputError);
  CHECK_THROWS_AS(parse_group_spec("2 1\n0 5 0 1\n"), InputError);
  CHECK_THROWS_AS(parse_group_spec("2 1\n0 1 0 1 9\n"), InputError);
  CHECK_THROWS_AS(preset_group("H7"), InputError);
}

TEST_CASE("element parsing and formatting") {
  const GroupSpec h3 = preset_h3();
  CHECK(parse_element(h3, "1 0 0") == el(h3, {1, 0}, {0}));
  CHECK(parse_element(h3, "  -2  5   7 ") == el(h3, {-2, 5}, {7}));
  CHECK(format_element(el(h3, {-2, 5}, {7})) == "-2 5 7");
  CHECK_THROWS_AS(parse_element(h3, "1 0"), InputError);
  CHECK_THROWS_AS(parse_element(h3, "1 0 0 0"), InputError);
  CHECK_THROWS_AS(parse_element(h3, "1 x 0"), InputError);

  // Central coordinates beyond 64 bits survive the round trip.
  const Element big = parse_element(h3, "0 0 123456789012345678901234567890");
  CHECK(format_element(big) == "0 0 123456789012345678901234567890");
}

TEST_CASE("embedding intertwines the lattice and stratified laws") {
  std::mt19937_64 rng(23);
  for (const GroupSpec& g : {preset_h3(), preset_h5(), preset_h3xz()}) {
    for (int i = 0; i < 60; ++i) {
      const Element x = random_element(g, rng, -12, 12);
      const Element y = random_element(g, rng, -12, 12);
      const RatLayeredPoint lhs = embed(g, multiply(g, x, y));
      const RatLayeredPoint rhs = stratified_multiply(g, embed(g, x), embed(g, y));
      CHECK(lhs.a == rhs.a);
      CHECK(lhs.z == rhs.z);
    }
  }

  // a^n b^n has normal form (n,n; n^2) and sweeps area n^2/2 around the chord.
  const GroupSpec h3 = preset_h3();
  Element g = identity(h3);
  const Element a = el(h3, {1, 0}, {0});
  const Element b = el(h3, {0, 1}, {0});
  for (int i = 0; i < 5; ++i) g = multiply(h3, g, a);
  for (int i = 0; i < 5; ++i) g = multiply(h3, g, b);
  CHECK(g == el(h3, {5, 5}, {25}));
  CHECK(embed(h3, g).z[0] == Rational(25, 2));
}

TEST_CASE("element keys separate distinct normal forms") {
  const GroupSpec h3 = preset_h3();
  std::mt19937_64 rng(29);
  std::vector<Element> sample;
  for (int i = 0; i < 200; ++i) sample.push_back(random_element(h3, rng, -50, 50));
  sample.push_back(parse_element(h3, "0 0 123456789012345678901234567890"));
  sample.push_back(parse_element(h3, "0 0 -123456789012345678901234567890"));
  for (size_t i = 0; i < sample.size(); ++i)
    for (size_t j = i + 1; j < sample.size(); ++j) {
      if (sample[i] == sample[j]) continue;
      REQUIRE(element_key(sample[i]) != element_key(sample[j]));
    }
  CHECK(element_key(sample[0]) == element_key(sample[0]));
}

TEST_CASE("horizontal overflow is reported, not wrapped") {
  const GroupSpec h3 = preset_h3();
  Element huge = identity(h3);
  huge.a[0] = (1ll << 62);
  CHECK_THROWS_AS(multiply(h3, huge, huge), std::overflow_error);
}
