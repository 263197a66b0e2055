#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "nilgeo/cc_metric.hpp"
#include "nilgeo/errors.hpp"
#include "nilgeo/quasinorm.hpp"

using namespace nilgeo;

namespace {

const GeneratingSet& h3_standard() {
  static const GeneratingSet omega = [] {
    const GroupSpec g = preset_h3();
    return make_generating_set(g, standard_generators(g));
  }();
  return omega;
}

const LimitShape& h3_shape() {
  static const LimitShape shape = make_limit_shape(h3_standard());
  return shape;
}

const GeneratingSet& z2_standard() {
  static const GeneratingSet omega = [] {
    const GroupSpec g = make_group_spec(2, 0, {}, "Z2");
    return make_generating_set(g, standard_generators(g));
  }();
  return omega;
}

}  // namespace

TEST_CASE("homogeneous distance pins on the standard shape") {
  const LimitShape& s = h3_shape();
  CHECK(cc_distance(s, {{0, 0}, {0}}) == 0.0);
  CHECK(cc_distance(s, {{1, 0}, {0}}) == 1.0);
  CHECK(cc_distance(s, {{0, 0}, {1}}) == doctest::Approx(4.0).epsilon(1e-9));
  // profile is 0 at the polygon corner, so any central part pushes past 1
  const double d = cc_distance(s, {{1, 0}, {0.01}});
  CHECK(d > 1.0001);
  CHECK(d == doctest::Approx(1.02).epsilon(1e-6));
}

TEST_CASE("homogeneous distance input validation") {
  CHECK_THROWS_AS(cc_distance(h3_shape(), {{1, 0, 0}, {0}}), InputError);
  CHECK_THROWS_AS(cc_distance(h3_shape(), {{1, 0}, {}}), InputError);
  LimitShape flat = h3_shape();
  flat.bracket_scale = 0;
  CHECK_THROWS_AS(cc_distance(flat, {{0, 0}, {1}}), InputError);
  LimitShape wide;
  wide.group.m = 2;
  wide.group.c = 2;
  CHECK_THROWS_AS(cc_distance(wide, {{0, 0}, {1, 1}}), InputError);
}

TEST_CASE("homogeneous distance satisfies the dilation scaling law") {
  const LimitShape& s = h3_shape();
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> box(-3.0, 3.0), tt(0.1, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const LayeredPoint p{{box(rng), box(rng)}, {box(rng)}};
    const double t = tt(rng);
    const double d = cc_distance(s, p);
    const double dt = cc_distance(s, {{p.a[0] * t, p.a[1] * t}, {p.z[0] * t * t}});
    worst = std::max(worst, std::abs(dt - t * d) / std::max(1.0, t * d));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("homogeneous distance is centrally symmetric") {
  const LimitShape& s = h3_shape();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const LayeredPoint p{{box(rng), box(rng)}, {box(rng)}};
    const LayeredPoint q{{-p.a[0], -p.a[1]}, {-p.z[0]}};
    CHECK(cc_distance(s, p) == cc_distance(s, q));
  }
}

TEST_CASE("horizontal gauge bounds the distance from below") {
  const LimitShape& s = h3_shape();
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double x = box(rng), y = box(rng);
    const double hn = std::abs(x) + std::abs(y);
    if (hn < 0.1) continue;
    const double zcap = hn * hn * s.profile(x / hn, y / hn);
    // central parts the extremal horizontal word can absorb leave equality
    CHECK(cc_distance(s, {{x, y}, {0.5 * zcap}}) == doctest::Approx(hn).epsilon(1e-9));
    CHECK(cc_distance(s, {{x, y}, {zcap}}) == doctest::Approx(hn).epsilon(1e-9));
    const double d = cc_distance(s, {{x, y}, {1.5 * zcap + 0.01}});
    CHECK(d > hn * (1.0 + 1e-9));
  }
}

TEST_CASE("distance and the max-type quasi-norm sandwich with one constant") {
  const LimitShape& s = h3_shape();
  const QuasiNormSpec spec =
      rescale_quasinorm(preset_h3(), {layer_norm_polygon(s.polygon), layer_norm_l1()}, 0);
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> box(-4.0, 4.0);
  double rmin = 1e300, rmax = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const LayeredPoint p{{box(rng), box(rng)}, {box(rng)}};
    if (std::abs(p.a[0]) + std::abs(p.a[1]) + std::abs(p.z[0]) < 1e-6) continue;
    const double r = cc_distance(s, p) / quasinorm(spec, p);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  // the rescaled quasi-norm is a certified lower bound; the ratio sup is 2,
  // approached by purely central points
  CHECK(rmin >= 1.0 - 1e-12);
  CHECK(rmax <= 2.0 + 1e-9);
  CHECK(std::max(rmax, 1.0 / rmin) <= 2.05);
}

TEST_CASE("deviation sweep shrinks along the radius and stays within bounds") {
  const ConvergenceReport rep = pansu_convergence(h3_standard(), h3_shape(), 30);
  REQUIRE(rep.rows.size() == 30);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    CHECK(r.n == static_cast<int>(i) + 1);
    CHECK(r.max_dev >= 0.0);
    CHECK(r.mean_dev >= 0.0);
    CHECK(r.mean_dev <= r.max_dev + 1e-12);
    CHECK(r.hausdorff > 0.0);
  }
  CHECK(rep.rows[29].max_dev < rep.rows[9].max_dev);
  CHECK(rep.rows[29].max_dev <= 0.2);
  CHECK(rep.rows[29].hausdorff < rep.rows[9].hausdorff);

  const std::string csv = convergence_report_csv(rep);
  std::istringstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 31);
  CHECK(csv.rfind("n,max_dev,mean_dev,hausdorff\n", 0) == 0);
}

TEST_CASE("deviation sweep is identical for every worker count") {
  const ConvergenceReport a = pansu_convergence(h3_standard(), h3_shape(), 12, 16, 1);
  const ConvergenceReport b = pansu_convergence(h3_standard(), h3_shape(), 12, 16, 4);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].max_dev == b.rows[i].max_dev);
    CHECK(a.rows[i].mean_dev == b.rows[i].mean_dev);
    CHECK(a.rows[i].hausdorff == b.rows[i].hausdorff);
  }
}

TEST_CASE("free abelian deviations vanish and the rescaled ball hugs its square") {
  const LimitShape shape = make_limit_shape(z2_standard());
  const ConvergenceReport rep = pansu_convergence(z2_standard(), shape, 20);
  for (const auto& r : rep.rows) CHECK(r.max_dev <= 2.0 / r.n);
  const HausdorffSample h = rescaled_ball_hausdorff(z2_standard(), shape, 20);
  CHECK(h.value <= 2.0 / 20.0);
  CHECK(h.resolution > 0.0);
}

TEST_CASE("rescaled ball distance decreases between radii 8 and 32") {
  const HausdorffSample h8 = rescaled_ball_hausdorff(h3_standard(), h3_shape(), 8);
  const HausdorffSample h32 = rescaled_ball_hausdorff(h3_standard(), h3_shape(), 32);
  CHECK(h32.value < h8.value);
  CHECK_THROWS_AS(rescaled_ball_hausdorff(h3_standard(), h3_shape(), 0), InputError);
}

TEST_CASE("continuous boundary sampling stays below the mesh resolution") {
  const TriMesh fine = shape_boundary_mesh(h3_shape(), 50);
  const HausdorffSample s = cloud_shape_hausdorff(h3_shape(), fine.vertices, 16);
  CHECK(s.value <= s.resolution);
  CHECK_THROWS_AS(cloud_shape_hausdorff(h3_shape(), {}, 16), InputError);
}

TEST_CASE("product distance pins and the unbounded gap between shears") {
  for (const double t : {1.0, 4.0, 16.0, 64.0}) {
    const double want = t + 4.0 * std::sqrt(t);
    const double d0 = bm_product_distance(0.0, t, 0.0, 0.0, t);
    const double d1 = bm_product_distance(1.0, t, 0.0, 0.0, t);
    CHECK(d0 == doctest::Approx(want).epsilon(1e-9));
    CHECK(d1 == t);
    CHECK(d0 - d1 == doctest::Approx(4.0 * std::sqrt(t)).epsilon(1e-9));
  }
}

TEST_CASE("convergence report validation rejects malformed rows") {
  using Row = ConvergenceReport::Row;
  CHECK_THROWS_AS(make_convergence_report({Row{2, 0, 0, 0}, Row{2, 0, 0, 0}}), InputError);
  CHECK_THROWS_AS(make_convergence_report({Row{1, -0.1, 0, 0}}), InputError);
  CHECK_THROWS_AS(make_convergence_report({Row{1, 0.1, 0.2, 0}}), InputError);
  const ConvergenceReport ok = make_convergence_report({Row{1, 0.5, 0.25, 0.125}});
  CHECK(convergence_report_csv(ok) == "n,max_dev,mean_dev,hausdorff\n1,0.5,0.25,0.125\n");
}
