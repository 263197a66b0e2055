#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilgeo/ball_enum.hpp"
#include "nilgeo/counterexamples.hpp"
#include "nilgeo/errors.hpp"
#include "nilgeo/group.hpp"

using namespace nilgeo;

TEST_CASE("central word length: exact small values") {
  CHECK(central_word_length(0) == 0);
  CHECK(central_word_length(1) == 4);
  CHECK(central_word_length(2) == 6);
  CHECK(central_word_length(3) == 8);
  CHECK(central_word_length(4) == 8);
  CHECK(central_word_length(5) == 10);
  CHECK(central_word_length(9) == 12);
  CHECK(central_word_length(16) == 16);
  CHECK(central_word_length(25) == 20);

  // square central heights cost exactly four times the root
  for (long long k = 1; k <= 7; ++k) CHECK(central_word_length(k * k) == 4 * k);
}

TEST_CASE("central word length: stays within the sandwich band") {
  for (long long n = 4; n <= 50; ++n) {
    const std::optional<int> len = central_word_length(n);
    REQUIRE(len.has_value());
    const double root = std::sqrt(static_cast<double>(n));
    CHECK(*len >= 3.0 * root);
    CHECK(*len <= 5.0 * root);
  }
  for (const long long n : {64LL, 81LL, 100LL}) {
    const std::optional<int> len = central_word_length(n);
    REQUIRE(len.has_value());
    const double root = std::sqrt(static_cast<double>(n));
    CHECK(*len >= 3.0 * root);
    CHECK(*len <= 5.0 * root);
  }
}

TEST_CASE("central word length: cap and validation") {
  CHECK(central_word_length(25, 10) == std::nullopt);
  CHECK(central_word_length(25, 20) == 20);
  CHECK_THROWS_AS(central_word_length(-1), InputError);
  CHECK_THROWS_AS(central_word_length(1, -1), InputError);
}

TEST_CASE("skew product generators: factor letters pay for the center") {
  const std::vector<Element> elems = skew_product_generators();
  REQUIRE(elems.size() == 8);
  for (const Element& e : elems) {
    const Element inv{{-e.a[0], -e.a[1], -e.a[2]}, {-e.z[0]}};
    CHECK(std::count(elems.begin(), elems.end(), inv) == 1);
  }
  const GeneratingSet skew = make_generating_set(preset_h3xz(), elems);

  // both test elements lie at distance exactly n over the skew set
  for (long long n = 1; n <= 4; ++n) {
    const Element up{{n, 0, 0}, {ZInt(n)}};
    const Element down{{n, 0, 0}, {ZInt(-n)}};
    CHECK(word_length(skew, up, static_cast<int>(n) + 2) == static_cast<int>(n));
    CHECK(word_length(skew, down, static_cast<int>(n) + 2) == static_cast<int>(n));
  }
}

TEST_CASE("gap witness: the two-route search matches the central reduction") {
  const std::optional<CentralGapWitness> w1 = bm_gap_witness(1);
  REQUIRE(w1.has_value());
  CHECK(w1->skew_length == 1);
  CHECK(w1->split_length == 5);
  CHECK(w1->gap == 4);

  const std::optional<CentralGapWitness> w4 = bm_gap_witness(4);
  REQUIRE(w4.has_value());
  CHECK(w4->skew_length == 4);
  CHECK(w4->split_length == 12);
  CHECK(w4->gap == 8);

  const std::optional<CentralGapWitness> w9 = bm_gap_witness(9);
  REQUIRE(w9.has_value());
  CHECK(w9->skew_length == 9);
  CHECK(w9->split_length == 21);
  CHECK(w9->gap == 12);

  for (const long long n : {1LL, 2LL, 3LL, 4LL, 9LL, 25LL})
    CHECK(bm_gap(n) == central_word_length(n));

  CHECK(bm_gap_witness(9, 5) == std::nullopt);
  CHECK_THROWS_AS(bm_gap_witness(0), InputError);
  CHECK_THROWS_AS(bm_gap(0), InputError);
}

TEST_CASE("gap scan: strictly increasing gaps at square radii") {
  const GapReport report = bm_gap_scan({1, 4, 9, 16, 25}, 9);
  REQUIRE(report.rows.size() == 5);
  const std::vector<int> gaps{4, 8, 12, 16, 20};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(report.rows[i].gap == gaps[i]);
    if (i > 0) CHECK(report.rows[i].gap > report.rows[i - 1].gap);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(report.rows[i].direct);
    CHECK(report.rows[i].skew_length == report.rows[i].n);
    CHECK(report.rows[i].split_length == report.rows[i].n + report.rows[i].gap);
  }
  CHECK_FALSE(report.rows[3].direct);
  CHECK_FALSE(report.rows[4].direct);
  CHECK(report.verdict.find("grows without bound") != std::string::npos);
  CHECK(report.verdict.find("20 at n = 25") != std::string::npos);

  const nlohmann::json j = nlohmann::json::parse(gap_report_json(report));
  REQUIRE(j["rows"].size() == 5);
  CHECK(j["rows"][0]["n"] == 1);
  CHECK(j["rows"][0]["gap"] == 4);
  CHECK(j["rows"][0]["direct"] == true);
  CHECK(j["rows"][0].contains("skew_length"));
  CHECK_FALSE(j["rows"][4].contains("skew_length"));
  CHECK(j.contains("verdict"));

  CHECK_THROWS_AS(bm_gap_scan({}, 0), InputError);
  CHECK_THROWS_AS(bm_gap_scan({4, 1}, 0), InputError);
  CHECK_THROWS_AS(bm_gap_scan({0}, 0), InputError);
  CHECK_THROWS_AS(bm_gap_scan({25}, 0, 10), BudgetError);
}

TEST_CASE("offset scan: the default grid and its minimum") {
  const std::vector<double> grid = default_z0_grid();
  REQUIRE(grid.size() == 41);
  CHECK(grid.front() == -1.5);
  CHECK(grid.back() == 1.5);
  CHECK(grid[20] == 0.0);

  const QuasinormScan s16 = bm_no_quasinorm(16, grid);
  REQUIRE(s16.offsets.size() == 41);
  CHECK(s16.offsets[s16.min_index].z0 == 0.0);
  CHECK(s16.offsets[s16.min_index].max_dev == doctest::Approx(16.0).epsilon(1e-9));
  for (const QuasinormOffsetRow& row : s16.offsets) {
    CHECK(row.increasing);
    CHECK(row.argmax_n == 16);
  }
  // the unshifted offset sees the deviation 4*sqrt(n) on both center signs
  REQUIRE(s16.per_n_at_min.size() == 16);
  for (const QuasinormPerN& r : s16.per_n_at_min) {
    const double expect = 4.0 * std::sqrt(static_cast<double>(r.n));
    CHECK(r.dev_plus == doctest::Approx(expect).epsilon(1e-9));
    CHECK(r.dev_minus == r.dev_plus);
  }
  CHECK(s16.verdict.find("no offset keeps") != std::string::npos);

  // the scan minimum doubles from nmax 16 to 64, matching sqrt growth
  const QuasinormScan s64 = bm_no_quasinorm(64, grid);
  CHECK(s64.offsets[s64.min_index].z0 == 0.0);
  const double ratio = s64.offsets[s64.min_index].max_dev / s16.offsets[s16.min_index].max_dev;
  CHECK(ratio == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("offset scan: the candidate offsets fail on one center sign") {
  // z0 = 1 cancels the upward element exactly but doubles the downward one
  const QuasinormScan up = bm_no_quasinorm(8, {1.0});
  REQUIRE(up.offsets.size() == 1);
  CHECK(up.offsets[0].max_dev == doctest::Approx(16.0).epsilon(1e-9));
  REQUIRE(up.per_n_at_min.size() == 8);
  for (const QuasinormPerN& r : up.per_n_at_min) {
    CHECK(r.dev_plus <= 1e-9);
    CHECK(r.dev_minus ==
          doctest::Approx(4.0 * std::sqrt(2.0 * static_cast<double>(r.n))).epsilon(1e-9));
  }

  // z0 = -1 is the mirror failure
  const QuasinormScan down = bm_no_quasinorm(8, {-1.0});
  REQUIRE(down.per_n_at_min.size() == 8);
  for (const QuasinormPerN& r : down.per_n_at_min) {
    CHECK(r.dev_minus <= 1e-9);
    CHECK(r.dev_plus ==
          doctest::Approx(4.0 * std::sqrt(2.0 * static_cast<double>(r.n))).epsilon(1e-9));
  }
}

TEST_CASE("offset scan: serialization and validation") {
  const QuasinormScan scan = bm_no_quasinorm(4, {-1.0, 0.0, 1.0});
  const nlohmann::json j = nlohmann::json::parse(quasinorm_scan_json(scan));
  CHECK(j["nmax"] == 4);
  REQUIRE(j["offsets"].size() == 3);
  CHECK(j["offsets"][1]["z0"] == 0.0);
  CHECK(j["offsets"][1]["increasing"] == true);
  CHECK(j["min_offset"]["z0"] == 0.0);
  REQUIRE(j["per_n_at_min"].size() == 4);
  CHECK(j["per_n_at_min"][0]["n"] == 1);
  CHECK(j.contains("verdict"));

  CHECK_THROWS_AS(bm_no_quasinorm(0, {0.0}), InputError);
  CHECK_THROWS_AS(bm_no_quasinorm(4, {}), InputError);
  CHECK_THROWS_AS(bm_no_quasinorm(4, {std::nan("")}), InputError);
}
