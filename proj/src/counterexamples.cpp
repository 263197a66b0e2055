#include "nilgeo/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "nilgeo/ball_enum.hpp"
#include "nilgeo/cc_metric.hpp"
#include "nilgeo/errors.hpp"
#include "nilgeo/format.hpp"

namespace nilgeo {

namespace {

// Direct-route self-verification bound for bm_gap.
constexpr long long kSelfVerifyMax = 4;

int central_cap(long long n) {
  return 4 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + 8;
}

const GeneratingSet& heisenberg_set() {
  static const GeneratingSet omega = [] {
    GroupSpec g = preset_h3();
    return make_generating_set(g, standard_generators(g));
  }();
  return omega;
}

const GeneratingSet& skew_set() {
  static const GeneratingSet omega =
      make_generating_set(preset_h3xz(), skew_product_generators());
  return omega;
}

const GeneratingSet& split_set() {
  static const GeneratingSet omega = [] {
    GroupSpec g = preset_h3xz();
    return make_generating_set(g, standard_generators(g));
  }();
  return omega;
}

Element product_target(long long n) { return Element{{n, 0, 0}, {ZInt(n)}}; }

}  // namespace

std::optional<int> central_word_length(long long n, int cap) {
  if (n < 0) throw InputError("central_word_length: n must be non-negative");
  if (cap < 0) throw InputError("central_word_length: cap must be non-negative");
  if (n == 0) return 0;
  const int limit = cap > 0 ? cap : central_cap(n);
  return word_length(heisenberg_set(), Element{{0, 0}, {ZInt(n)}}, limit);
}

std::vector<Element> skew_product_generators() {
  std::vector<Element> elems;
  for (const long long v : {1LL, -1LL})
    for (const long long z : {1LL, -1LL}) elems.push_back(Element{{v, 0, 0}, {ZInt(z)}});
  for (const long long s : {1LL, -1LL}) {
    elems.push_back(Element{{0, s, 0}, {ZInt(0)}});
    elems.push_back(Element{{0, 0, s}, {ZInt(0)}});
  }
  return elems;
}

std::optional<CentralGapWitness> bm_gap_witness(long long n, int cap) {
  if (n < 1) throw InputError("bm_gap_witness: n must be positive");
  if (cap < 0) throw InputError("bm_gap_witness: cap must be non-negative");
  const int skew_cap = cap > 0 ? cap : static_cast<int>(n) + 2;
  const int split_cap = cap > 0 ? cap : static_cast<int>(n) + central_cap(n);
  const Element target = product_target(n);
  const std::optional<int> skew = word_length(skew_set(), target, skew_cap);
  if (!skew) return std::nullopt;
  const std::optional<int> split = word_length(split_set(), target, split_cap);
  if (!split) return std::nullopt;
  return CentralGapWitness{n, *skew, *split, *split - *skew};
}

std::optional<int> bm_gap(long long n, int cap) {
  if (n < 1) throw InputError("bm_gap: n must be positive");
  const std::optional<int> len = central_word_length(n, cap);
  if (!len) return std::nullopt;
  if (n <= kSelfVerifyMax) {
    const std::optional<CentralGapWitness> w = bm_gap_witness(n, cap);
    if (!w) return std::nullopt;
    // the factor cost cancels in the gap, leaving the central word length
    if (w->skew_length != n || w->gap != *len)
      throw std::logic_error("bm_gap: direct search contradicts the product identity");
  }
  return len;
}

GapReport bm_gap_scan(const std::vector<long long>& radii, long long direct_max, int cap) {
  if (radii.empty()) throw InputError("bm_gap_scan: at least one radius required");
  long long prev = 0;
  for (const long long n : radii) {
    if (n <= prev) throw InputError("bm_gap_scan: radii must be strictly increasing and positive");
    prev = n;
  }
  GapReport report;
  for (const long long n : radii) {
    const std::optional<int> gap = bm_gap(n, cap);
    if (!gap) throw BudgetError("bm_gap_scan: search cap exceeded at n = " + std::to_string(n));
    GapRow row{n, *gap, false, 0, 0};
    if (n <= direct_max) {
      const std::optional<CentralGapWitness> w = bm_gap_witness(n, cap);
      if (!w) throw BudgetError("bm_gap_scan: direct search cap exceeded at n = " + std::to_string(n));
      if (w->gap != *gap)
        throw std::logic_error("bm_gap_scan: direct search contradicts the product identity");
      row.direct = true;
      row.skew_length = w->skew_length;
      row.split_length = w->split_length;
    }
    report.rows.push_back(row);
  }
  bool growing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    growing = growing && report.rows[i].gap > report.rows[i - 1].gap;
  if (growing) {
    report.verdict = "the gap between the two product metrics grows without bound: " +
                     std::to_string(report.rows.front().gap) + " at n = " +
                     std::to_string(report.rows.front().n) + " up to " +
                     std::to_string(report.rows.back().gap) + " at n = " +
                     std::to_string(report.rows.back().n);
  } else {
    report.verdict = "inconclusive: the gap is not monotone on the sampled radii";
  }
  return report;
}

std::string gap_report_json(const GapReport& report) {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const GapRow& r : report.rows) {
    nlohmann::ordered_json rec;
    rec["n"] = r.n;
    rec["gap"] = r.gap;
    rec["direct"] = r.direct;
    if (r.direct) {
      rec["skew_length"] = r.skew_length;
      rec["split_length"] = r.split_length;
    }
    j["rows"].push_back(std::move(rec));
  }
  j["verdict"] = report.verdict;
  return j.dump(2) + "\n";
}

std::vector<double> default_z0_grid() {
  std::vector<double> grid;
  grid.reserve(41);
  for (int i = 0; i <= 40; ++i) grid.push_back(-1.5 + 3.0 * i / 40.0);
  return grid;
}

QuasinormScan bm_no_quasinorm(long long nmax, const std::vector<double>& z0_grid) {
  if (nmax < 1) throw InputError("bm_no_quasinorm: nmax must be positive");
  if (z0_grid.empty()) throw InputError("bm_no_quasinorm: offset grid must be non-empty");
  for (const double z0 : z0_grid)
    if (!std::isfinite(z0)) throw InputError("bm_no_quasinorm: offsets must be finite");

  QuasinormScan scan;
  scan.nmax = nmax;
  const auto deviations = [&](double z0, long long n) {
    const double v = static_cast<double>(n);
    const double dp = std::fabs(bm_product_distance(z0, v, 0.0, 0.0, v) - v);
    const double dm = std::fabs(bm_product_distance(z0, v, 0.0, 0.0, -v) - v);
    return std::pair<double, double>(dp, dm);
  };
  for (const double z0 : z0_grid) {
    QuasinormOffsetRow row{z0, 0.0, 0, true};
    double prev = -1.0;
    for (long long n = 1; n <= nmax; ++n) {
      const auto [dp, dm] = deviations(z0, n);
      const double dev = std::max(dp, dm);
      if (dev > row.max_dev) {
        row.max_dev = dev;
        row.argmax_n = n;
      }
      row.increasing = row.increasing && dev > prev;
      prev = dev;
    }
    if (scan.offsets.empty() || row.max_dev < scan.offsets[scan.min_index].max_dev)
      scan.min_index = scan.offsets.size();
    scan.offsets.push_back(row);
  }
  for (long long n = 1; n <= nmax; ++n) {
    const auto [dp, dm] = deviations(scan.offsets[scan.min_index].z0, n);
    scan.per_n_at_min.push_back(QuasinormPerN{n, dp, dm});
  }
  const QuasinormOffsetRow& best = scan.offsets[scan.min_index];
  bool all_climbing = true;
  for (const QuasinormOffsetRow& row : scan.offsets)
    all_climbing = all_climbing && row.increasing && row.argmax_n == nmax;
  if (all_climbing) {
    scan.verdict = "no offset keeps the sheared distance within a bounded band: the best "
                   "offset z0 = " + fmt_double_shortest(best.z0) + " still deviates by " +
                   fmt_double_shortest(best.max_dev) + " at n = " + std::to_string(nmax) +
                   " and every offset's deviation is still climbing";
  } else {
    scan.verdict = "inconclusive: some offset's deviation stopped climbing before n = " +
                   std::to_string(nmax);
  }
  return scan;
}

std::string quasinorm_scan_json(const QuasinormScan& scan) {
  nlohmann::ordered_json j;
  j["nmax"] = scan.nmax;
  j["offsets"] = nlohmann::ordered_json::array();
  for (const QuasinormOffsetRow& r : scan.offsets) {
    nlohmann::ordered_json rec;
    rec["z0"] = r.z0;
    rec["max_dev"] = r.max_dev;
    rec["argmax_n"] = r.argmax_n;
    rec["increasing"] = r.increasing;
    j["offsets"].push_back(std::move(rec));
  }
  j["min_offset"] = {{"z0", scan.offsets[scan.min_index].z0},
                     {"max_dev", scan.offsets[scan.min_index].max_dev}};
  j["per_n_at_min"] = nlohmann::ordered_json::array();
  for (const QuasinormPerN& r : scan.per_n_at_min) {
    nlohmann::ordered_json rec;
    rec["n"] = r.n;
    rec["dev_plus"] = r.dev_plus;
    rec["dev_minus"] = r.dev_minus;
    j["per_n_at_min"].push_back(std::move(rec));
  }
  j["verdict"] = scan.verdict;
  return j.dump(2) + "\n";
}

}  // namespace nilgeo
