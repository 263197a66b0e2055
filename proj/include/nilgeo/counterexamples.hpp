#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nilgeo/group.hpp"

namespace nilgeo {

/**
 * Exact word length of the central element (0,0;n) of the discrete
 * Heisenberg group over its standard generators, or nullopt when the length
 * exceeds the search cap (cap = 0 picks one comfortably above 4*sqrt(n)).
 */
std::optional<int> central_word_length(long long n, int cap = 0);

/**
 * The eight-letter generating set of the product of the Heisenberg group
 * with an integer factor in which each factor letter also steps the center:
 * (v, x, y; z) letters (+-1, 0, 0; +-1), (0, +-1, 0; 0), (0, 0, +-1; 0).
 */
std::vector<Element> skew_product_generators();

/** Word lengths of (n; (0,0,n)) over the two product generating sets. */
struct CentralGapWitness {
  long long n = 0;
  /** Distance over the skew set; the factor letter pays for the center. */
  int skew_length = 0;
  /** Distance over the plain split set; factor and center costs add. */
  int split_length = 0;
  /** split_length - skew_length. */
  int gap = 0;
};

/**
 * Computes both word lengths at (n; (0,0,n)) by direct search, with no use
 * of the product structure. Returns nullopt when either search exceeds the
 * cap (cap = 0 picks one from the expected lengths n and n + 4*sqrt(n)).
 */
std::optional<CentralGapWitness> bm_gap_witness(long long n, int cap = 0);

/**
 * The distance gap between the two product metrics at (n; (0,0,n)).
 *
 * The factor cost n is shared, so the gap reduces to the central word
 * length of (0,0;n); for n <= 4 the reduction is re-verified against the
 * direct two-route search. Returns nullopt when the cap is exceeded.
 */
std::optional<int> bm_gap(long long n, int cap = 0);

struct GapRow {
  long long n = 0;
  int gap = 0;
  /** True when the row was re-verified by the direct two-route search. */
  bool direct = false;
  int skew_length = 0;
  int split_length = 0;
};

/** Gap experiment rows plus a one-line verdict. */
struct GapReport {
  std::vector<GapRow> rows;
  std::string verdict;
};

/**
 * Evaluates the gap at the given radii (strictly increasing, positive) and
 * re-verifies rows with n <= direct_max by the direct two-route search.
 * A search that exceeds its cap aborts the scan with BudgetError.
 */
GapReport bm_gap_scan(const std::vector<long long>& radii, long long direct_max,
                      int cap = 0);

std::string gap_report_json(const GapReport& report);

/** Deviation profile of one candidate offset. */
struct QuasinormOffsetRow {
  double z0 = 0.0;
  /** Max over n <= nmax of the deviation at (n; (0,0,+-n)). */
  double max_dev = 0.0;
  long long argmax_n = 0;
  /** True when the per-n deviation climbs strictly through the whole scan. */
  bool increasing = false;
};

struct QuasinormPerN {
  long long n = 0;
  double dev_plus = 0.0;
  double dev_minus = 0.0;
};

/** Offset scan results plus the per-n profile of the best offset. */
struct QuasinormScan {
  long long nmax = 0;
  std::vector<QuasinormOffsetRow> offsets;
  /** Index of the offset with the smallest max deviation (first on ties). */
  std::size_t min_index = 0;
  std::vector<QuasinormPerN> per_n_at_min;
  std::string verdict;
};

/** 41 evenly spaced offsets spanning [-1.5, 1.5]. */
std::vector<double> default_z0_grid();

/**
 * Tests whether any single central offset z0 keeps the sheared product
 * distance within a bounded band of the word length n at the test elements
 * (n; (0,0,n)) and (n; (0,0,-n)). Every offset fails: the scan records, per
 * offset, the max deviation over n <= nmax and whether it is still climbing
 * at the scan edge; the best offset's deviation grows like 4*sqrt(n).
 */
QuasinormScan bm_no_quasinorm(long long nmax, const std::vector<double>& z0_grid);

std::string quasinorm_scan_json(const QuasinormScan& scan);

}  // namespace nilgeo
