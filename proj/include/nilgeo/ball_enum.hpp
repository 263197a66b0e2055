#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilgeo/group.hpp"

namespace nilgeo {

/**
 * Symmetric generating set Ω for word-metric enumeration.
 *
 * Construction validates that Ω is inverse-closed and that its image in the
 * abelianization spans a full-rank sublattice, so BFS balls grow in every
 * horizontal direction.
 */
struct GeneratingSet {
  GroupSpec group;
  std::vector<Element> elems;
};

/**
 * probe_radius bounds the reach check in the abelianization; the image of the
 * radius-r ball spans the same sublattice for every r ≥ 1, so the check is
 * evaluated exactly rather than by sampled expansion.
 */
GeneratingSet make_generating_set(GroupSpec group, std::vector<Element> elems,
                                  int probe_radius = 6);

/** The 2m one-letter generators ±e_i of the horizontal lattice directions. */
std::vector<Element> standard_generators(const GroupSpec& g);

/**
 * Exact per-radius counts: ball[n] = |B(n)|, sphere[n] = |S(n)|.
 *
 * Convention S(0) = {identity}, so ball[n] = ball[n-1] + sphere[n] holds for
 * every row and ball[0] = 1. `truncated` marks a table cut short by the
 * memory budget; the retained rows are still exact.
 */
struct GrowthTable {
  std::vector<std::uint64_t> ball;
  std::vector<std::uint64_t> sphere;
  bool truncated = false;
};

/** Validates the GrowthTable invariants; throws InputError on violation. */
GrowthTable make_growth_table(std::vector<std::uint64_t> ball,
                              std::vector<std::uint64_t> sphere, bool truncated = false);

struct EnumOptions {
  int workers = 1;                                   // 0 = hardware concurrency
  std::uint64_t memory_budget_bytes = 8ull << 30;    // estimate, not an OS limit
};

/**
 * Breadth-first ball and sphere counts up to radius nmax.
 *
 * Level-synchronous expansion over a retained global visited set; chunked
 * frontier partitioning with index-ordered merges keeps counts bit-identical
 * for every worker count. When the projected footprint exceeds the memory
 * budget the completed prefix is returned with `truncated` set.
 */
GrowthTable ball_sizes(const GeneratingSet& omega, int nmax, const EnumOptions& opts = {});

/** Sphere elements by radius: levels[n] = S(n) in deterministic BFS order. */
struct BallLevels {
  std::vector<std::vector<Element>> levels;
  bool truncated = false;
};

BallLevels ball_levels(const GeneratingSet& omega, int nmax, const EnumOptions& opts = {});

/**
 * Minimal word length of g over Ω, or nullopt when it exceeds cap.
 *
 * Targets whose quasi-norm exceeds 8 are searched bidirectionally from both
 * endpoints, meeting in the middle; nearer targets use plain forward BFS.
 */
std::optional<int> word_length(const GeneratingSet& omega, const Element& g, int cap);

/** Per-radius Følner ratios |S(n)|/|B(n)|; row 0 is 1 by the S(0) convention. */
std::vector<std::pair<int, double>> folner_ratios(const GrowthTable& table);

/** Normalized growth |B(n)|/n^d for n ≥ 1; d is the homogeneous dimension. */
std::vector<std::pair<int, double>> growth_ratio(const GrowthTable& table, int d);

/**
 * CSV rows `n,ball,sphere,ratio_nd`; counts exact, ratio to 12 significant
 * digits, empty at n = 0. A truncated table gains a trailing `#` marker line.
 */
std::string growth_table_csv(const GrowthTable& table, int d);

}  // namespace nilgeo
