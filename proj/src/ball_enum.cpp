#include "nilgeo/ball_enum.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "nilgeo/errors.hpp"
#include "nilgeo/format.hpp"
#include "nilgeo/parallel.hpp"
#include "nilgeo/quasinorm.hpp"
#include "nilgeo/rational.hpp"

namespace nilgeo {

namespace {

// Must match the chunk width used by parallel_chunks.
constexpr std::size_t kChunk = 4096;

// Rough per-element footprint: visited key + hash node + element storage,
// doubled when levels are retained by the caller.
std::uint64_t element_cost_bytes(const GroupSpec& g, bool retain_levels) {
  const std::uint64_t key = 8ull * g.m + 9ull * g.c;
  const std::uint64_t elem = 48 + 8ull * g.m + 32ull * g.c;
  return key + 80 + (retain_levels ? 2 : 1) * elem;
}

using LevelSink = std::function<void(int, const std::vector<Element>&)>;

GrowthTable bfs_levels(const GeneratingSet& omega, int nmax, const EnumOptions& opts,
                       const LevelSink& sink) {
  if (nmax < 0) throw InputError("ball enumeration: nmax must be non-negative");
  const GroupSpec& g = omega.group;
  const int workers = resolve_workers(opts.workers);
  const std::uint64_t per_elem = element_cost_bytes(g, sink != nullptr);

  GrowthTable table;
  std::unordered_set<std::string> visited;
  std::vector<Element> frontier{identity(g)};
  visited.insert(element_key(frontier[0]));
  table.ball.push_back(1);
  table.sphere.push_back(1);
  if (sink) sink(0, frontier);
  std::uint64_t bytes = per_elem;

  for (int n = 1; n <= nmax; ++n) {
    // Conservative projection: every candidate of this level might be new.
    const std::uint64_t candidates =
        static_cast<std::uint64_t>(frontier.size()) * omega.elems.size();
    if (bytes + candidates * per_elem > opts.memory_budget_bytes) {
      table.truncated = true;
      break;
    }

    const std::size_t nchunks = (frontier.size() + kChunk - 1) / kChunk;
    std::vector<std::vector<Element>> chunk_out(nchunks);
    parallel_chunks(frontier.size(), workers,
                    [&](std::size_t ci, std::size_t begin, std::size_t end) {
                      auto& out = chunk_out[ci];
                      out.reserve((end - begin) * omega.elems.size());
                      for (std::size_t i = begin; i < end; ++i)
                        for (const Element& s : omega.elems)
                          out.push_back(multiply(g, frontier[i], s));
                    });

    // Chunk-index merge order makes the visited set and the next frontier
    // independent of the worker count.
    std::vector<Element> next;
    for (auto& chunk : chunk_out) {
      for (Element& cand : chunk)
        if (visited.insert(element_key(cand)).second) next.push_back(std::move(cand));
      std::vector<Element>().swap(chunk);
    }
    if (next.empty()) break;

    table.ball.push_back(table.ball.back() + next.size());
    table.sphere.push_back(next.size());
    bytes += static_cast<std::uint64_t>(next.size()) * per_elem;
    if (sink) sink(n, next);
    frontier = std::move(next);
  }
  return table;
}

std::optional<int> forward_search(const GeneratingSet& omega, const Element& target, int cap) {
  const GroupSpec& g = omega.group;
  const std::string tkey = element_key(target);
  std::unordered_set<std::string> visited{element_key(identity(g))};
  std::vector<Element> frontier{identity(g)};
  for (int n = 1; n <= cap; ++n) {
    std::vector<Element> next;
    for (const Element& x : frontier)
      for (const Element& s : omega.elems) {
        Element y = multiply(g, x, s);
        std::string key = element_key(y);
        if (key == tkey) return n;
        if (visited.insert(std::move(key)).second) next.push_back(std::move(y));
      }
    if (next.empty()) return std::nullopt;
    frontier = std::move(next);
  }
  return std::nullopt;
}

std::optional<int> bidirectional_search(const GeneratingSet& omega, const Element& target,
                                        int cap) {
  const GroupSpec& g = omega.group;
  std::unordered_map<std::string, int> fwd{{element_key(identity(g)), 0}};
  std::unordered_map<std::string, int> bwd{{element_key(target), 0}};
  std::vector<Element> ffront{identity(g)};
  std::vector<Element> bfront{target};
  int rf = 0, rb = 0;
  int best = INT_MAX;

  // Any path of length L ≤ rf + rb has been detected as a meet, so stopping
  // once best ≤ rf + rb (or the cap is covered) yields the exact minimum.
  while (best > rf + rb && rf + rb < cap) {
    const bool expand_fwd = ffront.size() <= bfront.size();
    auto& mine = expand_fwd ? fwd : bwd;
    auto& other = expand_fwd ? bwd : fwd;
    auto& front = expand_fwd ? ffront : bfront;
    int& radius = expand_fwd ? rf : rb;

    std::vector<Element> next;
    for (const Element& x : front)
      for (const Element& s : omega.elems) {
        Element y = multiply(g, x, s);
        auto [it, inserted] = mine.try_emplace(element_key(y), radius + 1);
        if (!inserted) continue;
        const auto hit = other.find(it->first);
        if (hit != other.end()) best = std::min(best, radius + 1 + hit->second);
        next.push_back(std::move(y));
      }
    ++radius;
    if (next.empty()) break;
    front = std::move(next);
  }
  if (best <= cap) return best;
  return std::nullopt;
}

void validate_table(const GrowthTable& t) {
  if (t.ball.empty() || t.ball.size() != t.sphere.size())
    throw InputError("growth table: empty or mismatched rows");
  if (t.ball[0] != 1 || t.sphere[0] != 1)
    throw InputError("growth table: row 0 must be (1, 1)");
  for (size_t n = 1; n < t.ball.size(); ++n) {
    if (t.ball[n] <= t.ball[n - 1]) throw InputError("growth table: ball counts not increasing");
    if (t.ball[n] != t.ball[n - 1] + t.sphere[n])
      throw InputError("growth table: ball is not the cumulative sphere sum");
  }
}

}  // namespace

GeneratingSet make_generating_set(GroupSpec group, std::vector<Element> elems,
                                  int probe_radius) {
  if (elems.empty()) throw InputError("generating set: no elements");
  if (probe_radius < 1) throw InputError("generating set: probe radius must be positive");
  std::unordered_set<std::string> keys;
  for (const Element& e : elems) {
    if (static_cast<int>(e.a.size()) != group.m || static_cast<int>(e.z.size()) != group.c)
      throw InputError("generating set: element does not conform to the group");
    keys.insert(element_key(e));
  }
  for (const Element& e : elems)
    if (!keys.count(element_key(inverse(group, e))))
      throw InputError("generating set: not symmetric (an inverse is missing)");

  // Abelianization reach: the one-letter images already span the sublattice
  // reached at any probe radius, so rank-test them directly.
  std::vector<std::vector<Rational>> rows;
  for (const Element& e : elems) {
    std::vector<Rational> row(group.m);
    for (int i = 0; i < group.m; ++i) row[i] = e.a[i];
    rows.push_back(std::move(row));
  }
  if (matrix_rank(std::move(rows)) != group.m)
    throw InputError("generating set: does not span the abelianization");
  return GeneratingSet{std::move(group), std::move(elems)};
}

std::vector<Element> standard_generators(const GroupSpec& g) {
  std::vector<Element> out;
  out.reserve(2 * g.m);
  for (int i = 0; i < g.m; ++i)
    for (int s : {1, -1}) {
      Element e = identity(g);
      e.a[i] = s;
      out.push_back(std::move(e));
    }
  return out;
}

GrowthTable make_growth_table(std::vector<std::uint64_t> ball,
                              std::vector<std::uint64_t> sphere, bool truncated) {
  GrowthTable t{std::move(ball), std::move(sphere), truncated};
  validate_table(t);
  return t;
}

GrowthTable ball_sizes(const GeneratingSet& omega, int nmax, const EnumOptions& opts) {
  return bfs_levels(omega, nmax, opts, nullptr);
}

BallLevels ball_levels(const GeneratingSet& omega, int nmax, const EnumOptions& opts) {
  BallLevels out;
  const GrowthTable t = bfs_levels(
      omega, nmax, opts,
      [&](int, const std::vector<Element>& level) { out.levels.push_back(level); });
  out.truncated = t.truncated;
  return out;
}

std::optional<int> word_length(const GeneratingSet& omega, const Element& g, int cap) {
  if (cap < 0) throw InputError("word_length: cap must be non-negative");
  const GroupSpec& grp = omega.group;
  if (static_cast<int>(g.a.size()) != grp.m || static_cast<int>(g.z.size()) != grp.c)
    throw InputError("word_length: element does not conform to the group");
  if (g == identity(grp)) return 0;

  const NormValue qn = quasinorm_element(grp, default_quasinorm(grp), g);
  const bool far = !norm_leq(qn, norm_rational(8));
  return far ? bidirectional_search(omega, g, cap) : forward_search(omega, g, cap);
}

std::vector<std::pair<int, double>> folner_ratios(const GrowthTable& table) {
  validate_table(table);
  std::vector<std::pair<int, double>> out;
  out.reserve(table.ball.size());
  for (size_t n = 0; n < table.ball.size(); ++n)
    out.emplace_back(static_cast<int>(n),
                     static_cast<double>(table.sphere[n]) / static_cast<double>(table.ball[n]));
  return out;
}

std::vector<std::pair<int, double>> growth_ratio(const GrowthTable& table, int d) {
  validate_table(table);
  if (d < 1) throw InputError("growth_ratio: dimension must be positive");
  std::vector<std::pair<int, double>> out;
  for (size_t n = 1; n < table.ball.size(); ++n)
    out.emplace_back(static_cast<int>(n),
                     static_cast<double>(table.ball[n]) /
                         std::pow(static_cast<double>(n), static_cast<double>(d)));
  return out;
}

std::string growth_table_csv(const GrowthTable& table, int d) {
  validate_table(table);
  if (d < 1) throw InputError("growth_table_csv: dimension must be positive");
  std::string out = "n,ball,sphere,ratio_nd\n";
  for (size_t n = 0; n < table.ball.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += std::to_string(table.ball[n]);
    out += ',';
    out += std::to_string(table.sphere[n]);
    out += ',';
    if (n > 0)
      out += fmt_double_sig12(static_cast<double>(table.ball[n]) /
                              std::pow(static_cast<double>(n), static_cast<double>(d)));
    out += '\n';
  }
  if (table.truncated) out += "# truncated: memory budget exceeded\n";
  return out;
}

}  // namespace nilgeo
