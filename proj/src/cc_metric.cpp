#include "nilgeo/cc_metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "nilgeo/errors.hpp"
#include "nilgeo/format.hpp"
#include "nilgeo/parallel.hpp"
#include "nilgeo/polygon.hpp"

namespace nilgeo {

namespace {

// Must match the chunk width used by parallel_chunks.
constexpr std::size_t kChunk = 4096;

// Spheres above this size are thinned by a deterministic stride.
constexpr std::size_t kSphereSampleCap = 20000;

/** Bisection-ready view of a shape: cached halfplanes and bracket heights. */
struct CcEvaluator {
  enum class Prof { Flat, L1Closed, H5, General };

  const LimitShape& shape;
  bool h5 = false;
  bool flat = false;
  Prof prof = Prof::General;
  double beta = 0.0;  // bracket coefficient for the closed-form profile
  std::vector<double> hx, hy, hb;  // polygon halfplanes n.p <= b, b > 0
  double z_origin = 0.0;

  explicit CcEvaluator(const LimitShape& s) : shape(s) {
    if (s.group.c > 1) throw InputError("cc_distance: central rank above 1 unsupported");
    h5 = s.h5_standard;
    flat = s.bracket_scale == 0;
    beta = to_double(s.bracket_scale);
    prof = flat ? Prof::Flat
                : (h5 ? Prof::H5 : (s.l1_closed_form ? Prof::L1Closed : Prof::General));
    if (!h5) {
      for (const RatLine& e : edge_halfplanes(s.polygon)) {
        const double b = to_double(e.b);
        if (b <= 0) throw InputError("cc_distance: shape polygon does not contain the origin");
        hx.push_back(to_double(e.n.x));
        hy.push_back(to_double(e.n.y));
        hb.push_back(b);
      }
    }
    if (!flat) z_origin = h5 ? s.profile4(0, 0, 0, 0) : s.profile(0, 0);
  }

  double hgauge(const std::vector<double>& a) const {
    if (h5) return std::abs(a[0]) + std::abs(a[1]) + std::abs(a[2]) + std::abs(a[3]);
    double g = 0.0;
    for (std::size_t i = 0; i < hx.size(); ++i)
      g = std::max(g, (hx[i] * a[0] + hy[i] * a[1]) / hb[i]);
    return g;
  }

  double profile2(double x, double y) const {
    switch (prof) {
      case Prof::Flat: return 0.0;
      case Prof::L1Closed: return beta * z_profile_h3(x, y);
      default: return shape.profile(x, y);
    }
  }

  double profile_at(const std::vector<double>& u) const {
    return h5 ? z_profile_h5(u[0], u[1], u[2], u[3]) : profile2(u[0], u[1]);
  }

  /** 3-d body membership with a small absolute slack on the central bound. */
  bool inside3(double x, double y, double zabs) const {
    if (h5) throw std::logic_error("inside3 on a 4-d shape");
    double g = 0.0;
    for (std::size_t i = 0; i < hx.size(); ++i)
      g = std::max(g, (hx[i] * x + hy[i] * y) / hb[i]);
    if (g > 1.0 + 1e-12) return false;
    return zabs <= profile2(x, y) + 1e-12;
  }

  double distance(const LayeredPoint& p) const {
    const double hn = hgauge(p.a);
    const double zv = p.z.empty() ? 0.0 : std::abs(p.z[0]);
    if (zv == 0.0) return hn;
    if (flat || shape.z_max <= 0.0)
      throw InputError("cc_distance: central coordinate outside a flat shape");
    double lo = std::max(hn, std::sqrt(zv / shape.z_max));
    double hi = hn + std::sqrt(zv / z_origin);
    if (hi < lo) hi = lo;
    const auto member = [&](double t) {
      if (hn > t) return false;
      std::vector<double> u(p.a.size());
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = p.a[i] / t;
      return zv / (t * t) <= profile_at(u);
    };
    if (member(lo)) return lo;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (member(mid) ? hi : lo) = mid;
    }
    return hi;
  }
};

/** Spatial hash over points with a fixed cell size; nearest by ring search. */
struct PointHash {
  double cell = 1.0;
  std::vector<std::array<double, 3>> pts;
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> cells;
  int max_ring = 0;

  static std::uint64_t key(int ix, int iy, int iz) {
    const auto u = [](int v) { return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1fffff; };
    return u(ix) | (u(iy) << 21) | (u(iz) << 42);
  }

  PointHash(std::vector<std::array<double, 3>> points, double cell_size)
      : cell(cell_size), pts(std::move(points)) {
    if (pts.empty()) throw InputError("nearest-point search requires a non-empty set");
    double lo[3] = {pts[0][0], pts[0][1], pts[0][2]};
    double hi[3] = {lo[0], lo[1], lo[2]};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (int d = 0; d < 3; ++d) {
        lo[d] = std::min(lo[d], pts[i][d]);
        hi[d] = std::max(hi[d], pts[i][d]);
      }
      cells[key(idx(pts[i][0]), idx(pts[i][1]), idx(pts[i][2]))].push_back(
          static_cast<std::int32_t>(i));
    }
    double extent = 0.0;
    for (int d = 0; d < 3; ++d) extent = std::max(extent, hi[d] - lo[d]);
    max_ring = static_cast<int>(extent / cell) + 3;
  }

  int idx(double v) const { return static_cast<int>(std::floor(v / cell)); }

  double nearest_dist(const std::array<double, 3>& q) const {
    const int cx = idx(q[0]), cy = idx(q[1]), cz = idx(q[2]);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0;; ++r) {
      for (int ix = cx - r; ix <= cx + r; ++ix) {
        for (int iy = cy - r; iy <= cy + r; ++iy) {
          for (int iz = cz - r; iz <= cz + r; ++iz) {
            if (std::max({std::abs(ix - cx), std::abs(iy - cy), std::abs(iz - cz)}) != r)
              continue;
            const auto it = cells.find(key(ix, iy, iz));
            if (it == cells.end()) continue;
            for (const std::int32_t pi : it->second) {
              const double dx = pts[pi][0] - q[0];
              const double dy = pts[pi][1] - q[1];
              const double dz = pts[pi][2] - q[2];
              best = std::min(best, dx * dx + dy * dy + dz * dz);
            }
          }
        }
      }
      // any point in ring r+1 lies at least r cells away
      if (best <= static_cast<double>(r) * r * cell * cell) break;
      if (r > max_ring) {
        if (best < std::numeric_limits<double>::infinity()) break;
        throw std::logic_error("ring search exhausted a non-empty hash");
      }
    }
    return std::sqrt(best);
  }
};

/** Boundary mesh plus the index structures the Hausdorff sweep needs. */
struct MeshIndex {
  std::vector<std::array<double, 3>> verts;
  double resolution = 0.0;
  PointHash hash;

  MeshIndex(const LimitShape& shape, int mesh_resolution)
      : MeshIndex(shape_boundary_mesh(shape, mesh_resolution)) {}

  explicit MeshIndex(const TriMesh& mesh)
      : verts(mesh.vertices), resolution(longest_edge(mesh)),
        hash(mesh.vertices, std::max(longest_edge(mesh), 1e-6)) {}

  static double longest_edge(const TriMesh& mesh) {
    double worst = 0.0;
    for (const auto& t : mesh.triangles) {
      for (int e = 0; e < 3; ++e) {
        const auto& a = mesh.vertices[t[e]];
        const auto& b = mesh.vertices[t[(e + 1) % 3]];
        const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
        worst = std::max(worst, std::sqrt(dx * dx + dy * dy + dz * dz));
      }
    }
    return worst;
  }
};

double hausdorff_two_sided(const CcEvaluator& ev, const MeshIndex& mesh,
                           const std::vector<std::array<double, 3>>& cloud) {
  if (cloud.empty()) throw InputError("hausdorff: empty point cloud");
  double worst = 0.0;
  for (const auto& p : cloud) {
    if (ev.inside3(p[0], p[1], std::abs(p[2]))) continue;
    worst = std::max(worst, mesh.hash.nearest_dist(p));
  }
  double spacing = mesh.resolution;
  PointHash cloud_hash(cloud, std::max(spacing, 1e-6));
  for (const auto& v : mesh.verts) worst = std::max(worst, cloud_hash.nearest_dist(v));
  return worst;
}

std::array<double, 3> rescaled_point(const LayeredPoint& p, double n) {
  return {p.a[0] / n, p.a[1] / n, (p.z.empty() ? 0.0 : p.z[0]) / (n * n)};
}

}  // namespace

ConvergenceReport make_convergence_report(std::vector<ConvergenceReport::Row> rows) {
  int prev = 0;
  for (const auto& r : rows) {
    if (r.n <= prev) throw InputError("convergence report: radii must increase strictly");
    if (r.max_dev < 0 || r.mean_dev < 0 || r.hausdorff < 0)
      throw InputError("convergence report: deviations must be non-negative");
    if (r.mean_dev > r.max_dev + 1e-12)
      throw InputError("convergence report: mean deviation exceeds the max");
    prev = r.n;
  }
  return ConvergenceReport{std::move(rows)};
}

std::string convergence_report_csv(const ConvergenceReport& report) {
  std::string out = "n,max_dev,mean_dev,hausdorff\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.n);
    out += ',';
    out += fmt_double_sig12(r.max_dev);
    out += ',';
    out += fmt_double_sig12(r.mean_dev);
    out += ',';
    out += fmt_double_sig12(r.hausdorff);
    out += '\n';
  }
  return out;
}

double cc_distance(const LimitShape& shape, const LayeredPoint& p) {
  if (static_cast<int>(p.a.size()) != shape.group.m ||
      static_cast<int>(p.z.size()) != shape.group.c)
    throw InputError("cc_distance: point dimensions do not match the group");
  return CcEvaluator(shape).distance(p);
}

ConvergenceReport pansu_convergence(const GeneratingSet& omega, const LimitShape& shape,
                                    int nmax, int mesh_resolution, int workers) {
  if (nmax < 1) throw InputError("pansu_convergence: nmax must be at least 1");
  if (omega.group.m != shape.group.m || omega.group.c != shape.group.c)
    throw InputError("pansu_convergence: shape group does not match the generating set");
  const CcEvaluator ev(shape);
  EnumOptions opts;
  opts.workers = workers;
  const BallLevels levels = ball_levels(omega, nmax, opts);
  const int top = static_cast<int>(levels.levels.size()) - 1;
  if (top < nmax)
    throw BudgetError("pansu_convergence: enumeration truncated before nmax");

  const bool with_hausdorff = !shape.h5_standard;
  std::vector<std::array<double, 3>> cloud;
  std::unique_ptr<MeshIndex> mesh;
  if (with_hausdorff) mesh = std::make_unique<MeshIndex>(shape, mesh_resolution);

  std::vector<std::vector<LayeredPoint>> embedded(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    embedded[n].reserve(levels.levels[n].size());
    for (const Element& g : levels.levels[n])
      embedded[n].push_back(embed_real(omega.group, g));
  }

  std::vector<ConvergenceReport::Row> rows;
  for (int n = 1; n <= nmax; ++n) {
    const auto& sphere = embedded[n];
    const std::size_t stride =
        sphere.size() > kSphereSampleCap
            ? (sphere.size() + kSphereSampleCap - 1) / kSphereSampleCap
            : 1;
    std::vector<const LayeredPoint*> sample;
    for (std::size_t i = 0; i < sphere.size(); i += stride) sample.push_back(&sphere[i]);

    struct Agg {
      double mx = 0.0;
      KahanSum sum;
    };
    std::vector<Agg> aggs((sample.size() + kChunk - 1) / kChunk);
    parallel_chunks(sample.size(), workers,
                    [&](std::size_t ci, std::size_t b, std::size_t e) {
                      Agg a;
                      for (std::size_t i = b; i < e; ++i) {
                        const double d = ev.distance(*sample[i]);
                        const double dev = std::abs(static_cast<double>(n) / d - 1.0);
                        a.mx = std::max(a.mx, dev);
                        a.sum.add(dev);
                      }
                      aggs[ci] = a;
                    });
    ConvergenceReport::Row row;
    row.n = n;
    KahanSum total;
    for (const Agg& a : aggs) {
      row.max_dev = std::max(row.max_dev, a.mx);
      total.add(a.sum.value());
    }
    row.mean_dev = sample.empty() ? 0.0 : total.value() / static_cast<double>(sample.size());

    if (with_hausdorff) {
      cloud.clear();
      for (int k = 0; k <= n; ++k)
        for (const LayeredPoint& p : embedded[k])
          cloud.push_back(rescaled_point(p, static_cast<double>(n)));
      row.hausdorff = hausdorff_two_sided(ev, *mesh, cloud);
    }
    rows.push_back(row);
  }
  return make_convergence_report(std::move(rows));
}

HausdorffSample cloud_shape_hausdorff(const LimitShape& shape,
                                      const std::vector<std::array<double, 3>>& cloud,
                                      int mesh_resolution) {
  const CcEvaluator ev(shape);
  const MeshIndex mesh(shape, mesh_resolution);
  return {hausdorff_two_sided(ev, mesh, cloud), mesh.resolution};
}

HausdorffSample rescaled_ball_hausdorff(const GeneratingSet& omega, const LimitShape& shape,
                                        int n, int mesh_resolution) {
  if (n < 1) throw InputError("rescaled_ball_hausdorff: n must be at least 1");
  const CcEvaluator ev(shape);
  const MeshIndex mesh(shape, mesh_resolution);
  const BallLevels levels = ball_levels(omega, n);
  if (static_cast<int>(levels.levels.size()) - 1 < n)
    throw BudgetError("rescaled_ball_hausdorff: enumeration truncated before n");
  std::vector<std::array<double, 3>> cloud;
  for (const auto& level : levels.levels)
    for (const Element& g : level)
      cloud.push_back(rescaled_point(embed_real(omega.group, g), static_cast<double>(n)));
  return {hausdorff_two_sided(ev, mesh, cloud), mesh.resolution};
}

double bm_product_distance(double z0, double v, double x, double y, double z) {
  static const LimitShape kShape = [] {
    const GroupSpec h3 = preset_h3();
    return make_limit_shape(make_generating_set(h3, standard_generators(h3)));
  }();
  LayeredPoint p;
  p.a = {x, y};
  p.z = {z - v * z0};
  return std::abs(v) + cc_distance(kShape, p);
}

}  // namespace nilgeo
