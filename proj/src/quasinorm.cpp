#include "nilgeo/quasinorm.hpp"

#include <cmath>

#include "nilgeo/errors.hpp"

namespace nilgeo {

namespace {

// Smallest power-of-two rational u ≥ √r found by bisection; exact certificate u² ≥ r.
Rational rational_sqrt_upper(const Rational& r) {
  if (r <= 0) return 0;
  Rational hi = 1;
  while (hi * hi < r) hi *= 2;
  Rational lo = 0;
  for (int i = 0; i < 80; ++i) {
    const Rational mid = (lo + hi) / 2;
    if (mid * mid >= r)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Vertex set of the unit ball for polytope norms; empty for weighted-Euclidean.
std::vector<std::vector<Rational>> unit_ball_vertices(const LayerNorm& n, int dim) {
  std::vector<std::vector<Rational>> verts;
  switch (n.kind) {
    case LayerNormKind::L1:
      for (int i = 0; i < dim; ++i)
        for (int s : {1, -1}) {
          std::vector<Rational> v(dim, Rational(0));
          v[i] = s;
          verts.push_back(std::move(v));
        }
      break;
    case LayerNormKind::Polygon:
      for (const RatPt2& v : n.polygon.vertices) verts.push_back({v.x, v.y});
      break;
    case LayerNormKind::WeightedEuclidean:
      break;
  }
  return verts;
}

// Certified rational upper bound for ‖x‖₂ ≤ u·‖x‖₁ over the norm's unit ball
// directions, i.e. u ≥ max_i ‖e_i‖₂ for the central layer norm.
Rational central_norm_l1_bound(const LayerNorm& n, int dim) {
  switch (n.kind) {
    case LayerNormKind::L1:
      return 1;
    case LayerNormKind::Polygon: {
      Rational best = 0;
      for (int i = 0; i < dim; ++i) {
        std::vector<Rational> e(dim, Rational(0));
        e[i] = 1;
        const NormValue v = layer_norm_value(n, e);
        const Rational val = v.is_sqrt ? rational_sqrt_upper(v.v) : v.v;
        if (val > best) best = val;
      }
      return best;
    }
    case LayerNormKind::WeightedEuclidean: {
      Rational wmax = 0;
      for (const Rational& w : n.weights)
        if (w > wmax) wmax = w;
      return rational_sqrt_upper(wmax);
    }
  }
  return 1;
}

}  // namespace

LayerNorm layer_norm_l1() { return LayerNorm{LayerNormKind::L1, {}, {}}; }

LayerNorm layer_norm_polygon(PolygonalNorm p) {
  return LayerNorm{LayerNormKind::Polygon, std::move(p), {}};
}

LayerNorm layer_norm_weighted(std::vector<Rational> weights) {
  if (weights.empty()) throw InputError("weighted layer norm: need at least one weight");
  for (const Rational& w : weights)
    if (w <= 0) throw InputError("weighted layer norm: weights must be positive");
  return LayerNorm{LayerNormKind::WeightedEuclidean, {}, std::move(weights)};
}

NormValue layer_norm_value(const LayerNorm& n, const std::vector<Rational>& x) {
  switch (n.kind) {
    case LayerNormKind::L1: {
      Rational s = 0;
      for (const Rational& v : x) s += abs(v);
      return norm_rational(s);
    }
    case LayerNormKind::Polygon:
      if (x.size() != 2) throw InputError("polygonal layer norm requires a 2-d layer");
      return norm_rational(gauge(n.polygon, {x[0], x[1]}));
    case LayerNormKind::WeightedEuclidean: {
      if (x.size() != n.weights.size())
        throw InputError("weighted layer norm: dimension mismatch");
      Rational s = 0;
      for (size_t i = 0; i < x.size(); ++i) s += n.weights[i] * x[i] * x[i];
      return norm_sqrt(s);
    }
  }
  throw std::logic_error("unreachable layer norm kind");
}

double layer_norm_value(const LayerNorm& n, const std::vector<double>& x) {
  switch (n.kind) {
    case LayerNormKind::L1: {
      double s = 0;
      for (double v : x) s += std::abs(v);
      return s;
    }
    case LayerNormKind::Polygon: {
      if (x.size() != 2) throw InputError("polygonal layer norm requires a 2-d layer");
      double best = 0;
      for (const RatLine& l : edge_halfplanes(n.polygon)) {
        const double r = (to_double(l.n.x) * x[0] + to_double(l.n.y) * x[1]) / to_double(l.b);
        if (r > best) best = r;
      }
      return best;
    }
    case LayerNormKind::WeightedEuclidean: {
      if (x.size() != n.weights.size())
        throw InputError("weighted layer norm: dimension mismatch");
      double s = 0;
      for (size_t i = 0; i < x.size(); ++i) s += to_double(n.weights[i]) * x[i] * x[i];
      return std::sqrt(s);
    }
  }
  throw std::logic_error("unreachable layer norm kind");
}

QuasiNormSpec make_quasinorm_spec(std::vector<LayerNorm> layer_norms,
                                  std::vector<Rational> lambdas) {
  if (layer_norms.empty() || layer_norms.size() != lambdas.size())
    throw InputError("quasi-norm spec: need one norm and one λ per layer");
  if (lambdas[0] != 1) throw InputError("quasi-norm spec: λ₁ must be 1");
  for (const Rational& l : lambdas)
    if (l <= 0) throw InputError("quasi-norm spec: λ factors must be positive");
  return QuasiNormSpec{std::move(layer_norms), std::move(lambdas)};
}

double quasinorm(const QuasiNormSpec& spec, const LayeredPoint& p) {
  if (spec.layer_norms.empty()) throw InputError("quasi-norm: empty spec");
  double best = layer_norm_value(spec.layer_norms[0], p.a);
  if (spec.layer_norms.size() > 1) {
    const double v2 = to_double(spec.lambdas[1]) * layer_norm_value(spec.layer_norms[1], p.z);
    best = std::max(best, std::sqrt(v2));
  }
  return best;
}

NormValue quasinorm_exact(const QuasiNormSpec& spec, const RatLayeredPoint& p) {
  const NormValue v1 = layer_norm_value(spec.layer_norms[0], p.a);  // λ₁ = 1
  if (spec.layer_norms.size() == 1) return v1;
  const NormValue n2 = layer_norm_value(spec.layer_norms[1], p.z);
  if (n2.is_sqrt)
    throw InputError("quasinorm_exact: central layer norm must be rational-valued");
  // (λ₂‖z‖)^{1/2}
  return norm_max(v1, norm_sqrt(spec.lambdas[1] * n2.v));
}

NormValue quasinorm_element(const GroupSpec& g, const QuasiNormSpec& spec, const Element& x) {
  return quasinorm_exact(spec, embed(g, x));
}

QuasiNormSpec rescale_quasinorm(const GroupSpec& g, std::vector<LayerNorm> layer_norms,
                                const Rational& epsilon) {
  if (epsilon < 0) throw InputError("rescale_quasinorm: ε must be non-negative");
  if (g.c == 0) {
    if (layer_norms.size() != 1)
      throw InputError("rescale_quasinorm: abelian groups have a single layer");
    return make_quasinorm_spec(std::move(layer_norms), {Rational(1)});
  }
  if (layer_norms.size() != 2)
    throw InputError("rescale_quasinorm: 2-step groups need exactly two layer norms");

  // C₂ = max ‖½B(u,v)‖₂ over unit-norm u, v. A bilinear form on a product of
  // polytopes attains its maximum at vertex pairs; for weighted-Euclidean
  // horizontal norms we fall back to a certified upper bound through ℓ¹.
  const LayerNorm& h = layer_norms[0];
  const LayerNorm& cn = layer_norms[1];
  const Rational central_bound = central_norm_l1_bound(cn, g.c);

  auto half_bracket_norm = [&](const std::vector<Rational>& u,
                               const std::vector<Rational>& v) {
    std::vector<Rational> w(g.c, Rational(0));
    for (int k = 0; k < g.c; ++k) {
      Rational acc = 0;
      for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j) {
          const long long q = g.Q[k][i][j];
          if (q == 0) continue;
          acc += Rational(q) * (u[i] * v[j] - u[j] * v[i]);
        }
      w[k] = acc / 2;
    }
    const NormValue nv = layer_norm_value(cn, w);
    return nv.is_sqrt ? rational_sqrt_upper(nv.v) : nv.v;
  };

  Rational c2 = 0;
  const auto verts = unit_ball_vertices(h, g.m);
  if (!verts.empty()) {
    for (const auto& u : verts)
      for (const auto& v : verts) {
        const Rational val = half_bracket_norm(u, v);
        if (val > c2) c2 = val;
      }
  } else {
    // ‖u‖_W ≤ 1 implies |u_i| ≤ 1/√w_i; bound ½|B| entrywise through ℓ¹ caps.
    std::vector<Rational> cap(g.m);
    for (int i = 0; i < g.m; ++i) cap[i] = rational_sqrt_upper(Rational(1) / h.weights[i]);
    Rational entry_sum = 0;
    for (int k = 0; k < g.c; ++k)
      for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j) {
          const long long b = g.Q[k][i][j] - g.Q[k][j][i];
          if (b != 0) entry_sum += abs(Rational(b)) / 2 * cap[i] * cap[j];
        }
    c2 = entry_sum * central_bound;
  }
  if (c2 == 0) throw InputError("rescale_quasinorm: degenerate bracket for the given norms");

  // Sufficient condition for the clean triangle inequality under the
  // stratified law: 2·s·t ≥ λ₂‖½B(a,a')‖ whenever s ≥ ‖a‖ and t ≥ ‖a'‖,
  // i.e. λ₂·C₂ ≤ 2. This certifies slack 0, hence any requested ε ≥ 0.
  const Rational lambda2 = Rational(2) / c2;
  return make_quasinorm_spec(std::move(layer_norms), {Rational(1), lambda2});
}

QuasiNormSpec default_quasinorm(const GroupSpec& g) {
  std::vector<LayerNorm> norms;
  norms.push_back(layer_norm_l1());
  if (g.c > 0) norms.push_back(layer_norm_l1());
  return rescale_quasinorm(g, std::move(norms), 0);
}

}  // namespace nilgeo
