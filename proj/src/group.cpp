#include "nilgeo/group.hpp"

#include <climits>
#include <cstring>
#include <sstream>

namespace nilgeo {

namespace {

long long checked_add(long long x, long long y) {
  long long r;
  if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("horizontal coordinate overflow");
  return r;
}

long long checked_neg(long long x) {
  long long r;
  if (__builtin_sub_overflow(0ll, x, &r)) throw std::overflow_error("horizontal coordinate overflow");
  return r;
}

void check_conforms(const GroupSpec& g, const Element& x, const char* who) {
  if (static_cast<int>(x.a.size()) != g.m || static_cast<int>(x.z.size()) != g.c)
    throw InputError(std::string(who) + ": element does not conform to the group's ranks");
}

// Q_k(u, v) summed over the sparse support of layer k.
ZInt cocycle_eval(const GroupSpec& g, int k, const std::vector<long long>& u,
                  const std::vector<long long>& v) {
  ZInt acc = 0;
  const auto& qk = g.Q[k];
  for (int i = 0; i < g.m; ++i) {
    if (u[i] == 0) continue;
    for (int j = 0; j < g.m; ++j) {
      const long long q = qk[i][j];
      if (q == 0 || v[j] == 0) continue;
      acc += ZInt(u[i]) * v[j] * q;
    }
  }
  return acc;
}

int bracket_rank(const GroupSpec& g) {
  // Rational-rank of the (m choose 2) × c matrix of bracket values B(e_i, e_j).
  std::vector<std::vector<Rational>> rows;
  for (int i = 0; i < g.m; ++i)
    for (int j = i + 1; j < g.m; ++j) {
      std::vector<Rational> row(g.c);
      bool nonzero = false;
      for (int k = 0; k < g.c; ++k) {
        row[k] = Rational(g.Q[k][i][j]) - g.Q[k][j][i];
        nonzero = nonzero || row[k] != 0;
      }
      if (nonzero) rows.push_back(std::move(row));
    }
  return matrix_rank(std::move(rows));
}

}  // namespace

GroupSpec make_group_spec(int m, int c, std::vector<std::vector<std::vector<long long>>> Q,
                          std::string name) {
  if (m < 1) throw InputError("group spec: horizontal rank m must be positive");
  if (c < 0) throw InputError("group spec: central rank c must be non-negative");
  if (static_cast<int>(Q.size()) != c)
    throw InputError("group spec: cocycle must have one m×m matrix per central coordinate");
  for (const auto& qk : Q) {
    if (static_cast<int>(qk.size()) != m)
      throw InputError("group spec: cocycle matrix is not m×m");
    for (const auto& row : qk)
      if (static_cast<int>(row.size()) != m)
        throw InputError("group spec: cocycle matrix is not m×m");
  }
  GroupSpec g;
  g.m = m;
  g.c = c;
  g.Q = std::move(Q);
  g.name = std::move(name);
  if (c > 0 && bracket_rank(g) != c)
    throw InputError("group spec: bracket image does not span the central layer");
  return g;
}

GroupSpec preset_h3() {
  std::vector Q(1, std::vector(2, std::vector<long long>(2, 0)));
  Q[0][0][1] = 1;
  return make_group_spec(2, 1, std::move(Q), "H3");
}

GroupSpec preset_h5() {
  std::vector Q(1, std::vector(4, std::vector<long long>(4, 0)));
  Q[0][0][1] = 1;
  Q[0][2][3] = 1;
  return make_group_spec(4, 1, std::move(Q), "H5");
}

GroupSpec preset_h3xz() {
  std::vector Q(1, std::vector(3, std::vector<long long>(3, 0)));
  Q[0][1][2] = 1;
  return make_group_spec(3, 1, std::move(Q), "H3xZ");
}

GroupSpec preset_group(const std::string& name) {
  if (name == "H3") return preset_h3();
  if (name == "H5") return preset_h5();
  if (name == "H3xZ") return preset_h3xz();
  throw InputError("unknown group preset: '" + name + "' (expected H3, H5, or H3xZ)");
}

GroupSpec parse_group_spec(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  int m = 0, c = 0;
  std::vector<std::vector<std::vector<long long>>> Q;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (!have_header) {
      if (!(ls >> m >> c)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw InputError("group file line " + std::to_string(lineno) + ": expected header 'm c'");
      }
      std::string extra;
      if (ls >> extra)
        throw InputError("group file line " + std::to_string(lineno) + ": trailing tokens after header");
      if (m < 1 || c < 0)
        throw InputError("group file header: need m ≥ 1 and c ≥ 0");
      Q.assign(c, std::vector(m, std::vector<long long>(m, 0)));
      have_header = true;
      continue;
    }
    int i, j, k;
    long long value;
    if (!(ls >> i >> j >> k >> value)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw InputError("group file line " + std::to_string(lineno) + ": expected 'i j k value'");
    }
    std::string extra;
    if (ls >> extra)
      throw InputError("group file line " + std::to_string(lineno) + ": trailing tokens");
    if (i < 0 || i >= m || j < 0 || j >= m || k < 0 || k >= c)
      throw InputError("group file line " + std::to_string(lineno) + ": index out of range");
    Q[k][i][j] = value;
  }
  if (!have_header) throw InputError("group file: missing 'm c' header line");
  return make_group_spec(m, c, std::move(Q));
}

std::string format_group_spec(const GroupSpec& g) {
  std::ostringstream out;
  out << g.m << " " << g.c << "\n";
  for (int k = 0; k < g.c; ++k)
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.m; ++j)
        if (g.Q[k][i][j] != 0) out << i << " " << j << " " << k << " " << g.Q[k][i][j] << "\n";
  return out.str();
}

Element identity(const GroupSpec& g) {
  return Element{std::vector<long long>(g.m, 0), std::vector<ZInt>(g.c, 0)};
}

Element multiply(const GroupSpec& g, const Element& x, const Element& y) {
  check_conforms(g, x, "multiply");
  check_conforms(g, y, "multiply");
  Element r;
  r.a.resize(g.m);
  for (int i = 0; i < g.m; ++i) r.a[i] = checked_add(x.a[i], y.a[i]);
  r.z.resize(g.c);
  for (int k = 0; k < g.c; ++k) r.z[k] = x.z[k] + y.z[k] + cocycle_eval(g, k, x.a, y.a);
  return r;
}

Element inverse(const GroupSpec& g, const Element& x) {
  check_conforms(g, x, "inverse");
  Element r;
  r.a.resize(g.m);
  for (int i = 0; i < g.m; ++i) r.a[i] = checked_neg(x.a[i]);
  r.z.resize(g.c);
  for (int k = 0; k < g.c; ++k) r.z[k] = cocycle_eval(g, k, x.a, x.a) - x.z[k];
  return r;
}

Element commutator(const GroupSpec& g, const Element& x, const Element& y) {
  check_conforms(g, x, "commutator");
  check_conforms(g, y, "commutator");
  Element r = identity(g);
  for (int k = 0; k < g.c; ++k)
    r.z[k] = cocycle_eval(g, k, x.a, y.a) - cocycle_eval(g, k, y.a, x.a);
  return r;
}

std::vector<long long> pi1(const Element& x) { return x.a; }

LayeredPoint dilate(const GroupSpec& g, double t, const LayeredPoint& p) {
  if (!(t > 0)) throw InputError("dilate: parameter t must be positive");
  if (static_cast<int>(p.a.size()) != g.m || static_cast<int>(p.z.size()) != g.c)
    throw InputError("dilate: point does not conform to the group's ranks");
  LayeredPoint r = p;
  for (double& v : r.a) v *= t;
  for (double& v : r.z) v *= t * t;
  return r;
}

RatLayeredPoint embed(const GroupSpec& g, const Element& x) {
  check_conforms(g, x, "embed");
  RatLayeredPoint p;
  p.a.reserve(g.m);
  for (long long v : x.a) p.a.emplace_back(v);
  p.z.reserve(g.c);
  for (int k = 0; k < g.c; ++k) p.z.emplace_back(Rational(x.z[k]) - Rational(cocycle_eval(g, k, x.a, x.a)) / 2);
  return p;
}

LayeredPoint embed_real(const GroupSpec& g, const Element& x) {
  const RatLayeredPoint p = embed(g, x);
  LayeredPoint r;
  r.a.reserve(p.a.size());
  for (const Rational& v : p.a) r.a.push_back(to_double(v));
  r.z.reserve(p.z.size());
  for (const Rational& v : p.z) r.z.push_back(to_double(v));
  return r;
}

RatLayeredPoint stratified_multiply(const GroupSpec& g, const RatLayeredPoint& x,
                                    const RatLayeredPoint& y) {
  if (x.a.size() != y.a.size() || static_cast<int>(x.a.size()) != g.m ||
      x.z.size() != y.z.size() || static_cast<int>(x.z.size()) != g.c)
    throw InputError("stratified_multiply: point does not conform to the group's ranks");
  RatLayeredPoint r;
  r.a.resize(g.m);
  for (int i = 0; i < g.m; ++i) r.a[i] = x.a[i] + y.a[i];
  r.z.resize(g.c);
  for (int k = 0; k < g.c; ++k) {
    Rational bracket = 0;
    const auto& qk = g.Q[k];
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.m; ++j) {
        const long long q = qk[i][j];
        if (q == 0) continue;
        bracket += Rational(q) * (x.a[i] * y.a[j] - x.a[j] * y.a[i]);
      }
    r.z[k] = x.z[k] + y.z[k] + bracket / 2;
  }
  return r;
}

GradingDims grading_dims(const GroupSpec& g) {
  if (g.c == 0) return GradingDims{{g.m}};
  return GradingDims{{g.m, g.c}};
}

long long homogeneous_dimension(const GradingDims& dims) {
  if (dims.dims.empty()) throw InputError("homogeneous_dimension: empty grading");
  long long d = 0;
  for (size_t i = 0; i < dims.dims.size(); ++i) {
    if (dims.dims[i] <= 0) throw InputError("homogeneous_dimension: layer dimensions must be positive");
    d += static_cast<long long>(i + 1) * dims.dims[i];
  }
  return d;
}

long long homogeneous_dimension_jordan(const std::map<int, long long>& block_counts) {
  long long d = 1;
  for (const auto& [size, count] : block_counts) {
    if (size < 1) throw InputError("homogeneous_dimension_jordan: block sizes must be positive");
    if (count < 0) throw InputError("homogeneous_dimension_jordan: counts must be non-negative");
    d += static_cast<long long>(size) * (size + 1) / 2 * count;
  }
  return d;
}

Element parse_element(const GroupSpec& g, const std::string& line) {
  std::istringstream in(line);
  Element x;
  x.a.resize(g.m);
  for (int i = 0; i < g.m; ++i)
    if (!(in >> x.a[i])) throw InputError("element: expected " + std::to_string(g.m + g.c) + " coordinates");
  x.z.resize(g.c);
  for (int k = 0; k < g.c; ++k) {
    std::string tok;
    if (!(in >> tok)) throw InputError("element: expected " + std::to_string(g.m + g.c) + " coordinates");
    try {
      x.z[k] = ZInt(tok);
    } catch (const std::exception&) {
      throw InputError("element: invalid central coordinate '" + tok + "'");
    }
  }
  std::string extra;
  if (in >> extra) throw InputError("element: trailing tokens after coordinates");
  return x;
}

std::string format_element(const Element& x) {
  std::ostringstream out;
  bool first = true;
  for (long long v : x.a) {
    if (!first) out << " ";
    out << v;
    first = false;
  }
  for (const ZInt& v : x.z) {
    if (!first) out << " ";
    out << v;
    first = false;
  }
  return out.str();
}

std::string element_key(const Element& x) {
  std::string key;
  key.reserve(x.a.size() * 8 + x.z.size() * 9);
  for (long long v : x.a) {
    unsigned long long u;
    std::memcpy(&u, &v, 8);
    for (int b = 0; b < 8; ++b) key.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
  }
  for (const ZInt& zv : x.z) {
    if (zv >= LLONG_MIN && zv <= LLONG_MAX) {
      key.push_back(1);
      const long long v = zv.convert_to<long long>();
      unsigned long long u;
      std::memcpy(&u, &v, 8);
      for (int b = 0; b < 8; ++b) key.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
    } else {
      // Wide path: sign tag, byte length, then magnitude bytes.
      key.push_back(zv < 0 ? 2 : 3);
      std::vector<unsigned char> mag;
      export_bits(ZInt(abs(zv)), std::back_inserter(mag), 8);
      const uint32_t len = static_cast<uint32_t>(mag.size());
      for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((len >> (8 * b)) & 0xff));
      key.append(mag.begin(), mag.end());
    }
  }
  return key;
}

}  // namespace nilgeo
