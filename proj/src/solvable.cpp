#include "nilgeo/solvable.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "nilgeo/errors.hpp"
#include "nilgeo/format.hpp"
#include "nilgeo/parallel.hpp"

namespace nilgeo {

namespace {

// Rounding guard for the two trigonometric certificate conditions.
constexpr double kTrigGuard = 1e-9;

struct ScanState {
  ZInt gap;  // min over scanned k of |2*(k*N mod P) - P|
  long long worst_k = 0;

  void offer(const ZInt& g, long long k) {
    if (g < gap || (g == gap && k < worst_k)) {
      gap = g;
      worst_k = k;
    }
  }
};

ZInt pow3(int e) {
  ZInt p = 1;
  for (int i = 0; i < e; ++i) p *= 3;
  return p;
}

/** Exact min of |2*(k*N mod P) - P| over 0 <= k <= n; lexicographic tie-break. */
ScanState scan_half_turn_gaps(const ZInt& N, const ZInt& P, long long n, int workers) {
  ScanState best{P, 0};
  if (n <= 0 || N == 0) return best;
  if (P <= (ZInt(1) << 126)) {
    using U = unsigned __int128;
    const U p = P.convert_to<U>();
    const U nn = N.convert_to<U>();
    const auto scan_range = [&](long long k0, long long k1, ScanState& out) {
      U r = ((ZInt(k0) * N) % P).convert_to<U>();
      U gbest = 2 * r >= p ? 2 * r - p : p - 2 * r;
      out.gap = ZInt(gbest);
      out.worst_k = k0;
      for (long long k = k0 + 1; k <= k1; ++k) {
        r += nn;
        if (r >= p) r -= p;
        const U g = 2 * r >= p ? 2 * r - p : p - 2 * r;
        if (g < gbest) {
          gbest = g;
          out.gap = ZInt(g);
          out.worst_k = k;
        }
      }
    };
    if (workers <= 1) {
      ScanState s;
      scan_range(1, n, s);
      best.offer(s.gap, s.worst_k);
      return best;
    }
    const std::size_t total = static_cast<std::size_t>(n);
    constexpr std::size_t kChunk = 4096;  // must match parallel_chunks
    std::vector<ScanState> parts((total + kChunk - 1) / kChunk);
    parallel_chunks(total, workers, [&](std::size_t ci, std::size_t b, std::size_t e) {
      scan_range(static_cast<long long>(b) + 1, static_cast<long long>(e), parts[ci]);
    });
    for (const ScanState& s : parts) best.offer(s.gap, s.worst_k);
    return best;
  }
  ZInt r = 0;
  for (long long k = 1; k <= n; ++k) {
    r += N;
    if (r >= P) r -= P;
    const ZInt g = abs(2 * r - P);
    best.offer(g, k);
  }
  return best;
}

struct ExactAlpha {
  ZInt N;
  ZInt P;
};

ExactAlpha split_alpha(const LiouvilleAlpha& alpha) {
  ExactAlpha ea{ZInt(numerator(alpha.value)), ZInt(denominator(alpha.value))};
  return ea;
}

LiouvilleCheck run_check(const LiouvilleAlpha& alpha, long long n, int workers) {
  const ExactAlpha ea = split_alpha(alpha);
  const ScanState s = scan_half_turn_gaps(ea.N, ea.P, n, workers);
  LiouvilleCheck out;
  out.worst_k = s.worst_k;
  out.distance = Rational(s.gap) / (2 * Rational(ea.P));
  return out;
}

double two_pi() { return 8.0 * std::atan(1.0); }

/** Adaptive Simpson on [a,b]; integrand values at ends and midpoint supplied. */
double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw ConvergenceError("cone quadrature: refinement limit reached");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace

LiouvilleAlpha make_liouville_alpha(std::vector<int> exponents) {
  LiouvilleAlpha a;
  int prev = 0;
  for (const int e : exponents) {
    if (e <= prev) throw InputError("alpha exponents must be strictly increasing and positive");
    prev = e;
  }
  a.exponents = std::move(exponents);
  if (!a.exponents.empty()) {
    const int top = a.exponents.back();
    ZInt num = 0;
    for (const int e : a.exponents) num += pow3(top - e);
    a.value = Rational(num) / Rational(pow3(top));
  }
  return a;
}

LiouvilleCheck check_liouville(const LiouvilleAlpha& alpha, long long n, double delta,
                               int workers) {
  if (n < 0) throw InputError("check_liouville: n must be non-negative");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw InputError("check_liouville: delta must be a non-negative finite real");
  LiouvilleCheck out = run_check(alpha, n, workers);
  out.holds = out.distance >= 2 * Rational(delta);
  return out;
}

double default_epsilon(long long n) {
  if (n < 1) throw InputError("default_epsilon: n must be positive");
  return 1.0 / std::log(static_cast<double>(n) + 2.0);
}

SpeedCertificates slow_speed_certificate(
    const LiouvilleAlpha& alpha, const std::vector<std::pair<long long, double>>& candidates) {
  SpeedCertificates out;
  for (const auto& [n, eps] : candidates) {
    if (n < 1) throw InputError("slow_speed_certificate: radii must be positive");
    if (!(eps >= 0.0) || !std::isfinite(eps))
      throw InputError("slow_speed_certificate: epsilon must be a non-negative finite real");
    const double delta = std::cbrt(4.0 * eps);
    const LiouvilleCheck chk = run_check(alpha, n, 1);
    const double dmin = to_double(chk.distance);
    const double a = 4.0 * std::atan(1.0) * dmin;
    SpeedCertificate cert{n, eps, delta, chk.worst_k, dmin - 2.0 * delta,
                          (1.0 - eps) * two_pi() * 2.0 / 3.0 *
                              std::pow(static_cast<double>(n), 3)};
    if (eps == 0.0) {
      // a zero deficit asks for nothing: the sector is empty
      cert.margin = dmin;
      out.certified.push_back(cert);
      continue;
    }
    const Rational d3 = chk.distance * chk.distance * chk.distance;
    if (!(d3 >= 32 * Rational(eps))) {
      out.diagnostics.push_back("n=" + std::to_string(n) + ": half-turn distance " +
                                fmt_double_shortest(dmin) + " at k=" +
                                std::to_string(chk.worst_k) + " is below 2*delta=" +
                                fmt_double_shortest(2.0 * delta));
      continue;
    }
    const double lhs_sector = 1.0 + 3.0 * std::pow(std::sin(a - delta), 2);
    const double rhs_sector = std::pow(1.0 + delta * delta, 2);
    if (!(a > delta + kTrigGuard) || !(lhs_sector >= rhs_sector + kTrigGuard)) {
      out.diagnostics.push_back("n=" + std::to_string(n) +
                                ": in-sector rotation bound fails, 1+3sin^2(" +
                                fmt_double_shortest(a - delta) + ") = " +
                                fmt_double_shortest(lhs_sector) + " < " +
                                fmt_double_shortest(rhs_sector));
      continue;
    }
    const double half_pi = 2.0 * std::atan(1.0);
    if (!(delta < half_pi) ||
        !(1.0 / std::cos(delta) >= 1.0 + 0.25 * delta * delta + kTrigGuard)) {
      out.diagnostics.push_back("n=" + std::to_string(n) +
                                ": out-of-sector bound fails at delta=" +
                                fmt_double_shortest(delta));
      continue;
    }
    out.certified.push_back(cert);
  }
  return out;
}

LiouvilleAlpha construct_liouville_alpha(const std::vector<long long>& targets,
                                         const std::vector<double>& epsilons) {
  if (targets.empty()) throw InputError("construct: at least one target radius required");
  if (targets.size() != epsilons.size())
    throw InputError("construct: one epsilon per target required");
  long long prev = 0;
  for (const long long n : targets) {
    if (n <= prev) throw InputError("construct: targets must be strictly increasing and positive");
    prev = n;
  }
  std::vector<double> deltas;
  double reserve = 0.0;
  for (const double e : epsilons) {
    if (!(e >= 0.0) || !std::isfinite(e))
      throw InputError("construct: epsilon must be a non-negative finite real");
    const double d = std::cbrt(4.0 * e);
    deltas.push_back(d);
    if (d > 0.0 && (reserve == 0.0 || d / 10.0 < reserve)) reserve = d / 10.0;
  }
  const double nmax = static_cast<double>(targets.back());

  // smallest exponent whose drift leaves every feasible target its bound
  const auto drift_ok = [&](int m, double budget) {
    const double step = std::pow(3.0, -m);
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const double need = 0.5 - 2.0 * deltas[j] - budget;
      if (need < 0.0) continue;  // unattainable at any exponent, verification rejects it
      if (static_cast<double>(targets[j]) * step > need) return false;
    }
    return true;
  };
  int m = 1;
  while (m < 400 && !drift_ok(m, reserve)) ++m;
  std::vector<int> exponents{m};
  // later terms spend geometrically shrinking halves of the reserve
  double budget = reserve / 2.0;
  for (std::size_t j = 1; j < targets.size(); ++j) {
    int mj = exponents.back() + 1;
    if (budget > 0.0) {
      while (mj < exponents.back() + 2048 && nmax * std::pow(3.0, -mj) >= budget) ++mj;
    }
    exponents.push_back(mj);
    budget /= 2.0;
  }

  LiouvilleAlpha alpha = make_liouville_alpha(std::move(exponents));
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const LiouvilleCheck chk = run_check(alpha, targets[j], 1);
    const Rational d3 = chk.distance * chk.distance * chk.distance;
    if (d3 >= 32 * Rational(epsilons[j])) alpha.witnesses.push_back(targets[j]);
  }
  return alpha;
}

std::string certificates_to_json(const SpeedCertificates& certs) {
  nlohmann::ordered_json j;
  j["certificates"] = nlohmann::ordered_json::array();
  for (const SpeedCertificate& c : certs.certified) {
    nlohmann::ordered_json rec;
    rec["n"] = c.n;
    rec["epsilon"] = c.epsilon;
    rec["delta"] = c.delta;
    rec["worst_k"] = c.worst_k;
    rec["margin"] = c.margin;
    rec["volume_bound"] = c.volume_bound;
    j["certificates"].push_back(std::move(rec));
  }
  j["diagnostics"] = certs.diagnostics;
  return j.dump(2) + "\n";
}

double generator_disc_norm(double x1, double x2) {
  return std::sqrt(0.25 * x1 * x1 + x2 * x2);
}

double rotation_invariant_norm(double x1, double x2) {
  return 0.5 * std::sqrt(x1 * x1 + x2 * x2);
}

ConeShape cone_shape(const std::vector<std::array<double, 2>>& omega0,
                     const std::vector<std::array<double, 2>>& omega1) {
  if (omega1.empty()) throw InputError("cone_shape: omega1 must be non-empty");
  for (const auto& p : omega0) {
    const bool mirrored =
        std::any_of(omega0.begin(), omega0.end(), [&](const std::array<double, 2>& q) {
          return q[0] == -p[0] && q[1] == -p[1];
        });
    if (!mirrored) throw InputError("cone_shape: omega0 must be symmetric about the origin");
  }
  ConeShape out;
  for (const auto& p : omega0)
    out.r0 = std::max(out.r0, std::sqrt(p[0] * p[0] + p[1] * p[1]));

  std::vector<std::array<double, 2>> pts = omega1;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
      out.r1 = std::max(out.r1, 0.5 * std::sqrt(dx * dx + dy * dy));
    }
  }
  if (pts.size() == 1) return out;  // cone apex: r2 = 0 exactly

  const std::function<double(double)> widest = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::max(best, c * p[0] - s * p[1]);
    return best;
  };
  const double tp = two_pi();
  out.r2 = std::max(0.0, adaptive_simpson(widest, 0.0, tp, 1e-10) / tp);
  return out;
}

}  // namespace nilgeo
