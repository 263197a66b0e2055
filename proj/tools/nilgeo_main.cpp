#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nilgeo/ball_enum.hpp"
#include "nilgeo/cc_metric.hpp"
#include "nilgeo/counterexamples.hpp"
#include "nilgeo/dido.hpp"
#include "nilgeo/errors.hpp"
#include "nilgeo/format.hpp"
#include "nilgeo/group.hpp"
#include "nilgeo/polygon.hpp"
#include "nilgeo/solvable.hpp"
#include "nilgeo/volume.hpp"

namespace {

using namespace nilgeo;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + out_path);
  out << content;
}

/** Accepts integers, fractions p/q, and plain decimals, all exactly. */
Rational parse_rational(const std::string& tok) {
  try {
    const auto slash = tok.find('/');
    if (slash != std::string::npos) {
      const ZInt p(tok.substr(0, slash));
      const ZInt q(tok.substr(slash + 1));
      if (q == 0) throw InputError("zero denominator: " + tok);
      return Rational(p) / Rational(q);
    }
    const auto dot = tok.find('.');
    if (dot == std::string::npos) return Rational(ZInt(tok));
    ZInt scale = 1;
    for (std::size_t i = dot + 1; i < tok.size(); ++i) scale *= 10;
    return Rational(ZInt(tok.substr(0, dot) + tok.substr(dot + 1))) / Rational(scale);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("cannot parse number: " + tok);
  }
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::istringstream ss(text);
  std::vector<Rational> out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_rational(tok));
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::istringstream ss(text);
  std::vector<double> out;
  double v = 0.0;
  while (ss >> v) out.push_back(v);
  if (!ss.eof()) throw InputError("cannot parse coordinates: " + text);
  return out;
}

/** Point list "x,y;x,y;..." for the cone slabs. */
std::vector<std::array<double, 2>> parse_point_list(const std::string& text) {
  std::vector<std::array<double, 2>> out;
  std::istringstream points(text);
  std::string point;
  while (std::getline(points, point, ';')) {
    if (point.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream coords(point);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(coords, tok, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw InputError("");
        vals.push_back(v);
      } catch (const std::exception&) {
        throw InputError("cannot parse point list: " + text);
      }
    }
    if (vals.size() != 2) throw InputError("points need exactly two coordinates: " + point);
    out.push_back({vals[0], vals[1]});
  }
  return out;
}

std::vector<long long> parse_integer_list(const std::string& text) {
  std::vector<long long> out;
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("cannot parse integer list: " + text);
    }
  }
  return out;
}

GroupSpec resolve_group(const std::string& flag) {
  if (flag == "H3" || flag == "H5" || flag == "H3xZ") return preset_group(flag);
  return parse_group_spec(read_text_file(flag));
}

/** One element per line, m + c space-separated integers, '#' comments. */
std::vector<Element> parse_elements_text(const GroupSpec& g, const std::string& text) {
  std::vector<Element> elems;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    elems.push_back(parse_element(g, line));
  }
  return elems;
}

GeneratingSet resolve_gens(const GroupSpec& g, const std::string& gens_flag) {
  if (gens_flag == "standard") return make_generating_set(g, standard_generators(g));
  return make_generating_set(g, parse_elements_text(g, read_text_file(gens_flag)));
}

int group_dimension(const GroupSpec& g) {
  GradingDims dims;
  dims.dims.push_back(g.m);
  if (g.c > 0) dims.dims.push_back(g.c);
  return static_cast<int>(homogeneous_dimension(dims));
}

std::string run_growth(const std::string& group, const std::string& gens, int nmax,
                       const std::string& format, int workers) {
  const GroupSpec g = resolve_group(group);
  const GeneratingSet omega = resolve_gens(g, gens);
  EnumOptions opts;
  opts.workers = workers;
  const GrowthTable table = ball_sizes(omega, nmax, opts);
  if (table.truncated)
    throw BudgetError("growth: memory budget reached before n = " + std::to_string(nmax));
  const int d = group_dimension(g);
  if (format == "csv") return growth_table_csv(table, d);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < table.ball.size(); ++n) {
    nlohmann::ordered_json rec;
    rec["n"] = n;
    rec["ball"] = table.ball[n];
    rec["sphere"] = table.sphere[n];
    if (n > 0)
      rec["ratio_nd"] = static_cast<double>(table.ball[n]) /
                        std::pow(static_cast<double>(n), static_cast<double>(d));
    rows.push_back(std::move(rec));
  }
  return rows.dump(2) + "\n";
}

std::string run_wordlen(const std::string& group, const std::string& gens,
                        const std::string& element, int cap) {
  const GroupSpec g = resolve_group(group);
  const GeneratingSet omega = resolve_gens(g, gens);
  const Element target = parse_element(g, element);
  const std::optional<int> len = word_length(omega, target, cap);
  if (!len)
    throw BudgetError("wordlen: no word of length <= " + std::to_string(cap) + " reaches it");
  return std::to_string(*len) + "\n";
}

std::string run_shape(const std::string& group, const std::string& gens,
                      const std::string& format, int resolution) {
  const GroupSpec g = resolve_group(group);
  const GeneratingSet omega = resolve_gens(g, gens);
  const LimitShape shape = make_limit_shape(omega);
  if (format == "svg") return mesh_to_svg(shape_boundary_mesh(shape, resolution));
  return shape_to_json(shape, resolution);
}

std::string run_volume(const std::string& group, const std::string& gens, double tol) {
  if (group == "H3") {
    const GroupSpec g = resolve_group(group);
    const GeneratingSet omega = resolve_gens(g, gens);
    return fmt_rational(shape_volume_h3(limit_norm(omega))) + "\n";
  }
  if (group == "H5") {
    if (gens != "standard")
      throw InputError("volume: the H5 closed form needs --gens standard");
    return fmt_double_shortest(shape_volume_h5(tol)) + "\n";
  }
  throw InputError("volume: supported for --group H3 (exact) and --group H5 --gens standard");
}

std::string run_ccdist(const std::string& group, const std::string& gens,
                       const std::string& point) {
  const GroupSpec g = resolve_group(group);
  const GeneratingSet omega = resolve_gens(g, gens);
  const LimitShape shape = make_limit_shape(omega);
  const std::vector<double> coords = parse_reals(point);
  if (coords.size() != static_cast<std::size_t>(g.m + g.c))
    throw InputError("ccdist: the point needs " + std::to_string(g.m + g.c) + " coordinates");
  LayeredPoint p;
  p.a.assign(coords.begin(), coords.begin() + g.m);
  p.z.assign(coords.begin() + g.m, coords.end());
  return fmt_double_shortest(cc_distance(shape, p)) + "\n";
}

std::string run_converge(const std::string& group, const std::string& gens, int nmax,
                         const std::string& format, int workers) {
  const GroupSpec g = resolve_group(group);
  const GeneratingSet omega = resolve_gens(g, gens);
  const LimitShape shape = make_limit_shape(omega);
  const ConvergenceReport report = pansu_convergence(omega, shape, nmax, 16, workers);
  if (format == "csv") return convergence_report_csv(report);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ConvergenceReport::Row& r : report.rows) {
    nlohmann::ordered_json rec;
    rec["n"] = r.n;
    rec["max_dev"] = r.max_dev;
    rec["mean_dev"] = r.mean_dev;
    rec["hausdorff"] = r.hausdorff;
    rows.push_back(std::move(rec));
  }
  return rows.dump(2) + "\n";
}

std::string run_dido(const std::string& group, const std::string& gens,
                     const std::string& point) {
  const GroupSpec g = resolve_group(group);
  const GeneratingSet omega = resolve_gens(g, gens);
  const LimitShape shape = make_limit_shape(omega);
  const std::vector<Rational> coords = parse_rationals(point);
  if (shape.h5_standard) {
    if (coords.size() != 4)
      throw InputError("dido: the H5 profile needs four horizontal coordinates");
    return fmt_rational(z_profile_h5_exact(coords[0], coords[1], coords[2], coords[3])) + "\n";
  }
  if (coords.size() != 2)
    throw InputError("dido: the profile needs two horizontal coordinates");
  if (shape.l1_closed_form)
    return fmt_rational(shape.bracket_scale * z_profile_h3_exact(coords[0], coords[1])) + "\n";
  return fmt_double_shortest(shape.profile(to_double(coords[0]), to_double(coords[1]))) + "\n";
}

std::string run_cone(const std::string& omega0, const std::string& omega1,
                     const std::string& format) {
  const ConeShape cs = cone_shape(parse_point_list(omega0), parse_point_list(omega1));
  if (format == "json") {
    nlohmann::ordered_json j;
    j["r0"] = cs.r0;
    j["r1"] = cs.r1;
    j["r2"] = cs.r2;
    return j.dump(2) + "\n";
  }
  return "r0 = " + fmt_double_shortest(cs.r0) + "\nr1 = " + fmt_double_shortest(cs.r1) +
         "\nr2 = " + fmt_double_shortest(cs.r2) + "\n";
}

std::string run_slowspeed(const std::string& targets_flag, double epsilon) {
  const std::vector<long long> targets = parse_integer_list(targets_flag);
  const std::vector<double> epsilons(targets.size(), epsilon);
  const LiouvilleAlpha alpha = construct_liouville_alpha(targets, epsilons);
  std::vector<std::pair<long long, double>> candidates;
  for (const long long n : targets) candidates.emplace_back(n, epsilon);
  const SpeedCertificates certs = slow_speed_certificate(alpha, candidates);
  nlohmann::ordered_json j;
  j["exponents"] = alpha.exponents;
  j["alpha"] = fmt_rational(alpha.value);
  j["witnesses"] = alpha.witnesses;
  const nlohmann::ordered_json inner =
      nlohmann::ordered_json::parse(certificates_to_json(certs));
  j["certificates"] = inner["certificates"];
  j["diagnostics"] = inner["diagnostics"];
  return j.dump(2) + "\n";
}

std::string run_bm(int nmax) {
  if (nmax < 1) throw InputError("bm: nmax must be positive");
  std::vector<long long> radii;
  for (long long k = 1; k * k <= nmax; ++k) radii.push_back(k * k);
  const GapReport gap = bm_gap_scan(radii, 16);
  const QuasinormScan scan = bm_no_quasinorm(nmax, default_z0_grid());
  nlohmann::ordered_json j;
  j["gap"] = nlohmann::ordered_json::parse(gap_report_json(gap));
  j["offsets"] = nlohmann::ordered_json::parse(quasinorm_scan_json(scan));
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word metrics, limit shapes, and ball asymptotics of nilpotent groups"};
  app.require_subcommand(1);

  std::string group = "H3", gens = "standard", out;
  std::string element, point, omega0, omega1, targets = "100,1000,3000";
  std::string growth_format = "csv", shape_format = "json", converge_format = "csv",
              cone_format = "text";
  int growth_nmax = 10, wordlen_cap = 32, shape_res = 16, converge_nmax = 10, bm_nmax = 16;
  int workers = 1;
  double volume_tol = 1e-7, slowspeed_eps = 1e-3;
  std::uint64_t seed = 0;

  const auto add_io = [&](CLI::App* sub) {
    sub->add_option("--out", out, "write the output to a file instead of stdout");
    sub->add_option("--seed", seed, "seed for sampled diagnostics");
  };
  const auto add_group = [&](CLI::App* sub) {
    sub->add_option("--group", group, "H3, H5, H3xZ, or a group spec file");
    sub->add_option("--gens", gens, "standard or a generators file");
  };

  CLI::App* growth = app.add_subcommand("growth", "exact ball and sphere sizes");
  add_group(growth);
  add_io(growth);
  growth->add_option("--nmax", growth_nmax, "largest radius");
  growth->add_option("--format", growth_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  growth->add_option("--workers", workers, "worker threads (0 = hardware)");

  CLI::App* wordlen = app.add_subcommand("wordlen", "word length of one element");
  add_group(wordlen);
  add_io(wordlen);
  wordlen->add_option("--element", element, "m + c space-separated integer coordinates")
      ->required();
  wordlen->add_option("--nmax", wordlen_cap, "search cap");

  CLI::App* shape = app.add_subcommand("shape", "limit shape geometry");
  add_group(shape);
  add_io(shape);
  shape->add_option("--nmax", shape_res, "boundary mesh resolution");
  shape->add_option("--format", shape_format, "json or svg")
      ->check(CLI::IsMember({"json", "svg"}));

  CLI::App* volume = app.add_subcommand("volume", "limit shape volume");
  add_group(volume);
  add_io(volume);
  volume->add_option("--tol", volume_tol, "absolute error target for the H5 quadrature");

  CLI::App* ccdist = app.add_subcommand("ccdist", "asymptotic distance to one point");
  add_group(ccdist);
  add_io(ccdist);
  ccdist->add_option("--point", point, "m + c space-separated real coordinates")->required();

  CLI::App* converge = app.add_subcommand("converge", "word metric vs limit metric by radius");
  add_group(converge);
  add_io(converge);
  converge->add_option("--nmax", converge_nmax, "largest radius");
  converge->add_option("--format", converge_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  converge->add_option("--workers", workers, "worker threads (0 = hardware)");

  CLI::App* dido = app.add_subcommand("dido", "central profile at one horizontal point");
  add_group(dido);
  add_io(dido);
  dido->add_option("--point", point, "horizontal coordinates (integers, p/q, or decimals)")
      ->required();

  CLI::App* cone = app.add_subcommand("cone", "double truncated cone radii");
  add_io(cone);
  cone->add_option("--omega0", omega0, "level-0 slab points \"x,y;x,y\"");
  cone->add_option("--omega1", omega1, "level-1 slab points \"x,y;x,y\"")->required();
  cone->add_option("--format", cone_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* slowspeed = app.add_subcommand("slowspeed", "certified slow-speed radii");
  add_io(slowspeed);
  slowspeed->add_option("--targets", targets, "comma-separated radii to certify");
  slowspeed->add_option("--tol", slowspeed_eps, "volume deficit per radius");
  slowspeed->add_option("--workers", workers, "worker threads (0 = hardware)");

  CLI::App* bm = app.add_subcommand("bm", "product metric gap and offset scan");
  add_io(bm);
  bm->add_option("--nmax", bm_nmax, "largest radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "input error: " << e.get_name() << ": " << e.what() << "\n";
    return 2;
  }

  try {
    std::string content;
    if (growth->parsed()) content = run_growth(group, gens, growth_nmax, growth_format, workers);
    else if (wordlen->parsed()) content = run_wordlen(group, gens, element, wordlen_cap);
    else if (shape->parsed()) content = run_shape(group, gens, shape_format, shape_res);
    else if (volume->parsed()) content = run_volume(group, gens, volume_tol);
    else if (ccdist->parsed()) content = run_ccdist(group, gens, point);
    else if (converge->parsed())
      content = run_converge(group, gens, converge_nmax, converge_format, workers);
    else if (dido->parsed()) content = run_dido(group, gens, point);
    else if (cone->parsed()) content = run_cone(omega0, omega1, cone_format);
    else if (slowspeed->parsed()) content = run_slowspeed(targets, slowspeed_eps);
    else if (bm->parsed()) content = run_bm(bm_nmax);
    emit(out, content);
    return 0;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
