// orbit-thermo: partition functions, Gibbs verdicts, and oracle cross-checks
// for the coadjoint-orbit catalog. See --help for subcommands.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "orbitherm/pipeline.hpp"

using namespace orbitherm;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidInput, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Vec parse_coeffs(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      vals.push_back(std::stod(tok));
    } catch (...) {
      fail(Errc::InvalidInput, "bad coefficient '" + tok + "'");
    }
  }
  Vec v(static_cast<int>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
  return v;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// numeric-tolerant "expected is a subset of actual" comparison
bool subset_match(const json& expected, const json& actual, std::string path,
                  std::string& mismatch) {
  if (expected.is_object()) {
    if (!actual.is_object()) {
      mismatch = path + ": expected object";
      return false;
    }
    for (auto it = expected.begin(); it != expected.end(); ++it) {
      if (!actual.contains(it.key())) {
        mismatch = path + "." + it.key() + ": missing";
        return false;
      }
      if (!subset_match(it.value(), actual[it.key()], path + "." + it.key(), mismatch))
        return false;
    }
    return true;
  }
  if (expected.is_array()) {
    if (!actual.is_array() || actual.size() != expected.size()) {
      mismatch = path + ": array shape differs";
      return false;
    }
    for (size_t i = 0; i < expected.size(); ++i)
      if (!subset_match(expected[i], actual[i], path + "[" + std::to_string(i) + "]", mismatch))
        return false;
    return true;
  }
  if (expected.is_number() && actual.is_number()) {
    double a = expected.get<double>(), b = actual.get<double>();
    if (std::abs(a - b) <= 1e-7 * (1.0 + std::abs(a))) return true;
    mismatch = path + ": " + std::to_string(b) + " != expected " + std::to_string(a);
    return false;
  }
  if (expected == actual) return true;
  mismatch = path + ": " + actual.dump() + " != expected " + expected.dump();
  return false;
}

// 0 = match or no expectation, 2 = mismatch
int check_expect(const std::string& expect_path, const std::string& produced) {
  if (expect_path.empty()) return 0;
  json expected = json::parse(slurp(expect_path));
  json actual = json::parse(produced);
  std::string why;
  if (subset_match(expected, actual, "$", why)) return 0;
  std::cerr << "expectation mismatch at " << why << "\n";
  return 2;
}

struct RunConfig {
  uint64_t seed = 42;
  long samples = 1000000;
  int quad_level = 8;
  double tol = 1e-6;
  std::string output = "json";
  std::string expect;
};

json thermo_json(const OrbitModel& model, const Vec& x, const std::string& method,
                 const PartitionValue& z) {
  json j;
  j["schema"] = 1;
  j["kind"] = "thermo";
  j["family"] = model.name();
  j["method"] = method;
  j["x"] = vec_json(x);
  j["divergent"] = z.divergent;
  if (!z.divergent) {
    j["Z"] = z.value;
    j["log_Z"] = z.log_value;
    ThermoReport rep = thermo_report(model, x);
    j["heat"] = vec_json(rep.heat);
    j["entropy"] = rep.entropy_value;
    j["fisher"] = mat_json(rep.fisher);
  }
  return j;
}

// positive system used for the dh/factorized evaluations
PositiveSystem adapted_system(const RootDatum& rd, uint64_t seed) {
  for (const auto& ps : positive_systems(rd, seed))
    if (ps.adapted) return ps;
  fail(Errc::NoRegularElement, "no adapted positive system for this algebra");
}

int cmd_check(const std::string& path, const RunConfig& cfg) {
  LieAlgebra g = algebra_from_json_text(slurp(path));
  json j;
  j["schema"] = 1;
  j["kind"] = "check";
  j["algebra"] = g.name();
  j["dim"] = g.dim();
  j["jacobi_residual"] = g.jacobi_residual();
  if (g.meta() && g.meta()->cartan.cols() > 0) {
    RootDatum rd = root_decomposition(g, g.meta()->cartan);
    json roots = json::array();
    for (const auto& r : rd.roots) {
      json rj;
      rj["beta"] = vec_json(r.beta);
      rj["kind"] = r.kind == RootKind::Compact ? "compact" : "noncompact";
      rj["multiplicity"] = r.multiplicity;
      rj["zero_bracket"] = r.zero_bracket;
      roots.push_back(rj);
    }
    j["roots"] = roots;
    j["rank"] = rd.rank();
    auto systems = positive_systems(rd, cfg.seed);
    j["positive_systems"] = systems.size();
    int adapted = 0;
    for (const auto& ps : systems) adapted += ps.adapted ? 1 : 0;
    j["adapted_systems"] = adapted;
    WeylGroup wg = weyl_group(rd);
    j["weyl_order"] = wg.elements.size();
    if (adapted > 0) {
      PositiveSystem ps = adapted_system(rd, cfg.seed);
      Cone cmin = c_min(rd, ps, cfg.seed);
      Cone cmax = c_max(rd, ps);
      j["cmin_generators"] = mat_json(cmin.vectors);
      j["cmax_inequalities"] = mat_json(cmax.vectors);
      j["cmin_pointed"] = is_pointed(cmin);
      j["cmin_in_cmax"] = cone_subset(cmin, cmax);
    }
  } else {
    j["roots"] = "no cartan metadata";
  }
  std::cout << j.dump(2) << "\n";
  return check_expect(cfg.expect, j.dump());
}

int cmd_classify(const std::string& path, const std::string& functional, const RunConfig& cfg) {
  LieAlgebra g = algebra_from_json_text(slurp(path));
  Vec lambda = parse_coeffs(functional);
  ClassificationReport rep = classify(g, lambda, cfg.seed);
  std::string text = to_json_text(rep);
  std::cout << text << "\n";
  return check_expect(cfg.expect, text);
}

int cmd_partition(const std::string& family, const std::string& at, const std::string& method,
                  const RunConfig& cfg) {
  OrbitModel model = parse_family(family);
  Vec x = parse_coeffs(at);
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch,
          "--at needs " + std::to_string(model.algebra().dim()) + " coefficients");
  PartitionValue z;
  if (method == "catalog") {
    z = closed_form_Z(model, x);
  } else if (method == "quad") {
    QuadratureResult q = laplace_quadrature(model, x, std::pow(10.0, -cfg.quad_level));
    z = PartitionValue::finite(q.log_value);
  } else if (method == "mc") {
    McResult m = laplace_mc(model, x, cfg.samples, cfg.seed);
    z = PartitionValue::finite(std::log(m.value));
  } else if (method == "dh") {
    const LieAlgebra& g = model.algebra();
    require(g.meta() && g.meta()->cartan.cols() > 0, Errc::MissingMeta,
            "dh needs cartan metadata");
    RootDatum rd = root_decomposition(g, g.meta()->cartan);
    PositiveSystem ps = adapted_system(rd, cfg.seed);
    Vec lam_t = restrict_functional(rd, model.base_functional());
    Vec x_t = restrict_functional(rd, x);
    require((extend_functional(rd, x_t) - x).norm() <= 1e-9 * (1.0 + x.norm()), Errc::Unsupported,
            "dh evaluation needs x in the cartan subspace");
    WeylGroup wg = weyl_group(rd);
    double value = factorized_partition(rd, ps, wg, lam_t, x_t);
    z = PartitionValue::finite(std::log(value));
  } else {
    fail(Errc::InvalidInput, "unknown --method " + method);
  }
  json j = thermo_json(model, x, method, z);
  std::cout << j.dump(2) << "\n";
  return check_expect(cfg.expect, j.dump());
}

int cmd_verify(const std::string& family, const std::string& grid, const std::string& method,
               const RunConfig& cfg) {
  OrbitModel model = parse_family(family);
  std::vector<Vec> points;
  if (grid.rfind("default", 0) == 0) {
    int n = 5;
    if (grid.size() > 8 && grid[7] == ':') n = std::stoi(grid.substr(8));
    for (const auto& x : catalog_domain_grid(model, std::max(20, 4 * n), cfg.seed))
      if (in_domain(model, x) && static_cast<int>(points.size()) < n) points.push_back(x);
  } else {
    std::stringstream ss(grid);
    std::string tok;
    while (std::getline(ss, tok, ';')) points.push_back(parse_coeffs(tok));
  }
  long samples = std::max(cfg.samples, 10000L);
  bool all_ok = true;
  json rows = json::array();
  std::cout << "family,x,closed_form,oracle,abs_error,rel_error,pass\n";
  for (const auto& x : points) {
    double cf = closed_form_Z(model, x).value;
    double oracle, allowance;
    if (method == "mc") {
      McResult m = laplace_mc(model, x, samples, cfg.seed);
      oracle = m.value;
      allowance = 3.0 * m.stderr_value;
    } else {
      QuadratureResult q = laplace_quadrature(model, x, std::pow(10.0, -cfg.quad_level));
      oracle = q.value;
      allowance = cfg.tol * std::abs(cf);
    }
    double err = std::abs(cf - oracle);
    bool ok = err <= allowance;
    all_ok = all_ok && ok;
    std::ostringstream xs;
    for (int i = 0; i < x.size(); ++i) xs << (i ? " " : "") << x[i];
    std::cout << model.name() << ",\"" << xs.str() << "\"," << cf << "," << oracle << "," << err
              << "," << err / std::abs(cf) << "," << (ok ? "pass" : "FAIL") << "\n";
    json row;
    row["x"] = vec_json(x);
    row["closed_form"] = cf;
    row["oracle"] = oracle;
    row["pass"] = ok;
    rows.push_back(row);
  }
  if (!cfg.expect.empty()) {
    json j;
    j["schema"] = 1;
    j["rows"] = rows;
    int rc = check_expect(cfg.expect, j.dump());
    if (rc != 0) return rc;
  }
  return all_ok ? 0 : 2;
}

int cmd_legendre(const std::string& family, int nx, int norbit, const RunConfig& cfg) {
  OrbitModel model = parse_family(family);
  LegendreReport rep = legendre_check(model, nx, norbit, cfg.seed);
  std::string text = to_json_text(rep);
  std::cout << text << "\n";
  int rc = check_expect(cfg.expect, text);
  if (rc != 0) return rc;
  return rep.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "orbit-thermo: Gibbs ensembles on coadjoint orbits.\n"
      "Partition functions come from closed forms (catalog/dh) or numerical\n"
      "oracles (quad/mc); verify cross-checks the two routes.\n"
      "CSV columns of `verify`: family,x,closed_form,oracle,abs_error,rel_error,pass.\n"
      "JSON outputs carry \"schema\": 1. ORBIT_THERMO_THREADS caps parallelism."};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after the subcommand too

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "deterministic seed (default 42)");
  app.add_option("--samples", cfg.samples, "Monte Carlo sample count");
  app.add_option("--quad-level", cfg.quad_level, "quadrature target: rel tol 10^-level");
  app.add_option("--tol", cfg.tol, "verify tolerance for quadrature rows");
  app.add_option("--output", cfg.output, "json|csv (verify always prints csv)");
  app.add_option("--expect", cfg.expect, "JSON file of expected fields; mismatch exits 2");

  std::string algebra_path, functional, family, at, method = "catalog", grid = "default";
  int nx = 50, norbit = 200;

  auto* check = app.add_subcommand("check", "validate an algebra file, print its structure");
  check->add_option("algebra", algebra_path, "algebra JSON file")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Gibbs existence verdict for (g, lambda)");
  classify_cmd->add_option("algebra", algebra_path, "algebra JSON file")->required();
  classify_cmd->add_option("--functional", functional, "lambda coefficients, comma-separated")
      ->required();

  auto* partition = app.add_subcommand("partition", "evaluate Z and the thermodynamic report");
  partition->add_option("--family", family, "orbit family, e.g. su2:1 or osc:1,0.5")->required();
  partition->add_option("--at", at, "x coefficients, comma-separated")->required();
  partition->add_option("--method", method, "catalog|dh|quad|mc");

  auto* verify = app.add_subcommand("verify", "closed form vs oracle on a grid (CSV)");
  verify->add_option("--family", family, "orbit family")->required();
  verify->add_option("--grid", grid, "default[:N] or 'x1,..;y1,..' points");
  verify->add_option("--method", method, "quad|mc oracle (default quad)")
      ->default_val("quad");

  auto* legendre = app.add_subcommand("legendre", "heat-map hull/injectivity checks");
  legendre->add_option("--family", family, "orbit family")->required();
  legendre->add_option("--nx", nx, "sample points in the domain");
  legendre->add_option("--norbit", norbit, "orbit points for the hull LP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*check) return cmd_check(algebra_path, cfg);
    if (*classify_cmd) return cmd_classify(algebra_path, functional, cfg);
    if (*partition) return cmd_partition(family, at, method, cfg);
    if (*verify) return cmd_verify(family, grid, method, cfg);
    if (*legendre) return cmd_legendre(family, nx, norbit, cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
