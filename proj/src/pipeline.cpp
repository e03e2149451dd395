#include "orbitherm/pipeline.hpp"

#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "orbitherm/matrixops.hpp"

namespace orbitherm {

namespace {

Mat center_basis(const LieAlgebra& g) {
  int dim = g.dim();
  Mat stacked(dim * dim, dim);
  for (int j = 0; j < dim; ++j) stacked.middleRows(j * dim, dim) = g.ad(g.basis_vector(j));
  return kernel_basis(stacked);
}

// component of v orthogonal to the column span of b
Vec residual_mod(const Vec& v, const Mat& b) {
  if (b.cols() == 0) return v;
  return v - b * (b.transpose() * b).ldlt().solve(b.transpose() * v);
}

std::string vec_text(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

ClassificationReport classify(const LieAlgebra& g, const Vec& lambda, uint64_t seed,
                              const std::string& name) {
  require(lambda.size() == g.dim(), Errc::DimensionMismatch, "classify: functional size");
  require(g.meta().has_value() && g.meta()->cartan.cols() > 0, Errc::MissingMeta,
          "classify needs an algebra with compactly embedded cartan metadata");
  ClassificationReport rep;
  rep.algebra_name = name.empty() ? g.name() : name;

  // spanning check: rank of sampled coadjoint images of lambda
  {
    int dim = g.dim();
    std::mt19937_64 rng(mix_seed(seed, 3));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat flows(4 * dim, dim);
    flows.row(0) = lambda.transpose();
    for (int k = 1; k < 4 * dim; ++k) {
      Vec y(dim);
      for (int i = 0; i < dim; ++i) y[i] = gauss(rng);
      y *= (k % 3 + 1) * 0.4;
      Mat op = (-g.ad(y)).exp();
      flows.row(k) = (op.transpose() * lambda).transpose();
    }
    rep.spanning = numerical_rank(flows) == dim;
    if (!rep.spanning) rep.orbit_perp = kernel_basis(Mat(flows));
  }

  RootDatum rd = root_decomposition(g, g.meta()->cartan);
  rep.cone_potential_ok = cone_potential(rd, seed);

  auto systems = positive_systems(rd, seed);
  for (const auto& ps : systems)
    if (ps.adapted) {
      rep.chosen_system = ps;
      break;
    }
  rep.adapted_found = rep.chosen_system.has_value();

  if (rep.adapted_found) {
    const auto& ps = *rep.chosen_system;
    rep.cmin = c_min(rd, ps, seed);
    rep.cmax = c_max(rd, ps);
    rep.cmin_pointed = is_pointed(*rep.cmin);
    rep.cmin_in_cmax = cone_subset(*rep.cmin, *rep.cmax);

    std::ostringstream omega;
    omega << "C_max interior on t: {";
    bool first = true;
    for (int idx : ps.noncompact_positive) {
      omega << (first ? " " : ", ") << "i*alpha with beta " << vec_text(rd.roots[idx].beta)
            << " > 0";
      first = false;
    }
    if (first) omega << " all of t ";
    omega << " }; Omega_lambda = Ad(G) . C_max_interior";
    rep.omega_description = omega.str();
  }
  rep.admissible =
      rep.cone_potential_ok && rep.adapted_found && rep.cmin_pointed && rep.cmin_in_cmax;

  // lambda membership: exact on t*, falsifier otherwise
  Vec lam_t = restrict_functional(rd, lambda);
  rep.lambda_on_t =
      (extend_functional(rd, lam_t) - lambda).norm() <= 1e-9 * (1.0 + lambda.norm());
  if (rep.lambda_on_t && rep.adapted_found) {
    if (lambda_in_cmin_star(lam_t, *rep.cmin)) {
      rep.lambda_status = LambdaStatus::InCminStar;
    } else {
      rep.lambda_status = LambdaStatus::Refuted;
      for (int j = 0; j < rep.cmin->vectors.cols(); ++j)
        if (lam_t.dot(rep.cmin->vectors.col(j)) < -1e-8 * (1.0 + lam_t.norm()))
          rep.refuted_generator = j;
    }
  } else if (rep.adapted_found) {
    rep.falsifier = wmin_star_falsifier(rd, *rep.cmin, lambda, 2000, seed);
    rep.lambda_status =
        rep.falsifier.refuted ? LambdaStatus::Refuted : LambdaStatus::FalsifierNotRefuted;
  }
  rep.gibbs_exists = rep.admissible && rep.lambda_status != LambdaStatus::Refuted;
  return rep;
}

namespace {

// distance of x from the family's domain boundary, relative scale
double domain_margin(const OrbitModel& model, const Vec& x) {
  switch (model.tag()) {
    case FamilyTag::Sl2Nilpotent:
    case FamilyTag::Sl2Hyperboloid:
      return std::abs(x[0] - std::hypot(x[1], x[2])) / (1.0 + x.norm());
    case FamilyTag::Su2Sphere:
    case FamilyTag::Point:
      return std::numeric_limits<double>::infinity();
    case FamilyTag::OscPlane:
    case FamilyTag::HspAffine: {
      GaussianData g = gaussian_data(model, x);
      Eigen::SelfAdjointEigenSolver<Mat> es(g.s);
      double scale = model.lambda_c() * (1.0 + x.norm());
      return es.eigenvalues().cwiseAbs().minCoeff() / scale;
    }
    case FamilyTag::Product: {
      double m = std::numeric_limits<double>::infinity();
      int ao = 0;
      for (const auto& f : model.factors()) {
        m = std::min(m, domain_margin(f, x.segment(ao, f.algebra().dim())));
        ao += f.algebra().dim();
      }
      return m;
    }
  }
  fail(Errc::InvalidInput, "domain_margin: unknown family");
}

bool family_has_boundary(const OrbitModel& model) {
  switch (model.tag()) {
    case FamilyTag::Su2Sphere:
    case FamilyTag::Point:
      return false;
    case FamilyTag::Product:
      for (const auto& f : model.factors())
        if (family_has_boundary(f)) return true;
      return false;
    default:
      return true;
  }
}

}  // namespace

std::vector<Vec> catalog_domain_grid(const OrbitModel& model, int min_points, uint64_t seed) {
  int dim = model.algebra().dim();
  std::vector<Vec> grid;

  // paper-pinned axis points for the sl2 families
  if (model.tag() == FamilyTag::Sl2Hyperboloid || model.tag() == FamilyTag::Sl2Nilpotent) {
    for (double t : {-1.0, -0.1, 0.1, 1.0}) {
      Vec x = Vec::Zero(3);
      x[0] = t;
      grid.push_back(x);
    }
  }

  std::mt19937_64 rng(mix_seed(seed, 11));
  std::normal_distribution<double> gauss(0.0, 1.2);
  bool boundary = family_has_boundary(model);
  int finite = 0, divergent = 0;
  for (const auto& x : grid) (in_domain(model, x) ? finite : divergent)++;
  long tries = 0;
  while ((static_cast<int>(grid.size()) < min_points ||
          (boundary && (finite < min_points / 4 || divergent < min_points / 4))) &&
         ++tries < 20000) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x[i] = gauss(rng);
    if (domain_margin(model, x) < 0.08) continue;
    bool fin = in_domain(model, x);
    if (static_cast<int>(grid.size()) >= min_points) {
      // only top up the under-represented verdict
      if (fin && finite >= min_points / 4) continue;
      if (!fin && divergent >= min_points / 4) continue;
    }
    grid.push_back(x);
    (fin ? finite : divergent)++;
  }
  require(static_cast<int>(grid.size()) >= min_points, Errc::NumericalDegeneracy,
          "catalog_domain_grid could not fill the grid away from the boundary");
  return grid;
}

DomainScanReport domain_scan(const OrbitModel& model, const std::vector<Vec>& grid) {
  DomainScanReport rep;
  for (const auto& x : grid) {
    DomainScanRow row;
    row.x = x;
    row.predicted_finite = in_domain(model, x);
    row.probe_finite = divergence_probe(model, x).verdict == ProbeVerdict::Convergent;
    if (row.predicted_finite != row.probe_finite) rep.mismatches++;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

namespace {

// seeded draw of a point inside the family's domain
Vec domain_point(const OrbitModel& model, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  int dim = model.algebra().dim();
  switch (model.tag()) {
    case FamilyTag::Sl2Nilpotent:
    case FamilyTag::Sl2Hyperboloid: {
      Vec x(3);
      x[1] = gauss(rng);
      x[2] = gauss(rng);
      x[0] = std::hypot(x[1], x[2]) + 0.15 + std::abs(gauss(rng));
      return x;
    }
    case FamilyTag::Su2Sphere: {
      Vec x(3);
      do
        for (int i = 0; i < 3; ++i) x[i] = gauss(rng);
      while (x.norm() < 0.05);
      return x;
    }
    case FamilyTag::OscPlane: {
      Vec x(4);
      for (int i = 0; i < 4; ++i) x[i] = gauss(rng);
      x[3] = 0.3 + std::abs(x[3]);
      return x;
    }
    case FamilyTag::HspAffine: {
      int n = model.planes();
      for (int attempt = 0; attempt < 200; ++attempt) {
        Vec x = Vec::Zero(dim);
        double s0 = 0.5 + std::abs(gauss(rng));
        // S = lc*s0*I base point: +s0 on each e_ii, -s0 on each f_ii
        int boff = 1 + 2 * n + n * n;
        int coff = boff + n * (n + 1) / 2;
        int pair = 0;
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j, ++pair)
            if (i == j) {
              x[boff + pair] = s0;
              x[coff + pair] = -s0;
            }
        for (int i = 0; i < dim; ++i) x[i] += 0.15 * gauss(rng);
        if (in_domain(model, x) && domain_margin(model, x) > 0.03) return x;
      }
      fail(Errc::NumericalDegeneracy, "domain_point: no interior point found for hsp");
    }
    case FamilyTag::Point: {
      Vec x(dim);
      for (int i = 0; i < dim; ++i) x[i] = gauss(rng);
      return x;
    }
    case FamilyTag::Product: {
      Vec x(dim);
      int ao = 0;
      for (const auto& f : model.factors()) {
        x.segment(ao, f.algebra().dim()) = domain_point(f, rng);
        ao += f.algebra().dim();
      }
      return x;
    }
  }
  fail(Errc::InvalidInput, "domain_point: unknown family");
}

// seeded draw of an orbit point spread around the Gibbs mass at x
Vec orbit_point(const OrbitModel& model, const Vec& x, const Vec& q, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (model.tag()) {
    case FamilyTag::Sl2Nilpotent: {
      double r = -2.0 * std::max(q[0], 0.1) * std::log(1.0 - unif(rng));
      double phi = 2.0 * std::numbers::pi * unif(rng);
      Vec p(2);
      p << r, phi;
      return model.embed(p);
    }
    case FamilyTag::Sl2Hyperboloid: {
      double sigma = 1.0 + model.mass() + q.tail(2).norm();
      Vec p(2);
      p << q[1] + sigma * gauss(rng), q[2] + sigma * gauss(rng);
      return model.embed(p);
    }
    case FamilyTag::Su2Sphere: {
      Vec p(2);
      p << std::acos(1.0 - 2.0 * unif(rng)), 2.0 * std::numbers::pi * unif(rng);
      return model.embed(p);
    }
    case FamilyTag::OscPlane:
    case FamilyTag::HspAffine: {
      GaussianData g = gaussian_data(model, x);
      Eigen::LLT<Mat> llt(g.s);
      Vec mu = -llt.solve(g.xi);
      Vec z(mu.size());
      for (int i = 0; i < z.size(); ++i) z[i] = gauss(rng);
      // L^-T z has covariance S^-1; widen by 3x to surround the Gibbs mass
      Vec p = mu + 3.0 * Mat(llt.matrixU()).triangularView<Eigen::Upper>().solve(z);
      return model.embed(p);
    }
    case FamilyTag::Point:
      return model.base_functional();
    case FamilyTag::Product: {
      Vec a(model.algebra().dim());
      int ao = 0;
      for (const auto& f : model.factors()) {
        int d = f.algebra().dim();
        a.segment(ao, d) = orbit_point(f, x.segment(ao, d), q.segment(ao, d), rng);
        ao += d;
      }
      return a;
    }
  }
  fail(Errc::InvalidInput, "orbit_point: unknown family");
}

}  // namespace

LegendreReport legendre_check(const OrbitModel& model, int n_x, int n_orbit, uint64_t seed) {
  LegendreReport rep;
  rep.n_x = n_x;
  std::mt19937_64 rng(mix_seed(seed, 29));
  Mat zg = center_basis(model.algebra());

  std::vector<Vec> xs, qs;
  for (int i = 0; i < n_x; ++i) {
    Vec x = domain_point(model, rng);
    Vec q = geometric_heat(model, x);

    // (i) hull containment via nonnegative least squares on [points; 1]
    Mat a(model.algebra().dim() + 1, n_orbit);
    double sample_scale = 0;
    for (int j = 0; j < n_orbit; ++j) {
      Vec pt = orbit_point(model, x, q, rng);
      a.col(j).head(pt.size()) = pt;
      a(a.rows() - 1, j) = 1.0;
      sample_scale += pt.norm() / n_orbit;
    }
    Vec b(model.algebra().dim() + 1);
    b.head(q.size()) = q;
    b[b.size() - 1] = 1.0;
    Vec w = nnls(a, b);
    double resid = (a * w - b).norm();
    rep.worst_hull_residual = std::max(rep.worst_hull_residual, resid);
    if (resid > 1e-3 * (1.0 + sample_scale + q.norm())) rep.hull_failures++;

    // (iii) central invariance
    for (int k = 0; k < zg.cols(); ++k) {
      Vec q2 = geometric_heat(model, Vec(x + 0.37 * zg.col(k)));
      if ((q2 - q).norm() > 1e-7 * (1.0 + q.norm())) rep.central_failures++;
    }

    // (iv) gradient agreement
    Vec qfd = geometric_heat_fd(model, x);
    double gerr = (qfd - q).norm() / (1.0 + q.norm());
    rep.worst_gradient_error = std::max(rep.worst_gradient_error, gerr);
    if (gerr > 1e-6) rep.gradient_failures++;

    xs.push_back(x);
    qs.push_back(q);
  }

  // (ii) injectivity mod z(g) over random pairs
  std::uniform_int_distribution<int> pick(0, n_x - 1);
  for (int k = 0; k < 50; ++k) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Vec dx = residual_mod(xs[i] - xs[j], zg);
    if (dx.norm() < 0.05 * (1.0 + xs[i].norm() + xs[j].norm())) continue;
    if ((qs[i] - qs[j]).norm() <= 1e-6) rep.injectivity_failures++;
  }
  return rep;
}

// ---- JSON emission ------------------------------------------------------------

namespace {
using nlohmann::json;

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

const char* status_text(LambdaStatus s) {
  switch (s) {
    case LambdaStatus::InCminStar: return "InCminStar";
    case LambdaStatus::FalsifierNotRefuted: return "FalsifierNotRefuted";
    case LambdaStatus::Refuted: return "Refuted";
  }
  return "?";
}
}  // namespace

std::string to_json_text(const ClassificationReport& rep) {
  json j;
  j["schema"] = 1;
  j["kind"] = "classification";
  j["algebra"] = rep.algebra_name;
  j["spanning"] = rep.spanning;
  j["orbit_perp_dim"] = rep.orbit_perp.cols();
  j["cone_potential"] = rep.cone_potential_ok;
  j["adapted_found"] = rep.adapted_found;
  j["cmin_pointed"] = rep.cmin_pointed;
  j["cmin_in_cmax"] = rep.cmin_in_cmax;
  j["admissible"] = rep.admissible;
  j["lambda_on_t"] = rep.lambda_on_t;
  j["lambda_status"] = status_text(rep.lambda_status);
  j["gibbs_exists"] = rep.gibbs_exists;
  j["omega"] = rep.omega_description;
  if (rep.lambda_status == LambdaStatus::Refuted) {
    json w;
    w["generator"] = rep.refuted_generator >= 0 ? rep.refuted_generator : rep.falsifier.generator;
    w["value"] = rep.refuted_generator >= 0 ? 0.0 : rep.falsifier.value;
    j["refutation"] = w;
  } else if (!rep.lambda_on_t) {
    j["falsifier_words_tried"] = rep.falsifier.words_tried;
  }
  if (rep.cmin) j["cmin_generators"] = rep.cmin->vectors.cols();
  return j.dump(2);
}

std::string to_json_text(const DomainScanReport& rep) {
  json j;
  j["schema"] = 1;
  j["kind"] = "domain_scan";
  j["mismatches"] = rep.mismatches;
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row;
    row["x"] = vec_json(r.x);
    row["predicted_finite"] = r.predicted_finite;
    row["probe_finite"] = r.probe_finite;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2);
}

std::string to_json_text(const LegendreReport& rep) {
  json j;
  j["schema"] = 1;
  j["kind"] = "legendre";
  j["n_x"] = rep.n_x;
  j["hull_failures"] = rep.hull_failures;
  j["injectivity_failures"] = rep.injectivity_failures;
  j["gradient_failures"] = rep.gradient_failures;
  j["central_failures"] = rep.central_failures;
  j["worst_hull_residual"] = rep.worst_hull_residual;
  j["worst_gradient_error"] = rep.worst_gradient_error;
  j["passed"] = rep.passed();
  return j.dump(2);
}

}  // namespace orbitherm
