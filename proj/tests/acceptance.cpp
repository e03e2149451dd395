// Acceptance gate: one line per criterion, nonzero exit iff any fails.
// Tolerances are pinned here, next to the checks that use them.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "orbitherm/algebra.hpp"
#include "orbitherm/cones.hpp"
#include "orbitherm/matrixops.hpp"
#include "orbitherm/oracle.hpp"
#include "orbitherm/orbits.hpp"
#include "orbitherm/pipeline.hpp"
#include "orbitherm/roots.hpp"
#include "orbitherm/thermo.hpp"

using namespace orbitherm;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

struct Criterion {
  int id;
  std::string title;
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
  void expect_close(double got, double want, double tol, const std::string& what) {
    double err = std::abs(got - want);
    if (!(err <= tol * (1.0 + std::abs(want)))) {
      std::ostringstream os;
      os << what << ": got " << got << ", want " << want << " (rel tol " << tol << ")";
      expect(false, os.str());
    }
  }
  void finish() {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, title.c_str());
    for (const auto& n : notes) std::printf("         - %s\n", n.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

// first adapted positive system whose noncompact chamber contains the
// all-ones t-vector (the chamber the catalog answers are stated in)
PositiveSystem positive_chamber(const RootDatum& rd) {
  auto systems = positive_systems(rd);
  Vec ones = Vec::Ones(rd.rank());
  for (const auto& ps : systems) {
    if (!ps.adapted) continue;
    bool pos = true;
    for (int idx : ps.noncompact_positive)
      if (i_alpha(rd.roots[idx], ones) <= 0) pos = false;
    if (pos) return ps;
  }
  for (const auto& ps : systems)
    if (ps.adapted) return ps;
  throw std::runtime_error("no adapted positive system");
}

// Gauss-Legendre nodes/weights on [-1, 1]
void gauss_legendre(int n, std::vector<double>& xs, std::vector<double>& ws) {
  xs.assign(n, 0.0);
  ws.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    xs[i] = -x;
    xs[n - 1 - i] = x;
    ws[i] = ws[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

// integrate f over [a,b] x [c,d] with an nx x ny Gauss-Legendre grid
template <class F>
double gl2d(F&& f, double a, double b, double c, double d, int nx, int ny) {
  std::vector<double> x1, w1, x2, w2;
  gauss_legendre(nx, x1, w1);
  gauss_legendre(ny, x2, w2);
  double sum = 0;
  for (int i = 0; i < nx; ++i) {
    double u = 0.5 * (a + b) + 0.5 * (b - a) * x1[i];
    for (int j = 0; j < ny; ++j) {
      double v = 0.5 * (c + d) + 0.5 * (d - c) * x2[j];
      sum += w1[i] * w2[j] * f(u, v);
    }
  }
  return sum * 0.25 * (b - a) * (d - c);
}

template <class F>
double gl1d(F&& f, double a, double b, int n) {
  std::vector<double> xs, ws;
  gauss_legendre(n, xs, ws);
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += ws[i] * f(0.5 * (a + b) + 0.5 * (b - a) * xs[i]);
  return sum * 0.5 * (b - a);
}

// a point of the model's convergence domain, with margin from the boundary
Vec sample_domain(const OrbitModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int dim = m.algebra().dim();
  Vec x = Vec::Zero(dim);
  switch (m.tag()) {
    case FamilyTag::Sl2Nilpotent:
    case FamilyTag::Sl2Hyperboloid: {
      double z = 0.8 + 1.6 * std::abs(u(rng));
      x << z, 0.55 * z * u(rng), 0.55 * z * u(rng);
      return x;
    }
    case FamilyTag::Su2Sphere: {
      x = vec3(u(rng), u(rng), u(rng)) * 1.8;
      return x;
    }
    case FamilyTag::OscPlane: {
      x << u(rng), 0.8 * u(rng), 0.8 * u(rng), 0.5 + 2.0 * std::abs(u(rng));
      return x;
    }
    case FamilyTag::HspAffine: {
      // t-part positive, small V perturbation keeps S(x) positive definite
      const auto& g = m.algebra();
      RootDatum rd = root_decomposition(g, g.meta()->cartan);
      Vec xt(rd.rank());
      xt[0] = u(rng);
      for (int i = 1; i < rd.rank(); ++i) xt[i] = 0.6 + 1.5 * std::abs(u(rng));
      x = from_t(rd, xt);
      Mat v = g.meta()->v_space;
      for (int k = 0; k < v.cols(); ++k) x += 0.15 * u(rng) * v.col(k);
      return x;
    }
    default:
      throw std::runtime_error("sample_domain: unsupported family");
  }
}

// KL penalty of the azimuthal tilt 1 + eps*cos(2*phi) against the uniform
// angular marginal; the exact entropy deficit of the tilted ensemble
double tilt_deficit(double eps) {
  return gl1d([&](double t) { return (1.0 + eps * std::cos(t)) * std::log1p(eps * std::cos(t)); },
              0.0, 2.0 * kPi, 128) /
         (2.0 * kPi);
}

// ---- criteria -----------------------------------------------------------------

void criterion_1() {
  Criterion c{1, "Gaussian Laplace formula agrees with R^n quadrature"};
  const double kRel = 1e-8;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int n : {1, 2})
    for (int rep = 0; rep < 5; ++rep) {
      Mat b(n, n);
      Vec xi(n);
      for (int i = 0; i < n; ++i) {
        xi[i] = gauss(rng);
        for (int j = 0; j < n; ++j) b(i, j) = gauss(rng);
      }
      Mat a = b.transpose() * b + 0.5 * Mat::Identity(n, n);
      PartitionValue pv = gaussian_laplace(a, xi);
      double ref = gauss_quad_rn(a, xi);
      c.expect(!pv.divergent, "positive definite draw flagged divergent");
      c.expect_close(pv.value, ref, kRel, "closed form vs quadrature");
    }
  // indefinite and singular quadratic parts must be flagged divergent
  for (int rep = 0; rep < 5; ++rep) {
    double t = 0.3 + 0.2 * rep;
    Mat r(2, 2);
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    Mat a = r * vec2(1.0, -0.3 - 0.1 * rep).asDiagonal() * r.transpose();
    c.expect(gaussian_laplace(a, vec2(0.1, -0.2)).divergent, "indefinite draw not flagged");
  }
  Mat sing = Mat::Zero(2, 2);
  sing(0, 0) = 1.0;
  c.expect(gaussian_laplace(sing, vec2(0, 1)).divergent, "singular draw not flagged");
  c.finish();
}

void criterion_2() {
  Criterion c{2, "nilpotent family: quadrature, Monte Carlo, homogeneity"};
  auto nil = OrbitModel::sl2_nilpotent();
  const double kQuadRel = 1e-6, kHomRel = 1e-9;
  const struct {
    double z, s;
  } pts[] = {{1.0, 0.0}, {2.0, 1.0}, {1.0, 0.5}};
  for (auto [z, s] : pts) {
    Vec x = vec3(z, s, 0.0);
    double want = 2.0 * kPi / std::sqrt(z * z - s * s);
    c.expect_close(laplace_quadrature(nil, x).value, want, kQuadRel, "quadrature vs 2*pi/sqrt(q)");
    c.expect_close(closed_form_Z(nil, x).value, want, 1e-12, "closed form vs 2*pi/sqrt(q)");
  }
  for (Vec x : {vec3(2, 1, 0), vec3(1, 0, 0)}) {
    double want = 2.0 * kPi / std::sqrt(x[0] * x[0] - x[1] * x[1]);
    McResult mc = laplace_mc(nil, x, 1'000'000);
    c.expect(!mc.infinite_variance, "MC estimator variance blew up");
    c.expect(mc.stderr_value > 0 && mc.stderr_value < 0.05 * want, "MC stderr out of range");
    c.expect(std::abs(mc.value - want) <= 3.0 * mc.stderr_value,
             "MC estimate misses closed form by more than 3 stderr");
  }
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    Vec x = sample_domain(nil, rng);
    for (double r : {0.3, 1.7, 4.0}) {
      double zr = closed_form_Z(nil, Vec(r * x)).value;
      double z1 = closed_form_Z(nil, x).value;
      c.expect(std::abs(zr * r - z1) <= kHomRel * std::abs(z1), "Z(r x) != Z(x)/r");
    }
  }
  c.finish();
}

void criterion_3() {
  Criterion c{3, "hyperboloid family: quadrature and Duistermaat-Heckman sum"};
  auto hyp = OrbitModel::sl2_hyperboloid(1.0);
  for (double t : {0.5, 1.0, 2.0}) {
    double want = std::exp(-t) / t;
    c.expect_close(laplace_quadrature(hyp, vec3(t, 0, 0)).value, want, 1e-6,
                   "quadrature vs exp(-t)/t");
  }
  LieAlgebra g = build_so12();
  RootDatum rd = root_decomposition(g, g.meta()->cartan);
  PositiveSystem ps = positive_chamber(rd);
  WeylGroup wg = weyl_group(rd);
  for (double t : {0.5, 1.0, 2.0}) {
    double want = std::exp(-t) / t;
    c.expect_close(dh_partition(rd, ps, wg, vec1(1.0), vec1(t)), want, 1e-12,
                   "DH sum vs exp(-t)/t");
  }
  c.finish();
}

void criterion_4() {
  Criterion c{4, "su(2) family: quadrature, Weyl group, cones, Omega = g"};
  auto sph = OrbitModel::su2_sphere(1.0);
  for (double t : {0.5, 1.0, 2.0})
    c.expect_close(laplace_quadrature(sph, vec3(0, 0, t)).value, 2.0 * std::sinh(t) / t, 1e-6,
                   "quadrature vs 2*sinh(t)/t");
  LieAlgebra g = build_su2();
  RootDatum rd = root_decomposition(g, g.meta()->cartan);
  c.expect(weyl_group(rd).elements.size() == 2, "Weyl group order is not 2");
  PositiveSystem ps = positive_chamber(rd);
  Cone cmin = c_min(rd, ps);
  c.expect(cmin.rep == Cone::Rep::Generators && cmin.vectors.cols() == 0,
           "C_min of su(2) is not the zero cone");
  Cone cmax = c_max(rd, ps);
  c.expect(contains(cmax, vec1(1.0)) && contains(cmax, vec1(-1.0)),
           "C_max of su(2) is not all of t");
  for (Vec lam : {vec3(0, 0, 1), vec3(0.2, -0.5, 1.0), vec3(1e-3, 0, 0)}) {
    auto rep = classify(g, lam, 42, "su2");
    c.expect(rep.gibbs_exists, "Gibbs ensemble should exist for every functional");
    c.expect(rep.omega_description.find("all of t") != std::string::npos,
             "Omega description should cover all of t");
  }
  c.finish();
}

void criterion_5() {
  Criterion c{5, "oscillator: convolution formula vs 2-d quadrature, central heat invariance"};
  LieAlgebra g = build_osc();
  RootDatum rd = root_decomposition(g, g.meta()->cartan);
  PositiveSystem ps = positive_chamber(rd);
  WeylGroup wg = weyl_group(rd);
  auto model = OrbitModel::osc_plane(1.0, 0.5);
  Vec lam_t = restrict_functional(rd, model.base_functional());

  const struct {
    double s, t;
  } pts[] = {{0.5, 1.0}, {0.0, 2.0}, {1.2, 0.7}, {-0.5, 3.0}, {0.3, 1.6}};
  double c_v = 0;
  bool first = true;
  for (auto [s, t] : pts) {
    Vec xt = vec2(s, t);
    double conv = factorized_partition(rd, ps, wg, lam_t, xt);
    double quad = laplace_quadrature(model, from_t(rd, xt), 1e-10).value;
    if (first) {
      c_v = conv / quad;
      c.expect(std::abs(c_v - 1.0) <= 1e-6, "convolution normalization c_V is not 1");
      first = false;
    } else {
      c.expect_close(conv, c_v * quad, 1e-6, "convolution formula vs quadrature");
    }
  }

  Vec cvec = g.meta()->center.col(0);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 4; ++k) {
    Vec x = sample_domain(model, rng);
    Vec q0 = geometric_heat(model, x);
    for (double tau : {0.7, -1.3}) {
      Vec q1 = geometric_heat(model, Vec(x + tau * cvec));
      c.expect((q1 - q0).cwiseAbs().maxCoeff() <= 1e-7 * (1.0 + q0.norm()),
               "heat not invariant under central shift of x");
    }
  }
  c.finish();
}

void criterion_6() {
  Criterion c{6, "root and cone fixtures match the catalog"};
  {
    LieAlgebra g = build_sl2();
    RootDatum rd = root_decomposition(g, g.meta()->cartan);
    c.expect(rd.roots.size() == 2, "sl2: expected one +- pair of roots");
    for (const auto& r : rd.roots) {
      c.expect(r.kind == RootKind::NonCompact, "sl2: roots must be noncompact");
      c.expect(std::abs(std::abs(r.beta[0]) - 1.0) < 1e-10, "sl2: beta must be +-1");
    }
    PositiveSystem ps = positive_chamber(rd);
    Cone lo = c_min(rd, ps), hi = c_max(rd, ps);
    c.expect(cone_subset(lo, hi) && cone_subset(hi, lo), "sl2: C_min and C_max must coincide");
    c.expect(is_pointed(lo), "sl2: C_min must be pointed");
  }
  {
    LieAlgebra g = build_su2();
    RootDatum rd = root_decomposition(g, g.meta()->cartan);
    c.expect(rd.roots.size() == 2, "su2: expected one +- pair of roots");
    for (const auto& r : rd.roots)
      c.expect(r.kind == RootKind::Compact, "su2: roots must be compact");
  }
  {
    LieAlgebra g = build_osc();
    RootDatum rd = root_decomposition(g, g.meta()->cartan);
    c.expect(rd.roots.size() == 2, "osc: expected one +- pair of roots");
    for (const auto& r : rd.roots) {
      c.expect(r.origin == RootOrigin::Solvable, "osc: roots must come from the radical");
      c.expect(std::abs(r.beta[0]) < 1e-10 && std::abs(std::abs(r.beta[1]) - 0.5) < 1e-10,
               "osc: beta must be (0, +-1/2)");
    }
    PositiveSystem ps = positive_chamber(rd);
    Cone lo = c_min(rd, ps), hi = c_max(rd, ps);
    c.expect(lo.rep == Cone::Rep::Generators && lo.vectors.cols() == 1,
             "osc: C_min must be a single ray");
    if (lo.vectors.cols() == 1) {
      Vec gen = lo.vectors.col(0);
      c.expect(gen[0] > 0 && std::abs(gen[1]) <= 1e-10 * gen[0],
               "osc: C_min ray must be the center direction");
    }
    c.expect(contains(hi, vec2(5, 1)) && contains(hi, vec2(-5, 1)) && contains(hi, vec2(0, 0)) &&
                 !contains(hi, vec2(1, -0.1)),
             "osc: C_max must be the half plane x_t[1] >= 0");
    c.expect(cone_subset(lo, hi) && !cone_subset(hi, lo), "osc: C_min strictly inside C_max");
  }
  {
    LieAlgebra g = build_hsp(1);
    RootDatum rd = root_decomposition(g, g.meta()->cartan);
    c.expect(rd.roots.size() == 4, "hsp(1): expected two +- pairs");
    int half = 0, whole = 0;
    for (const auto& r : rd.roots) {
      c.expect(r.kind == RootKind::NonCompact, "hsp(1): all roots noncompact");
      if (std::abs(std::abs(r.beta[1]) - 0.5) < 1e-10) ++half;
      if (std::abs(std::abs(r.beta[1]) - 1.0) < 1e-10) ++whole;
    }
    c.expect(half == 2 && whole == 2, "hsp(1): beta multiset must be {+-1/2, +-1}");
    PositiveSystem ps = positive_chamber(rd);
    Cone lo = c_min(rd, ps), hi = c_max(rd, ps);
    c.expect(is_pointed(lo) && lo.vectors.cols() == 2, "hsp(1): C_min must be a pointed quadrant");
    c.expect(contains(hi, vec2(-3, 0.5)) && !contains(hi, vec2(0, -0.1)),
             "hsp(1): C_max must be the half plane x_t[1] >= 0");
    c.expect(cone_subset(lo, hi), "hsp(1): C_min inside C_max");
  }
  {
    LieAlgebra g = build_mot2();
    RootDatum rd = root_decomposition(g, g.meta()->cartan);
    c.expect(!cone_potential(rd), "mot2: cone potential must fail");
  }
  c.finish();
}

void criterion_7() {
  Criterion c{7, "classification verdicts match the catalog"};
  int mismatches = 0;
  {
    auto rep = classify(build_sl2(), vec3(0, 2, -2), 42, "sl2");  // -kappa(z0, .): timelike
    if (!rep.gibbs_exists) ++mismatches;
    c.expect(rep.lambda_on_t, "sl2 timelike: functional should restrict to t exactly");
    c.expect(rep.lambda_status == LambdaStatus::InCminStar,
             "sl2 timelike: expected the exact C_min* membership");
    c.expect(rep.admissible, "sl2: cone chain must be admissible");
  }
  {
    auto rep = classify(build_sl2(), vec3(8, 0, 0), 42, "sl2");  // kappa(h, .): spacelike
    if (rep.gibbs_exists) ++mismatches;
    c.expect(!rep.lambda_on_t, "sl2 spacelike: functional is not supported on t");
    c.expect(rep.lambda_status == LambdaStatus::Refuted,
             "sl2 spacelike: the falsifier should refute");
    c.expect(rep.falsifier.refuted && rep.falsifier.value < 0,
             "sl2 spacelike: falsifier evidence missing");
  }
  {
    auto rep = classify(build_su2(), vec3(0.3, -1, 2), 42, "su2");
    if (!rep.gibbs_exists) ++mismatches;
  }
  {
    auto rep = classify(build_mot2(), vec3(1, 0, 0), 42, "mot2");
    if (rep.gibbs_exists) ++mismatches;
    c.expect(!rep.cone_potential_ok, "mot2: cone potential should fail");
  }
  c.expect(mismatches == 0, "catalog verdict mismatches: " + std::to_string(mismatches));
  c.finish();
}

void criterion_8() {
  Criterion c{8, "domain scans: closed-form domain vs divergence probe"};
  std::vector<OrbitModel> models;
  models.push_back(OrbitModel::sl2_nilpotent());
  models.push_back(OrbitModel::sl2_hyperboloid(1.0));
  models.push_back(OrbitModel::su2_sphere(1.0));
  models.push_back(OrbitModel::osc_plane(1.0, 0.5));
  models.push_back(OrbitModel::hsp_affine(1, 1.0));
  for (const auto& m : models) {
    auto grid = catalog_domain_grid(m, 20);
    c.expect(grid.size() >= 20, m.name() + ": grid smaller than 20 points");
    auto rep = domain_scan(m, grid);
    c.expect(rep.mismatches == 0,
             m.name() + ": " + std::to_string(rep.mismatches) + " domain mismatches");
  }
  c.finish();
}

void criterion_9() {
  Criterion c{9, "Legendre duality of the heat map on 50 points per family"};
  std::vector<OrbitModel> models;
  models.push_back(OrbitModel::sl2_nilpotent());
  models.push_back(OrbitModel::sl2_hyperboloid(1.0));
  models.push_back(OrbitModel::su2_sphere(1.0));
  models.push_back(OrbitModel::osc_plane(1.0, 0.5));
  models.push_back(OrbitModel::hsp_affine(1, 1.0));
  for (const auto& m : models) {
    auto rep = legendre_check(m, 50, 400);
    c.expect(rep.n_x == 50, m.name() + ": wrong sample count");
    c.expect(rep.hull_failures == 0, m.name() + ": heat left the moment hull");
    c.expect(rep.injectivity_failures == 0, m.name() + ": heat map not injective mod center");
    c.expect(rep.gradient_failures == 0, m.name() + ": heat disagrees with -grad log Z");
    c.expect(rep.central_failures == 0, m.name() + ": heat not central-invariant");
  }
  c.finish();
}

void criterion_10() {
  Criterion c{10, "thermodynamic properties: convexity, invariance, entropy, temperedness"};
  std::vector<OrbitModel> models;
  models.push_back(OrbitModel::sl2_nilpotent());
  models.push_back(OrbitModel::sl2_hyperboloid(1.0));
  models.push_back(OrbitModel::su2_sphere(1.0));
  models.push_back(OrbitModel::osc_plane(1.0, 0.5));
  models.push_back(OrbitModel::hsp_affine(1, 1.0));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.15, 0.85);

  // log-convexity of Z along 100 random domain segments
  for (const auto& m : models)
    for (int k = 0; k < 20; ++k) {
      Vec x1 = sample_domain(m, rng), x2 = sample_domain(m, rng);
      double th = unit(rng);
      double lhs = closed_form_log_Z(m, Vec(th * x1 + (1 - th) * x2));
      double rhs = th * closed_form_log_Z(m, x1) + (1 - th) * closed_form_log_Z(m, x2);
      c.expect(lhs <= rhs + 1e-9 * (1.0 + std::abs(rhs)), m.name() + ": log Z not convex");
    }

  // Ad-invariance of Z under ten flows per family
  std::normal_distribution<double> gauss;
  for (const auto& m : models) {
    const LieAlgebra& g = m.algebra();
    for (int k = 0; k < 10; ++k) {
      Vec x = sample_domain(m, rng);
      Vec y(g.dim());
      for (int i = 0; i < g.dim(); ++i) y[i] = 0.3 * gauss(rng);
      Mat op = g.ad(y).exp();
      double a = closed_form_log_Z(m, x), b = closed_form_log_Z(m, Vec(op * x));
      c.expect(std::abs(a - b) <= 1e-7 * (1.0 + std::abs(a)), m.name() + ": Z not Ad-invariant");
    }
  }

  // W_min monotonicity: shifting x along C_min directions shrinks Z
  {
    auto nil = OrbitModel::sl2_nilpotent();
    auto hyp = OrbitModel::sl2_hyperboloid(1.0);
    auto osc = OrbitModel::osc_plane(1.0, 0.5);
    for (int k = 0; k < 10; ++k) {
      Vec x = sample_domain(nil, rng);
      c.expect(closed_form_log_Z(nil, Vec(x + vec3(0.5, 0, 0))) < closed_form_log_Z(nil, x),
               "nilpotent: Z not decreasing along the forward cone");
      x = sample_domain(hyp, rng);
      c.expect(closed_form_log_Z(hyp, Vec(x + vec3(0.5, 0, 0))) < closed_form_log_Z(hyp, x),
               "hyperboloid: Z not decreasing along the forward cone");
      x = sample_domain(osc, rng);
      Vec dc = Vec::Zero(4), dz = Vec::Zero(4);
      dc[0] = 0.5;
      dz[3] = 0.5;
      c.expect(closed_form_log_Z(osc, Vec(x + dc)) < closed_form_log_Z(osc, x),
               "oscillator: Z not decreasing along the center ray");
      c.expect(closed_form_log_Z(osc, Vec(x + dz)) < closed_form_log_Z(osc, x),
               "oscillator: Z not decreasing along z0");
    }
  }

  // entropy identity s = Q.x + log Z with an independent finite-difference Q
  for (const auto& m : models)
    for (int k = 0; k < 5; ++k) {
      Vec x = sample_domain(m, rng);
      double s = entropy(m, x);
      double ref = geometric_heat_fd(m, x).dot(x) + closed_form_log_Z(m, x);
      c.expect(std::abs(s - ref) <= 1e-9 * (1.0 + std::abs(s)),
               m.name() + ": entropy identity broken");
    }

  // entropy maximality: ten matched-mean azimuthal tilts lose exactly the
  // tilt's KL penalty
  {
    const double kEps[] = {0.1, -0.1, 0.25, -0.25, 0.5};
    // su(2) sphere at x = (0, 0, 1.2): p(theta, phi) with uniform phi marginal
    auto sph = OrbitModel::su2_sphere(1.0);
    Vec x = vec3(0, 0, 1.2);
    double z = closed_form_Z(sph, x).value;
    double s_analytic = entropy(sph, x);
    Vec q_mean = geometric_heat(sph, x);
    for (double eps : kEps) {
      auto dens = [&](double th, double ph) {
        double tilt = 1.0 + eps * std::cos(2.0 * ph);
        double mu = std::sin(th) / (2.0 * kPi);
        return tilt * std::exp(-1.2 * std::cos(th)) / z * mu;
      };
      double mass = gl2d([&](double th, double ph) { return dens(th, ph); }, 0, kPi, 0, 2 * kPi,
                         64, 64);
      c.expect(std::abs(mass - 1.0) <= 1e-9, "su2 tilt: mass not preserved");
      Vec mean(3);
      for (int i = 0; i < 3; ++i)
        mean[i] = gl2d(
            [&](double th, double ph) {
              Vec a = vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
              return a[i] * dens(th, ph);
            },
            0, kPi, 0, 2 * kPi, 64, 64);
      c.expect((mean - q_mean).norm() <= 1e-7, "su2 tilt: mean not matched");
      double s_tilt = gl2d(
          [&](double th, double ph) {
            double w = dens(th, ph), mu = std::sin(th) / (2.0 * kPi);
            return w > 0 ? -w * std::log(w / mu) : 0.0;
          },
          0, kPi, 0, 2 * kPi, 64, 64);
      double want_gap = tilt_deficit(eps);
      c.expect(s_analytic - s_tilt > 0.5 * want_gap, "su2 tilt: Gibbs entropy not maximal");
      c.expect(std::abs((s_analytic - s_tilt) - want_gap) <= 1e-6,
               "su2 tilt: entropy deficit is not the tilt's KL penalty");
    }
    // nilpotent cone at x = (1.5, 0, 0): p(r, phi) with uniform phi marginal
    auto nil = OrbitModel::sl2_nilpotent();
    x = vec3(1.5, 0, 0);
    z = closed_form_Z(nil, x).value;
    s_analytic = entropy(nil, x);
    q_mean = geometric_heat(nil, x);
    double rmax = 30.0 / 1.5;
    for (double eps : kEps) {
      auto dens = [&](double r, double ph) {
        return (1.0 + eps * std::cos(2.0 * ph)) * std::exp(-1.5 * r) / z;
      };
      Vec mean(3);
      for (int i = 0; i < 3; ++i)
        mean[i] = gl2d(
            [&](double r, double ph) {
              Vec a = vec3(r, r * std::cos(ph), r * std::sin(ph));
              return a[i] * dens(r, ph);
            },
            0, rmax, 0, 2 * kPi, 96, 64);
      c.expect((mean - q_mean).norm() <= 1e-7, "nilpotent tilt: mean not matched");
      double s_tilt = gl2d(
          [&](double r, double ph) {
            double w = dens(r, ph);
            return w > 0 ? -w * std::log(w) : 0.0;
          },
          0, rmax, 0, 2 * kPi, 96, 64);
      double want_gap = tilt_deficit(eps);
      c.expect(s_analytic - s_tilt > 0.5 * want_gap, "nilpotent tilt: Gibbs entropy not maximal");
      c.expect(std::abs((s_analytic - s_tilt) - want_gap) <= 1e-6,
               "nilpotent tilt: entropy deficit is not the tilt's KL penalty");
    }
  }

  // Fisher-Rao: positive semidefinite, kernel exactly the center
  for (const auto& m : models)
    for (int k = 0; k < 5; ++k) {
      Vec x = sample_domain(m, rng);
      Mat fi = fisher_rao(m, x);
      Eigen::SelfAdjointEigenSolver<Mat> es(fi);
      double scale = std::max(1.0, fi.norm());
      int positive = 0;
      for (int i = 0; i < es.eigenvalues().size(); ++i) {
        c.expect(es.eigenvalues()[i] >= -1e-9 * scale, m.name() + ": Fisher metric indefinite");
        if (es.eigenvalues()[i] > 1e-9 * scale) ++positive;
      }
      int center_cols = static_cast<int>(m.algebra().meta()->center.cols());
      c.expect(positive == m.algebra().dim() - center_cols,
               m.name() + ": Fisher rank must be dim minus center");
    }

  // temperedness exponents: k = 1 on the sl2 families, k = 0 on su(2)
  {
    const struct {
      OrbitModel m;
      Vec x;
      double k;
    } cases[] = {{OrbitModel::sl2_nilpotent(), vec3(1.2, 0.3, 0), 1.0},
                 {OrbitModel::sl2_hyperboloid(1.0), vec3(1.5, 0, 0.4), 1.0},
                 {OrbitModel::su2_sphere(1.0), vec3(0.4, -0.2, 1.0), 0.0}};
    for (const auto& cs : cases) {
      auto fit = temperedness_exponent(cs.m, cs.x);
      c.expect(std::abs(fit.k - cs.k) <= 0.05, cs.m.name() + ": temperedness exponent off");
    }
    auto osc = OrbitModel::osc_plane(1.0, 0.5);
    Vec xo = Vec::Zero(4);
    xo[0] = 0.2;
    xo[3] = 1.0;
    auto fit = temperedness_exponent(osc, xo);
    c.expect(std::abs(fit.k - 1.0) <= 0.05, "oscillator: temperedness exponent off");
  }
  c.finish();
}

void criterion_11() {
  Criterion c{11, "multiplicative Jordan pieces and the escape classifier"};
  std::mt19937_64 rng(47);
  std::normal_distribution<double> gauss;

  // reconstruction on a catalog and on random invertible matrices
  std::vector<Mat> samples;
  {
    Mat rot(2, 2);
    rot << 0.6, -0.8, 0.8, 0.6;
    samples.push_back(2.0 * rot);
    Mat shear(2, 2);
    shear << 1, 1, 0, 1;
    samples.push_back(shear);
    samples.push_back(vec3(2, 0.5, 1).asDiagonal());
  }
  for (int k = 0; k < 40; ++k) {
    Mat m(3, 3);
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = gauss(rng);
    if (std::abs(m.determinant()) < 1e-2) {
      --k;
      continue;
    }
    samples.push_back(m);
  }
  for (const auto& m : samples) {
    JordanTriple jt = multiplicative_jordan(m);
    double scale = std::max(1.0, m.norm());
    c.expect((jt.elliptic * jt.hyperbolic * jt.unipotent - m).norm() <= 1e-9 * scale,
             "Jordan pieces do not multiply back");
    c.expect((jt.elliptic * jt.hyperbolic - jt.hyperbolic * jt.elliptic).norm() <= 1e-8 * scale &&
                 (jt.elliptic * jt.unipotent - jt.unipotent * jt.elliptic).norm() <=
                     1e-8 * scale &&
                 (jt.hyperbolic * jt.unipotent - jt.unipotent * jt.hyperbolic).norm() <=
                     1e-8 * scale,
             "Jordan pieces do not commute");
    Eigen::EigenSolver<Mat> els(jt.elliptic, false);
    for (int i = 0; i < els.eigenvalues().size(); ++i)
      c.expect(std::abs(std::abs(els.eigenvalues()[i]) - 1.0) <= 1e-8,
               "elliptic piece spectrum not unit modulus");
    Eigen::EigenSolver<Mat> es(jt.hyperbolic, false);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      auto ev = es.eigenvalues()[i];
      c.expect(std::abs(ev.imag()) <= 1e-8 * scale && ev.real() > 0,
               "hyperbolic piece spectrum not positive real");
    }
    int n = static_cast<int>(m.rows());
    Mat nilp = jt.unipotent - Mat::Identity(n, n);
    Mat pw = nilp;
    for (int i = 1; i < n; ++i) pw = pw * nilp;
    c.expect(pw.norm() <= 1e-8 * scale, "unipotent piece not unipotent");
  }

  // escape classifier: catalog
  {
    Mat d = vec2(2.0, 0.5).asDiagonal();
    c.expect(escape_classifier(d, vec2(1, 0)) == Escape::EscapesForward, "diag e1 should escape");
    c.expect(escape_classifier(d, vec2(0, 1)) == Escape::EscapesBackward,
             "diag e2 should escape backward");
    Mat rot(2, 2);
    rot << 0.6, -0.8, 0.8, 0.6;
    c.expect(escape_classifier(rot, vec2(1, 1)) == Escape::Bounded, "rotation should be bounded");
    Mat shear(2, 2);
    shear << 1, 1, 0, 1;
    c.expect(escape_classifier(shear, vec2(0, 1)) == Escape::EscapesForward,
             "shear should escape through polynomial growth");
    c.expect(escape_classifier(shear, vec2(1, 0)) == Escape::Bounded,
             "shear fixes e1, orbit bounded");
  }

  // escape classifier vs brute-force iteration on 100 filtered random draws
  int kept = 0, attempts = 0;
  while (kept < 100 && attempts < 4000) {
    ++attempts;
    Mat m(3, 3);
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = gauss(rng);
    if (std::abs(m.determinant()) < 1e-3) continue;
    Eigen::EigenSolver<Mat> es(m);
    bool marginal = false;
    for (int i = 0; i < 3; ++i)
      if (std::abs(std::abs(es.eigenvalues()[i]) - 1.0) < 0.05) marginal = true;
    if (marginal) continue;
    Vec v = vec3(gauss(rng), gauss(rng), gauss(rng));
    if (v.norm() < 1e-3) continue;
    v /= v.norm();
    // v must load every eigendirection so the dominant rate is visible
    Eigen::FullPivLU<CMat> lu(es.eigenvectors());
    CVec coords = lu.solve(v.cast<std::complex<double>>());
    bool degenerate = false;
    for (int i = 0; i < 3; ++i)
      if (std::abs(coords[i]) < 1e-2) degenerate = true;
    if (degenerate) continue;
    ++kept;

    auto runs_away = [&](const Mat& g) {
      Vec w = v;
      for (int it = 0; it < 200; ++it) {
        w = g * w;
        if (w.norm() > 100.0) return true;
      }
      return false;
    };
    Escape want = runs_away(m)            ? Escape::EscapesForward
                  : runs_away(m.inverse()) ? Escape::EscapesBackward
                                           : Escape::Bounded;
    Escape got = escape_classifier(m, v);
    if (got != want) {
      std::ostringstream os;
      os << "escape mismatch: classifier says " << escape_name(got) << ", iteration says "
         << escape_name(want);
      c.expect(false, os.str());
    }
  }
  c.expect(kept == 100, "could not collect 100 filtered samples");
  c.finish();
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
