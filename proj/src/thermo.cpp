#include "orbitherm/thermo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "orbitherm/matrixops.hpp"

namespace orbitherm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat lorentz() {
  Vec d(3);
  d << 1, -1, -1;
  return d.asDiagonal();
}

double lorentz_q(const Vec& x) { return x[0] * x[0] - x[1] * x[1] - x[2] * x[2]; }

// J with omega(u, v) = u^T J v on coordinates (p_1..p_n, q_1..q_n)
Mat symplectic_j(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = 1;
    j(n + i, i) = -1;
  }
  return j;
}

// stable log(2 sinh(y) / r) for y = rho * r
double log_sphere_z(double rho, double r) {
  double y = rho * r;
  if (y < 1e-6) return std::log(2.0 * rho) + std::log1p(y * y / 6.0);
  return y + std::log1p(-std::exp(-2.0 * y)) - std::log(r);
}
}  // namespace

PartitionValue PartitionValue::finite(double log_z) {
  return {false, std::exp(log_z), log_z};
}
PartitionValue PartitionValue::infinite() {
  return {true, std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
}

PartitionValue gaussian_laplace(const Mat& a, const Vec& xi) {
  require(a.rows() == a.cols() && a.rows() == xi.size(), Errc::DimensionMismatch,
          "gaussian_laplace: A must be square and match xi");
  if (a.rows() == 0) return PartitionValue::finite(0.0);
  require((a - a.transpose()).norm() <= 1e-9 * (1.0 + a.norm()), Errc::InvalidInput,
          "gaussian_laplace: A must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() <= 1e-12 * scale) return PartitionValue::infinite();
  double logdet = es.eigenvalues().array().log().sum();
  Vec y = es.eigenvectors().transpose() * xi;
  double quad = (y.array().square() / es.eigenvalues().array()).sum();
  return PartitionValue::finite(-0.5 * logdet + 0.5 * quad);
}

GaussianData gaussian_data(const OrbitModel& model, const Vec& x) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "gaussian_data");
  if (model.tag() == FamilyTag::OscPlane) {
    double lc = model.lambda_c();
    GaussianData g;
    g.h0 = lc * x[0] + model.lambda_z() * x[3];
    g.xi = Vec(2);
    g.xi << -lc * x[2], lc * x[1];
    g.s = (lc * x[3] / 2.0) * Mat::Identity(2, 2);
    return g;
  }
  if (model.tag() == FamilyTag::HspAffine) {
    int n = model.planes();
    double lc = model.lambda_c();
    GaussianData g;
    g.h0 = lc * x[0];
    g.xi = Vec::Zero(2 * n);
    for (int i = 0; i < n; ++i) {
      g.xi[i] = -lc * x[1 + n + i];
      g.xi[n + i] = lc * x[1 + i];
    }
    Mat a = Mat::Zero(2 * n, 2 * n);
    auto sp = hsp_sp_basis(n);
    for (size_t k = 0; k < sp.size(); ++k) a += x[1 + 2 * n + static_cast<int>(k)] * sp[k];
    Mat m = a.transpose() * symplectic_j(n);
    g.s = lc * 0.5 * (m + m.transpose());
    return g;
  }
  fail(Errc::Unsupported, "gaussian_data: family has no flat Gaussian chart");
}

bool in_domain(const OrbitModel& model, const Vec& x) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "in_domain");
  switch (model.tag()) {
    case FamilyTag::Sl2Nilpotent:
      return x[0] > std::hypot(x[1], x[2]);
    case FamilyTag::Sl2Hyperboloid:
      return x[0] > 0 && lorentz_q(x) > 0;
    case FamilyTag::Su2Sphere:
      return true;
    case FamilyTag::OscPlane:
    case FamilyTag::HspAffine: {
      GaussianData g = gaussian_data(model, x);
      Eigen::SelfAdjointEigenSolver<Mat> es(g.s);
      double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
      return es.eigenvalues().minCoeff() > 1e-12 * scale;
    }
    case FamilyTag::Point:
      return true;
    case FamilyTag::Product: {
      int ao = 0;
      for (const auto& f : model.factors()) {
        if (!in_domain(f, x.segment(ao, f.algebra().dim()))) return false;
        ao += f.algebra().dim();
      }
      return true;
    }
  }
  fail(Errc::InvalidInput, "in_domain: unknown family");
}

PartitionValue closed_form_Z(const OrbitModel& model, const Vec& x) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "closed_form_Z");
  switch (model.tag()) {
    case FamilyTag::Sl2Nilpotent: {
      if (!in_domain(model, x)) return PartitionValue::infinite();
      return PartitionValue::finite(std::log(kTwoPi) - 0.5 * std::log(lorentz_q(x)));
    }
    case FamilyTag::Sl2Hyperboloid: {
      if (!in_domain(model, x)) return PartitionValue::infinite();
      double q = lorentz_q(x);
      return PartitionValue::finite(-model.mass() * std::sqrt(q) - 0.5 * std::log(q));
    }
    case FamilyTag::Su2Sphere:
      return PartitionValue::finite(log_sphere_z(model.radius(), x.norm()));
    case FamilyTag::OscPlane:
    case FamilyTag::HspAffine: {
      GaussianData g = gaussian_data(model, x);
      PartitionValue base = gaussian_laplace(g.s, g.xi);
      if (base.divergent) return base;
      int n = model.tag() == FamilyTag::OscPlane ? 1 : model.planes();
      return PartitionValue::finite(base.log_value + n * std::log(model.lambda_c()) - g.h0);
    }
    case FamilyTag::Point:
      return PartitionValue::finite(-model.base_functional().dot(x));
    case FamilyTag::Product: {
      double total = 0;
      int ao = 0;
      for (const auto& f : model.factors()) {
        PartitionValue pz = closed_form_Z(f, x.segment(ao, f.algebra().dim()));
        if (pz.divergent) return PartitionValue::infinite();
        total += pz.log_value;
        ao += f.algebra().dim();
      }
      return PartitionValue::finite(total);
    }
  }
  fail(Errc::InvalidInput, "closed_form_Z: unknown family");
}

double closed_form_log_Z(const OrbitModel& model, const Vec& x) {
  PartitionValue z = closed_form_Z(model, x);
  require(!z.divergent, Errc::Divergent, "partition function diverges at this x");
  return z.log_value;
}

namespace {

// Gibbs mean and covariance of the chart variable for Gaussian families
struct GaussMoments {
  Vec mu;
  Mat sigma;
};

GaussMoments gauss_moments(const GaussianData& g) {
  Eigen::LLT<Mat> llt(g.s);
  require(llt.info() == Eigen::Success, Errc::Divergent, "S(x) is not positive definite");
  GaussMoments m;
  m.sigma = llt.solve(Mat::Identity(g.s.rows(), g.s.cols()));
  m.mu = -llt.solve(g.xi);
  return m;
}

// per-basis-element H decomposition a + b^T v + 1/2 v^T C v for Gaussian families
struct HTerms {
  std::vector<Vec> b;
  std::vector<Mat> c;
};

HTerms h_terms(const OrbitModel& model) {
  HTerms t;
  int dim = model.algebra().dim();
  double lc = model.lambda_c();
  if (model.tag() == FamilyTag::OscPlane) {
    t.b.assign(dim, Vec::Zero(2));
    t.c.assign(dim, Mat::Zero(2, 2));
    t.b[1][1] = lc;
    t.b[2][0] = -lc;
    t.c[3] = (lc / 2.0) * Mat::Identity(2, 2);
    return t;
  }
  int n = model.planes();
  t.b.assign(dim, Vec::Zero(2 * n));
  t.c.assign(dim, Mat::Zero(2 * n, 2 * n));
  for (int i = 0; i < n; ++i) {
    Vec bp = Vec::Zero(2 * n), bq = Vec::Zero(2 * n);
    bp[n + i] = lc;
    bq[i] = -lc;
    t.b[1 + i] = bp;
    t.b[1 + n + i] = bq;
  }
  auto sp = hsp_sp_basis(n);
  Mat j = symplectic_j(n);
  for (size_t k = 0; k < sp.size(); ++k) {
    Mat m = sp[k].transpose() * j;
    t.c[1 + 2 * n + static_cast<int>(k)] = lc * 0.5 * (m + m.transpose());
  }
  return t;
}

}  // namespace

Vec geometric_heat(const OrbitModel& model, const Vec& x) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "geometric_heat");
  switch (model.tag()) {
    case FamilyTag::Sl2Nilpotent: {
      double q = lorentz_q(x);
      require(in_domain(model, x), Errc::Divergent, "x outside the nilpotent domain");
      return Vec(lorentz() * x / q);
    }
    case FamilyTag::Sl2Hyperboloid: {
      require(in_domain(model, x), Errc::Divergent, "x outside the hyperboloid domain");
      double q = lorentz_q(x);
      return Vec((model.mass() / std::sqrt(q) + 1.0 / q) * (lorentz() * x));
    }
    case FamilyTag::Su2Sphere: {
      double rho = model.radius();
      double r = x.norm();
      if (r < 1e-12) return Vec::Zero(3);
      double y = rho * r;
      double gp = y < 1e-4 ? rho * y / 3.0 - rho * y * y * y / 45.0
                           : rho / std::tanh(y) - 1.0 / r;
      return Vec(-(gp / r) * x);
    }
    case FamilyTag::OscPlane:
    case FamilyTag::HspAffine: {
      GaussianData g = gaussian_data(model, x);
      GaussMoments m = gauss_moments(g);
      HTerms t = h_terms(model);
      int dim = model.algebra().dim();
      Vec q(dim);
      Mat second = m.sigma + m.mu * m.mu.transpose();
      for (int i = 0; i < dim; ++i)
        q[i] = t.b[i].dot(m.mu) + 0.5 * (t.c[i] * second).trace();
      q[0] += model.lambda_c();
      if (model.tag() == FamilyTag::OscPlane) q[3] += model.lambda_z();
      return q;
    }
    case FamilyTag::Point:
      return model.base_functional();
    case FamilyTag::Product: {
      Vec q(model.algebra().dim());
      int ao = 0;
      for (const auto& f : model.factors()) {
        q.segment(ao, f.algebra().dim()) = geometric_heat(f, x.segment(ao, f.algebra().dim()));
        ao += f.algebra().dim();
      }
      return q;
    }
  }
  fail(Errc::InvalidInput, "geometric_heat: unknown family");
}

Mat fisher_rao(const OrbitModel& model, const Vec& x) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "fisher_rao");
  switch (model.tag()) {
    case FamilyTag::Sl2Nilpotent:
    case FamilyTag::Sl2Hyperboloid: {
      require(in_domain(model, x), Errc::Divergent, "x outside the domain");
      double q = lorentz_q(x);
      double fp, fpp;
      if (model.tag() == FamilyTag::Sl2Nilpotent) {
        fp = -0.5 / q;
        fpp = 0.5 / (q * q);
      } else {
        double m = model.mass(), sq = std::sqrt(q);
        fp = -m / (2.0 * sq) - 0.5 / q;
        fpp = m / (4.0 * q * sq) + 0.5 / (q * q);
      }
      Vec mx = lorentz() * x;
      return Mat(2.0 * fp * lorentz() + 4.0 * fpp * mx * mx.transpose());
    }
    case FamilyTag::Su2Sphere: {
      double rho = model.radius();
      double r = x.norm();
      if (r < 1e-8) return Mat((rho * rho / 3.0) * Mat::Identity(3, 3));
      double y = rho * r;
      double gp = y < 1e-4 ? rho * y / 3.0 - rho * y * y * y / 45.0
                           : rho / std::tanh(y) - 1.0 / r;
      double sh = std::sinh(y);
      double gpp = y < 1e-4 ? rho * rho / 3.0 - rho * rho * y * y / 15.0
                            : 1.0 / (r * r) - rho * rho / (sh * sh);
      Vec xh = x / r;
      return Mat(gpp * xh * xh.transpose() + (gp / r) * (Mat::Identity(3, 3) - xh * xh.transpose()));
    }
    case FamilyTag::OscPlane:
    case FamilyTag::HspAffine: {
      GaussianData g = gaussian_data(model, x);
      GaussMoments m = gauss_moments(g);
      HTerms t = h_terms(model);
      int dim = model.algebra().dim();
      Mat fi = Mat::Zero(dim, dim);
      std::vector<Vec> eff(dim);
      for (int i = 0; i < dim; ++i) eff[i] = t.b[i] + t.c[i] * m.mu;
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
          double v = eff[i].dot(m.sigma * eff[j]) +
                     0.5 * (t.c[i] * m.sigma * t.c[j] * m.sigma).trace();
          fi(i, j) = v;
          fi(j, i) = v;
        }
      return fi;
    }
    case FamilyTag::Point:
      return Mat::Zero(model.algebra().dim(), model.algebra().dim());
    case FamilyTag::Product: {
      int dim = model.algebra().dim();
      Mat fi = Mat::Zero(dim, dim);
      int ao = 0;
      for (const auto& f : model.factors()) {
        int d = f.algebra().dim();
        fi.block(ao, ao, d, d) = fisher_rao(f, x.segment(ao, d));
        ao += d;
      }
      return fi;
    }
  }
  fail(Errc::InvalidInput, "fisher_rao: unknown family");
}

double entropy(const OrbitModel& model, const Vec& x) {
  return geometric_heat(model, x).dot(x) + closed_form_log_Z(model, x);
}

Vec geometric_heat_fd(const OrbitModel& model, const Vec& x) {
  int dim = model.algebra().dim();
  double h = 1e-5 * (1.0 + x.norm());
  Vec q(dim);
  for (int i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    auto diff = [&](double step) {
      return (closed_form_log_Z(model, x + step * e) - closed_form_log_Z(model, x - step * e)) /
             (2.0 * step);
    };
    double d1 = diff(h), d2 = diff(h / 2);
    q[i] = -(4.0 * d2 - d1) / 3.0;  // Richardson
  }
  return q;
}

Mat fisher_rao_fd(const OrbitModel& model, const Vec& x) {
  int dim = model.algebra().dim();
  double h = 1e-4 * (1.0 + x.norm());
  auto f = [&](const Vec& y) { return closed_form_log_Z(model, y); };
  Mat fi(dim, dim);
  for (int i = 0; i < dim; ++i) {
    Vec ei = Vec::Zero(dim);
    ei[i] = 1.0;
    for (int j = i; j < dim; ++j) {
      Vec ej = Vec::Zero(dim);
      ej[j] = 1.0;
      auto second = [&](double s) {
        if (i == j) return (f(x + s * ei) - 2.0 * f(x) + f(x - s * ei)) / (s * s);
        return (f(x + s * ei + s * ej) - f(x + s * ei - s * ej) - f(x - s * ei + s * ej) +
                f(x - s * ei - s * ej)) /
               (4.0 * s * s);
      };
      double d1 = second(h), d2 = second(h / 2);
      double v = (4.0 * d2 - d1) / 3.0;
      fi(i, j) = v;
      fi(j, i) = v;
    }
  }
  return fi;
}

// ---- Duistermaat–Heckman ------------------------------------------------------

namespace {

struct DhSetup {
  Vec lam_g;
  CMat stab_kernel;           // basis of the complexified stabilizer of lambda
  std::vector<int> delta;     // positive-root indices with m_alpha > 0
  std::vector<double> m_alpha;
  std::vector<Vec> betas;     // oriented betas for the delta roots
  bool partial = false;
};

DhSetup dh_setup(const RootDatum& rd, const PositiveSystem& ps, const Vec& lam_t) {
  DhSetup s;
  s.lam_g = extend_functional(rd, lam_t);
  int dim = rd.algebra.dim();
  Mat k(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      k(i, j) = s.lam_g.dot(rd.algebra.bracket(rd.algebra.basis_vector(j),
                                               rd.algebra.basis_vector(i)));
  Mat stab = kernel_basis(k);
  s.stab_kernel = stab.cast<Complex>();
  int kdim = static_cast<int>(stab.cols());

  for (int idx : ps.positive_roots) {
    const Root& root = rd.roots[idx];
    int m = root.multiplicity;
    CMat joint(dim, kdim + m);
    joint.leftCols(kdim) = s.stab_kernel;
    for (int c = 0; c < m; ++c) joint.col(kdim + c) = root.space_basis[c];
    int inter = kdim + m - numerical_rank(joint);
    double ma = m - inter;
    if (ma > 0) {
      s.delta.push_back(idx);
      s.m_alpha.push_back(ma);
      if (ma < m) s.partial = true;
      // orientation: non-compact roots keep the system's orientation (positive
      // on C_max's interior); compact pairs are oriented against lambda so the
      // dominant Weyl term carries a positive denominator
      Vec beta = root.beta;
      if (root.kind == RootKind::Compact) {
        // coroot direction sign: lambda(cvec) <= 0 for the chosen representative
        const CVec& z = root.space_basis[0];
        CVec w = rd.algebra.bracket(z, star(z));
        CMat tc = rd.cartan.cast<Complex>();
        CVec tau = tc.colPivHouseholderQr().solve(w);
        Complex alpha_w = Complex(0, 1) * beta.cast<Complex>().dot(tau);
        CVec cvec_c = Complex(0, -1) * (2.0 * tau / alpha_w);
        double pairing = lam_t.dot(cvec_c.real());
        if (pairing > 1e-12 * (1.0 + lam_t.norm())) beta = -beta;
      }
      s.betas.push_back(beta);
    }
  }
  return s;
}

long double dh_term(const DhSetup& s, const Vec& lw, const Vec& wx, const Vec& x_t) {
  long double denom = 1.0L;
  for (size_t a = 0; a < s.delta.size(); ++a) {
    double ia = -s.betas[a].dot(wx);
    denom *= std::pow(static_cast<long double>(ia), static_cast<long double>(s.m_alpha[a]));
  }
  return std::exp(static_cast<long double>(-lw.dot(x_t))) / denom;
}

double dh_sum(const RootDatum&, const WeylGroup& wg, const DhSetup& s, const Vec& lam_t,
              const Vec& x_t, bool* cancellation) {
  // one term per distinct Weyl image of lambda (stabilizer cosets collapse);
  // every representative of a coset must produce the same term
  std::vector<Vec> images;
  std::vector<long double> terms;
  for (const auto& w : wg.elements) {
    Vec lw = w.transpose() * lam_t;
    long double term = dh_term(s, lw, Vec(w * x_t), x_t);
    bool seen = false;
    for (size_t k = 0; k < images.size(); ++k)
      if ((images[k] - lw).norm() <= 1e-9 * (1.0 + lw.norm())) {
        seen = true;
        require(std::abs(static_cast<double>(term - terms[k])) <=
                    1e-9 * (1.0 + std::abs(static_cast<double>(terms[k]))),
                Errc::NumericalDegeneracy,
                "dh term depends on the stabilizer-coset representative");
        break;
      }
    if (!seen) {
      images.push_back(lw);
      terms.push_back(term);
    }
  }
  long double sum = 0, abs_sum = 0;
  for (long double t : terms) {
    sum += t;
    abs_sum += std::abs(t);
  }
  if (cancellation)
    *cancellation = std::abs(static_cast<double>(sum)) < 1e-9 * static_cast<double>(abs_sum);
  return static_cast<double>(sum);
}

}  // namespace

DhBreakdown dh_partition_full(const RootDatum& rd, const PositiveSystem& ps, const WeylGroup& wg,
                              const Vec& lam_t, const Vec& x_t) {
  require(lam_t.size() == rd.rank() && x_t.size() == rd.rank(), Errc::DimensionMismatch,
          "dh_partition: t-coordinate sizes");
  Cone cm = c_min(rd, ps);
  require(lambda_in_cmin_star(lam_t, cm), Errc::NotAdmissibleFunctional,
          "lambda is not in the dual of C_min");
  Cone cx = c_max(rd, ps);
  require(contains(cx, x_t, /*strict=*/true), Errc::OutsideCmax,
          "x is not in the interior of C_max");

  DhSetup s = dh_setup(rd, ps, lam_t);
  DhBreakdown out;
  out.partial_stabilizer = s.partial;
  out.m_alpha = s.m_alpha;

  // regularity of x for the roots that enter denominators
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& w : wg.elements) {
    Vec wx = w * x_t;
    for (const auto& beta : s.betas) {
      double scale = (1.0 + wx.norm()) * (1.0 + beta.norm());
      worst = std::min(worst, std::abs(beta.dot(wx)) / scale);
    }
  }
  require(worst > 1e-9, Errc::NotRegular, "x is singular for the root denominators");

  bool cancel = false;
  if (worst > 1e-4) {
    out.value = dh_sum(rd, wg, s, lam_t, x_t, &cancel);
    if (!cancel) {
      for (const auto& w : wg.elements) {
        Vec lw = w.transpose() * lam_t;
        bool seen = false;
        for (const auto& prev : out.terms)
          if ((prev.lambda_w - lw).norm() <= 1e-9 * (1.0 + lw.norm())) {
            seen = true;  // stabilizer coset already represented
            break;
          }
        if (seen) continue;
        DhTerm t;
        t.lambda_w = lw;
        t.exponent = -t.lambda_w.dot(x_t);
        t.denominator = 1.0;
        Vec wx = w * x_t;
        for (size_t a = 0; a < s.delta.size(); ++a)
          t.denominator *= std::pow(-s.betas[a].dot(wx), s.m_alpha[a]);
        out.terms.push_back(t);
      }
      require(out.value > 0, Errc::NumericalDegeneracy,
              "dh sum is nonpositive: " + std::to_string(out.value));
      return out;
    }
  }

  // near-singular or catastrophically cancelling: average two shifted evaluations
  std::mt19937_64 rng(mix_seed(97, 1));
  std::normal_distribution<double> gauss(0.0, 1.0);
  double delta = 1e-3 * (1.0 + x_t.norm());
  Cone cmax = c_max(rd, ps);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vec d(rd.rank());
    for (int i = 0; i < d.size(); ++i) d[i] = gauss(rng);
    d.normalize();
    Vec xp = x_t + delta * d, xm = x_t - delta * d;
    auto regular_enough = [&](const Vec& y) {
      if (!contains(cmax, y, true)) return false;
      for (const auto& w : wg.elements) {
        Vec wy = w * y;
        for (const auto& beta : s.betas) {
          double scale = (1.0 + wy.norm()) * (1.0 + beta.norm());
          if (std::abs(beta.dot(wy)) / scale <= 1e-4) return false;
        }
      }
      return true;
    };
    if (!regular_enough(xp) || !regular_enough(xm)) continue;
    bool c1 = false, c2 = false;
    double v1 = dh_sum(rd, wg, s, lam_t, xp, &c1);
    double v2 = dh_sum(rd, wg, s, lam_t, xm, &c2);
    if (c1 || c2) continue;
    out.value = 0.5 * (v1 + v2);
    require(out.value > 0, Errc::NumericalDegeneracy, "dh extrapolation is nonpositive");
    return out;
  }
  fail(Errc::NumericalDegeneracy, "dh evaluation unstable at this x");
}

double dh_partition(const RootDatum& rd, const PositiveSystem& ps, const WeylGroup& wg,
                    const Vec& lam_t, const Vec& x_t) {
  return dh_partition_full(rd, ps, wg, lam_t, x_t).value;
}

double factorized_partition(const RootDatum& rd, const PositiveSystem& ps, const WeylGroup& wg,
                            const Vec& lam_t, const Vec& x_t) {
  require(rd.algebra.meta().has_value(), Errc::MissingMeta,
          "factorized_partition needs the decomposition meta");
  const auto& meta = *rd.algebra.meta();
  int r = rd.rank();
  // split lambda by whether the cartan column lies in the center
  std::vector<bool> central(r, false);
  for (int i = 0; i < r; ++i) {
    if (meta.center.cols() == 0) break;
    Vec col = rd.cartan.col(i);
    Vec coef = meta.center.colPivHouseholderQr().solve(col);
    central[i] = (meta.center * coef - col).norm() <= tols().rank * (1.0 + col.norm());
  }
  double central_exp = 0;
  Vec lam_levi = lam_t;
  for (int i = 0; i < r; ++i)
    if (central[i]) {
      central_exp += lam_t[i] * x_t[i];
      lam_levi[i] = 0;
    }

  // solvable factor: product over solvable positive roots
  double log_solv = 0;
  for (int idx : ps.positive_roots) {
    const Root& root = rd.roots[idx];
    if (root.origin != RootOrigin::Solvable) continue;
    // the convolution identity needs lambda nonzero on [g^a, g^-a]
    const CVec& z = root.space_basis[0];
    CVec w = rd.algebra.bracket(z, star(z));
    Vec lam_g = extend_functional(rd, lam_t);
    double pairing = std::abs((lam_g.cast<Complex>().dot(w)));
    require(pairing > 1e-12, Errc::Unsupported,
            "solvable factor needs lambda nonzero on the root pairing");
    double ia = i_alpha(root, x_t);
    require(ia > 0, Errc::OutsideCmax, "x outside the solvable factor's domain");
    log_solv -= root.multiplicity * std::log(ia);
  }

  // semisimple factor: DH sum restricted to semisimple roots
  DhSetup s = dh_setup(rd, ps, lam_levi);
  std::vector<int> keep;
  for (size_t a = 0; a < s.delta.size(); ++a)
    if (rd.roots[s.delta[a]].origin == RootOrigin::Semisimple) keep.push_back(static_cast<int>(a));
  DhSetup slim;
  slim.lam_g = s.lam_g;
  for (int a : keep) {
    slim.delta.push_back(s.delta[a]);
    slim.m_alpha.push_back(s.m_alpha[a]);
    slim.betas.push_back(s.betas[a]);
  }
  bool cancel = false;
  double levi = dh_sum(rd, wg, slim, lam_levi, x_t, &cancel);
  require(!cancel, Errc::NumericalDegeneracy, "factorized levi sum cancels");
  require(levi > 0, Errc::NumericalDegeneracy, "factorized levi sum is nonpositive");
  return std::exp(-central_exp + log_solv) * levi;
}

TemperednessFit temperedness_exponent(const OrbitModel& model, const Vec& x) {
  std::vector<double> us, ys;
  for (int e = 3; e <= 10; ++e) {
    double t = std::pow(2.0, -e);
    us.push_back(-std::log(t));
    ys.push_back(closed_form_log_Z(model, Vec(t * x)));
  }
  int n = static_cast<int>(us.size());
  double mu = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mu += us[i];
    my += ys[i];
  }
  mu /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (us[i] - mu) * (us[i] - mu);
    sxy += (us[i] - mu) * (ys[i] - my);
  }
  TemperednessFit fit;
  fit.k = sxy / sxx;
  fit.residual = 0;
  double icept = my - fit.k * mu;
  for (int i = 0; i < n; ++i)
    fit.residual = std::max(fit.residual, std::abs(icept + fit.k * us[i] - ys[i]));
  return fit;
}

ThermoReport thermo_report(const OrbitModel& model, const Vec& x) {
  ThermoReport rep;
  rep.x = x;
  rep.z = closed_form_Z(model, x);
  if (!rep.z.divergent) {
    rep.heat = geometric_heat(model, x);
    rep.entropy_value = rep.heat.dot(x) + rep.z.log_value;
    rep.fisher = fisher_rao(model, x);
  }
  return rep;
}

}  // namespace orbitherm
