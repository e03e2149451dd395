#include "orbitherm/matrixops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace orbitherm {

const char* escape_name(Escape e) {
  switch (e) {
    case Escape::Bounded: return "Bounded";
    case Escape::EscapesForward: return "EscapesForward";
    case Escape::EscapesBackward: return "EscapesBackward";
  }
  return "?";
}

std::vector<EigenCluster> cluster_eigenvalues(const CVec& ev, double reltol) {
  std::vector<EigenCluster> out;
  for (int i = 0; i < ev.size(); ++i) {
    bool placed = false;
    for (auto& c : out) {
      double scale = std::max({1.0, std::abs(c.value), std::abs(ev[i])});
      if (std::abs(ev[i] - c.value) <= reltol * scale) {
        c.members.push_back(i);
        // running mean keeps the representative centered
        Complex sum = 0;
        for (int k : c.members) sum += ev[k];
        c.value = sum / static_cast<double>(c.members.size());
        placed = true;
        break;
      }
    }
    if (!placed) out.push_back({ev[i], {i}});
  }
  return out;
}

namespace {

template <typename M>
int rank_of(const M& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<M> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0) return 0;
  double thresh = tols().rank * std::max(1.0, sv(0));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++r;
  return r;
}

template <typename M>
M kernel_of(const M& m) {
  if (m.cols() == 0) return M(m.cols(), 0);
  Eigen::JacobiSVD<M> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double top = sv.size() ? sv(0) : 0.0;
  double thresh = tols().rank * std::max(1.0, top);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

}  // namespace

int numerical_rank(const Mat& m) { return rank_of(m); }
int numerical_rank(const CMat& m) { return rank_of(m); }
CMat kernel_basis(const CMat& m) { return kernel_of(m); }
Mat kernel_basis(const Mat& m) { return kernel_of(m); }

bool is_elliptic_matrix(const Mat& m) {
  require(m.rows() == m.cols(), Errc::DimensionMismatch, "is_elliptic_matrix: square matrix expected");
  int n = static_cast<int>(m.rows());
  if (n == 0) return true;
  double scale = std::max(1.0, m.norm());
  Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
  CVec ev = es.eigenvalues();
  for (int i = 0; i < n; ++i)
    if (std::abs(ev[i].real()) > tols().spectral * scale) return false;
  // semisimplicity: geometric multiplicity per cluster must match algebraic
  auto clusters = cluster_eigenvalues(ev, tols().spectral);
  CMat mc = m.cast<Complex>();
  for (const auto& c : clusters) {
    CMat shifted = mc - c.value * CMat::Identity(n, n);
    int geo = n - numerical_rank(shifted);
    if (geo != static_cast<int>(c.members.size())) return false;
  }
  return true;
}

namespace {

/// Generalized eigenbasis of g: W column-blocks per cluster, mu per column.
struct SpectralSplit {
  CMat w;        // invertible n x n
  CMat w_inv;
  CVec mu;       // eigenvalue per column of w
};

SpectralSplit spectral_split(const Mat& g) {
  int n = static_cast<int>(g.rows());
  double scale = std::max(1.0, g.norm());
  Eigen::EigenSolver<Mat> es(g, /*computeEigenvectors=*/false);
  CVec ev = es.eigenvalues();
  auto clusters = cluster_eigenvalues(ev, tols().spectral);
  // distinct clusters that nearly touch make the generalized eigenspaces ill-posed
  for (size_t a = 0; a < clusters.size(); ++a)
    for (size_t b = a + 1; b < clusters.size(); ++b) {
      double sep = std::abs(clusters[a].value - clusters[b].value);
      if (sep < 10 * tols().spectral * scale)
        fail(Errc::NumericalDegeneracy, "spectral clusters separated by only " + std::to_string(sep));
    }
  CMat gc = g.cast<Complex>();
  CMat w(n, n);
  CVec mu(n);
  int col = 0;
  for (const auto& c : clusters) {
    int m = static_cast<int>(c.members.size());
    CMat shifted = gc - c.value * CMat::Identity(n, n);
    CMat power = CMat::Identity(n, n);
    for (int k = 0; k < m; ++k) power = power * shifted;
    CMat ker = kernel_basis(power);
    if (ker.cols() != m)
      fail(Errc::NumericalDegeneracy,
           "generalized eigenspace dimension " + std::to_string(ker.cols()) +
               " != algebraic multiplicity " + std::to_string(m));
    w.middleCols(col, m) = ker;
    for (int k = 0; k < m; ++k) mu[col + k] = c.value;
    col += m;
  }
  Eigen::FullPivLU<CMat> lu(w);
  if (!lu.isInvertible())
    fail(Errc::NumericalDegeneracy, "generalized eigenbasis is numerically singular");
  return {w, lu.inverse(), mu};
}

Mat realify(const CMat& m, double scale, const char* what) {
  double im = m.imag().cwiseAbs().maxCoeff();
  if (im > 1e3 * tols().spectral * scale)
    fail(Errc::NumericalDegeneracy,
         std::string(what) + ": imaginary residue " + std::to_string(im));
  return m.real();
}

}  // namespace

JordanTriple multiplicative_jordan(const Mat& g) {
  require(g.rows() == g.cols(), Errc::DimensionMismatch, "multiplicative_jordan: square matrix expected");
  int n = static_cast<int>(g.rows());
  if (n == 0) return {Mat(0, 0), Mat(0, 0), Mat(0, 0)};
  double det = std::abs(Eigen::FullPivLU<Mat>(g).determinant());
  require(det > 1e-12, Errc::SingularMatrix, "multiplicative_jordan: |det| = " + std::to_string(det));
  double scale = std::max(1.0, g.norm());

  SpectralSplit sp = spectral_split(g);
  CVec mod(n), phase(n);
  for (int i = 0; i < n; ++i) {
    double r = std::abs(sp.mu[i]);
    mod[i] = r;
    phase[i] = sp.mu[i] / r;
  }
  CMat s_c = sp.w * sp.mu.asDiagonal() * sp.w_inv;
  CMat h_c = sp.w * mod.asDiagonal() * sp.w_inv;
  CMat e_c = sp.w * phase.asDiagonal() * sp.w_inv;

  Mat s = realify(s_c, scale, "semisimple part");
  JordanTriple t;
  t.hyperbolic = realify(h_c, scale, "hyperbolic part");
  t.elliptic = realify(e_c, scale, "elliptic part");
  // g = s (I + s^{-1} nilpotent), so the unipotent part is s^{-1} g
  Eigen::FullPivLU<Mat> lus(s);
  if (!lus.isInvertible()) fail(Errc::NumericalDegeneracy, "semisimple part not invertible");
  t.unipotent = lus.inverse() * g;

  // validate: reconstruction, commutation, unipotent spectrum
  double tol = 1e3 * tols().spectral * scale;
  auto comm = [&](const Mat& a, const Mat& b) { return (a * b - b * a).norm(); };
  Mat recon = t.elliptic * t.hyperbolic * t.unipotent;
  if ((recon - g).norm() > tol || comm(t.elliptic, t.hyperbolic) > tol ||
      comm(t.elliptic, t.unipotent) > tol || comm(t.hyperbolic, t.unipotent) > tol)
    fail(Errc::NumericalDegeneracy, "jordan factor validation failed");
  Eigen::EigenSolver<Mat> eu(t.unipotent, false);
  for (int i = 0; i < n; ++i)
    if (std::abs(eu.eigenvalues()[i] - Complex(1, 0)) > 1e-6)
      fail(Errc::NumericalDegeneracy, "unipotent factor has spectrum away from 1");
  return t;
}

Escape escape_classifier(const Mat& g, const Vec& v) {
  require(g.rows() == g.cols() && g.rows() == v.size(), Errc::DimensionMismatch,
          "escape_classifier: g must be square and match v");
  int n = static_cast<int>(g.rows());
  double vnorm = v.norm();
  JordanTriple jt = multiplicative_jordan(g);
  // fixed-point criterion: orbit bounded iff (hyperbolic * unipotent) fixes v
  if ((jt.hyperbolic * jt.unipotent * v - v).norm() <= 1e-8 * (1.0 + vnorm))
    return Escape::Bounded;

  // restrict to the cyclic (Krylov) subspace of v
  Mat q(n, 0);
  Vec w = v;
  for (int it = 0; it <= n; ++it) {
    Vec r = w;
    for (int j = 0; j < q.cols(); ++j) r -= q.col(j).dot(r) * q.col(j);
    double rn = r.norm();
    if (rn <= 1e-12 * (1.0 + w.norm())) break;
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = r / rn;
    w = g * w;
    if (w.norm() > 0) w /= w.norm();  // keep iterates scaled; span is unchanged
  }
  Mat b = q.transpose() * g * q;
  int k = static_cast<int>(b.rows());
  Eigen::EigenSolver<Mat> es(b, false);
  CVec ev = es.eigenvalues();
  double rho = 0;
  for (int i = 0; i < k; ++i) rho = std::max(rho, std::abs(ev[i]));
  double btol = tols().spectral * std::max(1.0, b.norm());
  if (rho > 1.0 + btol) return Escape::EscapesForward;

  // spectral radius <= 1: forward escape only through polynomial (unipotent)
  // growth on the unit-modulus component of v
  Vec u = q.transpose() * v;
  JordanTriple jb = multiplicative_jordan(b);
  // projector onto unit-modulus generalized eigenspaces of b
  SpectralSplit sp = spectral_split(b);
  CVec indicator(k);
  for (int i = 0; i < k; ++i)
    indicator[i] = (std::abs(std::abs(sp.mu[i]) - 1.0) <= 100 * tols().spectral) ? 1.0 : 0.0;
  CMat proj_c = sp.w * indicator.asDiagonal() * sp.w_inv;
  Vec u_unit = realify(proj_c, std::max(1.0, b.norm()), "unit-modulus projector") * u;
  if ((jb.hyperbolic * jb.unipotent * u_unit - u_unit).norm() > 1e-8 * (1.0 + u_unit.norm()))
    return Escape::EscapesForward;
  return Escape::EscapesBackward;
}

}  // namespace orbitherm
