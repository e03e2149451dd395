#include "orbitherm/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "orbitherm/matrixops.hpp"

namespace orbitherm {

namespace {

bool lex_positive(const Vec& b, double tol) {
  for (int i = 0; i < b.size(); ++i) {
    if (b[i] > tol) return true;
    if (b[i] < -tol) return false;
  }
  return false;
}

struct LexLess {
  bool operator()(const Vec& a, const Vec& b) const {
    for (int i = 0; i < a.size() && i < b.size(); ++i) {
      if (a[i] < b[i] - 1e-12) return true;
      if (a[i] > b[i] + 1e-12) return false;
    }
    return a.size() < b.size();
  }
};

// complex coordinates of w in span(cartan); errors if w escapes t_C
CVec t_coords_complex(const Mat& cartan, const CVec& w, const char* what) {
  CMat tc = cartan.cast<Complex>();
  CVec coef = tc.colPivHouseholderQr().solve(w);
  double resid = (tc * coef - w).norm();
  require(resid <= tols().spectral * (1.0 + w.norm()), Errc::NumericalDegeneracy,
          std::string(what) + ": vector escapes the Cartan subalgebra, residual " +
              std::to_string(resid));
  return coef;
}

}  // namespace

void classify_root(const RootDatum& rd, Root& r) {
  const auto& g = rd.algebra;
  int m = static_cast<int>(r.space_basis.size());
  r.multiplicity = m;
  CMat form(m, m);
  double max_bracket = 0;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      CVec w = g.bracket(r.space_basis[j], star(r.space_basis[k]));
      max_bracket = std::max(max_bracket, w.norm());
      if (w.norm() <= tols().spectral) {
        form(j, k) = 0;
      } else {
        CVec tau = t_coords_complex(rd.cartan, w, "classify_root");
        // alpha(w) = i * beta(tau)
        form(j, k) = Complex(0, 1) * (r.beta.cast<Complex>().dot(tau));
      }
    }
  require((form - form.adjoint()).norm() <= 1e-7 * (1.0 + form.norm()), Errc::NumericalDegeneracy,
          "root form is not hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es((form + form.adjoint()) / 2.0);
  int pos = 0, neg = 0;
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < m; ++i) {
    if (es.eigenvalues()[i] > tols().spectral * scale) ++pos;
    else if (es.eigenvalues()[i] < -tols().spectral * scale) ++neg;
  }
  r.form_signature = {pos, neg};
  r.kind = (pos == m) ? RootKind::Compact : RootKind::NonCompact;
  r.zero_bracket = max_bracket <= tols().spectral;

  // origin: solvable roots live in V + center, semisimple ones in the levi factor
  bool classified = false;
  if (g.meta()) {
    const auto& meta = *g.meta();
    auto contained = [&](const Mat& block) {
      if (block.cols() == 0) return false;
      CMat b = block.cast<Complex>();
      for (const auto& z : r.space_basis) {
        CVec coef = b.colPivHouseholderQr().solve(z);
        if ((b * coef - z).norm() > tols().spectral * (1.0 + z.norm())) return false;
      }
      return true;
    };
    Mat vz(g.dim(), meta.v_space.cols() + meta.center.cols());
    if (vz.cols() > 0) vz << meta.v_space, meta.center;
    if (vz.cols() > 0 && contained(vz)) {
      r.origin = RootOrigin::Solvable;
      classified = true;
    } else if (contained(meta.levi)) {
      r.origin = RootOrigin::Semisimple;
      classified = true;
    }
  }
  if (!classified) {
    // killing pairing g^a x g^{-a} is nondegenerate exactly on the reductive part
    double kmax = 0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        CMat prod = rd.algebra.ad(r.space_basis[j]) * rd.algebra.ad(star(r.space_basis[k]));
        kmax = std::max(kmax, std::abs(prod.trace()));
      }
    r.origin = kmax > tols().spectral ? RootOrigin::Semisimple : RootOrigin::Solvable;
  }
}

RootDatum root_decomposition(const LieAlgebra& a, const Mat& cartan, uint64_t seed) {
  int dim = a.dim();
  int r = static_cast<int>(cartan.cols());
  require(cartan.rows() == dim, Errc::DimensionMismatch, "cartan columns must live in g");
  require(r >= 1, Errc::NotACartan, "empty Cartan candidate");
  require(numerical_rank(cartan) == r, Errc::NotACartan, "cartan columns dependent");
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      require(a.bracket(Vec(cartan.col(i)), Vec(cartan.col(j))).norm() <= tols().spectral,
              Errc::NotACartan, "candidate is not abelian");
  {
    Mat stacked(r * dim, dim);
    for (int i = 0; i < r; ++i) stacked.middleRows(i * dim, dim) = a.ad(Vec(cartan.col(i)));
    Mat ker = kernel_basis(stacked);
    require(ker.cols() == r, Errc::NotACartan,
            "candidate is not self-centralizing: centralizer dimension " +
                std::to_string(ker.cols()));
  }
  for (int i = 0; i < r; ++i)
    require(a.is_elliptic_element(Vec(cartan.col(i))), Errc::NotCompactlyEmbedded,
            "cartan basis element " + std::to_string(i) + " is not elliptic");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::string last_err = "no attempt";
  for (int attempt = 0; attempt < 5; ++attempt) {
    Vec u(r);
    for (int i = 0; i < r; ++i) u[i] = gauss(rng);
    Vec h = cartan * u;
    CMat adh = a.ad(h).cast<Complex>();
    Eigen::ComplexEigenSolver<CMat> es(adh);
    auto clusters = cluster_eigenvalues(es.eigenvalues(), tols().spectral);

    bool ok = true;
    std::vector<Root> roots;
    int zero_dim = 0;
    for (const auto& c : clusters) {
      int m = static_cast<int>(c.members.size());
      CMat shifted = adh - c.value * CMat::Identity(dim, dim);
      CMat space = kernel_basis(shifted);
      if (space.cols() != m) { last_err = "eigenspace of generic element is defective"; ok = false; break; }
      if (std::abs(c.value) <= tols().spectral * (1.0 + h.norm())) {
        zero_dim = m;
        continue;
      }
      // beta entries from the simultaneous scalar action of each cartan element
      Vec beta(r);
      for (int i = 0; i < r; ++i) {
        CMat adi = a.ad(Vec(cartan.col(i))).cast<Complex>();
        CMat restricted = space.adjoint() * (adi * space);
        Complex mu = restricted.trace() / static_cast<double>(m);
        if ((restricted - mu * CMat::Identity(m, m)).norm() >
            tols().spectral * 10 * (1.0 + adi.norm())) {
          last_err = "sampled element not generic: joint eigenspaces unresolved";
          ok = false;
          break;
        }
        if (std::abs(mu.real()) > tols().spectral * 10 * (1.0 + adi.norm())) {
          fail(Errc::NotCompactlyEmbedded,
               "root value has real part " + std::to_string(mu.real()));
        }
        beta[i] = mu.imag();  // beta = -i*alpha and alpha(t_i) = i*mu.imag()
      }
      if (!ok) break;
      Root root;
      root.beta = beta;
      for (int k = 0; k < m; ++k) root.space_basis.push_back(space.col(k));
      roots.push_back(std::move(root));
    }
    if (!ok) continue;
    if (zero_dim != r) { last_err = "zero eigenspace has dimension " + std::to_string(zero_dim); continue; }

    // pair up: sort by lex order, rebuild negatives as conjugates of positives
    std::map<Vec, int, LexLess> index;
    for (size_t i = 0; i < roots.size(); ++i) index[roots[i].beta] = static_cast<int>(i);
    std::vector<Root> paired;
    std::vector<bool> used(roots.size(), false);
    // deterministic order: lex-decreasing positives first
    std::vector<int> order;
    for (const auto& [b, i] : index) order.push_back(i);
    std::reverse(order.begin(), order.end());
    bool pair_ok = true;
    for (int i : order) {
      if (used[i]) continue;
      if (!lex_positive(roots[i].beta, tols().spectral)) continue;
      auto it = index.end();
      for (auto jt = index.begin(); jt != index.end(); ++jt)
        if (!used[jt->second] && (jt->first + roots[i].beta).norm() <= 1e-7 * (1.0 + roots[i].beta.norm())) {
          it = jt;
          break;
        }
      if (it == index.end() || static_cast<int>(roots[i].space_basis.size()) !=
                                   static_cast<int>(roots[it->second].space_basis.size())) {
        pair_ok = false;
        break;
      }
      used[i] = used[it->second] = true;
      Root pos = roots[i];
      Root neg;
      neg.beta = -pos.beta;
      for (const auto& z : pos.space_basis) neg.space_basis.push_back(z.conjugate());
      paired.push_back(std::move(pos));
      paired.push_back(std::move(neg));
    }
    for (size_t i = 0; i < roots.size(); ++i)
      if (!used[i]) pair_ok = false;
    if (!pair_ok) { last_err = "roots do not pair into +-"; continue; }

    RootDatum rd{a, cartan, {}};
    rd.roots = std::move(paired);
    for (auto& root : rd.roots) classify_root(rd, root);
    return rd;
  }
  fail(Errc::NoRegularElement, "no generic Cartan combination found: " + last_err);
}

bool cone_potential(const RootDatum& rd, uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 17));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& root : rd.roots) {
    if (root.kind != RootKind::NonCompact) continue;
    if (root.zero_bracket) return false;
    for (const auto& z : root.space_basis) {
      if (rd.algebra.bracket(z, star(z)).norm() <= tols().spectral) return false;
    }
    if (root.multiplicity > 1) {
      int m = root.multiplicity;
      for (int s = 0; s < 20; ++s) {
        CVec x = CVec::Zero(rd.algebra.dim());
        for (int j = 0; j < m; ++j) x += Complex(gauss(rng), gauss(rng)) * root.space_basis[j];
        if (x.norm() < 1e-9) continue;
        x /= x.norm();
        if (rd.algebra.bracket(x, star(x)).norm() <= tols().spectral) return false;
      }
    }
  }
  return true;
}

std::vector<PositiveSystem> positive_systems(const RootDatum& rd, uint64_t seed) {
  int r = rd.rank();
  std::vector<int> reps;  // one representative per +- pair
  for (size_t i = 0; i < rd.roots.size(); ++i)
    if (lex_positive(rd.roots[i].beta, tols().spectral)) reps.push_back(static_cast<int>(i));

  std::vector<PositiveSystem> out;
  if (reps.empty()) {
    PositiveSystem ps;
    ps.regular_element = Vec::Zero(r);
    ps.adapted = true;
    out.push_back(ps);
    return out;
  }

  WeylGroup w = weyl_group(rd);
  std::mt19937_64 rng(mix_seed(seed, 23));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::map<std::vector<int>, Vec> patterns;
  int found_at = 0;
  for (int trial = 0; trial < 8192; ++trial) {
    Vec x(r);
    for (int i = 0; i < r; ++i) x[i] = gauss(rng);
    bool regular = true;
    std::vector<int> pat;
    for (int idx : reps) {
      double v = i_alpha(rd.roots[idx], x);
      if (std::abs(v) <= 1e-6 * (1.0 + rd.roots[idx].beta.norm()) * (1.0 + x.norm())) {
        regular = false;
        break;
      }
      pat.push_back(v > 0 ? 1 : -1);
    }
    if (!regular) continue;
    if (patterns.emplace(pat, x).second) found_at = trial;
    // stop early once the pattern set has been stable for a long stretch
    if (trial - found_at > 4096 && !patterns.empty()) break;
  }
  require(!patterns.empty(), Errc::NoRegularElement, "no regular element found by sampling");

  for (const auto& [pat, x0] : patterns) {
    PositiveSystem ps;
    ps.regular_element = x0;
    for (size_t i = 0; i < rd.roots.size(); ++i)
      if (i_alpha(rd.roots[i], x0) > 0) ps.positive_roots.push_back(static_cast<int>(i));
    for (int i : ps.positive_roots)
      if (rd.roots[i].kind == RootKind::NonCompact) ps.noncompact_positive.push_back(i);
    ps.adapted = is_adapted(rd, ps, w);
    out.push_back(std::move(ps));
  }
  return out;
}

Vec transform_beta(const Mat& w, const Vec& beta) {
  return w.inverse().transpose() * beta;
}

WeylGroup weyl_group(const RootDatum& rd) {
  int r = rd.rank();
  WeylGroup wg;
  for (const auto& root : rd.roots) {
    if (root.kind != RootKind::Compact) continue;
    if (!lex_positive(root.beta, tols().spectral)) continue;
    // coroot direction: c with beta(c) = -2, built from w = [x, x*]
    const CVec& z = root.space_basis[0];
    CVec w = rd.algebra.bracket(z, star(z));
    CVec tau = t_coords_complex(rd.cartan, w, "weyl_group");
    Complex alpha_w = Complex(0, 1) * root.beta.cast<Complex>().dot(tau);
    require(std::abs(alpha_w) > tols().spectral, Errc::NumericalDegeneracy,
            "compact root with isotropic coroot");
    CVec coroot = 2.0 * tau / alpha_w;           // alpha-coroot in t_C coordinates
    CVec cvec_c = Complex(0, -1) * coroot;       // real direction: -i * coroot
    require(cvec_c.imag().norm() <= 1e-7 * (1.0 + cvec_c.norm()), Errc::NumericalDegeneracy,
            "coroot direction is not real");
    Vec cvec = cvec_c.real();
    require(std::abs(root.beta.dot(cvec) + 2.0) <= 1e-7, Errc::NumericalDegeneracy,
            "coroot normalization failed");
    Mat refl = Mat::Identity(r, r) + cvec * root.beta.transpose();
    wg.generators.push_back(refl);
  }
  wg.elements.push_back(Mat::Identity(r, r));
  std::vector<Mat> frontier = wg.elements;
  auto known = [&](const Mat& m) {
    for (const auto& e : wg.elements)
      if ((e - m).norm() <= 1e-9 * r) return true;
    return false;
  };
  while (!frontier.empty()) {
    std::vector<Mat> next;
    for (const auto& e : frontier)
      for (const auto& gen : wg.generators) {
        Mat m = gen * e;
        if (!known(m)) {
          wg.elements.push_back(m);
          next.push_back(m);
          require(wg.elements.size() <= 1000000, Errc::ClosureOverflow,
                  "weyl closure exceeded 1e6 elements");
        }
      }
    frontier = std::move(next);
  }
  return wg;
}

bool is_adapted(const RootDatum& rd, const PositiveSystem& ps, const WeylGroup& w) {
  std::vector<Vec> ncp;
  for (int i : ps.noncompact_positive) ncp.push_back(rd.roots[i].beta);
  for (const auto& elt : w.elements) {
    for (const auto& b : ncp) {
      Vec tb = transform_beta(elt, b);
      bool matched = false;
      for (const auto& c : ncp)
        if ((tb - c).norm() <= 1e-7 * (1.0 + c.norm())) {
          matched = true;
          break;
        }
      if (!matched) return false;
    }
  }
  return true;
}

Vec t_coords(const RootDatum& rd, const Vec& x_g) {
  Vec coef = rd.cartan.colPivHouseholderQr().solve(x_g);
  require((rd.cartan * coef - x_g).norm() <= tols().rank * (1.0 + x_g.norm()), Errc::InvalidInput,
          "element does not lie in the Cartan subalgebra");
  return coef;
}

Vec from_t(const RootDatum& rd, const Vec& x_t) {
  require(x_t.size() == rd.rank(), Errc::DimensionMismatch, "t-coordinate size");
  return rd.cartan * x_t;
}

Vec restrict_functional(const RootDatum& rd, const Vec& lam_g) {
  require(lam_g.size() == rd.algebra.dim(), Errc::DimensionMismatch, "functional size");
  return rd.cartan.transpose() * lam_g;
}

Vec extend_functional(const RootDatum& rd, const Vec& lam_t) {
  int dim = rd.algebra.dim();
  int r = rd.rank();
  require(lam_t.size() == r, Errc::DimensionMismatch, "functional size");
  // real basis adapted to t + sum of root spaces
  Mat basis(dim, dim);
  int col = 0;
  for (int i = 0; i < r; ++i) basis.col(col++) = rd.cartan.col(i);
  for (const auto& root : rd.roots) {
    if (!lex_positive(root.beta, tols().spectral)) continue;
    for (const auto& z : root.space_basis) {
      basis.col(col++) = z.real();
      basis.col(col++) = z.imag();
    }
  }
  require(col == dim, Errc::NumericalDegeneracy,
          "cartan and root spaces do not span g (got " + std::to_string(col) + ")");
  Vec rhs = Vec::Zero(dim);
  rhs.head(r) = lam_t;
  // lam_g^T basis = rhs^T
  return basis.transpose().colPivHouseholderQr().solve(rhs);
}

}  // namespace orbitherm
