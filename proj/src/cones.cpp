#include "orbitherm/cones.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>

#include "orbitherm/matrixops.hpp"

namespace orbitherm {

namespace {
constexpr int kMaxAmbient = 12;
constexpr double kMemTol = 1e-8;

void check_ambient(const Cone& c, const char* op) {
  require(c.ambient <= kMaxAmbient, Errc::DimensionTooLarge,
          std::string(op) + ": ambient dimension " + std::to_string(c.ambient) + " > 12");
}
}  // namespace

Cone Cone::generators(int ambient, const Mat& cols) {
  require(cols.cols() == 0 || cols.rows() == ambient, Errc::DimensionMismatch, "cone generators");
  return {Rep::Generators, ambient, cols.cols() ? cols : Mat(ambient, 0)};
}

Cone Cone::inequalities(int ambient, const Mat& cols) {
  require(cols.cols() == 0 || cols.rows() == ambient, Errc::DimensionMismatch, "cone inequalities");
  return {Rep::Inequalities, ambient, cols.cols() ? cols : Mat(ambient, 0)};
}

Vec nnls(const Mat& a, const Vec& b) {
  int n = static_cast<int>(a.cols());
  Vec x = Vec::Zero(n);
  if (n == 0) return x;
  std::vector<bool> passive(n, false);
  double scale = std::max(1.0, b.norm());
  Vec w = a.transpose() * b;
  for (int outer = 0; outer < 6 * n + 20; ++outer) {
    int j = -1;
    double best = 1e-12 * scale;
    for (int i = 0; i < n; ++i)
      if (!passive[i] && w[i] > best) {
        best = w[i];
        j = i;
      }
    if (j < 0) break;
    passive[j] = true;
    for (int inner = 0; inner < 6 * n + 20; ++inner) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (passive[i]) idx.push_back(i);
      Mat ap(a.rows(), idx.size());
      for (size_t k = 0; k < idx.size(); ++k) ap.col(k) = a.col(idx[k]);
      Vec s = ap.colPivHouseholderQr().solve(b);
      bool all_pos = true;
      for (int k = 0; k < s.size(); ++k)
        if (s[k] <= 0) all_pos = false;
      if (all_pos) {
        x.setZero();
        for (size_t k = 0; k < idx.size(); ++k) x[idx[k]] = s[k];
        break;
      }
      double alpha = 1.0;
      for (size_t k = 0; k < idx.size(); ++k)
        if (s[k] <= 0) alpha = std::min(alpha, x[idx[k]] / (x[idx[k]] - s[k]));
      for (size_t k = 0; k < idx.size(); ++k) {
        x[idx[k]] += alpha * (s[k] - x[idx[k]]);
        if (x[idx[k]] <= 1e-14 * scale) {
          x[idx[k]] = 0;
          passive[idx[k]] = false;
        }
      }
    }
    w = a.transpose() * (b - a * x);
  }
  return x;
}

namespace {

struct DDState {
  Mat lineality;  // orthonormal columns
  Mat rays;       // unit columns
};

Mat orthonormalize(const Mat& m) {
  if (m.cols() == 0) return m;
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  int r = 0;
  double top = qr.matrixR().cwiseAbs().diagonal().maxCoeff();
  for (int i = 0; i < std::min(m.rows(), m.cols()); ++i)
    if (std::abs(qr.matrixR()(i, i)) > 1e-12 * std::max(1.0, top)) ++r;
  Mat q = qr.householderQ();
  Mat perm = q.leftCols(r);
  return perm;
}

Mat append_col(const Mat& m, const Vec& v) {
  Mat out(v.size(), m.cols() + 1);
  if (m.cols()) out.leftCols(m.cols()) = m;
  out.col(m.cols()) = v;
  return out;
}

Mat drop_col(const Mat& m, int j) {
  Mat out(m.rows(), m.cols() - 1);
  int c = 0;
  for (int i = 0; i < m.cols(); ++i)
    if (i != j) out.col(c++) = m.col(i);
  return out;
}

// membership of p in cone(rays) + span(lineality)
bool in_state(const DDState& st, const Vec& p, double tol) {
  Mat a(p.size(), st.rays.cols() + 2 * st.lineality.cols());
  if (a.cols() == 0) return p.norm() <= tol;
  if (st.rays.cols()) a.leftCols(st.rays.cols()) = st.rays;
  if (st.lineality.cols()) {
    a.middleCols(st.rays.cols(), st.lineality.cols()) = st.lineality;
    a.rightCols(st.lineality.cols()) = -st.lineality;
  }
  Vec u = nnls(a, p);
  return (a * u - p).norm() <= tol;
}

void prune(DDState& st) {
  // drop duplicate directions, then rays generated by the others
  for (int i = 0; i < st.rays.cols(); ++i)
    for (int j = st.rays.cols() - 1; j > i; --j)
      if ((st.rays.col(i) - st.rays.col(j)).norm() <= 1e-9) st.rays = drop_col(st.rays, j);
  for (int j = st.rays.cols() - 1; j >= 0; --j) {
    DDState rest{st.lineality, drop_col(st.rays, j)};
    if (in_state(rest, Vec(st.rays.col(j)), kMemTol)) st.rays = rest.rays;
  }
}

DDState dd_rays(int ambient, const Mat& phis) {
  DDState st{Mat::Identity(ambient, ambient), Mat(ambient, 0)};
  for (int c = 0; c < phis.cols(); ++c) {
    Vec phi = phis.col(c);
    if (phi.norm() <= 1e-14) continue;
    // does phi see the lineality space?
    int pivot = -1;
    double best = 1e-10 * phi.norm();
    for (int j = 0; j < st.lineality.cols(); ++j) {
      double v = std::abs(phi.dot(st.lineality.col(j)));
      if (v > best) {
        best = v;
        pivot = j;
      }
    }
    if (pivot >= 0) {
      Vec v = st.lineality.col(pivot);
      v /= phi.dot(v);  // phi(v) = 1
      Mat newlin(ambient, 0);
      for (int j = 0; j < st.lineality.cols(); ++j) {
        if (j == pivot) continue;
        Vec l = st.lineality.col(j) - phi.dot(st.lineality.col(j)) * v;
        newlin = append_col(newlin, l);
      }
      st.lineality = orthonormalize(newlin);
      Mat newrays(ambient, 0);
      for (int j = 0; j < st.rays.cols(); ++j) {
        Vec r = st.rays.col(j) - phi.dot(st.rays.col(j)) * v;
        if (r.norm() > 1e-12) newrays = append_col(newrays, Vec(r / r.norm()));
      }
      newrays = append_col(newrays, Vec(v / v.norm()));
      st.rays = newrays;
      prune(st);
      continue;
    }
    // phi vanishes on lineality: split rays by sign
    std::vector<int> pos, zero, neg;
    for (int j = 0; j < st.rays.cols(); ++j) {
      double v = phi.dot(st.rays.col(j));
      if (v > 1e-10 * phi.norm()) pos.push_back(j);
      else if (v < -1e-10 * phi.norm()) neg.push_back(j);
      else zero.push_back(j);
    }
    if (neg.empty()) continue;
    Mat newrays(ambient, 0);
    for (int j : pos) newrays = append_col(newrays, Vec(st.rays.col(j)));
    for (int j : zero) newrays = append_col(newrays, Vec(st.rays.col(j)));
    for (int p : pos)
      for (int n : neg) {
        Vec w = phi.dot(st.rays.col(p)) * st.rays.col(n) - phi.dot(st.rays.col(n)) * st.rays.col(p);
        if (w.norm() > 1e-12) newrays = append_col(newrays, Vec(w / w.norm()));
      }
    st.rays = newrays;
    prune(st);
  }
  return st;
}

Mat with_lineality_pairs(const DDState& st) {
  Mat out(st.rays.rows(), st.rays.cols() + 2 * st.lineality.cols());
  if (st.rays.cols()) out.leftCols(st.rays.cols()) = st.rays;
  if (st.lineality.cols()) {
    out.middleCols(st.rays.cols(), st.lineality.cols()) = st.lineality;
    out.rightCols(st.lineality.cols()) = -st.lineality;
  }
  return out;
}

}  // namespace

bool contains(const Cone& c, const Vec& p, bool strict) {
  require(p.size() == c.ambient, Errc::DimensionMismatch, "contains: point dimension");
  double tol = kMemTol * (1.0 + p.norm());
  if (c.rep == Cone::Rep::Inequalities) {
    for (int j = 0; j < c.vectors.cols(); ++j) {
      double v = c.vectors.col(j).dot(p);
      if (strict ? (v <= tol * c.vectors.col(j).norm()) : (v < -tol * c.vectors.col(j).norm()))
        return false;
    }
    return true;
  }
  if (strict) return contains(convert(c), p, true);
  if (c.vectors.cols() == 0) return p.norm() <= tol;
  Vec u = nnls(c.vectors, p);
  return (c.vectors * u - p).norm() <= tol;
}

Cone dual(const Cone& c) {
  check_ambient(c, "dual");
  // Farkas: dual swaps the two representations over the same columns
  return {c.rep == Cone::Rep::Generators ? Cone::Rep::Inequalities : Cone::Rep::Generators,
          c.ambient, c.vectors};
}

Cone convert(const Cone& c) {
  check_ambient(c, "convert");
  if (c.rep == Cone::Rep::Inequalities) {
    DDState st = dd_rays(c.ambient, c.vectors);
    return Cone::generators(c.ambient, with_lineality_pairs(st));
  }
  // generators -> inequalities: extreme rays of the dual are the facet normals
  DDState st = dd_rays(c.ambient, c.vectors);  // dual cone {y : g^T y >= 0}
  return Cone::inequalities(c.ambient, with_lineality_pairs(st));
}

bool is_pointed(const Cone& c) {
  if (c.rep == Cone::Rep::Inequalities) {
    if (c.vectors.cols() == 0) return c.ambient == 0;
    return numerical_rank(c.vectors) == c.ambient;
  }
  if (c.vectors.cols() == 0) return true;
  // pointed iff no convex combination of generators hits the origin
  Mat a(c.ambient + 1, c.vectors.cols());
  a.topRows(c.ambient) = c.vectors;
  a.bottomRows(1).setOnes();
  Vec b = Vec::Zero(c.ambient + 1);
  b[c.ambient] = 1.0;
  Vec u = nnls(a, b);
  return (a * u - b).norm() > kMemTol;
}

bool cone_subset(const Cone& inner, const Cone& outer) {
  Cone gens = inner.rep == Cone::Rep::Generators ? inner : convert(inner);
  Cone ineq = outer.rep == Cone::Rep::Inequalities ? outer : convert(outer);
  for (int j = 0; j < gens.vectors.cols(); ++j)
    if (!contains(ineq, Vec(gens.vectors.col(j)), false)) return false;
  return true;
}

Cone c_min(const RootDatum& rd, const PositiveSystem& ps, uint64_t seed) {
  int r = rd.rank();
  std::mt19937_64 rng(mix_seed(seed, 31));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat gens(r, 0);
  auto add_generator = [&](const CVec& x) {
    CVec w = rd.algebra.bracket(x, star(x));
    if (w.norm() <= tols().spectral) return;
    CMat tc = rd.cartan.cast<Complex>();
    CVec tau = tc.colPivHouseholderQr().solve(w);
    require((tc * tau - w).norm() <= tols().spectral * (1.0 + w.norm()), Errc::NumericalDegeneracy,
            "c_min: [x, x*] escapes t");
    CVec iv = Complex(0, 1) * tau;
    require(iv.imag().norm() <= 1e-7 * (1.0 + iv.norm()), Errc::NumericalDegeneracy,
            "c_min: i[x, x*] is not real");
    Vec g = iv.real();
    if (g.norm() <= 1e-12) return;
    g /= g.norm();
    for (int j = 0; j < gens.cols(); ++j)
      if ((gens.col(j) - g).norm() <= 1e-9) return;
    gens = append_col(gens, g);
  };
  for (int idx : ps.noncompact_positive) {
    const Root& root = rd.roots[idx];
    for (const auto& z : root.space_basis) add_generator(z);
    if (root.multiplicity > 1) {
      for (int s = 0; s < 8; ++s) {
        CVec x = CVec::Zero(rd.algebra.dim());
        for (const auto& z : root.space_basis) x += Complex(gauss(rng), gauss(rng)) * z;
        add_generator(x);
      }
    }
  }
  return Cone::generators(r, gens);
}

Cone c_max(const RootDatum& rd, const PositiveSystem& ps) {
  int r = rd.rank();
  Mat phis(r, 0);
  for (int idx : ps.noncompact_positive) {
    Vec phi = -rd.roots[idx].beta;  // i*alpha(x) = -beta(x) >= 0
    bool dup = false;
    for (int j = 0; j < phis.cols(); ++j)
      if ((phis.col(j) - phi).norm() <= 1e-9 * (1.0 + phi.norm())) dup = true;
    if (!dup) phis = append_col(phis, phi);
  }
  return Cone::inequalities(r, phis);
}

bool lambda_in_cmin_star(const Vec& lam_t, const Cone& cmin) {
  require(cmin.rep == Cone::Rep::Generators, Errc::InvalidInput,
          "lambda_in_cmin_star expects a generator representation");
  for (int j = 0; j < cmin.vectors.cols(); ++j)
    if (lam_t.dot(cmin.vectors.col(j)) < -kMemTol * (1.0 + lam_t.norm())) return false;
  return true;
}

FalsifierResult wmin_star_falsifier(const RootDatum& rd, const Cone& cmin, const Vec& lambda_g,
                                    long samples, uint64_t seed) {
  require(lambda_g.size() == rd.algebra.dim(), Errc::DimensionMismatch, "lambda size");
  FalsifierResult res;
  int ngen = static_cast<int>(cmin.vectors.cols());
  if (ngen == 0) return res;  // nothing to violate
  std::vector<Vec> lifted;
  for (int j = 0; j < ngen; ++j) lifted.push_back(from_t(rd, Vec(cmin.vectors.col(j))));

  // identity word first: catches orientation errors immediately
  for (int j = 0; j < ngen; ++j) {
    double v = lambda_g.dot(lifted[j]);
    ++res.words_tried;
    if (v < -1e-7) {
      res.refuted = true;
      res.value = v;
      res.generator = j;
      return res;
    }
  }

  std::uniform_int_distribution<int> len_dist(1, 4);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  long chunk = 512;
  long nchunks = (samples + chunk - 1) / chunk;
  for (long c = 0; c < nchunks; ++c) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<uint64_t>(c)));
    for (long s = 0; s < chunk && c * chunk + s < samples; ++s) {
      int len = len_dist(rng);
      std::vector<Vec> word;
      Mat op = Mat::Identity(rd.algebra.dim(), rd.algebra.dim());
      for (int f = 0; f < len; ++f) {
        Vec x(rd.algebra.dim());
        for (int i = 0; i < x.size(); ++i) x[i] = unif(rng);
        double n = x.norm();
        if (n > 0) x *= (3.0 * std::abs(unif(rng))) / n;  // ||x|| <= 3
        word.push_back(x);
        op = op * rd.algebra.ad(x).exp();
      }
      ++res.words_tried;
      for (int j = 0; j < ngen; ++j) {
        double v = lambda_g.dot(op * lifted[j]);
        if (v < -1e-7) {
          res.refuted = true;
          res.value = v;
          res.generator = j;
          res.word = word;
          return res;
        }
      }
    }
  }
  return res;
}

}  // namespace orbitherm
