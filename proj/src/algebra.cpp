#include "orbitherm/algebra.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "orbitherm/matrixops.hpp"

namespace orbitherm {

using nlohmann::json;

LieAlgebra::LieAlgebra(std::string name, std::vector<std::string> basis_names,
                       const std::vector<StructTriple>& structure,
                       std::optional<DecompositionMeta> meta)
    : name_(std::move(name)),
      dim_(static_cast<int>(basis_names.size())),
      names_(std::move(basis_names)),
      triples_(structure),
      meta_(std::move(meta)) {
  require(dim_ >= 1, Errc::InvalidInput, "algebra dimension must be >= 1");
  {
    std::set<std::string> seen;
    for (const auto& n : names_)
      require(seen.insert(n).second, Errc::InvalidInput, "duplicate basis name '" + n + "'");
  }
  ad_basis_.assign(dim_, Mat::Zero(dim_, dim_));
  std::set<std::tuple<int, int, int>> seen_triples;
  for (size_t t = 0; t < triples_.size(); ++t) {
    const auto& s = triples_[t];
    auto where = "structure[" + std::to_string(t) + "]";
    require(s.i >= 0 && s.i < dim_, Errc::InvalidInput, where + ": index i out of range");
    require(s.j >= 0 && s.j < dim_, Errc::InvalidInput, where + ": index j out of range");
    require(s.k >= 0 && s.k < dim_, Errc::InvalidInput, where + ": index k out of range");
    require(s.i < s.j, Errc::InvalidInput, where + ": triples must have i < j");
    require(std::isfinite(s.c), Errc::InvalidInput, where + ": non-finite constant");
    require(seen_triples.insert({s.i, s.j, s.k}).second, Errc::InvalidInput,
            where + ": duplicate (i,j,k)");
    ad_basis_[s.i](s.k, s.j) += s.c;
    ad_basis_[s.j](s.k, s.i) -= s.c;
  }
  double maxc = 0;
  for (const auto& s : triples_) maxc = std::max(maxc, std::abs(s.c));
  double scale = (1.0 + maxc) * (1.0 + maxc);
  double jr = jacobi_residual();
  require(jr <= tols().algebraic * scale, Errc::InvalidInput,
          "jacobi identity violated, residual " + std::to_string(jr));
  if (meta_) validate_meta();
}

double LieAlgebra::jacobi_residual() const {
  // ad([e_i, e_j]) == [ad e_i, ad e_j] for all pairs is equivalent to Jacobi
  double worst = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      Mat lhs = ad(Vec(ad_basis_[i].col(j)));
      Mat rhs = ad_basis_[i] * ad_basis_[j] - ad_basis_[j] * ad_basis_[i];
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

void LieAlgebra::validate_meta() const {
  const auto& m = *meta_;
  auto check_block = [&](const Mat& b, const char* what) {
    if (b.cols() == 0) {
      require(b.rows() == 0 || b.rows() == dim_, Errc::InvalidInput,
              std::string("meta.") + what + ": wrong row count");
      return;
    }
    require(b.rows() == dim_, Errc::InvalidInput, std::string("meta.") + what + ": wrong row count");
    require(numerical_rank(b) == b.cols(), Errc::InvalidInput,
            std::string("meta.") + what + ": columns are linearly dependent");
  };
  check_block(m.center, "center");
  check_block(m.cartan, "cartan");
  check_block(m.v_space, "v_space");
  check_block(m.levi, "levi");

  double tol = tols().spectral;
  if (m.cartan.cols() > 0) {
    for (int i = 0; i < m.cartan.cols(); ++i)
      for (int j = i + 1; j < m.cartan.cols(); ++j)
        require(bracket(Vec(m.cartan.col(i)), Vec(m.cartan.col(j))).norm() <= tol,
                Errc::InvalidInput, "meta.cartan: not abelian");
    // self-centralizing: the joint kernel of ad(t_i) equals span(cartan)
    Mat stacked(m.cartan.cols() * dim_, dim_);
    for (int i = 0; i < m.cartan.cols(); ++i)
      stacked.middleRows(i * dim_, dim_) = ad(Vec(m.cartan.col(i)));
    Mat ker = kernel_basis(stacked);
    require(ker.cols() == m.cartan.cols(), Errc::InvalidInput,
            "meta.cartan: not self-centralizing (centralizer dimension " +
                std::to_string(ker.cols()) + ")");
    if (m.center.cols() > 0) {
      Mat both(dim_, m.cartan.cols() + m.center.cols());
      both << m.cartan, m.center;
      require(numerical_rank(both) == m.cartan.cols(), Errc::InvalidInput,
              "meta.center: center not contained in cartan");
    }
  }
  if (m.v_space.cols() > 0) {
    // [V, V] must land in the center span
    Mat c = m.center;
    for (int i = 0; i < m.v_space.cols(); ++i)
      for (int j = i + 1; j < m.v_space.cols(); ++j) {
        Vec br = bracket(Vec(m.v_space.col(i)), Vec(m.v_space.col(j)));
        double resid;
        if (c.cols() == 0) {
          resid = br.norm();
        } else {
          Vec coef = c.colPivHouseholderQr().solve(br);
          resid = (c * coef - br).norm();
        }
        require(resid <= tol, Errc::InvalidInput, "meta: [v_space, v_space] escapes the center");
      }
  }
  if (m.v_space.cols() > 0 && m.levi.cols() > 0) {
    Mat both(dim_, m.v_space.cols() + m.levi.cols());
    both << m.v_space, m.levi;
    require(numerical_rank(both) == both.cols(), Errc::InvalidInput,
            "meta: v_space and levi overlap");
  }
}

Vec LieAlgebra::basis_vector(int i) const {
  require(i >= 0 && i < dim_, Errc::InvalidInput, "basis index out of range");
  Vec v = Vec::Zero(dim_);
  v[i] = 1.0;
  return v;
}

int LieAlgebra::index_of(const std::string& basis_name) const {
  for (int i = 0; i < dim_; ++i)
    if (names_[i] == basis_name) return i;
  return -1;
}

Vec LieAlgebra::bracket(const Vec& a, const Vec& b) const {
  require(a.size() == dim_ && b.size() == dim_, Errc::DimensionMismatch, "bracket operands");
  Vec out = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i)
    if (a[i] != 0.0) out += a[i] * (ad_basis_[i] * b);
  return out;
}

CVec LieAlgebra::bracket(const CVec& a, const CVec& b) const {
  require(a.size() == dim_ && b.size() == dim_, Errc::DimensionMismatch, "bracket operands");
  CVec out = CVec::Zero(dim_);
  for (int i = 0; i < dim_; ++i)
    if (a[i] != Complex(0, 0)) out += a[i] * (ad_basis_[i] * b);
  return out;
}

Mat LieAlgebra::ad(const Vec& x) const {
  require(x.size() == dim_, Errc::DimensionMismatch, "ad operand");
  Mat m = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x[i] != 0.0) m += x[i] * ad_basis_[i];
  return m;
}

CMat LieAlgebra::ad(const CVec& x) const {
  require(x.size() == dim_, Errc::DimensionMismatch, "ad operand");
  CMat m = CMat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x[i] != Complex(0, 0)) m += x[i] * ad_basis_[i].cast<Complex>();
  return m;
}

double LieAlgebra::killing(const Vec& x, const Vec& y) const {
  return (ad(x) * ad(y)).trace();
}

Mat LieAlgebra::killing_matrix() const {
  Mat k(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) {
      k(i, j) = (ad_basis_[i] * ad_basis_[j]).trace();
      k(j, i) = k(i, j);
    }
  return k;
}

bool LieAlgebra::is_elliptic_element(const Vec& x) const { return is_elliptic_matrix(ad(x)); }

CVec star(const CVec& z) { return -z.conjugate(); }

// ---- catalog ----------------------------------------------------------------

namespace {
Mat cols(std::initializer_list<Vec> vs, int dim) {
  Mat m(dim, static_cast<int>(vs.size()));
  int j = 0;
  for (const auto& v : vs) m.col(j++) = v;
  return m;
}
Vec unit(int dim, int i) {
  Vec v = Vec::Zero(dim);
  v[i] = 1;
  return v;
}
}  // namespace

LieAlgebra build_sl2() {
  // [h,e] = 2e, [h,f] = -2f, [e,f] = h
  std::vector<StructTriple> s = {{0, 1, 1, 2.0}, {0, 2, 2, -2.0}, {1, 2, 0, 1.0}};
  DecompositionMeta m;
  m.center = Mat(3, 0);
  Vec z0 = Vec::Zero(3);
  z0[1] = 0.5;
  z0[2] = -0.5;  // (e - f)/2, compactly embedded
  m.cartan = cols({z0}, 3);
  m.v_space = Mat(3, 0);
  m.levi = Mat::Identity(3, 3);
  return LieAlgebra("sl2", {"h", "e", "f"}, s, m);
}

LieAlgebra build_su2() {
  // cyclic: [u1,u2] = u3, [u2,u3] = u1, [u3,u1] = u2
  std::vector<StructTriple> s = {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}};
  DecompositionMeta m;
  m.center = Mat(3, 0);
  m.cartan = cols({unit(3, 2)}, 3);
  m.v_space = Mat(3, 0);
  m.levi = Mat::Identity(3, 3);
  return LieAlgebra("su2", {"u1", "u2", "u3"}, s, m);
}

LieAlgebra build_so12() {
  // Lorentz frame of sl2: z0 elliptic, b1, b2 boosts
  // [z0,b1] = -b2, [z0,b2] = b1, [b1,b2] = z0
  std::vector<StructTriple> s = {{0, 1, 2, -1.0}, {0, 2, 1, 1.0}, {1, 2, 0, 1.0}};
  DecompositionMeta m;
  m.center = Mat(3, 0);
  m.cartan = cols({unit(3, 0)}, 3);
  m.v_space = Mat(3, 0);
  m.levi = Mat::Identity(3, 3);
  return LieAlgebra("so12", {"z0", "b1", "b2"}, s, m);
}

LieAlgebra build_heis(int n) {
  require(n >= 1, Errc::InvalidInput, "heis(n): n >= 1");
  int dim = 2 * n + 1;
  std::vector<std::string> names = {"c"};
  for (int i = 1; i <= n; ++i) names.push_back("p" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("q" + std::to_string(i));
  std::vector<StructTriple> s;
  for (int i = 0; i < n; ++i) s.push_back({1 + i, 1 + n + i, 0, 1.0});
  DecompositionMeta m;
  m.center = cols({unit(dim, 0)}, dim);
  m.cartan = Mat(dim, 0);  // no compactly embedded Cartan exists
  m.v_space = Mat(dim, 2 * n);
  for (int i = 0; i < 2 * n; ++i) m.v_space.col(i) = unit(dim, 1 + i);
  m.levi = Mat(dim, 0);
  return LieAlgebra("heis" + std::to_string(n), names, s, m);
}

LieAlgebra build_osc() {
  // heis(1) extended by the rotation z0: [p,q] = c, [z0,p] = -q/2, [z0,q] = p/2
  std::vector<StructTriple> s = {{1, 2, 0, 1.0}, {1, 3, 2, 0.5}, {2, 3, 1, -0.5}};
  DecompositionMeta m;
  m.center = cols({unit(4, 0)}, 4);
  m.cartan = cols({unit(4, 0), unit(4, 3)}, 4);
  m.v_space = cols({unit(4, 1), unit(4, 2)}, 4);
  m.levi = cols({unit(4, 3)}, 4);
  return LieAlgebra("osc", {"c", "p", "q", "z0"}, s, m);
}

LieAlgebra build_mot2() {
  // euclidean motions of the plane: [h,e1] = -e2, [h,e2] = e1
  std::vector<StructTriple> s = {{0, 2, 1, 1.0}, {1, 2, 0, -1.0}};
  DecompositionMeta m;
  m.center = Mat(3, 0);
  m.cartan = cols({unit(3, 2)}, 3);
  m.v_space = cols({unit(3, 0), unit(3, 1)}, 3);
  m.levi = cols({unit(3, 2)}, 3);
  return LieAlgebra("mot2", {"e1", "e2", "h"}, s, m);
}

LieAlgebra build_abelian(int n, const std::string& name) {
  require(n >= 1, Errc::InvalidInput, "abelian(n): n >= 1");
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  DecompositionMeta m;
  m.center = Mat::Identity(n, n);
  m.cartan = Mat::Identity(n, n);
  m.v_space = Mat(n, 0);
  m.levi = Mat(n, 0);
  return LieAlgebra(name, names, {}, m);
}

LieAlgebra build_hsp(int n) {
  require(n >= 1 && n <= 3, Errc::InvalidInput, "hsp(n): 1 <= n <= 3");
  // model elements as (X, v, z): X in sp(2n) acting on V-coords (p_1..p_n, q_1..q_n),
  // v in V, z in the center; bracket ([X1,X2], X1 v2 - X2 v1, omega(v1, v2))
  int nv = 2 * n;
  struct Elt {
    Mat x;
    Vec v;
    double z;
  };
  auto omega = [&](const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += a[i] * b[n + i] - a[n + i] * b[i];
    return s;
  };
  std::vector<std::string> names;
  std::vector<Elt> basis;
  auto zero = [&] { return Elt{Mat::Zero(nv, nv), Vec::Zero(nv), 0.0}; };
  {
    Elt c = zero();
    c.z = 1;
    names.push_back("c");
    basis.push_back(c);
  }
  for (int i = 0; i < n; ++i) {
    Elt p = zero();
    p.v[i] = 1;
    names.push_back("p" + std::to_string(i + 1));
    basis.push_back(p);
  }
  for (int i = 0; i < n; ++i) {
    Elt q = zero();
    q.v[n + i] = 1;
    names.push_back("q" + std::to_string(i + 1));
    basis.push_back(q);
  }
  // sp(2n) = { [[A, B], [C, -A^T]] : B, C symmetric }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Elt a = zero();
      a.x(i, j) = 1;
      a.x(n + j, n + i) = -1;
      names.push_back("a" + std::to_string(i + 1) + std::to_string(j + 1));
      basis.push_back(a);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Elt e = zero();
      e.x(i, n + j) = 1;
      e.x(j, n + i) = 1;
      names.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
      basis.push_back(e);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Elt f = zero();
      f.x(n + i, j) = 1;
      f.x(n + j, i) = 1;
      names.push_back("f" + std::to_string(i + 1) + std::to_string(j + 1));
      basis.push_back(f);
    }
  int dim = static_cast<int>(basis.size());

  // expand an (X, v, z) value in the basis: A, B, C blocks + V coords + center
  auto expand = [&](const Elt& e) {
    Vec out = Vec::Zero(dim);
    out[0] = e.z;
    for (int i = 0; i < nv; ++i) out[1 + i] = e.v[i];
    int idx = 1 + nv;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[idx++] = e.x(i, j);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out[idx++] = e.x(i, n + j);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) out[idx++] = e.x(n + i, j);
    return out;
  };

  std::vector<StructTriple> s;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const Elt &a = basis[i], &b = basis[j];
      Elt br{a.x * b.x - b.x * a.x, a.x * b.v - b.x * a.v, omega(a.v, b.v)};
      Vec coef = expand(br);
      for (int k = 0; k < dim; ++k)
        if (coef[k] != 0.0) s.push_back({i, j, k, coef[k]});
    }

  DecompositionMeta m;
  m.center = cols({unit(dim, 0)}, dim);
  m.cartan = Mat(dim, 1 + n);
  m.cartan.col(0) = unit(dim, 0);
  auto name_index = [&](const std::string& nm) {
    for (int i = 0; i < dim; ++i)
      if (names[i] == nm) return i;
    fail(Errc::InvalidInput, "hsp: missing basis name " + nm);
  };
  for (int k = 1; k <= n; ++k) {
    Vec zk = Vec::Zero(dim);
    zk[name_index("e" + std::to_string(k) + std::to_string(k))] = 0.5;
    zk[name_index("f" + std::to_string(k) + std::to_string(k))] = -0.5;
    m.cartan.col(k) = zk;
  }
  m.v_space = Mat(dim, nv);
  for (int i = 0; i < nv; ++i) m.v_space.col(i) = unit(dim, 1 + i);
  m.levi = Mat(dim, dim - 1 - nv);
  for (int i = 0; i < m.levi.cols(); ++i) m.levi.col(i) = unit(dim, 1 + nv + i);
  return LieAlgebra("hsp" + std::to_string(n), names, s, m);
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b, const std::string& name) {
  int da = a.dim(), db = b.dim();
  std::vector<std::string> names = a.basis_names();
  for (auto n : b.basis_names()) {
    while (std::find(names.begin(), names.end(), n) != names.end()) n += "'";
    names.push_back(n);
  }
  std::vector<StructTriple> s = a.structure();
  for (auto t : b.structure()) s.push_back({t.i + da, t.j + da, t.k + da, t.c});
  std::optional<DecompositionMeta> meta;
  if (a.meta() && b.meta()) {
    auto stack = [&](const Mat& ma, const Mat& mb) {
      Mat m = Mat::Zero(da + db, ma.cols() + mb.cols());
      if (ma.cols()) m.block(0, 0, da, ma.cols()) = ma;
      if (mb.cols()) m.block(da, ma.cols(), db, mb.cols()) = mb;
      return m;
    };
    DecompositionMeta dm;
    dm.center = stack(a.meta()->center, b.meta()->center);
    dm.cartan = stack(a.meta()->cartan, b.meta()->cartan);
    dm.v_space = stack(a.meta()->v_space, b.meta()->v_space);
    dm.levi = stack(a.meta()->levi, b.meta()->levi);
    meta = dm;
  }
  std::string nm = name.empty() ? a.name() + "+" + b.name() : name;
  return LieAlgebra(nm, names, s, meta);
}

LieAlgebra semidirect(const LieAlgebra& u, const LieAlgebra& l, const std::vector<Mat>& action,
                      const std::string& name, std::optional<DecompositionMeta> meta) {
  int du = u.dim(), dl = l.dim();
  require(static_cast<int>(action.size()) == dl, Errc::DimensionMismatch,
          "semidirect: one action matrix per l basis element");
  for (const auto& m : action)
    require(m.rows() == du && m.cols() == du, Errc::DimensionMismatch,
            "semidirect: action matrices must be dim(u) x dim(u)");
  std::vector<std::string> names = u.basis_names();
  for (auto n : l.basis_names()) {
    while (std::find(names.begin(), names.end(), n) != names.end()) n += "'";
    names.push_back(n);
  }
  std::vector<StructTriple> s = u.structure();
  for (auto t : l.structure()) s.push_back({t.i + du, t.j + du, t.k + du, t.c});
  for (int j = 0; j < dl; ++j)
    for (int i = 0; i < du; ++i)
      for (int k = 0; k < du; ++k)
        if (action[j](k, i) != 0.0) s.push_back({i, du + j, k, -action[j](k, i)});
  std::string nm = name.empty() ? u.name() + ":" + l.name() : name;
  // ctor re-checks Jacobi, which encodes both the derivation property and the
  // homomorphism l -> Der(u)
  return LieAlgebra(nm, names, s, std::move(meta));
}

// ---- JSON I/O -----------------------------------------------------------------

namespace {

Mat parse_block(const json& j, const std::string& path, int dim) {
  if (!j.is_array()) fail(Errc::InvalidInput, path + ": expected array of coefficient vectors");
  Mat m(dim, static_cast<int>(j.size()));
  for (size_t c = 0; c < j.size(); ++c) {
    const auto& col = j[c];
    std::string p = path + "[" + std::to_string(c) + "]";
    if (!col.is_array() || static_cast<int>(col.size()) != dim)
      fail(Errc::InvalidInput, p + ": expected array of " + std::to_string(dim) + " numbers");
    for (int r = 0; r < dim; ++r) {
      if (!col[r].is_number()) fail(Errc::InvalidInput, p + "[" + std::to_string(r) + "]: expected number");
      m(r, c) = col[r].get<double>();
    }
  }
  return m;
}

json block_to_json(const Mat& m) {
  json out = json::array();
  for (int c = 0; c < m.cols(); ++c) {
    json col = json::array();
    for (int r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    out.push_back(col);
  }
  return out;
}

}  // namespace

LieAlgebra algebra_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::InvalidInput, std::string("json parse: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::InvalidInput, "top level: expected object");
  if (!j.contains("basis") || !j["basis"].is_array() || j["basis"].empty())
    fail(Errc::InvalidInput, "basis: expected non-empty array of strings");
  std::vector<std::string> names;
  for (size_t i = 0; i < j["basis"].size(); ++i) {
    if (!j["basis"][i].is_string())
      fail(Errc::InvalidInput, "basis[" + std::to_string(i) + "]: expected string");
    names.push_back(j["basis"][i].get<std::string>());
  }
  int dim = static_cast<int>(names.size());
  std::string name = j.value("name", std::string("anonymous"));
  std::vector<StructTriple> triples;
  if (j.contains("structure")) {
    if (!j["structure"].is_array()) fail(Errc::InvalidInput, "structure: expected array");
    for (size_t t = 0; t < j["structure"].size(); ++t) {
      const auto& e = j["structure"][t];
      std::string p = "structure[" + std::to_string(t) + "]";
      if (!e.is_array() || e.size() != 4) fail(Errc::InvalidInput, p + ": expected [i, j, k, c]");
      for (int f = 0; f < 3; ++f)
        if (!e[f].is_number_integer())
          fail(Errc::InvalidInput, p + "[" + std::to_string(f) + "]: expected integer index");
      if (!e[3].is_number()) fail(Errc::InvalidInput, p + "[3]: expected number");
      triples.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>()});
    }
  }
  std::optional<DecompositionMeta> meta;
  if (j.contains("meta")) {
    const auto& jm = j["meta"];
    if (!jm.is_object()) fail(Errc::InvalidInput, "meta: expected object");
    DecompositionMeta m;
    m.center = jm.contains("center") ? parse_block(jm["center"], "meta.center", dim) : Mat(dim, 0);
    m.cartan = jm.contains("cartan") ? parse_block(jm["cartan"], "meta.cartan", dim) : Mat(dim, 0);
    m.v_space = jm.contains("v_space") ? parse_block(jm["v_space"], "meta.v_space", dim) : Mat(dim, 0);
    m.levi = jm.contains("levi") ? parse_block(jm["levi"], "meta.levi", dim) : Mat(dim, 0);
    meta = m;
  }
  return LieAlgebra(name, names, triples, meta);
}

std::string algebra_to_json_text(const LieAlgebra& a) {
  json j;
  j["name"] = a.name();
  j["basis"] = a.basis_names();
  json st = json::array();
  for (const auto& t : a.structure()) st.push_back(json::array({t.i, t.j, t.k, t.c}));
  j["structure"] = st;
  if (a.meta()) {
    j["meta"] = {{"center", block_to_json(a.meta()->center)},
                 {"cartan", block_to_json(a.meta()->cartan)},
                 {"v_space", block_to_json(a.meta()->v_space)},
                 {"levi", block_to_json(a.meta()->levi)}};
  }
  return j.dump(2);
}

}  // namespace orbitherm
