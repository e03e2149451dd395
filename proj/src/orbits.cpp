#include "orbitherm/orbits.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace orbitherm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string OrbitModel::name() const {
  switch (tag_) {
    case FamilyTag::Sl2Nilpotent: return "sl2-nilpotent";
    case FamilyTag::Sl2Hyperboloid: return "sl2-hyperboloid(m=" + std::to_string(m_) + ")";
    case FamilyTag::Su2Sphere: return "su2(rho=" + std::to_string(rho_) + ")";
    case FamilyTag::OscPlane:
      return "osc(lc=" + std::to_string(lambda_c_) + ",lz=" + std::to_string(lambda_z_) + ")";
    case FamilyTag::HspAffine:
      return "hsp(n=" + std::to_string(n_) + ",lc=" + std::to_string(lambda_c_) + ")";
    case FamilyTag::Point: return "point";
    case FamilyTag::Product: {
      std::string s;
      for (const auto& f : factors_) {
        if (!s.empty()) s += " x ";
        s += f.name();
      }
      return s;
    }
  }
  return "?";
}

Vec OrbitModel::embed(const Vec& p) const {
  require(p.size() == param_dim(), Errc::DimensionMismatch, "embed: parameter dimension");
  switch (tag_) {
    case FamilyTag::Sl2Nilpotent: {
      double r = p[0], phi = p[1];
      Vec a(3);
      a << r, r * std::cos(phi), r * std::sin(phi);
      return a;
    }
    case FamilyTag::Sl2Hyperboloid: {
      Vec a(3);
      a << std::sqrt(m_ * m_ + p.squaredNorm()), p[0], p[1];
      return a;
    }
    case FamilyTag::Su2Sphere: {
      double th = p[0], phi = p[1];
      Vec a(3);
      a << rho_ * std::sin(th) * std::cos(phi), rho_ * std::sin(th) * std::sin(phi),
          rho_ * std::cos(th);
      return a;
    }
    case FamilyTag::OscPlane: {
      double a1 = p[0], b1 = p[1];
      Vec a(4);
      a << lambda_c_, lambda_c_ * b1, -lambda_c_ * a1,
          lambda_z_ + lambda_c_ * (a1 * a1 + b1 * b1) / 4.0;
      return a;
    }
    case FamilyTag::HspAffine: {
      // alpha(w) = lc * omega(w, v) on V, alpha(X) = (lc/2) * omega(Xv, v) on sp
      int dim = algebra_.dim();
      Vec a = Vec::Zero(dim);
      a[0] = lambda_c_;
      for (int i = 0; i < n_; ++i) {
        a[1 + i] = lambda_c_ * p[n_ + i];        // p_i component
        a[1 + n_ + i] = -lambda_c_ * p[i];       // q_i component
      }
      // (lc/2) omega(Xp, p) expanded per block, in hsp_sp_basis order
      int idx = 1 + 2 * n_;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) a[idx++] = lambda_c_ * p[j] * p[n_ + i];
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
          a[idx++] = (i == j ? 0.5 : 1.0) * lambda_c_ * p[n_ + i] * p[n_ + j];
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
          a[idx++] = (i == j ? -0.5 : -1.0) * lambda_c_ * p[i] * p[j];
      return a;
    }
    case FamilyTag::Point:
      return reference_;  // stored functional, zero parameters
    case FamilyTag::Product: {
      Vec a(algebra_.dim());
      int po = 0, ao = 0;
      for (const auto& f : factors_) {
        a.segment(ao, f.algebra().dim()) = f.embed(p.segment(po, f.param_dim()));
        po += f.param_dim();
        ao += f.algebra().dim();
      }
      return a;
    }
  }
  fail(Errc::InvalidInput, "embed: unknown family");
}

double OrbitModel::density(const Vec& p) const {
  require(p.size() == param_dim(), Errc::DimensionMismatch, "density: parameter dimension");
  switch (tag_) {
    case FamilyTag::Sl2Nilpotent:
      return 1.0;
    case FamilyTag::Sl2Hyperboloid:
      return 1.0 / (kTwoPi * std::sqrt(m_ * m_ + p.squaredNorm()));
    case FamilyTag::Su2Sphere:
      return rho_ * std::sin(p[0]) / kTwoPi;
    case FamilyTag::OscPlane:
      return lambda_c_ / kTwoPi;
    case FamilyTag::HspAffine:
      return std::pow(lambda_c_ / kTwoPi, n_);
    case FamilyTag::Point:
      return 1.0;
    case FamilyTag::Product: {
      double d = 1.0;
      int po = 0;
      for (const auto& f : factors_) {
        d *= f.density(p.segment(po, f.param_dim()));
        po += f.param_dim();
      }
      return d;
    }
  }
  fail(Errc::InvalidInput, "density: unknown family");
}

double OrbitModel::image_residual(const Vec& alpha) const {
  require(alpha.size() == algebra_.dim(), Errc::DimensionMismatch, "image_residual");
  switch (tag_) {
    case FamilyTag::Sl2Nilpotent:
      return std::abs(alpha[0] - std::hypot(alpha[1], alpha[2]));
    case FamilyTag::Sl2Hyperboloid:
      return std::abs(alpha[0] - std::sqrt(m_ * m_ + alpha[1] * alpha[1] + alpha[2] * alpha[2]));
    case FamilyTag::Su2Sphere:
      return std::abs(alpha.norm() - rho_);
    case FamilyTag::OscPlane: {
      Vec p(2);
      p << -alpha[2] / lambda_c_, alpha[1] / lambda_c_;
      return (alpha - embed(p)).norm();
    }
    case FamilyTag::HspAffine: {
      Vec p(2 * n_);
      for (int i = 0; i < n_; ++i) {
        p[i] = -alpha[1 + n_ + i] / lambda_c_;
        p[n_ + i] = alpha[1 + i] / lambda_c_;
      }
      return (alpha - embed(p)).norm();
    }
    case FamilyTag::Point:
      return (alpha - reference_).norm();
    case FamilyTag::Product: {
      double s = 0;
      int ao = 0;
      for (const auto& f : factors_) {
        double r = f.image_residual(alpha.segment(ao, f.algebra().dim()));
        s += r * r;
        ao += f.algebra().dim();
      }
      return std::sqrt(s);
    }
  }
  fail(Errc::InvalidInput, "image_residual: unknown family");
}

OrbitModel OrbitModel::sl2_nilpotent() {
  OrbitModel m(FamilyTag::Sl2Nilpotent, build_so12());
  m.ranges_ = {{ParamRange::Kind::HalfLine, 0, 0, false},
               {ParamRange::Kind::Interval, 0, kTwoPi, true}};
  m.reference_ = Vec(2);
  m.reference_ << 1.0, 0.0;
  return m;
}

OrbitModel OrbitModel::sl2_hyperboloid(double mass) {
  require(mass > 0, Errc::InvalidInput, "hyperboloid mass must be positive");
  OrbitModel m(FamilyTag::Sl2Hyperboloid, build_so12());
  m.m_ = mass;
  m.ranges_ = {{ParamRange::Kind::RealLine, 0, 0, false}, {ParamRange::Kind::RealLine, 0, 0, false}};
  m.reference_ = Vec::Zero(2);
  return m;
}

OrbitModel OrbitModel::su2_sphere(double rho) {
  require(rho > 0, Errc::InvalidInput, "sphere radius must be positive");
  OrbitModel m(FamilyTag::Su2Sphere, build_su2());
  m.rho_ = rho;
  m.ranges_ = {{ParamRange::Kind::Interval, 0, std::numbers::pi, false},
               {ParamRange::Kind::Interval, 0, kTwoPi, true}};
  m.reference_ = Vec::Zero(2);  // north pole: lambda = rho * u3^*
  return m;
}

OrbitModel OrbitModel::osc_plane(double lambda_c, double lambda_z) {
  require(lambda_c > 0, Errc::InvalidInput, "osc: lambda_c must be positive");
  OrbitModel m(FamilyTag::OscPlane, build_osc());
  m.lambda_c_ = lambda_c;
  m.lambda_z_ = lambda_z;
  m.ranges_ = {{ParamRange::Kind::RealLine, 0, 0, false}, {ParamRange::Kind::RealLine, 0, 0, false}};
  m.reference_ = Vec::Zero(2);
  return m;
}

OrbitModel OrbitModel::hsp_affine(int n, double lambda_c) {
  require(lambda_c > 0, Errc::InvalidInput, "hsp: lambda_c must be positive");
  OrbitModel m(FamilyTag::HspAffine, build_hsp(n));
  m.n_ = n;
  m.lambda_c_ = lambda_c;
  m.ranges_.assign(2 * n, {ParamRange::Kind::RealLine, 0, 0, false});
  m.reference_ = Vec::Zero(2 * n);
  return m;
}

OrbitModel OrbitModel::point(const Vec& lam0) {
  require(lam0.size() >= 1, Errc::InvalidInput, "point orbit needs a nonempty functional");
  OrbitModel m(FamilyTag::Point, build_abelian(static_cast<int>(lam0.size())));
  m.reference_ = lam0;
  return m;
}

OrbitModel OrbitModel::product(std::vector<OrbitModel> parts) {
  require(parts.size() >= 1, Errc::InvalidInput, "product needs at least one factor");
  if (parts.size() == 1) return parts[0];
  LieAlgebra sum = parts[0].algebra();
  for (size_t i = 1; i < parts.size(); ++i) sum = direct_sum(sum, parts[i].algebra());
  OrbitModel m(FamilyTag::Product, sum);
  int pd = 0;
  for (const auto& f : parts) pd += f.param_dim();
  m.reference_ = Vec(pd);
  int po = 0;
  for (const auto& f : parts) {
    for (const auto& r : f.ranges()) m.ranges_.push_back(r);
    // point factors have no parameters (their reference_ holds the functional)
    if (f.param_dim() > 0) m.reference_.segment(po, f.param_dim()) = f.reference_param();
    po += f.param_dim();
  }
  m.factors_ = std::move(parts);
  return m;
}

std::vector<Mat> hsp_sp_basis(int n) {
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat x = Mat::Zero(2 * n, 2 * n);
      x(i, j) = 1;
      x(n + j, n + i) = -1;
      out.push_back(x);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat x = Mat::Zero(2 * n, 2 * n);
      x(i, n + j) = 1;
      x(j, n + i) = 1;
      out.push_back(x);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat x = Mat::Zero(2 * n, 2 * n);
      x(n + i, j) = 1;
      x(n + j, i) = 1;
      out.push_back(x);
    }
  return out;
}

OrbitModel parse_family(const std::string& text) {
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
  };
  auto parse_one = [&](const std::string& spec) -> OrbitModel {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos)
      for (const auto& a : split(spec.substr(colon + 1), ',')) {
        try {
          args.push_back(std::stod(a));
        } catch (...) {
          fail(Errc::InvalidInput, "family '" + spec + "': bad numeric argument '" + a + "'");
        }
      }
    auto want = [&](size_t lo, size_t hi) {
      require(args.size() >= lo && args.size() <= hi, Errc::InvalidInput,
              "family '" + head + "': wrong number of arguments");
    };
    if (head == "sl2-nilpotent") {
      want(0, 0);
      return OrbitModel::sl2_nilpotent();
    }
    if (head == "sl2-hyperboloid") {
      want(1, 1);
      return OrbitModel::sl2_hyperboloid(args[0]);
    }
    if (head == "su2") {
      want(1, 1);
      return OrbitModel::su2_sphere(args[0]);
    }
    if (head == "osc") {
      want(2, 2);
      return OrbitModel::osc_plane(args[0], args[1]);
    }
    if (head == "hsp") {
      want(2, 2);
      require(args[0] == std::floor(args[0]) && args[0] >= 1, Errc::InvalidInput,
              "hsp: first argument must be a positive integer");
      return OrbitModel::hsp_affine(static_cast<int>(args[0]), args[1]);
    }
    if (head == "point") {
      want(1, 16);
      Vec lam(args.size());
      for (size_t i = 0; i < args.size(); ++i) lam[i] = args[i];
      return OrbitModel::point(lam);
    }
    fail(Errc::InvalidInput, "unknown family '" + head + "'");
  };
  std::vector<OrbitModel> parts;
  for (const auto& s : split(text, '|'))
    if (!s.empty()) parts.push_back(parse_one(s));
  require(!parts.empty(), Errc::InvalidInput, "empty family specification");
  return OrbitModel::product(std::move(parts));
}

}  // namespace orbitherm
