#pragma once

#include <string>
#include <vector>

#include "orbitherm/algebra.hpp"

namespace orbitherm {

enum class FamilyTag { Sl2Nilpotent, Sl2Hyperboloid, Su2Sphere, OscPlane, HspAffine, Point, Product };

struct ParamRange {
  enum class Kind { RealLine, HalfLine, Interval };
  Kind kind;
  double lo = 0, hi = 0;   // Interval bounds; ignored otherwise
  bool periodic = false;   // Interval only
};

/// Parametrized coadjoint orbit with its Liouville density. `embed` maps chart
/// parameters to a functional on g (dual coordinates in the algebra basis);
/// `density` is the Liouville weight in those parameters, so
///   Z(x) = integral of exp(-embed(p)(x)) density(p) dp.
class OrbitModel {
 public:
  FamilyTag tag() const { return tag_; }
  const LieAlgebra& algebra() const { return algebra_; }
  const std::vector<ParamRange>& ranges() const { return ranges_; }
  int param_dim() const { return static_cast<int>(ranges_.size()); }
  const Vec& reference_param() const { return reference_; }
  const std::vector<OrbitModel>& factors() const { return factors_; }
  std::string name() const;

  Vec embed(const Vec& p) const;
  double density(const Vec& p) const;
  double hamiltonian(const Vec& x, const Vec& p) const { return embed(p).dot(x); }
  /// base point lambda = embed(reference)
  Vec base_functional() const {
    // point orbits store the functional itself in place of a parameter
    return tag_ == FamilyTag::Point ? reference_ : embed(reference_);
  }
  /// distance of a functional from the orbit's defining locus
  double image_residual(const Vec& alpha) const;

  // family parameters (meaningful per tag)
  double mass() const { return m_; }
  double radius() const { return rho_; }
  double lambda_c() const { return lambda_c_; }
  double lambda_z() const { return lambda_z_; }
  int planes() const { return n_; }

  static OrbitModel sl2_nilpotent();
  static OrbitModel sl2_hyperboloid(double m);
  static OrbitModel su2_sphere(double rho);
  static OrbitModel osc_plane(double lambda_c, double lambda_z);
  static OrbitModel hsp_affine(int n, double lambda_c);
  static OrbitModel point(const Vec& lam0);
  static OrbitModel product(std::vector<OrbitModel> parts);

 private:
  OrbitModel(FamilyTag tag, LieAlgebra algebra) : tag_(tag), algebra_(std::move(algebra)) {}
  FamilyTag tag_;
  LieAlgebra algebra_;
  std::vector<ParamRange> ranges_;
  Vec reference_;
  double m_ = 0, rho_ = 0, lambda_c_ = 0, lambda_z_ = 0;
  int n_ = 0;
  std::vector<OrbitModel> factors_;
};

/// Parse "sl2-nilpotent", "sl2-hyperboloid:1.5", "su2:0.5", "osc:1,2",
/// "hsp:2,1.5", "point:1,-2", and "|"-separated products of those.
OrbitModel parse_family(const std::string& text);

/// sp(2n) basis matrices on V-coordinates (p_1..p_n, q_1..q_n), in the order
/// used by build_hsp's basis tail and the hsp embedding.
std::vector<Mat> hsp_sp_basis(int n);

}  // namespace orbitherm
