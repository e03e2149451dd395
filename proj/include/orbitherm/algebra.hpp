#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitherm/config.hpp"

namespace orbitherm {

/// One structure constant: [e_i, e_j] += c * e_k, stored with i < j.
struct StructTriple {
  int i, j, k;
  double c;
};

/// Bases of the distinguished subspaces g = z(g) + V + l with t a compactly
/// embedded Cartan. Columns are coefficient vectors in the algebra basis.
/// Empty matrices (0 columns) are legal; `cartan` may be empty only when the
/// algebra genuinely has no compactly embedded Cartan (e.g. Heisenberg).
struct DecompositionMeta {
  Mat center;
  Mat cartan;
  Mat v_space;
  Mat levi;
};

class LieAlgebra {
 public:
  LieAlgebra(std::string name, std::vector<std::string> basis_names,
             const std::vector<StructTriple>& structure,
             std::optional<DecompositionMeta> meta = std::nullopt);

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& basis_names() const { return names_; }
  const std::optional<DecompositionMeta>& meta() const { return meta_; }
  const std::vector<StructTriple>& structure() const { return triples_; }

  Vec basis_vector(int i) const;
  int index_of(const std::string& basis_name) const;  // -1 if absent

  Vec bracket(const Vec& a, const Vec& b) const;
  CVec bracket(const CVec& a, const CVec& b) const;
  Mat ad(const Vec& x) const;
  CMat ad(const CVec& x) const;
  double killing(const Vec& x, const Vec& y) const;
  Mat killing_matrix() const;
  bool is_elliptic_element(const Vec& x) const;

  /// Max-norm residual of ad([e_i,e_j]) = [ad e_i, ad e_j] over basis pairs.
  double jacobi_residual() const;

 private:
  std::string name_;
  int dim_;
  std::vector<std::string> names_;
  std::vector<StructTriple> triples_;
  std::vector<Mat> ad_basis_;  // ad_basis_[i] = ad(e_i)
  std::optional<DecompositionMeta> meta_;
  void validate_meta() const;
};

/// Coefficient-wise involution z* = -conj(z) (fixes the real form i-eigenspace
/// convention used for root space bases).
CVec star(const CVec& z);

// ---- catalog --------------------------------------------------------------

LieAlgebra build_sl2();
LieAlgebra build_su2();
LieAlgebra build_so12();
LieAlgebra build_heis(int n);
LieAlgebra build_osc();
LieAlgebra build_hsp(int n);
LieAlgebra build_mot2();
LieAlgebra build_abelian(int n, const std::string& name = "abelian");

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b,
                      const std::string& name = "");

/// u ⋊ l where action[j] is the derivation of u induced by the j-th basis
/// element of l. Jacobi (hence: derivations + homomorphism) is re-validated.
LieAlgebra semidirect(const LieAlgebra& u, const LieAlgebra& l,
                      const std::vector<Mat>& action, const std::string& name,
                      std::optional<DecompositionMeta> meta = std::nullopt);

// ---- JSON I/O ---------------------------------------------------------------

LieAlgebra algebra_from_json_text(const std::string& text);
std::string algebra_to_json_text(const LieAlgebra& a);

}  // namespace orbitherm
