#pragma once

#include <vector>

#include "orbitherm/config.hpp"

namespace orbitherm {

/// Eigenvalue cluster: representative value plus member indices.
struct EigenCluster {
  Complex value;
  std::vector<int> members;
};

/// Group eigenvalues within relative tolerance reltol (scale-aware).
std::vector<EigenCluster> cluster_eigenvalues(const CVec& ev, double reltol);

/// Numerical rank via SVD with relative threshold tols().rank.
int numerical_rank(const Mat& m);
int numerical_rank(const CMat& m);

/// Orthonormal basis of ker(m), columns. Complex version.
CMat kernel_basis(const CMat& m);
Mat kernel_basis(const Mat& m);

/// True iff m is semisimple with purely imaginary spectrum.
bool is_elliptic_matrix(const Mat& m);

/// g = elliptic * hyperbolic * unipotent, pairwise commuting.
struct JordanTriple {
  Mat elliptic;
  Mat hyperbolic;
  Mat unipotent;
};

JordanTriple multiplicative_jordan(const Mat& g);

enum class Escape { Bounded, EscapesForward, EscapesBackward };
const char* escape_name(Escape e);

/// Long-time behaviour of the orbit {g^n v : n >= 0}.
Escape escape_classifier(const Mat& g, const Vec& v);

}  // namespace orbitherm
