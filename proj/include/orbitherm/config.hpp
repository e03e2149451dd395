#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace orbitherm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Centralized numeric tolerances. Everything downstream routes decisions
/// through these three; ad hoc epsilons are a bug.
struct Tolerances {
  double algebraic = 1e-10;  // exact algebraic identities (Jacobi, antisymmetry)
  double spectral = 1e-9;    // eigenvalue location and clustering
  double rank = 1e-8;        // rank / kernel decisions (relative SVD cutoff)
};

inline const Tolerances& tols() {
  static const Tolerances t;
  return t;
}

enum class Errc {
  InvalidInput,
  DimensionMismatch,
  SingularMatrix,
  NumericalDegeneracy,
  NotACartan,
  NotCompactlyEmbedded,
  NoRegularElement,
  ClosureOverflow,
  DimensionTooLarge,
  NotRegular,
  NotAdmissibleFunctional,
  OutsideCmax,
  NoDecayDirection,
  Divergent,
  MissingMeta,
  Unsupported,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
  Errc code;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, Errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

/// splitmix64 step; used to derive independent, reproducible per-chunk seeds.
uint64_t splitmix64(uint64_t& state);
uint64_t mix_seed(uint64_t seed, uint64_t stream);

/// Worker count: ORBIT_THERMO_THREADS if set (>=1), else hardware concurrency.
int thread_cap();

/// Run body(0..n-1) on up to thread_cap() threads. Callers own determinism:
/// store per-index partials and reduce in index order afterwards.
void parallel_chunks(int n, const std::function<void(int)>& body);

}  // namespace orbitherm
