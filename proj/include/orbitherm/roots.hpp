#pragma once

#include <vector>

#include "orbitherm/algebra.hpp"

namespace orbitherm {

enum class RootKind { Compact, NonCompact };
enum class RootOrigin { Solvable, Semisimple };

/// A root of (g, t). The stored functional is beta = -i*alpha on Cartan
/// coordinates: alpha(t) lies in iR, so beta is real. All positivity and cone
/// logic must go through i_alpha(), never touch beta's sign directly:
/// i*alpha(x) = -beta(x), and alpha is positive at x0 iff beta(x0) < 0.
struct Root {
  Vec beta;                        // r real coefficients on the cartan basis
  std::vector<CVec> space_basis;   // root space basis, complex coefficients in g
  RootKind kind = RootKind::NonCompact;
  RootOrigin origin = RootOrigin::Semisimple;
  int multiplicity = 0;
  bool zero_bracket = false;       // all [x, x*] vanish on this root space
  std::pair<int, int> form_signature = {0, 0};
};

struct RootDatum {
  LieAlgebra algebra;
  Mat cartan;               // dim x r, columns = basis of t
  std::vector<Root> roots;  // both members of every +- pair
  int rank() const { return static_cast<int>(cartan.cols()); }
};

/// i*alpha evaluated at x (t-coordinates). The one place the sign convention lives.
inline double i_alpha(const Root& r, const Vec& x_t) { return -r.beta.dot(x_t); }

struct PositiveSystem {
  Vec regular_element;               // x0 in t-coordinates
  std::vector<int> positive_roots;   // indices into RootDatum::roots
  std::vector<int> noncompact_positive;
  bool adapted = false;
};

struct WeylGroup {
  std::vector<Mat> elements;   // r x r matrices acting on t-coordinates
  std::vector<Mat> generators; // reflections in the compact roots
};

/// Decompose g_C into simultaneous ad(t) eigenspaces. `cartan` columns must be
/// an abelian, self-centralizing, elliptic family (else NotACartan /
/// NotCompactlyEmbedded).
RootDatum root_decomposition(const LieAlgebra& a, const Mat& cartan, uint64_t seed = 42);

/// Fill kind / signature / zero_bracket of an already-extracted root.
void classify_root(const RootDatum& rd, Root& r);

/// True iff no nonzero x_alpha in a non-compact root space has [x, x*] = 0
/// (basis vectors plus 20 random combinations for multiplicity > 1).
bool cone_potential(const RootDatum& rd, uint64_t seed = 42);

/// All positive systems found by sampling regular elements (deterministic in seed).
std::vector<PositiveSystem> positive_systems(const RootDatum& rd, uint64_t seed = 42);

WeylGroup weyl_group(const RootDatum& rd);

bool is_adapted(const RootDatum& rd, const PositiveSystem& ps, const WeylGroup& w);

/// Transform of stored functionals under w: beta -> w^{-T} beta.
Vec transform_beta(const Mat& w, const Vec& beta);

// coordinate helpers between g and t
Vec t_coords(const RootDatum& rd, const Vec& x_g);
Vec from_t(const RootDatum& rd, const Vec& x_t);
/// restriction of a functional on g (dual coordinates) to t
Vec restrict_functional(const RootDatum& rd, const Vec& lam_g);
/// extension of a functional on t by zero on every root space
Vec extend_functional(const RootDatum& rd, const Vec& lam_t);

}  // namespace orbitherm
