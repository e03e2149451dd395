#pragma once

#include <vector>

#include "orbitherm/roots.hpp"

namespace orbitherm {

/// Polyhedral cone in t-coordinates, in one of two representations:
///  - Generators: columns of `vectors` are rays, cone = nonneg combinations
///    (an empty matrix is the zero cone);
///  - Inequalities: columns are functionals phi, cone = {x : phi^T x >= 0}
///    (an empty matrix is the whole space).
struct Cone {
  enum class Rep { Generators, Inequalities };
  Rep rep;
  int ambient;
  Mat vectors;

  static Cone generators(int ambient, const Mat& cols);
  static Cone inequalities(int ambient, const Mat& cols);
};

/// min ||a x - b|| subject to x >= 0 (Lawson–Hanson active set).
Vec nnls(const Mat& a, const Vec& b);

bool contains(const Cone& c, const Vec& p, bool strict = false);
Cone dual(const Cone& c);
Cone convert(const Cone& c);  // switch representation (double description)
bool is_pointed(const Cone& c);
/// inner subset of outer (both representations accepted)
bool cone_subset(const Cone& inner, const Cone& outer);

/// cone spanned by the t-parts of i[x_a, x_a*] over non-compact positive roots
Cone c_min(const RootDatum& rd, const PositiveSystem& ps, uint64_t seed = 42);
/// {x in t : i*alpha(x) >= 0 for all non-compact positive roots}
Cone c_max(const RootDatum& rd, const PositiveSystem& ps);

/// lambda (t-coordinates) nonnegative on every generator of c_min
bool lambda_in_cmin_star(const Vec& lam_t, const Cone& cmin);

/// Randomized search for a violation of lambda in (Ad(G) C_min)*: words of at
/// most 4 factors exp(ad x), ||x|| <= 3, applied to lifted C_min generators.
struct FalsifierResult {
  bool refuted = false;
  double value = 0;            // most negative pairing seen on refutation
  int generator = -1;          // index of the violated C_min generator
  std::vector<Vec> word;       // the x's of the refuting word
  long words_tried = 0;
};

FalsifierResult wmin_star_falsifier(const RootDatum& rd, const Cone& cmin, const Vec& lambda_g,
                                    long samples = 2000, uint64_t seed = 42);

}  // namespace orbitherm
