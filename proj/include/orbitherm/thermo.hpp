#pragma once

#include "orbitherm/cones.hpp"
#include "orbitherm/orbits.hpp"
#include "orbitherm/roots.hpp"

namespace orbitherm {

/// Partition value that can be infinite; log_value is meaningful only when finite.
struct PartitionValue {
  bool divergent = false;
  double value = std::numeric_limits<double>::infinity();
  double log_value = std::numeric_limits<double>::infinity();
  static PartitionValue finite(double log_z);
  static PartitionValue infinite();
};

///// (2pi)^{-n/2} * integral of exp(-(1/2 <Ax,x> + <xi,x>)) over R^n:
/// det(A)^{-1/2} exp(1/2 <A^{-1} xi, xi>) when A is positive definite,
/// divergent otherwise.
PartitionValue gaussian_laplace(const Mat& a, const Vec& xi);

/// Gaussian data of H_x on a flat-family orbit (osc / hsp):
/// H_x(v) = h0 + xi^T v + 1/2 v^T S v.
struct GaussianData {
  double h0;
  Vec xi;
  Mat s;
};
GaussianData gaussian_data(const OrbitModel& model, const Vec& x);

/// x inside the family's finiteness domain (open)?
bool in_domain(const OrbitModel& model, const Vec& x);

PartitionValue closed_form_Z(const OrbitModel& model, const Vec& x);
double closed_form_log_Z(const OrbitModel& model, const Vec& x);  // throws on divergence
Vec geometric_heat(const OrbitModel& model, const Vec& x);
Mat fisher_rao(const OrbitModel& model, const Vec& x);
double entropy(const OrbitModel& model, const Vec& x);

/// central finite differences of log Z with a Richardson half-step check
Vec geometric_heat_fd(const OrbitModel& model, const Vec& x);
Mat fisher_rao_fd(const OrbitModel& model, const Vec& x);

/// Duistermaat–Heckman evaluation of Z at x (t-coordinates) for the orbit of
/// lambda (t-coordinates, extended by zero). Sums over the Weyl orbit of
/// lambda; near-singular x triggers compensated evaluation and, past that, a
/// two-sided perturbation fallback.
struct DhTerm {
  Vec lambda_w;      // transformed functional
  double exponent;   // -lambda_w(x)
  double denominator;
};
struct DhBreakdown {
  double value = 0;
  std::vector<DhTerm> terms;
  bool partial_stabilizer = false;  // some 0 < m_alpha < multiplicity occurred
  std::vector<double> m_alpha;      // per positive root in Delta_lambda order
};

DhBreakdown dh_partition_full(const RootDatum& rd, const PositiveSystem& ps, const WeylGroup& wg,
                              const Vec& lam_t, const Vec& x_t);
double dh_partition(const RootDatum& rd, const PositiveSystem& ps, const WeylGroup& wg,
                    const Vec& lam_t, const Vec& x_t);

/// Z as a product of the central point factor and the K-orbit DH factor
/// (Laplace convolution factorization).
double factorized_partition(const RootDatum& rd, const PositiveSystem& ps, const WeylGroup& wg,
                            const Vec& lam_t, const Vec& x_t);

/// least squares slope k of log Z(t x) against -log t over t = 2^-3 .. 2^-10:
/// Z(tx) ~ C t^-k as t -> 0 for tempered orbits.
struct TemperednessFit {
  double k;
  double residual;
};
TemperednessFit temperedness_exponent(const OrbitModel& model, const Vec& x);

struct ThermoReport {
  Vec x;
  PartitionValue z;
  Vec heat;          // empty when divergent
  double entropy_value = 0;
  Mat fisher;        // empty when divergent
};
ThermoReport thermo_report(const OrbitModel& model, const Vec& x);

}  // namespace orbitherm
