#pragma once

#include <optional>

#include "orbitherm/cones.hpp"
#include "orbitherm/oracle.hpp"
#include "orbitherm/thermo.hpp"

namespace orbitherm {

enum class LambdaStatus { InCminStar, FalsifierNotRefuted, Refuted };

/// Existence verdict for the Gibbs ensemble of (g, lambda), with the evidence
/// for every step of the decision.
struct ClassificationReport {
  std::string algebra_name;
  bool spanning = false;  // orbit functionals span g* (O_lambda-perp = {0})
  Mat orbit_perp;         // quotient directions when the spanning check fails
  bool cone_potential_ok = false;
  bool adapted_found = false;
  bool cmin_pointed = false;
  bool cmin_in_cmax = false;
  bool admissible = false;
  bool lambda_on_t = false;  // exact membership test applies
  LambdaStatus lambda_status = LambdaStatus::FalsifierNotRefuted;
  int refuted_generator = -1;         // violated C_min generator (exact path)
  FalsifierResult falsifier{};        // sampling-path evidence
  bool gibbs_exists = false;
  std::string omega_description;
  std::optional<PositiveSystem> chosen_system;
  std::optional<Cone> cmin, cmax;
};

ClassificationReport classify(const LieAlgebra& g, const Vec& lambda, uint64_t seed = 42,
                              const std::string& name = "");

/// One grid point of a Domain Theorem scan: closed-form domain membership
/// against the numerical divergence probe.
struct DomainScanRow {
  Vec x;
  bool predicted_finite;
  bool probe_finite;
};
struct DomainScanReport {
  std::vector<DomainScanRow> rows;
  int mismatches = 0;
};

/// Catalog grid for a family: fixed axis points with known answers plus
/// seeded random draws, filtered away from the domain boundary, with both
/// verdicts represented when the family has a boundary.
std::vector<Vec> catalog_domain_grid(const OrbitModel& model, int min_points, uint64_t seed = 42);
DomainScanReport domain_scan(const OrbitModel& model, const std::vector<Vec>& grid);

/// Legendre-duality checks on the heat map Q = -grad log Z.
struct LegendreReport {
  int n_x = 0;
  int hull_failures = 0;        // Q(x) outside the sampled-orbit convex hull
  int injectivity_failures = 0; // distinct x (mod center) with equal Q
  int gradient_failures = 0;    // analytic Q vs finite differences
  int central_failures = 0;     // Q not invariant under central shifts of x
  double worst_hull_residual = 0;
  double worst_gradient_error = 0;
  bool passed() const {
    return hull_failures == 0 && injectivity_failures == 0 && gradient_failures == 0 &&
           central_failures == 0;
  }
};
LegendreReport legendre_check(const OrbitModel& model, int n_x, int n_orbit, uint64_t seed = 42);

std::string to_json_text(const ClassificationReport& rep);
std::string to_json_text(const DomainScanReport& rep);
std::string to_json_text(const LegendreReport& rep);

}  // namespace orbitherm
