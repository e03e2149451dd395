#pragma once

#include <array>

#include "orbitherm/orbits.hpp"

namespace orbitherm {

/// Adaptive Gauss–Legendre evaluation of Z(x) = ∫ e^{-H_x} dμ over the chart.
/// Truncates unbounded axes at a radius chosen from the decay rate of H_x,
/// then doubles nodes and enlarges the box until the relative change is below
/// rel_tol. Throws NoDecayDirection when H_x fails to grow along some
/// unbounded direction and Divergent when the truncated integrals keep
/// growing instead of settling.
struct QuadratureResult {
  double value = 0;
  double log_value = 0;
  double rel_error = 0;  // observed change in the last refinement
  int nodes_per_axis = 0;
  double radius = 0;
};
QuadratureResult laplace_quadrature(const OrbitModel& model, const Vec& x,
                                    double rel_tol = 1e-8);

/// Importance-sampled Monte Carlo estimate of Z(x) with a deterministic
/// chunked stream: chunk c draws from mix_seed(seed, c), so results are
/// bitwise reproducible for a given (seed, samples) regardless of threading.
struct McResult {
  double value = 0;
  double stderr_value = 0;
  long samples = 0;
  bool infinite_variance = false;  // weight mass concentrated on a few draws
};
McResult laplace_mc(const OrbitModel& model, const Vec& x, long samples, uint64_t seed = 42);

/// Truncated-box probes at R, 2R, 4R, 8R; Divergent iff the integral keeps
/// growing by more than 1.5x across the last two enlargements (or is inf).
enum class ProbeVerdict { Convergent, Divergent };
struct ProbeResult {
  ProbeVerdict verdict;
  std::array<double, 4> values;
};
ProbeResult divergence_probe(const OrbitModel& model, const Vec& x);

/// Self-normalized IS estimates of the Gibbs mean of the moment map and its
/// covariance diagonal, with delta-method standard errors.
struct MomentResult {
  Vec mean;
  Vec mean_stderr;
  long samples = 0;
};
MomentResult moment_mc(const OrbitModel& model, const Vec& x, long samples, uint64_t seed = 42);

/// (2pi)^{-n/2} ∫_{R^n} exp(-(1/2 v^T A v + xi^T v)) dv by tensor-product
/// Gauss–Legendre on a decay-scaled box; reference for gaussian_laplace.
double gauss_quad_rn(const Mat& a, const Vec& xi, int nodes = 160);

}  // namespace orbitherm
