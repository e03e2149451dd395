#include "orbitherm/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace orbitherm {

namespace {

struct GlRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // summing to 2
};

// Golub–Welsch: eigen-decompose the Jacobi matrix of the Legendre recurrence
GlRule gauss_legendre(int n) {
  require(n >= 1, Errc::InvalidInput, "gauss_legendre: need at least one node");
  Mat j = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k - 1, k) = b;
    j(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(j);
  GlRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()[k];
    double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = 2.0 * v0 * v0;
  }
  return rule;
}

struct AxisGrid {
  std::vector<double> points;
  std::vector<double> weights;  // node weight times the map jacobian
};

AxisGrid map_axis(const GlRule& rule, const ParamRange& range, double radius) {
  AxisGrid g;
  double lo, hi;
  switch (range.kind) {
    case ParamRange::Kind::HalfLine:
      lo = 0;
      hi = radius;
      break;
    case ParamRange::Kind::RealLine:
      lo = -radius;
      hi = radius;
      break;
    case ParamRange::Kind::Interval:
      lo = range.lo;
      hi = range.hi;
      break;
  }
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    g.points.push_back(mid + half * rule.nodes[k]);
    g.weights.push_back(half * rule.weights[k]);
  }
  return g;
}

// tensor-product integral of density * exp(-H_x) over the chart box
double box_integral(const OrbitModel& model, const Vec& x, int nodes, double radius) {
  int d = model.param_dim();
  if (d == 0) return model.density(Vec(0)) * std::exp(-model.hamiltonian(x, Vec(0)));
  GlRule rule = gauss_legendre(nodes);
  std::vector<AxisGrid> axes;
  for (const auto& r : model.ranges()) axes.push_back(map_axis(rule, r, radius));
  std::vector<int> idx(d, 0);
  long double sum = 0;
  Vec p(d);
  for (;;) {
    double w = 1;
    for (int a = 0; a < d; ++a) {
      p[a] = axes[a].points[idx[a]];
      w *= axes[a].weights[idx[a]];
    }
    double h = model.hamiltonian(x, p);
    if (h < 700) sum += w * model.density(p) * std::exp(-h);
    int a = 0;
    while (a < d && ++idx[a] == static_cast<int>(axes[a].points.size())) idx[a++] = 0;
    if (a == d) break;
  }
  return static_cast<double>(sum);
}

struct GrowthInfo {
  bool bounded_chart = false;  // no unbounded axes at all
  double c_min = 0;            // slowest exponential decay rate found
};

// minimal growth slope of H_x along the unbounded chart directions, scanned
// over a coarse grid of the bounded axes
GrowthInfo growth_probe(const OrbitModel& model, const Vec& x) {
  int d = model.param_dim();
  std::vector<int> unbounded, bounded;
  for (int a = 0; a < d; ++a)
    (model.ranges()[a].kind == ParamRange::Kind::Interval ? bounded : unbounded).push_back(a);
  GrowthInfo info;
  if (unbounded.empty()) {
    info.bounded_chart = true;
    return info;
  }

  // probe directions: each unbounded axis alone plus all diagonal sign combos
  std::vector<Vec> dirs;
  int k = static_cast<int>(unbounded.size());
  for (int a = 0; a < k; ++a) {
    Vec dir = Vec::Zero(k);
    dir[a] = 1;
    dirs.push_back(dir);
    if (model.ranges()[unbounded[a]].kind == ParamRange::Kind::RealLine) dirs.push_back(-dir);
  }
  for (int mask = 0; mask < (1 << k); ++mask) {
    Vec dir(k);
    bool ok = true;
    for (int a = 0; a < k; ++a) {
      bool neg = mask & (1 << a);
      if (neg && model.ranges()[unbounded[a]].kind == ParamRange::Kind::HalfLine) ok = false;
      dir[a] = neg ? -1 : 1;
    }
    if (ok) dirs.push_back(dir.normalized());
  }

  // grid over bounded axes
  std::vector<Vec> anchors;
  {
    std::vector<int> gi(bounded.size(), 0);
    const int g = 16;
    for (;;) {
      Vec b(static_cast<int>(bounded.size()));
      for (size_t a = 0; a < bounded.size(); ++a) {
        const auto& r = model.ranges()[bounded[a]];
        b[a] = r.lo + (r.hi - r.lo) * (gi[a] + 0.5) / g;
      }
      anchors.push_back(b);
      if (bounded.empty()) break;
      size_t a = 0;
      while (a < bounded.size() && ++gi[a] == g) gi[a++] = 0;
      if (a == bounded.size()) break;
    }
  }

  double c = std::numeric_limits<double>::infinity();
  const double t1 = 20, t2 = 40;
  Vec p1(d), p2(d);
  for (const auto& dir : dirs)
    for (const auto& anch : anchors) {
      for (size_t a = 0; a < bounded.size(); ++a) p1[bounded[a]] = p2[bounded[a]] = anch[a];
      for (int a = 0; a < k; ++a) {
        p1[unbounded[a]] = t1 * dir[a];
        p2[unbounded[a]] = t2 * dir[a];
      }
      double slope = (model.hamiltonian(x, p2) - model.hamiltonian(x, p1)) / (t2 - t1);
      c = std::min(c, slope);
    }
  info.c_min = c;
  return info;
}

int default_nodes(int d) {
  if (d <= 2) return 200;
  if (d == 3) return 48;
  if (d == 4) return 24;
  return 12;
}
int max_nodes(int d) {
  if (d <= 2) return 800;
  if (d == 3) return 192;
  if (d == 4) return 48;
  return 24;
}

QuadratureResult quad_single(const OrbitModel& model, const Vec& x, double rel_tol) {
  GrowthInfo gi = growth_probe(model, x);
  double radius = 0;
  if (!gi.bounded_chart) {
    double scale = 1.0 + x.norm();
    require(gi.c_min > 1e-12 * scale, Errc::NoDecayDirection,
            "integrand does not decay along some unbounded chart direction");
    radius = std::min(std::max(30.0 * (1.0 + 1.0 / std::max(x.norm(), 1e-3)), 45.0 / gi.c_min),
                      1e4);
  }
  int d = model.param_dim();
  int nodes = default_nodes(d);
  double value = box_integral(model, x, nodes, radius);
  double rel = std::numeric_limits<double>::infinity();
  while (nodes < max_nodes(d)) {
    double finer = box_integral(model, x, 2 * nodes, radius);
    rel = std::abs(finer - value) / std::max(std::abs(finer), 1e-300);
    value = finer;
    nodes *= 2;
    if (rel < rel_tol) break;
  }
  if (!gi.bounded_chart) {
    // Tail check: enlarging the box must not change the answer. The
    // consecutive-level `rel` overstates the finest level's own error, so the
    // comparison threshold is the node resolution, not rel_tol: a fixed rule
    // loses accuracy on a wider box, and that noise is not tail growth.
    double noise = std::max(rel_tol, 3.0 * rel);
    bool settled = false;
    double prev = value, probe_radius = radius;
    int grow_streak = 0;
    for (int round = 0; round < 10; ++round) {
      probe_radius *= 1.6;
      double wider = box_integral(model, x, nodes, probe_radius);
      double change = std::abs(wider - value) / std::max(std::abs(wider), 1e-300);
      if (change <= noise) {
        settled = true;  // keep the tighter small-box value
        rel = std::max(rel, change);
        break;
      }
      if (wider > prev * 1.5) {
        if (++grow_streak >= 3) fail(Errc::Divergent, "integral grows with the truncation box");
      } else {
        grow_streak = 0;
      }
      prev = wider;
      radius = probe_radius;
      value = wider;
    }
    require(settled, Errc::Divergent, "truncated integrals keep growing instead of settling");
  }
  QuadratureResult out;
  out.value = value;
  require(value > 0, Errc::NumericalDegeneracy, "quadrature produced a nonpositive value");
  out.log_value = std::log(value);
  out.rel_error = rel;
  out.nodes_per_axis = nodes;
  out.radius = radius;
  return out;
}

}  // namespace

QuadratureResult laplace_quadrature(const OrbitModel& model, const Vec& x, double rel_tol) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "laplace_quadrature");
  if (model.tag() != FamilyTag::Product) return quad_single(model, x, rel_tol);
  QuadratureResult out;
  out.log_value = 0;
  int ao = 0;
  for (const auto& f : model.factors()) {
    QuadratureResult part = quad_single(f, x.segment(ao, f.algebra().dim()), rel_tol);
    out.log_value += part.log_value;
    out.rel_error += part.rel_error;
    out.nodes_per_axis = std::max(out.nodes_per_axis, part.nodes_per_axis);
    out.radius = std::max(out.radius, part.radius);
    ao += f.algebra().dim();
  }
  out.value = std::exp(out.log_value);
  return out;
}

namespace {

// per-axis proposal: Cauchy / half-Cauchy / uniform, with densities
struct Proposal {
  ParamRange range;
  double scale = 1;  // Cauchy scale for unbounded axes
};

std::vector<Proposal> build_proposals(const OrbitModel& model, const Vec& x) {
  std::vector<Proposal> props;
  if (model.tag() == FamilyTag::Product) {
    int ao = 0;
    for (const auto& f : model.factors()) {
      auto sub = build_proposals(f, x.segment(ao, f.algebra().dim()));
      props.insert(props.end(), sub.begin(), sub.end());
      ao += f.algebra().dim();
    }
    return props;
  }
  GrowthInfo gi = growth_probe(model, x);
  double scale = 1;
  if (!gi.bounded_chart) {
    require(gi.c_min > 1e-12 * (1.0 + x.norm()), Errc::NoDecayDirection,
            "integrand does not decay along some unbounded chart direction");
    scale = std::clamp(8.0 / gi.c_min, 0.5, 1e4);
  }
  for (const auto& r : model.ranges()) props.push_back({r, scale});
  return props;
}

double unit_uniform(std::mt19937_64& rng) {
  // strictly inside (0,1) so the Cauchy maps stay finite
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// draw one chart point and return the proposal log-density
double draw_point(const std::vector<Proposal>& props, std::mt19937_64& rng, Vec& p) {
  double logq = 0;
  for (size_t a = 0; a < props.size(); ++a) {
    const auto& pr = props[a];
    double u = unit_uniform(rng);
    switch (pr.range.kind) {
      case ParamRange::Kind::RealLine: {
        double v = pr.scale * std::tan(std::numbers::pi * (u - 0.5));
        p[a] = v;
        logq += std::log(pr.scale / (std::numbers::pi * (pr.scale * pr.scale + v * v)));
        break;
      }
      case ParamRange::Kind::HalfLine: {
        double v = pr.scale * std::tan(std::numbers::pi * u / 2.0);
        p[a] = v;
        logq += std::log(2.0 * pr.scale / (std::numbers::pi * (pr.scale * pr.scale + v * v)));
        break;
      }
      case ParamRange::Kind::Interval: {
        p[a] = pr.range.lo + u * (pr.range.hi - pr.range.lo);
        logq -= std::log(pr.range.hi - pr.range.lo);
        break;
      }
    }
  }
  return logq;
}

constexpr long kChunk = 8192;

}  // namespace

McResult laplace_mc(const OrbitModel& model, const Vec& x, long samples, uint64_t seed) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "laplace_mc");
  require(samples > 0, Errc::InvalidInput, "laplace_mc: samples must be positive");
  int d = model.param_dim();
  if (d == 0) {
    McResult out;
    out.value = std::exp(-model.hamiltonian(x, Vec(0)));
    out.samples = samples;
    return out;
  }
  auto props = build_proposals(model, x);
  long chunks = (samples + kChunk - 1) / kChunk;
  struct Partial {
    long double w = 0, w2 = 0;
    std::vector<double> top;  // largest weights seen in this chunk
  };
  std::vector<Partial> parts(chunks);
  parallel_chunks(static_cast<int>(chunks), [&](int ci) {
    long c = ci;
    std::mt19937_64 rng(mix_seed(seed, static_cast<uint64_t>(c)));
    long n = std::min(kChunk, samples - c * kChunk);
    Vec p(d);
    Partial& pt = parts[c];
    for (long i = 0; i < n; ++i) {
      double logq = draw_point(props, rng, p);
      double logw = -model.hamiltonian(x, p) + std::log(model.density(p)) - logq;
      double w = logw < 700 ? std::exp(logw) : std::numeric_limits<double>::max();
      pt.w += w;
      pt.w2 += static_cast<long double>(w) * w;
      pt.top.push_back(w);
      std::push_heap(pt.top.begin(), pt.top.end(), std::greater<>());
      if (pt.top.size() > 10) {
        std::pop_heap(pt.top.begin(), pt.top.end(), std::greater<>());
        pt.top.pop_back();
      }
    }
  });
  long double sw = 0, sw2 = 0;
  std::vector<double> top;
  for (const auto& pt : parts) {
    sw += pt.w;
    sw2 += pt.w2;
    top.insert(top.end(), pt.top.begin(), pt.top.end());
  }
  std::sort(top.begin(), top.end(), std::greater<>());
  double top10 = std::accumulate(top.begin(), top.begin() + std::min<size_t>(10, top.size()), 0.0);
  McResult out;
  out.samples = samples;
  out.value = static_cast<double>(sw) / samples;
  long double var = (sw2 - sw * sw / samples) / (samples - 1.0L);
  out.stderr_value = std::sqrt(std::max(0.0, static_cast<double>(var) / samples));
  out.infinite_variance = top10 > 0.5 * static_cast<double>(sw);
  return out;
}

ProbeResult divergence_probe(const OrbitModel& model, const Vec& x) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "divergence_probe");
  if (model.tag() == FamilyTag::Product) {
    ProbeResult out{ProbeVerdict::Convergent, {}};
    int ao = 0;
    for (const auto& f : model.factors()) {
      ProbeResult part = divergence_probe(f, x.segment(ao, f.algebra().dim()));
      if (part.verdict == ProbeVerdict::Divergent) return part;
      ao += f.algebra().dim();
    }
    return out;
  }
  int d = model.param_dim();
  bool unbounded = false;
  for (const auto& r : model.ranges())
    if (r.kind != ParamRange::Kind::Interval) unbounded = true;
  ProbeResult out{ProbeVerdict::Convergent, {}};
  if (!unbounded || d == 0) return out;
  int nodes = d <= 1 ? 128 : d == 2 ? 96 : d == 3 ? 32 : 20;
  double r0 = 8.0 * (1.0 + 1.0 / std::max(x.norm(), 1e-3));
  for (int k = 0; k < 4; ++k) out.values[k] = box_integral(model, x, nodes, r0 * (1 << k));
  bool grew_last = !(out.values[3] <= 1.5 * out.values[2]) || !std::isfinite(out.values[3]);
  bool grew_prev = !(out.values[2] <= 1.5 * out.values[1]) || !std::isfinite(out.values[2]);
  if (grew_last && grew_prev) out.verdict = ProbeVerdict::Divergent;
  return out;
}

MomentResult moment_mc(const OrbitModel& model, const Vec& x, long samples, uint64_t seed) {
  require(x.size() == model.algebra().dim(), Errc::DimensionMismatch, "moment_mc");
  require(samples > 0, Errc::InvalidInput, "moment_mc: samples must be positive");
  int d = model.param_dim();
  int dim = model.algebra().dim();
  if (d == 0) {
    MomentResult out;
    out.mean = model.base_functional();
    out.mean_stderr = Vec::Zero(dim);
    out.samples = samples;
    return out;
  }
  auto props = build_proposals(model, x);
  long chunks = (samples + kChunk - 1) / kChunk;
  struct Partial {
    long double w = 0, w2 = 0;
    Vec wa, w2a, w2a2;
    bool init = false;
  };
  std::vector<Partial> parts(chunks);
  parallel_chunks(static_cast<int>(chunks), [&](int ci) {
    long c = ci;
    std::mt19937_64 rng(mix_seed(seed, static_cast<uint64_t>(c)));
    long n = std::min(kChunk, samples - c * kChunk);
    Vec p(d);
    Partial& pt = parts[c];
    pt.wa = Vec::Zero(dim);
    pt.w2a = Vec::Zero(dim);
    pt.w2a2 = Vec::Zero(dim);
    pt.init = true;
    for (long i = 0; i < n; ++i) {
      double logq = draw_point(props, rng, p);
      Vec alpha = model.embed(p);
      double logw = -alpha.dot(x) + std::log(model.density(p)) - logq;
      double w = logw < 700 ? std::exp(logw) : std::numeric_limits<double>::max();
      pt.w += w;
      pt.w2 += static_cast<long double>(w) * w;
      pt.wa += w * alpha;
      pt.w2a += (w * w) * alpha;
      pt.w2a2 += (w * w) * alpha.cwiseProduct(alpha);
    }
  });
  long double sw = 0, sw2 = 0;
  Vec swa = Vec::Zero(dim), sw2a = Vec::Zero(dim), sw2a2 = Vec::Zero(dim);
  for (const auto& pt : parts) {
    if (!pt.init) continue;
    sw += pt.w;
    sw2 += pt.w2;
    swa += pt.wa;
    sw2a += pt.w2a;
    sw2a2 += pt.w2a2;
  }
  MomentResult out;
  out.samples = samples;
  out.mean = swa / static_cast<double>(sw);
  out.mean_stderr = Vec(dim);
  for (int j = 0; j < dim; ++j) {
    // Var[(sum w a)/(sum w)] ~ sum w^2 (a_j - mean_j)^2 / (sum w)^2
    double m = out.mean[j];
    double num = static_cast<double>(sw2a2[j]) - 2.0 * m * static_cast<double>(sw2a[j]) +
                 m * m * static_cast<double>(sw2);
    out.mean_stderr[j] = std::sqrt(std::max(0.0, num)) / static_cast<double>(sw);
  }
  return out;
}

double gauss_quad_rn(const Mat& a, const Vec& xi, int nodes) {
  require(a.rows() == a.cols() && a.rows() == xi.size(), Errc::DimensionMismatch, "gauss_quad_rn");
  int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  require(es.eigenvalues().minCoeff() > 0, Errc::InvalidInput,
          "gauss_quad_rn needs a positive definite matrix");
  Mat inv = a.ldlt().solve(Mat::Identity(n, n));
  Vec center = -(inv * xi);
  // per-axis half-width spanning the marginal standard deviations
  Vec width(n);
  for (int k = 0; k < n; ++k) width[k] = 9.0 * std::sqrt(inv(k, k));
  GlRule rule = gauss_legendre(nodes);
  std::vector<int> idx(n, 0);
  long double sum = 0;
  Vec v(n);
  for (;;) {
    double w = 1;
    for (int k = 0; k < n; ++k) {
      v[k] = center[k] + width[k] * rule.nodes[idx[k]];
      w *= width[k] * rule.weights[idx[k]];
    }
    double h = 0.5 * v.dot(a * v) + xi.dot(v);
    if (h < 700) sum += w * std::exp(-h);
    int k = 0;
    while (k < n && ++idx[k] == nodes) idx[k++] = 0;
    if (k == n) break;
  }
  return static_cast<double>(sum) * std::pow(2.0 * std::numbers::pi, -n / 2.0);
}

}  // namespace orbitherm
