#include "dq/mc.hpp"

#include <algorithm>
#include <cmath>

#include "dq/error.hpp"
#include "dq/rng.hpp"
#ifdef _OPENMP
#include <omp.h>
#endif

namespace dq {

const char* const kNormalizationTag = "mirror2pi-v1";

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long kShardSize = 4096;
constexpr double kMinSeparation = 1e-12;

struct Prepared {
  std::vector<int> internal_slot;      // vertex -> slot among internal, or -1
  std::vector<HalfPlanePoint> fixed;   // vertex -> observable position
  std::vector<std::pair<int, int>> edges;
  int n_internal = 0;
  double center = 0;
  double scale = 1;
};

Prepared prepare(const FeynmanGraph& g, const std::vector<double>& boundary) {
  validate_graph(g);
  if (!g.legs.empty()) throw FormatError("graph has external legs");

  Prepared p;
  p.internal_slot.assign(g.vertices.size(), -1);
  p.fixed.assign(g.vertices.size(), HalfPlanePoint{});
  int n_obs = 0;
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].kind == VertexKind::Observable) {
      if (n_obs >= (int)boundary.size())
        throw DimensionError("boundary position count mismatch");
      p.fixed[v] = {boundary[n_obs++], 0.0};
    } else {
      p.internal_slot[v] = p.n_internal++;
    }
  }
  if (n_obs != (int)boundary.size())
    throw DimensionError("boundary position count mismatch");
  p.edges = g.edges;

  if (!boundary.empty()) {
    double lo = *std::min_element(boundary.begin(), boundary.end());
    double hi = *std::max_element(boundary.begin(), boundary.end());
    p.center = 0.5 * (lo + hi);
    p.scale = std::max(1.0, hi - lo);
  }
  return p;
}

double det_inplace(std::vector<double>& m, int n) {
  double det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(m[r * n + c]) > std::fabs(m[piv * n + c])) piv = r;
    if (m[piv * n + c] == 0) return 0;
    if (piv != c) {
      for (int k = c; k < n; ++k) std::swap(m[piv * n + k], m[c * n + k]);
      det = -det;
    }
    det *= m[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      double f = m[r * n + c] / m[c * n + c];
      for (int k = c + 1; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return det;
}

double integrand(const Prepared& p, const std::vector<HalfPlanePoint>& pts,
                 std::vector<double>& scratch) {
  int n = 2 * p.n_internal;
  scratch.assign((size_t)n * n, 0.0);
  int row = 0;
  for (auto& [t, h] : p.edges) {
    HalfPlanePoint z = p.internal_slot[t] >= 0 ? pts[p.internal_slot[t]]
                                               : p.fixed[t];
    HalfPlanePoint w = p.internal_slot[h] >= 0 ? pts[p.internal_slot[h]]
                                               : p.fixed[h];
    EdgeForm f = angle_form(z, w);
    if (p.internal_slot[t] >= 0) {
      scratch[(size_t)row * n + 2 * p.internal_slot[t]] += f.d_tail_x;
      scratch[(size_t)row * n + 2 * p.internal_slot[t] + 1] += f.d_tail_y;
    }
    if (p.internal_slot[h] >= 0) {
      scratch[(size_t)row * n + 2 * p.internal_slot[h]] += f.d_head_x;
      scratch[(size_t)row * n + 2 * p.internal_slot[h] + 1] += f.d_head_y;
    }
    ++row;
  }
  return det_inplace(scratch, n);
}

struct Shard {
  long n = 0;
  double mean = 0;
  double m2 = 0;
  long rejects = 0;
};

// Half-plane Cauchy proposal: radius from the two-dimensional Cauchy law
// around (center, 0), angle uniform over the upper half.  Density
// (1/pi s^2) (1 + rho^2/s^2)^(-3/2) on {im > 0}.
void run_shard(const Prepared& p, uint64_t seed, long count, Shard* out) {
  Rng rng(seed);
  std::vector<HalfPlanePoint> pts(p.n_internal);
  std::vector<double> scratch;
  for (long i = 0; i < count; ++i) {
    double inv_density = 1.0;
    bool ok;
    do {
      ok = true;
      inv_density = 1.0;
      for (int j = 0; j < p.n_internal; ++j) {
        double u = rng.u01();
        double r = p.scale * std::sqrt(1.0 / ((1 - u) * (1 - u)) - 1.0);
        double th = kPi * rng.u01();
        pts[j] = {p.center + r * std::cos(th), r * std::sin(th)};
        double t2 = 1 + (r / p.scale) * (r / p.scale);
        inv_density *= kPi * p.scale * p.scale * t2 * std::sqrt(t2);
        if (pts[j].im < kMinSeparation) ok = false;
      }
      for (auto& [t, h] : p.edges) {
        if (!ok) break;
        HalfPlanePoint z = p.internal_slot[t] >= 0 ? pts[p.internal_slot[t]]
                                                   : p.fixed[t];
        HalfPlanePoint w = p.internal_slot[h] >= 0 ? pts[p.internal_slot[h]]
                                                   : p.fixed[h];
        double dx = w.re - z.re, dy = w.im - z.im;
        if (dx * dx + dy * dy < kMinSeparation * kMinSeparation) ok = false;
      }
      if (!ok) out->rejects++;
    } while (!ok);

    double v = integrand(p, pts, scratch) * inv_density;
    out->n++;
    double d = v - out->mean;
    out->mean += d / out->n;
    out->m2 += d * (v - out->mean);
  }
}

std::vector<double> default_boundary(const FeynmanGraph& g) {
  std::vector<double> b;
  for (auto& v : g.vertices)
    if (v.kind == VertexKind::Observable) b.push_back((double)b.size());
  return b;
}

WeightResult run(const GraphClass& gc, const McOptions& opt, bool parallel) {
  std::vector<double> boundary =
      opt.boundary.empty() ? default_boundary(gc.rep) : opt.boundary;
  Prepared p = prepare(gc.rep, boundary);

  WeightResult res;
  res.graph_hash = gc.hash;
  res.samples = opt.samples;
  res.seed = opt.seed;
  res.normalization = kNormalizationTag;
  res.positions = boundary;

  if ((long)p.edges.size() != 2L * p.n_internal) {
    res.structural_zero = true;
    res.reason = "form degree mismatch: edges != 2 x internal vertices";
    res.samples = 0;
    return res;
  }
  if (p.n_internal == 0) {
    res.estimate = 1.0;
    return res;
  }
  if (opt.samples <= 1) throw IndexError("sample budget too small");

  long nshards = (opt.samples + kShardSize - 1) / kShardSize;
  std::vector<Shard> shards(nshards);

  auto body = [&](long k) {
    long count = std::min(kShardSize, opt.samples - k * kShardSize);
    run_shard(p, derive_seed(opt.seed, (uint64_t)k), count, &shards[k]);
  };

  if (parallel) {
#ifdef _OPENMP
    int nt = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long k = 0; k < nshards; ++k) body(k);
#else
    for (long k = 0; k < nshards; ++k) body(k);
#endif
  } else {
    for (long k = 0; k < nshards; ++k) body(k);
  }

  // deterministic serial merge in shard order
  long n = 0;
  double mean = 0, m2 = 0;
  long rejects = 0;
  for (auto& s : shards) {
    if (s.n == 0) continue;
    double delta = s.mean - mean;
    long nn = n + s.n;
    m2 += s.m2 + delta * delta * ((double)n * (double)s.n / (double)nn);
    mean += delta * ((double)s.n / (double)nn);
    n = nn;
    rejects += s.rejects;
  }

  res.estimate = mean;
  res.std_error = n > 1 ? std::sqrt(m2 / ((double)n * (double)(n - 1))) : 0.0;
  res.rejected_fraction =
      n + rejects > 0 ? (double)rejects / (double)(n + rejects) : 0.0;
  // A value that is zero to machine precision has converged; the relative
  // criterion only applies once the estimate is resolvably nonzero.
  res.converged = res.std_error <= std::max(std::fabs(res.estimate), 1e-12);
  return res;
}

}  // namespace

WeightResult graph_weight_mc(const GraphClass& gc, const McOptions& opt) {
  return run(gc, opt, true);
}

WeightResult graph_weight_mc_serial(const GraphClass& gc, const McOptions& opt) {
  return run(gc, opt, false);
}

double weight_integrand(const FeynmanGraph& g,
                        const std::vector<double>& boundary,
                        const std::vector<HalfPlanePoint>& internal) {
  Prepared p = prepare(g, boundary);
  if ((int)internal.size() != p.n_internal)
    throw DimensionError("internal position count mismatch");
  if ((long)p.edges.size() != 2L * p.n_internal) return 0.0;
  if (p.n_internal == 0) return 1.0;
  std::vector<double> scratch;
  return integrand(p, internal, scratch);
}

}  // namespace dq
