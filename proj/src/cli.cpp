#include "dq/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dq/brackets.hpp"
#include "dq/connection.hpp"
#include "dq/enumerate.hpp"
#include "dq/error.hpp"
#include "dq/expr.hpp"
#include "dq/mc.hpp"
#include "dq/poisson.hpp"
#include "dq/qme_audit.hpp"
#include "dq/rng.hpp"
#include "dq/star.hpp"
#include "dq/surface.hpp"
#include "dq/vanishing.hpp"
#include "dq/weight_cache.hpp"

namespace dq {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string format = "json";
  int threads = 0;

  int genus = 0;
  int boundaries = 1;

  int ext = 0;
  int loops = 0;
  int dim = 2;
  int cap = 3;
  int max_internal = 4;
  int boundary_order = -1;

  std::string graph_path;
  long samples = 200000;
  uint64_t seed = 1;
  std::string cache_path;
  std::vector<double> boundary_pos;

  std::string poisson_path;
  std::string f_expr, g_expr, h_expr;
  int order = 1;
  std::string weight_mode = "exact";
  int trials = 0;

  std::string connection_path;
  int arity = 3;
  int shuffle = 5;

  std::string suite;
  std::string fixtures_dir = "tests/fixtures";
  bool write = false;
};

Json envelope(const std::string& command) {
  Json j;
  j["format"] = "cli/1";
  j["normalization"] = kNormalizationTag;
  j["command"] = command;
  return j;
}

void emit(const RunConfig& cfg, const Json& j, const std::string& table) {
  if (cfg.format == "table")
    std::cout << table;
  else
    std::cout << j.dump(2) << "\n";
}

std::string hex_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

std::string resolved_cache(const RunConfig& cfg) {
  if (!cfg.cache_path.empty()) return cfg.cache_path;
  const char* env = std::getenv("DQ_WEIGHT_CACHE");
  return env ? env : "";
}

// The curved two-dimensional example with the standard symplectic form held
// parallel; the default subject of the bracket commands.
Connection default_connection() {
  return Connection(2, {{1, 0, 0, Poly::variable(2, 1)}}, standard_omega(2));
}

Poly random_poly(Rng& rng, int d, int deg, int nterms) {
  Poly p(d);
  for (int t = 0; t < nterms; ++t) {
    MultiIndex m(d, 0);
    int total = (int)rng.below(deg + 1);
    for (int s = 0; s < total; ++s) ++m[rng.below(d)];
    p.add_term(m, rat((long)rng.below(9) - 4));
  }
  return p;
}

std::string pretty_series(const StarSeries& s) {
  std::string out;
  for (int k = 0; k <= s.order(); ++k) {
    if (s.at(k).is_zero()) continue;
    std::string term;
    if (k == 0)
      term = s.at(k).str();
    else if (k == 1)
      term = "(" + s.at(k).str() + ") h";
    else
      term = "(" + s.at(k).str() + ") h^" + std::to_string(k);
    out += (out.empty() ? "" : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- commands

int run_surface(const RunConfig& cfg) {
  SurfaceTopology s{cfg.genus, cfg.boundaries};
  Json j = envelope("surface info");
  j["surface"] = Json::parse(surface_info_json(s));
  std::ostringstream t;
  t << "genus " << s.genus << " boundaries " << s.boundaries << "\n"
    << "euler " << j["surface"]["euler"].get<int>() << "\n"
    << "tadpole_admissible " << (j["surface"]["tadpole_admissible"].get<bool>() ? "yes" : "no") << "\n"
    << "diagonal_entries " << j["surface"]["diagonal_class"].size() << "\n";
  emit(cfg, j, t.str());
  return 0;
}

int run_graphs(const RunConfig& cfg) {
  std::vector<GraphClass> classes;
  Json j = envelope("graphs enumerate");
  if (cfg.boundary_order >= 0) {
    classes = enumerate_boundary_graphs(cfg.boundary_order, cfg.cap);
    j["boundary_order"] = cfg.boundary_order;
  } else {
    EnumOptions opt;
    opt.dim = cfg.dim;
    opt.arity_cap = cfg.cap;
    opt.max_internal = cfg.max_internal;
    opt.threads = cfg.threads;
    classes = enumerate_graphs(cfg.ext, cfg.loops, opt);
    j["n_ext"] = cfg.ext;
    j["loops"] = cfg.loops;
    j["dim"] = cfg.dim;
  }
  j["arity_cap"] = cfg.cap;
  j["count"] = classes.size();
  Json arr = Json::array();
  std::ostringstream t;
  for (const auto& c : classes) {
    arr.push_back(Json::parse(graph_to_json(c)));
    t << c.hash << "  aut " << c.aut << "\n";
  }
  j["classes"] = arr;
  t << "count " << classes.size() << "\n";
  emit(cfg, j, t.str());
  return 0;
}

int run_weights(const RunConfig& cfg) {
  GraphClass gc = graph_class_from_file(cfg.graph_path);
  McOptions opt;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  opt.boundary = cfg.boundary_pos;

  std::string cache_path = resolved_cache(cfg);
  WeightResult r;
  bool fresh = true;
  if (!cache_path.empty()) {
    WeightCache cache(cache_path);
    int nobs = 0;
    for (const auto& v : gc.rep.vertices)
      if (v.kind == VertexKind::Observable) ++nobs;
    std::vector<double> eff = opt.boundary;
    if (eff.empty())
      for (int i = 0; i < nobs; ++i) eff.push_back((double)i);
    auto hit = cache.get(gc.hash, eff);
    if (hit && hit->seed == opt.seed && hit->samples == opt.samples &&
        hit->normalization == kNormalizationTag) {
      r = *hit;
      fresh = false;
    }
    if (fresh) {
      r = graph_weight_mc(gc, opt);
      cache.put(r);
    }
  } else {
    r = graph_weight_mc(gc, opt);
  }

  Json j = envelope("weights compute");
  j["seed"] = cfg.seed;
  j["cached"] = !fresh;
  j["weight"] = Json::parse(weight_result_to_json(r));
  std::ostringstream t;
  t << "estimate " << r.estimate << "\n"
    << "std_error " << r.std_error << "\n"
    << "samples " << r.samples << " seed " << r.seed << "\n"
    << "converged " << (r.converged ? "yes" : "no") << "\n";
  if (r.structural_zero) t << "structural_zero " << r.reason << "\n";
  emit(cfg, j, t.str());
  return r.converged ? 0 : 2;
}

NumericWeights gather_weights(const RunConfig& cfg, int order) {
  McOptions base;
  base.samples = cfg.samples;
  base.seed = cfg.seed;
  base.threads = cfg.threads;
  std::string cache_path = resolved_cache(cfg);
  if (cache_path.empty()) return collect_boundary_weights(order, cfg.cap, base);
  WeightCache cache(cache_path);
  return collect_boundary_weights(order, cfg.cap, base, &cache);
}

int run_star_eval(const RunConfig& cfg) {
  PoissonStructure pi = cfg.poisson_path.empty()
                            ? PoissonStructure::standard_symplectic(2)
                            : poisson_from_file(cfg.poisson_path);
  Poly f = parse_poly(cfg.f_expr, pi.dim());
  Poly g = parse_poly(cfg.g_expr, pi.dim());

  Json j = envelope("star eval");
  j["dim"] = pi.dim();
  j["order"] = cfg.order;
  j["weights"] = cfg.weight_mode;
  std::ostringstream t;
  int rc = 0;

  if (cfg.weight_mode == "exact") {
    StarSeries s = star_product_exact(f, g, pi, cfg.order, cfg.cap);
    Json arr = Json::array();
    for (int k = 0; k <= cfg.order; ++k)
      arr.push_back(Json{{"order", k}, {"poly", s.at(k).str()}});
    j["series"] = arr;
    j["pretty"] = pretty_series(s);
    t << j["pretty"].get<std::string>() << "\n";
  } else {
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    NumericWeights w = gather_weights(cfg, cfg.order);
    NumericStarSeries s = star_product_numeric(f, g, pi, w, cfg.order, cfg.cap);
    Json arr = Json::array();
    for (int k = 0; k <= cfg.order; ++k) {
      Json terms = Json::array();
      for (const auto& [m, c] : s.at(k).terms()) {
        Json term;
        term["exponents"] = m;
        term["value"] = c.v;
        term["std_error"] = c.sigma(w);
        terms.push_back(term);
      }
      arr.push_back(Json{{"order", k}, {"terms", terms}});
      t << "h^" << k << ": " << terms.size() << " terms\n";
    }
    j["series"] = arr;
    j["weights_converged"] = w.all_converged();
    if (!w.all_converged()) rc = 2;
  }
  emit(cfg, j, t.str());
  return rc;
}

int run_star_assoc(const RunConfig& cfg) {
  PoissonStructure pi = cfg.poisson_path.empty()
                            ? PoissonStructure::standard_symplectic(2)
                            : poisson_from_file(cfg.poisson_path);
  Json j = envelope("star assoc");
  j["dim"] = pi.dim();
  j["order"] = cfg.order;
  j["weights"] = cfg.weight_mode;
  std::ostringstream t;
  int rc = 0;

  bool single = !cfg.f_expr.empty() || !cfg.g_expr.empty() || !cfg.h_expr.empty();
  if (single && (cfg.f_expr.empty() || cfg.g_expr.empty() || cfg.h_expr.empty()))
    throw ParseError("--f, --g, --h must be given together");

  if (cfg.weight_mode == "exact") {
    int trials = cfg.trials > 0 ? cfg.trials : 20;
    bool zero = true;
    Json cases = Json::array();
    if (single) {
      Poly f = parse_poly(cfg.f_expr, pi.dim());
      Poly g = parse_poly(cfg.g_expr, pi.dim());
      Poly h = parse_poly(cfg.h_expr, pi.dim());
      StarSeries d = associativity_defect_exact(f, g, h, pi, cfg.order, cfg.cap);
      for (int k = 0; k <= cfg.order; ++k) zero = zero && d.at(k).is_zero();
      cases.push_back(Json{{"f", cfg.f_expr}, {"g", cfg.g_expr}, {"h", cfg.h_expr}, {"zero", zero}});
    } else {
      Rng rng(cfg.seed);
      for (int trial = 0; trial < trials; ++trial) {
        MultiIndex ma(pi.dim(), 0), mb(pi.dim(), 0), mc(pi.dim(), 0);
        for (int s = 0; s < 3; ++s) {
          ++ma[rng.below(pi.dim())];
          ++mb[rng.below(pi.dim())];
          ++mc[rng.below(pi.dim())];
        }
        Poly f = Poly::monomial(pi.dim(), ma, rat(1 + (long)rng.below(3)));
        Poly g = Poly::monomial(pi.dim(), mb, rat(1 + (long)rng.below(3)));
        Poly h = Poly::monomial(pi.dim(), mc, rat(1 + (long)rng.below(3)));
        StarSeries d = associativity_defect_exact(f, g, h, pi, cfg.order, cfg.cap);
        bool tz = true;
        for (int k = 0; k <= cfg.order; ++k) tz = tz && d.at(k).is_zero();
        zero = zero && tz;
        cases.push_back(Json{{"f", f.str()}, {"g", g.str()}, {"h", h.str()}, {"zero", tz}});
      }
      j["seed"] = cfg.seed;
    }
    j["cases"] = cases;
    j["defect_zero"] = zero;
    t << "defect_zero " << (zero ? "yes" : "no") << " cases " << cases.size() << "\n";
  } else {
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    NumericWeights w = gather_weights(cfg, cfg.order);
    int trials = cfg.trials > 0 ? cfg.trials : 5;
    Json cases = Json::array();
    bool ok = true;
    auto run_triple = [&](const Poly& f, const Poly& g, const Poly& h,
                          const std::string& fs, const std::string& gs,
                          const std::string& hs) {
      NumericStarSeries d =
          associativity_defect_numeric(f, g, h, pi, w, cfg.order, cfg.cap);
      ErrorBoundReport rep = check_within(d, w, 3.0, 1e-10);
      ok = ok && rep.ok;
      cases.push_back(Json{{"f", fs},
                           {"g", gs},
                           {"h", hs},
                           {"ok", rep.ok},
                           {"max_abs", rep.max_abs},
                           {"bound", rep.bound_at_max}});
    };
    if (single) {
      Poly f = parse_poly(cfg.f_expr, pi.dim());
      Poly g = parse_poly(cfg.g_expr, pi.dim());
      Poly h = parse_poly(cfg.h_expr, pi.dim());
      run_triple(f, g, h, cfg.f_expr, cfg.g_expr, cfg.h_expr);
    } else {
      Rng rng(cfg.seed);
      for (int trial = 0; trial < trials; ++trial) {
        Poly f = random_poly(rng, pi.dim(), 2, 3);
        Poly g = random_poly(rng, pi.dim(), 2, 3);
        Poly h = random_poly(rng, pi.dim(), 2, 3);
        run_triple(f, g, h, f.str(), g.str(), h.str());
      }
    }
    j["cases"] = cases;
    j["within_error"] = ok;
    j["weights_converged"] = w.all_converged();
    if (!w.all_converged()) rc = 2;
    t << "within_error " << (ok ? "yes" : "no") << " cases " << cases.size() << "\n";
  }
  emit(cfg, j, t.str());
  return rc;
}

int run_linfty_build(const RunConfig& cfg) {
  Connection c = cfg.connection_path.empty() ? default_connection()
                                             : connection_from_file(cfg.connection_path);
  BracketSystem br = build_brackets(c, cfg.arity);
  Json j = envelope("linfty build");
  j["dim"] = c.dim();
  j["arity"] = cfg.arity;
  j["brackets"] = Json::parse(brackets_to_json(br));
  std::ostringstream t;
  for (int n = 1; n <= cfg.arity; ++n) {
    BracketTensor tensor = bracket_tensor(br, n);
    t << "arity " << n << ": " << tensor.size() << " tensor entries\n";
  }
  emit(cfg, j, t.str());
  return 0;
}

int run_linfty_check(const RunConfig& cfg) {
  Connection c = cfg.connection_path.empty() ? default_connection()
                                             : connection_from_file(cfg.connection_path);
  int build_to = std::max(cfg.arity + 1, cfg.shuffle);
  BracketSystem br = build_brackets(c, build_to);

  Json j = envelope("linfty check");
  j["dim"] = c.dim();
  std::ostringstream t;

  bool jac_ok = true;
  Json jac = Json::array();
  for (const auto& r : check_homotopy_identities(br, cfg.arity)) {
    jac.push_back(Json{{"arity", r.arity}, {"zero", r.is_zero}, {"nonzero_entries", r.nonzero_entries}});
    jac_ok = jac_ok && r.is_zero;
    t << "jacobi arity " << r.arity << (r.is_zero ? " zero" : " NONZERO") << "\n";
  }
  j["jacobi"] = jac;

  if (c.omega()) {
    Json pairing = Json::array();
    for (const auto& r : check_pairing_invariance(br, *c.omega(), cfg.arity)) {
      pairing.push_back(Json{{"arity", r.arity},
                             {"zero", r.is_zero},
                             {"transposition_nonzero", r.transposition_nonzero}});
      t << "pairing arity " << r.arity << (r.is_zero ? " zero" : " NONZERO") << "\n";
    }
    j["pairing"] = pairing;
    j["omega_parallel"] = c.is_omega_parallel();
  }

  Json shuffle = Json::array();
  bool shuffle_ok = true;
  for (int n = 2; n <= cfg.shuffle; ++n) {
    ShuffleReport r = shuffle_cancellation_check(br, n);
    shuffle.push_back(Json{{"total_arity", n}, {"zero", r.is_zero}, {"nonzero_entries", r.nonzero_entries}});
    shuffle_ok = shuffle_ok && r.is_zero;
    t << "shuffle total " << n << (r.is_zero ? " zero" : " NONZERO") << "\n";
  }
  j["shuffle"] = shuffle;
  j["jacobi_zero"] = jac_ok;
  j["shuffle_zero"] = shuffle_ok;

  emit(cfg, j, t.str());
  return jac_ok && shuffle_ok ? 0 : 1;
}

int run_audit(const RunConfig& cfg) {
  Json j = envelope("audit qme");
  Json ledgers = Json::array();
  std::map<std::string, long> totals;
  std::ostringstream t;
  auto add = [&](const GraphClass& gc) {
    QmeLedger led = qme_degree_audit(gc);
    ledgers.push_back(Json::parse(qme_ledger_to_json(led)));
    std::map<std::string, long> local;
    for (const auto& s : led.strata) {
      ++totals[s.classification];
      ++local[s.classification];
    }
    t << gc.hash << ":";
    for (const auto& [k, v] : local) t << " " << k << "=" << v;
    t << "\n";
  };
  if (!cfg.graph_path.empty()) {
    add(graph_class_from_file(cfg.graph_path));
  } else {
    for (int k = 0; k <= cfg.order; ++k)
      for (const auto& cls : enumerate_boundary_graphs(k, cfg.cap)) add(cls);
  }
  j["ledgers"] = ledgers;
  Json sum = Json::object();
  for (const auto& [k, v] : totals) sum[k] = v;
  j["totals"] = sum;
  emit(cfg, j, t.str());
  return 0;
}

// ---------------------------------------------------------------- fixtures

// Independent reference for the constant-bivector product used as the oracle
// when regenerating the deformation fixture: the k-th term applies k bivector
// contractions and divides by 2^k k!.
Poly exp_reference_term(const Poly& f, const Poly& g, const PoissonStructure& pi, int k) {
  int d = pi.dim();
  Poly out(d);
  long pairs = 1;
  for (int i = 0; i < k; ++i) pairs *= d * d;
  for (long code = 0; code < pairs; ++code) {
    long c = code;
    Rational coeff(1);
    Poly df = f, dg = g;
    for (int step = 0; step < k; ++step) {
      int i = (int)(c % d);
      c /= d;
      int jj = (int)(c % d);
      c /= d;
      const Poly& comp = pi.at(i, jj);
      coeff *= comp.is_zero() ? Rational(0) : comp.coeff(MultiIndex(d, 0));
      if (coeff == 0) break;
      df = df.partial(i);
      dg = dg.partial(jj);
    }
    if (coeff == 0) continue;
    out += df * dg * coeff;
  }
  Rational norm = rat(1, 1L << k);
  for (int i = 2; i <= k; ++i) norm /= i;
  return out * norm;
}

void enumeration_oracle(const GraphClass& c, int n_ext, int loops, int dim) {
  validate_graph(c.rep);
  if (!is_connected(c.rep))
    throw Error("oracle failure in enumeration suite: disconnected class " + c.hash);
  if (!chains_within_caps(c.rep, dim))
    throw Error("oracle failure in enumeration suite: chain cap violation in " + c.hash);
  FinitenessBound b = finiteness_bound(n_ext, loops, dim);
  int tri = 0, biv = 0;
  for (const auto& v : c.rep.vertices) {
    int slots = out_slots(v) + in_slots(v);
    if (slots >= 3) ++tri;
    if (slots == 2) ++biv;
  }
  int vcount = (int)c.rep.vertices.size();
  int ecount = (int)c.rep.edges.size();
  if (tri > b.v_max)
    throw Error("oracle failure in enumeration suite: vertex bound violated in " + c.hash);
  if (vcount - ecount + loops != 1)
    throw Error("oracle failure in enumeration suite: euler relation violated in " + c.hash);
  (void)biv;
}

Json suite_enumeration() {
  Json j;
  j["format"] = "fixture/enumeration/1";
  j["normalization"] = kNormalizationTag;
  Json cells = Json::array();
  for (int n = 0; n <= 3; ++n)
    for (int l = 0; l <= 2; ++l) {
      EnumOptions opt;
      opt.dim = 2;
      opt.arity_cap = 3;
      opt.max_internal = 4;
      Json cell;
      cell["n_ext"] = n;
      cell["loops"] = l;
      cell["dim"] = opt.dim;
      cell["arity_cap"] = opt.arity_cap;
      cell["max_internal"] = opt.max_internal;
      Json arr = Json::array();
      for (const auto& c : enumerate_graphs(n, l, opt)) {
        enumeration_oracle(c, n, l, opt.dim);
        arr.push_back(Json{{"hash", c.hash}, {"aut", c.aut}});
      }
      cell["classes"] = arr;
      cells.push_back(cell);
    }
  j["cells"] = cells;
  Json barr = Json::array();
  for (int k = 0; k <= 3; ++k) {
    Json cell;
    cell["order"] = k;
    cell["arity_cap"] = 3;
    Json arr = Json::array();
    for (const auto& c : enumerate_boundary_graphs(k, 3)) {
      validate_graph(c.rep);
      if ((int)c.rep.edges.size() != 2 * k)
        throw Error("oracle failure in enumeration suite: edge count in " + c.hash);
      arr.push_back(Json{{"hash", c.hash}, {"aut", c.aut}});
    }
    cell["classes"] = arr;
    barr.push_back(cell);
  }
  j["boundary"] = barr;
  return j;
}

Json suite_moyal() {
  PoissonStructure pi = PoissonStructure::standard_symplectic(2);
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"x1", "x2"},          {"x2", "x1"},
      {"x1^2", "x2^2"},      {"x1*x2", "x1 + x2"},
      {"x1^2 + x2", "x2^2"}, {"x1^3", "x2^3"},
      {"2*x1^2*x2", "x1*x2^2 - 1"},
  };
  Json j;
  j["format"] = "fixture/moyal/1";
  j["normalization"] = kNormalizationTag;
  j["dim"] = 2;
  j["order"] = 2;
  Json arr = Json::array();
  for (const auto& [fs, gs] : cases) {
    Poly f = parse_poly(fs, 2);
    Poly g = parse_poly(gs, 2);
    StarSeries s = star_product_exact(f, g, pi, 2);
    Json series = Json::array();
    for (int k = 0; k <= 2; ++k) {
      if (s.at(k) != exp_reference_term(f, g, pi, k))
        throw Error("oracle failure in moyal suite: case f=" + fs + " g=" + gs +
                    " order " + std::to_string(k));
      series.push_back(s.at(k).str());
    }
    arr.push_back(Json{{"f", fs}, {"g", gs}, {"series", series}});
  }
  j["cases"] = arr;
  return j;
}

Json suite_linfty() {
  Connection c = default_connection();
  BracketSystem br = build_brackets(c, 3);
  for (const auto& r : check_homotopy_identities(br, 3))
    if (!r.is_zero)
      throw Error("oracle failure in linfty suite: identity residual at arity " +
                  std::to_string(r.arity));
  Json j;
  j["format"] = "fixture/linfty/1";
  j["normalization"] = kNormalizationTag;
  j["connection"] = Json::parse(connection_to_json(c));
  j["arity"] = 3;
  j["brackets"] = Json::parse(brackets_to_json(br));
  return j;
}

Json suite_weights() {
  McOptions base;
  base.samples = 200000;
  base.seed = 7;
  Json j;
  j["format"] = "fixture/weights/1";
  j["normalization"] = kNormalizationTag;
  j["samples"] = base.samples;
  j["seed"] = base.seed;
  j["positions"] = std::vector<double>{0.0, 1.0};
  Json arr = Json::array();
  for (int k = 0; k <= 2; ++k)
    for (const auto& cls : enumerate_boundary_graphs(k, 3)) {
      McOptions opt = base;
      opt.seed = boundary_weight_seed(base.seed, cls.hash);
      WeightResult r = graph_weight_mc(cls, opt);
      if (!r.converged || r.rejected_fraction > 1e-6)
        throw Error("oracle failure in weights suite: estimator did not settle on " + cls.hash);
      arr.push_back(Json{{"order", k},
                         {"hash", cls.hash},
                         {"aut", cls.aut},
                         {"estimate", r.estimate},
                         {"estimate_hex", hex_double(r.estimate)},
                         {"std_error", r.std_error},
                         {"std_error_hex", hex_double(r.std_error)},
                         {"seed", r.seed}});
    }
  j["entries"] = arr;
  return j;
}

Json build_suite(const std::string& suite) {
  if (suite == "enumeration") return suite_enumeration();
  if (suite == "moyal") return suite_moyal();
  if (suite == "linfty") return suite_linfty();
  if (suite == "weights") return suite_weights();
  throw ParseError("unknown fixture suite: " + suite);
}

std::string trunc_dump(const Json& j) {
  std::string s = j.dump();
  if (s.size() > 120) s = s.substr(0, 117) + "...";
  return s;
}

void diff_json(const std::string& path, const Json& a, const Json& b, Json& out) {
  if (a == b) return;
  if ((long)out.size() >= 50) return;
  if (a.is_object() && b.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      std::string sub = path + "/" + it.key();
      if (!b.contains(it.key()))
        out.push_back(Json{{"path", sub}, {"old", trunc_dump(it.value())}, {"new", nullptr}});
      else
        diff_json(sub, it.value(), b.at(it.key()), out);
    }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key()))
        out.push_back(Json{{"path", path + "/" + it.key()}, {"old", nullptr}, {"new", trunc_dump(it.value())}});
    return;
  }
  if (a.is_array() && b.is_array() && a.size() == b.size()) {
    for (size_t i = 0; i < a.size(); ++i)
      diff_json(path + "/" + std::to_string(i), a.at(i), b.at(i), out);
    return;
  }
  out.push_back(Json{{"path", path.empty() ? "/" : path},
                     {"old", trunc_dump(a)},
                     {"new", trunc_dump(b)}});
}

int run_fixtures(const RunConfig& cfg) {
  Json fresh = build_suite(cfg.suite);
  fs::path path = fs::path(cfg.fixtures_dir) / (cfg.suite + ".json");

  Json rep = envelope("fixtures regen");
  rep["suite"] = cfg.suite;
  rep["path"] = path.string();
  bool exists = fs::exists(path);
  rep["exists"] = exists;

  Json diffs = Json::array();
  if (exists) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    Json old;
    try {
      old = Json::parse(buf.str());
      diff_json("", old, fresh, diffs);
    } catch (const Json::parse_error&) {
      diffs.push_back(Json{{"path", "/"}, {"old", "<unreadable>"}, {"new", trunc_dump(fresh)}});
    }
  }
  bool changed = !exists || !diffs.empty();
  rep["changed"] = changed;
  rep["diffs"] = diffs;

  bool written = false;
  if (cfg.write && changed) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write fixture file " + path.string());
    out << fresh.dump(2) << "\n";
    written = true;
  }
  rep["written"] = written;

  std::ostringstream t;
  t << "suite " << cfg.suite << " changed " << (changed ? "yes" : "no")
    << " written " << (written ? "yes" : "no") << "\n";
  for (const auto& d : rep["diffs"]) t << "  diff " << d["path"].get<std::string>() << "\n";
  emit(cfg, rep, t.str());
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  RunConfig cfg;
  int rc = 0;

  CLI::App app{"boundary disk quantization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "table"}));
  app.add_option("--threads", cfg.threads, "worker thread hint (0: runtime default)");

  auto* surface = app.add_subcommand("surface", "surface topology queries");
  surface->require_subcommand(1);
  surface->fallthrough();
  auto* sinfo = surface->add_subcommand("info", "cohomology, euler number, diagonal class");
  sinfo->fallthrough();
  sinfo->add_option("--genus", cfg.genus, "genus")->required();
  sinfo->add_option("--boundaries", cfg.boundaries, "boundary circles")->required();
  sinfo->callback([&] { rc = run_surface(cfg); });

  auto* graphs = app.add_subcommand("graphs", "admissible graph enumeration");
  graphs->require_subcommand(1);
  graphs->fallthrough();
  auto* genum = graphs->add_subcommand("enumerate", "list classes for a cell");
  genum->fallthrough();
  genum->add_option("--ext", cfg.ext, "external legs");
  genum->add_option("--loops", cfg.loops, "loop number");
  genum->add_option("--dim", cfg.dim, "target dimension");
  genum->add_option("--cap", cfg.cap, "vertex arity cap");
  genum->add_option("--max-internal", cfg.max_internal,
                    "internal vertex cap (default 4, the shipped oracle grid)");
  genum->add_option("--boundary", cfg.boundary_order,
                    "enumerate boundary-product graphs of this order instead");
  genum->callback([&] { rc = run_graphs(cfg); });

  auto* weights = app.add_subcommand("weights", "propagator weight estimation");
  weights->require_subcommand(1);
  weights->fallthrough();
  auto* wcomp = weights->add_subcommand("compute", "estimate one graph weight");
  wcomp->fallthrough();
  wcomp->add_option("--graph", cfg.graph_path, "graph class JSON file")->required();
  wcomp->add_option("--samples", cfg.samples, "sample count");
  wcomp->add_option("--seed", cfg.seed, "master seed");
  wcomp->add_option("--cache", cfg.cache_path, "weight cache path (default $DQ_WEIGHT_CACHE)");
  wcomp->add_option("--boundary", cfg.boundary_pos, "axis positions per observable")
      ->delimiter(',');
  wcomp->callback([&] { rc = run_weights(cfg); });

  auto* star = app.add_subcommand("star", "deformed product");
  star->require_subcommand(1);
  star->fallthrough();
  auto* seval = star->add_subcommand("eval", "evaluate f * g");
  seval->fallthrough();
  seval->add_option("--poisson", cfg.poisson_path, "bivector JSON file (default: constant symplectic d=2)");
  seval->add_option("--f", cfg.f_expr, "left factor")->required();
  seval->add_option("--g", cfg.g_expr, "right factor")->required();
  seval->add_option("--order", cfg.order, "truncation order");
  seval->add_option("--weights", cfg.weight_mode, "weight source")
      ->check(CLI::IsMember({"exact", "cache"}));
  seval->add_option("--samples", cfg.samples, "sample count (cache mode)");
  seval->add_option("--seed", cfg.seed, "master seed (cache mode)");
  seval->add_option("--cache", cfg.cache_path, "weight cache path");
  seval->add_option("--cap", cfg.cap, "vertex arity cap");
  seval->callback([&] { rc = run_star_eval(cfg); });

  auto* sassoc = star->add_subcommand("assoc", "associativity defect check");
  sassoc->fallthrough();
  sassoc->set_help_flag("--help", "print help");
  sassoc->add_option("--poisson", cfg.poisson_path, "bivector JSON file");
  sassoc->add_option("--order", cfg.order, "truncation order");
  sassoc->add_option("--weights", cfg.weight_mode, "weight source")
      ->check(CLI::IsMember({"exact", "cache"}));
  sassoc->add_option("--f", cfg.f_expr, "explicit left factor");
  sassoc->add_option("--g", cfg.g_expr, "explicit middle factor");
  sassoc->add_option("--h", cfg.h_expr, "explicit right factor");
  sassoc->add_option("--trials", cfg.trials, "random trial count");
  sassoc->add_option("--samples", cfg.samples, "sample count (cache mode)");
  sassoc->add_option("--seed", cfg.seed, "master seed");
  sassoc->add_option("--cache", cfg.cache_path, "weight cache path");
  sassoc->add_option("--cap", cfg.cap, "vertex arity cap");
  sassoc->callback([&] { rc = run_star_assoc(cfg); });

  auto* linfty = app.add_subcommand("linfty", "bracket tower from connection data");
  linfty->require_subcommand(1);
  linfty->fallthrough();
  auto* lbuild = linfty->add_subcommand("build", "build and dump the tower");
  lbuild->fallthrough();
  lbuild->add_option("--connection", cfg.connection_path, "connection JSON file (default: curved d=2)");
  lbuild->add_option("--arity", cfg.arity, "truncation arity");
  lbuild->callback([&] { rc = run_linfty_build(cfg); });
  auto* lcheck = linfty->add_subcommand("check", "identity, pairing and shuffle reports");
  lcheck->fallthrough();
  lcheck->add_option("--connection", cfg.connection_path, "connection JSON file (default: curved d=2)");
  lcheck->add_option("--arity", cfg.arity, "identity/pairing arity bound");
  lcheck->add_option("--shuffle", cfg.shuffle, "shuffle total arity bound");
  lcheck->callback([&] { rc = run_linfty_check(cfg); });

  auto* audit = app.add_subcommand("audit", "stratum ledgers");
  audit->require_subcommand(1);
  audit->fallthrough();
  auto* aqme = audit->add_subcommand("qme", "codimension-one stratum ledger");
  aqme->fallthrough();
  aqme->add_option("--order", cfg.order, "boundary graph order bound")->default_val(2);
  aqme->add_option("--graph", cfg.graph_path, "single graph class JSON file");
  aqme->add_option("--cap", cfg.cap, "vertex arity cap");
  aqme->callback([&] { rc = run_audit(cfg); });

  auto* fixtures = app.add_subcommand("fixtures", "fixture maintenance");
  fixtures->require_subcommand(1);
  fixtures->fallthrough();
  auto* regen = fixtures->add_subcommand("regen", "recompute a fixture suite and diff");
  regen->fallthrough();
  regen->add_option("--suite", cfg.suite, "enumeration | moyal | linfty | weights")->required();
  regen->add_option("--dir", cfg.fixtures_dir, "fixture directory");
  regen->add_flag("--write", cfg.write, "apply changes to the fixture file");
  regen->callback([&] { rc = run_fixtures(cfg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace dq
