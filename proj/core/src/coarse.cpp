#include "hcomp/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hcomp/error.hpp"
#include "hcomp/parallel.hpp"

namespace hcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

// Relative slack for comparisons of sums of metric values.
bool at_most(double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::fabs(b)); }

std::vector<double> distance_matrix(std::size_t n, const Metric& metric) {
  std::vector<double> d(n * n, 0.0);
  parallel_blocks(n, 64, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) d[i * n + j] = metric(std::min(i, j), std::max(i, j));
  });
  return d;
}

struct SpanningTree {
  // parent[i] for i != root, with the connecting edge weight.
  std::vector<std::size_t> parent;
  std::vector<double> weight;
  std::vector<std::vector<std::size_t>> children;
};

// Prim on the complete graph.
SpanningTree minimum_spanning_tree(std::size_t n, const std::vector<double>& d) {
  SpanningTree t;
  t.parent.assign(n, n);
  t.weight.assign(n, 0.0);
  t.children.assign(n, {});
  if (n == 0) return t;
  std::vector<double> best(n, kInf);
  std::vector<std::size_t> from(n, n);
  std::vector<bool> in(n, false);
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v] && (u == n || best[v] < best[u])) u = v;
    in[u] = true;
    if (from[u] != n) {
      t.parent[u] = from[u];
      t.weight[u] = best[u];
      t.children[from[u]].push_back(u);
    }
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v] && d[u * n + v] < best[v]) {
        best[v] = d[u * n + v];
        from[v] = u;
      }
  }
  return t;
}

// Largest edge on the tree path between a and b.
double tree_bottleneck(const SpanningTree& t, std::size_t a, std::size_t b) {
  const std::size_t n = t.parent.size();
  std::vector<double> up(n, -1.0);
  std::vector<std::size_t> stack{a};
  up[a] = 0.0;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    if (u == b) return up[u];
    auto visit = [&](std::size_t v, double w) {
      if (up[v] < 0.0) {
        up[v] = std::max(up[u], w);
        stack.push_back(v);
      }
    };
    if (t.parent[u] != n) visit(t.parent[u], t.weight[u]);
    for (std::size_t c : t.children[u]) visit(c, t.weight[c]);
  }
  return kInf;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

struct ShortestPaths {
  std::vector<double> dist;
  std::vector<std::size_t> pred;
};

// Dense Dijkstra restricted to edges of weight <= delta.
ShortestPaths delta_dijkstra(std::size_t n, const std::vector<double>& d, double delta, std::size_t source) {
  ShortestPaths sp{std::vector<double>(n, kInf), std::vector<std::size_t>(n, n)};
  std::vector<bool> done(n, false);
  sp.dist[source] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!done[v] && sp.dist[v] < kInf && (u == n || sp.dist[v] < sp.dist[u])) u = v;
    if (u == n) break;
    done[u] = true;
    for (std::size_t v = 0; v < n; ++v) {
      double w = d[u * n + v];
      if (done[v] || v == u || w > delta) continue;
      if (sp.dist[u] + w < sp.dist[v]) {
        sp.dist[v] = sp.dist[u] + w;
        sp.pred[v] = u;
      }
    }
  }
  return sp;
}

std::vector<std::size_t> chain_to(const ShortestPaths& sp, std::size_t source, std::size_t target) {
  if (!std::isfinite(sp.dist[target])) return {};
  std::vector<std::size_t> chain;
  for (std::size_t v = target; v != source; v = sp.pred[v]) chain.push_back(v);
  chain.push_back(source);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

nlohmann::json pair_json(const QGPair& p) {
  return {{"from", p.from},
          {"to", p.to},
          {"distance", p.distance},
          {"path_length", finite_or_null(p.path_length)},
          {"bottleneck", p.bottleneck},
          {"chain", p.chain},
          {"ok", p.ok}};
}

double pair_ratio(const QGPair& p, double lambda) {
  if (!std::isfinite(p.path_length)) return kInf;
  if (p.distance <= 0.0) return 0.0;
  return p.path_length / (lambda * p.distance);
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

}  // namespace

// ---------------------------------------------------------------------------

MapSample::MapSample(PointCloud src, PointCloud tgt, std::vector<std::size_t> img)
    : source(std::move(src)), target(std::move(tgt)), image(std::move(img)) {
  if (image.size() != source.size())
    throw InputError("map sample needs one image per source point: " + std::to_string(source.size()) +
                     " points, " + std::to_string(image.size()) + " images");
  for (std::size_t i : image)
    if (i >= target.size()) throw InputError("image index " + std::to_string(i) + " outside the target cloud");
}

MapSample MapSample::parallel(PointCloud source, PointCloud target) {
  if (source.size() != target.size())
    throw InputError("parallel clouds differ in size: " + std::to_string(source.size()) + " vs " +
                     std::to_string(target.size()));
  std::vector<std::size_t> image(source.size());
  std::iota(image.begin(), image.end(), std::size_t{0});
  return MapSample(std::move(source), std::move(target), std::move(image));
}

double MapSample::coverage() const {
  double c = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) c = std::max(c, dx(i, j));
  return c;
}

PairProfile MapSample::pairs() const {
  return pair_profile(
      size(), [this](std::size_t i, std::size_t j) { return dx(i, j); },
      [this](std::size_t i, std::size_t j) { return dy(i, j); });
}

PointCloud MapSample::image_cloud() const {
  const std::size_t n = size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = i == j ? 0.0 : dy(i, j);
  return PointCloud::from_distances(target.id() + ":image", n, std::move(m));
}

// ---------------------------------------------------------------------------

CheckReport check_uniform_embedding(const MapSample& sample, double r_max) {
  check_positive(r_max, "r_max");
  CheckReport report;
  report.check = "uniform-embedding";
  const PairProfile pairs = sample.pairs();
  const double coverage = pairs.max_source();
  auto& d = report.details;
  d["r_max"] = r_max;
  d["coverage"] = coverage;
  d["points"] = sample.size();
  d["strategy"] = "exact";
  const std::vector<double> probes{r_max / 4.0, r_max / 2.0, r_max};
  nlohmann::json table = nlohmann::json::array();
  std::vector<double> lower;
  for (double r : probes) {
    double lo = pairs.rho(r);
    double hi = pairs.rho_plus(r);
    lower.push_back(lo);
    table.push_back({{"r", r}, {"rho_minus", finite_or_null(lo)}, {"rho_plus", hi}});
  }
  d["probes"] = table;
  if (coverage < r_max) {
    report.verdict = Verdict::Inconclusive;
    std::ostringstream msg;
    msg << "sample reaches source distance " << coverage << " only; r_max = " << r_max;
    report.notes.push_back(msg.str());
    return report;
  }
  if (!(lower[2] > lower[0])) {
    report.verdict = Verdict::Fail;
    report.notes.push_back("rho_minus does not grow between r_max/4 and r_max");
  } else if (lower[0] < lower[1] && lower[1] < lower[2]) {
    report.verdict = Verdict::Pass;
  } else {
    report.verdict = Verdict::Inconclusive;
    report.notes.push_back("rho_minus grows overall but stalls between probes");
  }
  report.notes.push_back("properness surrogate on the tested range only");
  return report;
}

// ---------------------------------------------------------------------------

CheckReport QGWitness::report() const {
  CheckReport r;
  r.check = "quasi-geodesic";
  r.verdict = passed() ? Verdict::Pass : Verdict::Fail;
  auto& d = r.details;
  d["lambda"] = lambda;
  d["delta"] = delta;
  d["tested"] = tested;
  d["failures"] = failures;
  d["component_count"] = components.size();
  d["components"] = components;
  d["gaps"] = gaps;
  d["strategy"] = "exact";
  if (worst) d["worst"] = pair_json(*worst);
  nlohmann::json f = nlohmann::json::array();
  for (const auto& p : failing) f.push_back(pair_json(p));
  d["failing"] = f;
  if (!connected()) r.notes.push_back("delta-graph has " + std::to_string(components.size()) + " components");
  return r;
}

QGWitness check_quasi_geodesic(std::size_t n, const Metric& metric, const QGParams& params) {
  if (!(params.lambda >= 1.0) || !std::isfinite(params.lambda)) throw DomainError("lambda must be >= 1");
  check_positive(params.delta, "delta");
  for (const auto& [a, b] : params.pairs)
    if (a >= n || b >= n) throw InputError("tested pair index outside the point set");

  QGWitness w;
  w.lambda = params.lambda;
  w.delta = params.delta;
  const std::vector<double> d = distance_matrix(n, metric);
  const SpanningTree tree = minimum_spanning_tree(n, d);

  std::vector<std::size_t> uf(n);
  std::iota(uf.begin(), uf.end(), std::size_t{0});
  for (std::size_t v = 0; v < n; ++v) {
    if (tree.parent[v] == n) continue;
    if (tree.weight[v] <= params.delta)
      uf[find_root(uf, v)] = find_root(uf, tree.parent[v]);
    else
      w.gaps.push_back(tree.weight[v]);
  }
  std::sort(w.gaps.begin(), w.gaps.end(), std::greater<>());
  std::vector<std::size_t> sizes(n, 0);
  for (std::size_t v = 0; v < n; ++v) ++sizes[find_root(uf, v)];
  for (std::size_t s : sizes)
    if (s > 0) w.components.push_back(s);
  std::sort(w.components.begin(), w.components.end(), std::greater<>());

  // Targets per source, in a fixed order.
  std::vector<std::vector<std::size_t>> targets(n);
  if (params.pairs.empty()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) targets[i].push_back(j);
  } else {
    for (const auto& [a, b] : params.pairs) targets[a].push_back(b);
  }

  struct BlockResult {
    std::size_t tested = 0;
    std::size_t failures = 0;
    std::vector<QGPair> failing;
    std::optional<QGPair> worst;
  };
  const std::size_t block = 8;
  std::vector<BlockResult> blocks(block_count(n, block));
  parallel_blocks(n, block, [&](std::size_t b, std::size_t begin, std::size_t end) {
    BlockResult& out = blocks[b];
    for (std::size_t s = begin; s < end; ++s) {
      if (targets[s].empty()) continue;
      const ShortestPaths sp = delta_dijkstra(n, d, params.delta, s);
      for (std::size_t t : targets[s]) {
        QGPair p;
        p.from = s;
        p.to = t;
        p.distance = d[s * n + t];
        p.path_length = sp.dist[t];
        p.ok = std::isfinite(p.path_length) && at_most(p.path_length, params.lambda * p.distance);
        ++out.tested;
        bool keep_failing = !p.ok && out.failing.size() < params.max_reported;
        bool keep_worst = !out.worst || pair_ratio(p, params.lambda) > pair_ratio(*out.worst, params.lambda);
        if (!p.ok) ++out.failures;
        if (keep_failing || keep_worst) {
          p.chain = chain_to(sp, s, t);
          p.bottleneck = tree_bottleneck(tree, s, t);
          if (keep_failing) out.failing.push_back(p);
          if (keep_worst) out.worst = std::move(p);
        }
      }
    }
  });
  for (auto& b : blocks) {
    w.tested += b.tested;
    w.failures += b.failures;
    for (auto& p : b.failing)
      if (w.failing.size() < params.max_reported) w.failing.push_back(std::move(p));
    if (b.worst && (!w.worst || pair_ratio(*b.worst, params.lambda) > pair_ratio(*w.worst, params.lambda)))
      w.worst = std::move(b.worst);
  }
  return w;
}

QGWitness check_quasi_geodesic(const PointCloud& cloud, const QGParams& params) {
  return check_quasi_geodesic(
      cloud.size(), [&cloud](std::size_t i, std::size_t j) { return cloud.distance(i, j); }, params);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> Subchain::with_terminal() const {
  std::vector<std::size_t> out = indices;
  if (out.empty() || out.back() != terminal) out.push_back(terminal);
  return out;
}

Subchain extract_subchain(std::size_t length, const Metric& metric, double delta) {
  if (length == 0) throw DomainError("empty chain");
  check_positive(delta, "delta");
  for (std::size_t i = 1; i < length; ++i) {
    double step = metric(i - 1, i);
    if (step > delta) {
      std::ostringstream msg;
      msg << "chain step " << i - 1 << " -> " << i << " has length " << step << " > delta = " << delta;
      throw DomainError(msg.str());
    }
  }
  Subchain out;
  out.indices.push_back(0);
  out.terminal = length - 1;
  std::size_t current = 0;
  for (std::size_t k = 1; k < length; ++k) {
    double gap = metric(current, k);
    if (gap >= delta / 2.0) {
      out.indices.push_back(k);
      out.gaps.push_back(gap);
      current = k;
    }
  }
  out.terminal_gap = current == out.terminal ? 0.0 : metric(current, out.terminal);
  return out;
}

Subchain extract_subchain(const std::vector<double>& chain, double delta) {
  return extract_subchain(
      chain.size(), [&chain](std::size_t i, std::size_t j) { return std::fabs(chain[i] - chain[j]); }, delta);
}

// ---------------------------------------------------------------------------

LipschitzFit lslip_from_rho_plus(const std::function<double(double)>& rho_plus, double lambda, double delta) {
  if (!(lambda >= 1.0)) throw DomainError("lambda must be >= 1");
  check_positive(delta, "delta");
  const double wide = rho_plus(1.5 * delta);
  const double narrow = rho_plus(0.5 * delta);
  if (!std::isfinite(wide) || !std::isfinite(narrow) || wide < 0.0 || narrow < 0.0)
    throw EstimationError("rho_plus is undefined at delta/2 or 3 delta/2");
  LipschitzFit fit;
  fit.C = 2.0 * lambda * wide / delta;
  fit.D = narrow;
  return fit;
}

LipschitzFit lslip_from_rho_plus(const PairProfile& pairs, double lambda, double delta) {
  LipschitzFit fit = lslip_from_rho_plus([&pairs](double r) { return pairs.rho_plus(r); }, lambda, delta);
  fit.pairs = pairs.size();
  fit.max_violation = 0.0;
  for (const auto& [dx, dy] : pairs.pairs()) fit.max_violation = std::max(fit.max_violation, dy - (fit.C * dx + fit.D));
  return fit;
}

nlohmann::json QIConstants::to_json() const {
  return {{"C", C}, {"D", D}, {"K", K}, {"delta_prime", delta_prime}, {"lambda_prime", lambda_prime}};
}

QIConstants coarse_to_qi_constants(double C, double D, double lambda, double delta) {
  check_positive(C, "C");
  if (!(D >= 0.0) || !std::isfinite(D)) throw DomainError("D must be non-negative and finite");
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 1");
  check_positive(delta, "delta");
  QIConstants q;
  q.C = C;
  q.D = D;
  q.delta_prime = 3.0 * delta * C / 2.0 + D;
  q.lambda_prime = 2.0 * C * (D + q.delta_prime) * lambda / delta + 1.0;
  return q;
}

QIConstants qi_from_coarse_equivalence(const CoarseEquivalence& e, double lambda, double delta) {
  check_positive(e.f.C, "C_f");
  check_positive(e.g.C, "C_g");
  if (!(e.K >= 0.0)) throw DomainError("K must be non-negative");
  const double C = std::max(e.f.C, e.g.C);
  const double D = std::max(e.f.D, (2.0 * e.K + e.g.D) / e.g.C);
  QIConstants q = coarse_to_qi_constants(C, D, lambda, delta);
  q.K = e.K;
  return q;
}

// ---------------------------------------------------------------------------

namespace {

struct QIFit {
  double C_upper = 0.0;
  double C_lower = 0.0;
  std::optional<double> C;
  double D = kInf;
  double coverage = 0.0;
};

// Minimal D for a given C over all pairs.
double minimal_d(const std::vector<std::pair<double, double>>& pairs, double C) {
  double D = 0.0;
  for (const auto& [dx, dy] : pairs) D = std::max({D, dx / C - dy, dy - C * dx});
  return D;
}

QIFit fit_qi(const MapSample& sample, double d_allow) {
  const PairProfile profile = sample.pairs();
  if (profile.empty() || !(profile.max_source() > 0.0))
    throw EstimationError("quasi-isometry fit needs two distinct source points");
  QIFit f;
  f.coverage = profile.max_source();
  for (const auto& [dx, dy] : profile.pairs()) {
    if (dx <= 0.0) continue;
    f.C_upper = std::max(f.C_upper, (dy - d_allow) / dx);
    f.C_lower = std::max(f.C_lower, dy + d_allow > 0.0 ? dx / (dy + d_allow) : kInf);
  }
  for (int i = 0; i <= 80; ++i) {
    double C = std::exp2(i / 8.0);
    double D = minimal_d(profile.pairs(), C);
    if (at_most(D, d_allow)) {
      f.C = C;
      f.D = D;
      break;
    }
  }
  return f;
}

double density(const MapSample& sample) {
  double worst = 0.0;
  for (std::size_t y = 0; y < sample.target.size(); ++y) {
    double best = kInf;
    for (std::size_t i : sample.image) best = std::min(best, sample.target.distance(y, i));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

CheckReport check_quasi_isometry(const MapSample& sample, const QIParams& params) {
  if (!(params.d_allow >= 0.0)) throw DomainError("D budget must be non-negative");
  CheckReport report;
  report.check = "quasi-isometry";
  auto& d = report.details;
  d["points"] = sample.size();
  d["strategy"] = "exact";
  Verdict fit_verdict;
  if (params.C && params.D) {
    check_positive(*params.C, "C");
    const PairProfile profile = sample.pairs();
    if (profile.empty()) throw EstimationError("quasi-isometry check needs at least two points");
    double worst = 0.0;
    for (const auto& [dx, dy] : profile.pairs())
      worst = std::max({worst, dx / *params.C - *params.D - dy, dy - (*params.C * dx + *params.D)});
    d["mode"] = "verify";
    d["C"] = *params.C;
    d["D"] = *params.D;
    d["max_violation"] = worst;
    d["coverage"] = profile.max_source();
    fit_verdict = at_most(worst, 0.0) ? Verdict::Pass : Verdict::Fail;
  } else {
    QIFit f = fit_qi(sample, params.d_allow);
    d["mode"] = "fit";
    d["d_allow"] = params.d_allow;
    d["coverage"] = f.coverage;
    d["C_upper"] = f.C_upper;
    d["C_lower"] = finite_or_null(f.C_lower);
    d["C"] = f.C ? nlohmann::json(*f.C) : nlohmann::json(nullptr);
    d["D"] = f.C ? nlohmann::json(f.D) : nlohmann::json(nullptr);
    fit_verdict = f.C ? Verdict::Pass : Verdict::Fail;
    if (!f.C) report.notes.push_back("no C <= 1024 fits with D within the budget on the tested range");
  }
  Verdict dense = Verdict::Pass;
  if (params.K) {
    double rho = density(sample);
    d["K"] = *params.K;
    d["density"] = rho;
    dense = at_most(rho, *params.K) ? Verdict::Pass : Verdict::Fail;
  }
  report.verdict = combine({fit_verdict, dense});
  return report;
}

CheckReport check_quasi_isometry_over_range(const std::vector<MapSample>& samples, const QIParams& params) {
  if (samples.size() < 2) throw EstimationError("range classification needs at least two samples");
  CheckReport report;
  report.check = "quasi-isometry-range";
  std::vector<double> sizes, upper, lower;
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& s : samples) {
    QIFit f = fit_qi(s, params.d_allow);
    sizes.push_back(f.coverage);
    upper.push_back(f.C_upper);
    lower.push_back(f.C_lower);
    fits.push_back({{"coverage", f.coverage},
                    {"points", s.size()},
                    {"C_upper", f.C_upper},
                    {"C_lower", finite_or_null(f.C_lower)},
                    {"C", f.C ? nlohmann::json(*f.C) : nlohmann::json(nullptr)}});
  }
  auto& d = report.details;
  d["d_allow"] = params.d_allow;
  d["fits"] = fits;
  d["strategy"] = "exact";
  Growth gu = Growth::Grows, gl = Growth::Grows;
  bool finite = std::all_of(lower.begin(), lower.end(), [](double v) { return std::isfinite(v); }) &&
                std::all_of(upper.begin(), upper.end(), [](double v) { return std::isfinite(v); });
  if (finite) {
    GrowthFit fu = classify_growth(sizes, upper);
    GrowthFit fl = classify_growth(sizes, lower);
    gu = fu.growth;
    gl = fl.growth;
    d["C_upper_slope"] = fu.log_slope;
    d["C_lower_slope"] = fl.log_slope;
  } else {
    report.notes.push_back("a sample collapses distinct points; no finite lower constant");
  }
  d["C_upper_growth"] = to_string(gu);
  d["C_lower_growth"] = to_string(gl);
  if (gu == Growth::Grows || gl == Growth::Grows)
    report.verdict = Verdict::Fail;
  else if (gu == Growth::Bounded && gl == Growth::Bounded)
    report.verdict = Verdict::Pass;
  else
    report.verdict = Verdict::Inconclusive;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

Verdict bounded_verdict(const GrowthFit& g) {
  switch (g.growth) {
    case Growth::Bounded:
      return Verdict::Pass;
    case Growth::Grows:
      return Verdict::Fail;
    case Growth::Inconclusive:
      return Verdict::Inconclusive;
  }
  return Verdict::Inconclusive;
}

nlohmann::json growth_json(const GrowthFit& g) {
  return {{"sizes", g.sizes}, {"values", g.values}, {"log_slope", g.log_slope}, {"growth", to_string(g.growth)}};
}

}  // namespace

Verdict MapFamilyReport::is_lipschitz() const { return bounded_verdict(lipschitz); }
Verdict MapFamilyReport::is_large_scale_lipschitz() const { return bounded_verdict(large_scale); }

nlohmann::json MapFamilyReport::to_json() const {
  return {{"uniform_embedding", uniform_embedding.to_json()},
          {"lipschitz", {{"verdict", to_string(is_lipschitz())}, {"fit", growth_json(lipschitz)}}},
          {"large_scale_lipschitz",
           {{"verdict", to_string(is_large_scale_lipschitz())}, {"fit", growth_json(large_scale)}}}};
}

MapFamilyReport classify_map_family(const std::vector<MapSample>& samples) {
  if (samples.size() < 2) throw EstimationError("map classification needs at least two samples");
  std::vector<double> sizes, pointwise, large;
  const MapSample* largest = nullptr;
  double widest = -1.0;
  for (const auto& s : samples) {
    const PairProfile pairs = s.pairs();
    const double coverage = pairs.max_source();
    sizes.push_back(coverage);
    pointwise.push_back(lipschitz_fit(pairs, 0.0).C);
    large.push_back(lipschitz_fit(pairs, 1.0).C);
    if (coverage > widest) {
      widest = coverage;
      largest = &s;
    }
  }
  MapFamilyReport r;
  r.uniform_embedding = check_uniform_embedding(*largest, widest);
  r.lipschitz = classify_growth(sizes, pointwise);
  r.large_scale = classify_growth(sizes, large);
  return r;
}

}  // namespace hcomp
