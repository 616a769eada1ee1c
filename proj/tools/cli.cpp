#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "hcomp/coarse.hpp"
#include "hcomp/compression.hpp"
#include "hcomp/equivariant.hpp"
#include "hcomp/error.hpp"
#include "hcomp/kernels.hpp"
#include "hcomp/parallel.hpp"
#include "hcomp/parse.hpp"

#ifndef HCOMP_VERSION
#define HCOMP_VERSION "0.0.0"
#endif

namespace hcomp::cli {

namespace {

using json = nlohmann::json;

struct Outcome {
  json results = json::object();
  std::optional<Verdict> verdict;
};

std::uint64_t max_pairs_from_env() {
  if (const char* v = std::getenv("HCOMP_MAX_PAIRS")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (end && *end == '\0' && n > 0) return n;
    throw ConfigError("HCOMP_MAX_PAIRS must be a positive integer");
  }
  return ProfileParams{}.max_pairs;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  return f;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw InputError("bad " + what + ": " + text);
  }
}

std::vector<int> parse_int_list(const std::string& text, char sep, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    double v = parse_number(item, what);
    if (v != std::floor(v)) throw InputError(what + " must be integers: " + text);
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw InputError("empty " + what);
  return out;
}

// "psd,schur:kappa=0.25,eps=0.25,width:w=2|4" -> {psd: {}, schur: {kappa, eps}, width: {w}}.
std::vector<std::pair<std::string, std::map<std::string, std::string>>> parse_checks(const std::string& text) {
  std::vector<std::pair<std::string, std::map<std::string, std::string>>> checks;
  for (const std::string& token : split_top_level(text, ',')) {
    auto colon = token.find(':');
    auto eq = token.find('=');
    std::string kv;
    if (eq != std::string::npos && (colon == std::string::npos || colon > eq)) {
      if (checks.empty()) throw InputError("option without a check: " + token);
      kv = token;
    } else {
      std::string name = token.substr(0, colon);
      if (name != "psd" && name != "schur" && name != "width")
        throw InputError("unknown check '" + name + "' (expected psd, schur, width)");
      checks.emplace_back(name, std::map<std::string, std::string>{});
      if (colon == std::string::npos) continue;
      kv = token.substr(colon + 1);
    }
    auto e = kv.find('=');
    if (e == std::string::npos) throw InputError("expected key=value in check options: " + kv);
    checks.back().second[kv.substr(0, e)] = kv.substr(e + 1);
  }
  return checks;
}

std::string substitute(std::string pattern, int n) {
  const std::string key = "{n}";
  for (auto at = pattern.find(key); at != std::string::npos; at = pattern.find(key))
    pattern.replace(at, key.size(), std::to_string(n));
  return pattern;
}

Verdict all_of(const std::vector<Verdict>& vs) {
  Verdict v = Verdict::Pass;
  for (Verdict x : vs) v = combine({v, x});
  return v;
}

Verdict from_bool(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

// ---------------------------------------------------------------------------

struct BallOpts {
  std::string group;
  int radius = 4;
  std::string out;
  std::string growth;
};

Outcome run_ball(const BallOpts& o) {
  Space space(parse_group(o.group));
  Ball ball = space.ball(o.radius);
  if (!o.out.empty()) {
    auto f = open_output(o.out);
    write_ball_csv(f, ball);
  }
  if (!o.growth.empty()) {
    auto f = open_output(o.growth);
    write_growth_csv(f, ball);
  }
  Outcome r;
  r.results = {{"space", space.name()},
               {"radius", o.radius},
               {"points", ball.points.size()},
               {"sphere_sizes", ball.sphere_sizes},
               {"strategy", "exact"}};
  return r;
}

struct ProfileOpts {
  std::string group;
  std::string embedding;
  int radius = 16;
  int ball_radius = -1;
  std::string strategy = "auto";
  std::string out;
  std::string window;
  std::string from;
};

CompressionProfile build_profile(const ProfileOpts& o) {
  Space space(parse_group(o.group));
  EmbeddingSpec spec = parse_embedding(o.embedding);
  ProfileParams p;
  p.r_max = o.radius;
  p.ball_radius = o.ball_radius;
  p.strategy = Strategy::parse(o.strategy);
  p.max_pairs = max_pairs_from_env();
  return compression_profile(space, spec, p);
}

Window parse_window(const std::string& text, const CompressionProfile& p) {
  if (text.empty()) return Window{std::max(2, p.r_max() / 2), p.r_max()};
  auto v = parse_int_list(text, ',', "window");
  if (v.size() != 2) throw InputError("window is lo,hi");
  return Window{v[0], v[1]};
}

json estimate_or_error(const CompressionProfile& p, const Window& w) {
  try {
    return asymptotic_compression(p, w).to_json();
  } catch (const EstimationError& e) {
    return {{"error", e.what()}};
  }
}

Outcome run_profile(const ProfileOpts& o) {
  CompressionProfile p = build_profile(o);
  if (!o.out.empty()) {
    auto f = open_output(o.out);
    write_profile_csv(f, p);
  }
  Outcome r;
  r.results = {{"profile", p.to_json()}, {"estimate", estimate_or_error(p, parse_window(o.window, p))}};
  return r;
}

Outcome run_estimate(const ProfileOpts& o) {
  CompressionProfile p;
  if (!o.from.empty()) {
    std::ifstream f(o.from);
    if (!f) throw InputError("cannot read " + o.from);
    p = read_profile_csv(f);
    p.embedding = o.from;
  } else {
    if (o.group.empty() || o.embedding.empty()) throw InputError("estimate needs --from or --group and --embedding");
    p = build_profile(o);
  }
  Outcome r;
  r.results = asymptotic_compression(p, parse_window(o.window, p)).to_json();
  r.results["r_max"] = p.r_max();
  return r;
}

struct KernelOpts {
  std::string group;
  std::string embedding;
  int radius = 5;
  double k = 4.0;
  std::string checks = "psd";
  std::string out;
  std::uint64_t seed = 0;
};

Outcome run_kernel(const KernelOpts& o) {
  Space space(parse_group(o.group));
  EmbeddingSpec spec = parse_embedding(o.embedding);
  auto checks = parse_checks(o.checks);
  Ball ball = space.ball(o.radius);
  KernelMatrix kernel = schoenberg_kernel(space, spec, o.k, ball);
  if (!o.out.empty()) {
    auto f = open_output(o.out);
    write_kernel_csv(f, kernel);
  }
  Outcome r;
  r.results["points"] = kernel.size();
  r.results["ball_radius"] = o.radius;
  r.results["k"] = o.k;
  std::vector<Verdict> verdicts;
  for (const auto& [name, opts] : checks) {
    auto get = [&](const std::string& key, double fallback) {
      auto it = opts.find(key);
      return it == opts.end() ? fallback : parse_number(it->second, name + " option " + key);
    };
    for (const auto& [key, value] : opts) {
      static const std::map<std::string, std::vector<std::string>> known{
          {"psd", {"tol"}}, {"schur", {"kappa", "eps", "r0", "n", "hyp"}}, {"width", {"w", "tol"}}};
      const auto& allowed = known.at(name);
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw InputError("unknown option '" + key + "' for check " + name);
    }
    if (name == "psd") {
      PsdResult p = psd_check(kernel, get("tol", 1e-8));
      bool diag = kernel.normalized();
      Verdict v = from_bool(p.pass && diag);
      r.results["psd"] = {{"min_eigenvalue", p.min_eigenvalue},
                          {"tol", p.tol},
                          {"diagonal_one", diag},
                          {"verdict", to_string(v)},
                          {"strategy", "exact"}};
      verdicts.push_back(v);
    } else if (name == "schur") {
      SchurParams sp;
      sp.kappa = get("kappa", 0.25);
      double default_eps = spec.is<TreeEmbedding>() ? spec.as<TreeEmbedding>().eps : 0.0;
      sp.eps = get("eps", default_eps);
      sp.truncation = static_cast<int>(get("n", -1));
      sp.seed = o.seed;
      bool closed = resolve_strategy(space, spec, Strategy::automatic()).kind == StrategyKind::TreeClosedForm;
      int hyp = static_cast<int>(get("hyp", closed ? std::max(2 * o.radius, 96) : 2 * o.radius));
      ProfileParams pp;
      pp.r_max = hyp;
      pp.max_pairs = max_pairs_from_env();
      CompressionProfile hypothesis = compression_profile(space, spec, pp);
      json entry;
      try {
        sp.r0 = opts.count("r0") ? static_cast<int>(get("r0", 1)) : hypothesis_r0(hypothesis, sp.eps);
        SchurReport rep = schur_analysis(kernel, space, sp, hypothesis);
        entry = rep.to_json();
        entry["verdict"] = to_string(from_bool(rep.passed()));
        verdicts.push_back(from_bool(rep.passed()));
      } catch (const HypothesisError& e) {
        entry = {{"error", e.what()}, {"violating_r", e.violating_r()}, {"verdict", "fail"}};
        verdicts.push_back(Verdict::Fail);
      }
      entry["hypothesis_profile_strategy"] = hypothesis.strategy.tag();
      r.results["schur"] = entry;
    } else {
      auto it = opts.find("w");
      std::vector<int> widths = parse_int_list(it == opts.end() ? "2" : it->second, '|', "width list");
      json list = json::array();
      std::vector<double> sups;
      Verdict v = Verdict::Pass;
      for (int w : widths) {
        WidthParams wp;
        wp.w = w;
        wp.tol = get("tol", 1e-8);
        WidthApproxReport rep = finite_width_approx(kernel, wp);
        list.push_back(rep.to_json());
        sups.push_back(rep.sup_error);
        v = combine({v, from_bool(rep.passed())});
      }
      bool monotone = true;
      for (std::size_t i = 1; i < sups.size(); ++i) monotone = monotone && sups[i] < sups[i - 1];
      if (sups.size() > 1) v = combine({v, from_bool(monotone)});
      r.results["width"] = {{"approximations", list}, {"monotone", monotone}, {"verdict", to_string(v)}};
      verdicts.push_back(v);
    }
  }
  r.verdict = all_of(verdicts);
  return r;
}

struct QGOpts {
  std::string points;
  double lambda = 1.0;
  double delta = 1.0;
};

Outcome run_qgcheck(const QGOpts& o) {
  PointCloud cloud = resolve_cloud(o.points);
  QGWitness w = check_quasi_geodesic(cloud, QGParams{o.lambda, o.delta, {}, 16});
  CheckReport rep = w.report();
  Outcome r;
  r.results = rep.to_json();
  r.results["points"] = cloud.size();
  r.verdict = rep.verdict;
  return r;
}

struct MapOpts {
  std::string source;
  std::string target;
  std::string range;
  double r_max = 0.0;
  double d_allow = 0.0;
  std::optional<double> C;
  std::optional<double> D;
  std::optional<double> K;
};

std::vector<MapSample> samples_for(const MapOpts& o) {
  std::vector<MapSample> out;
  if (o.range.empty()) {
    out.push_back(MapSample::parallel(resolve_cloud(o.source), resolve_cloud(o.target)));
    return out;
  }
  for (int n : parse_int_list(o.range, ',', "range"))
    out.push_back(MapSample::parallel(resolve_cloud(substitute(o.source, n)), resolve_cloud(substitute(o.target, n))));
  return out;
}

Outcome run_qicheck(const MapOpts& o) {
  if (o.C.has_value() != o.D.has_value()) throw InputError("--C and --D go together");
  QIParams p;
  p.d_allow = o.d_allow;
  p.C = o.C;
  p.D = o.D;
  p.K = o.K;
  auto samples = samples_for(o);
  CheckReport rep = samples.size() > 1 ? check_quasi_isometry_over_range(samples, p) : check_quasi_isometry(samples[0], p);
  Outcome r;
  r.results = rep.to_json();
  r.verdict = rep.verdict;
  return r;
}

Outcome run_uecheck(const MapOpts& o) {
  auto samples = samples_for(o);
  Outcome r;
  if (samples.size() > 1) {
    MapFamilyReport rep = classify_map_family(samples);
    r.results = rep.to_json();
    r.verdict = rep.uniform_embedding.verdict;
    return r;
  }
  double r_max = o.r_max > 0.0 ? o.r_max : samples[0].coverage();
  CheckReport rep = check_uniform_embedding(samples[0], r_max);
  r.results = rep.to_json();
  r.verdict = rep.verdict;
  return r;
}

struct CocycleOpts {
  int radius = 8;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  int r_max = 16;
};

Outcome run_cocycle(const CocycleOpts& o) {
  auto pairs = random_ball_pairs(2, o.radius, o.samples, o.seed);
  CocycleCheck c = verify_cocycle(pairs);
  EquivariantParams ep;
  ep.r_max = o.r_max;
  ep.seed = o.seed;
  EquivariantEstimate e = equivariant_compression(ep);
  json est = e.to_json();
  Outcome r;
  r.results = {{"max_residual", c.max_residual},
               {"cocycle", c.to_json()},
               {"rho_profile", est["rho_profile"]},
               {"slope", e.slope.slope},
               {"estimate", est},
               {"residual_tolerance", 1e-12}};
  r.verdict = from_bool(c.max_residual <= 1e-12 && e.consistent() && e.representative_error <= 1e-12);
  return r;
}

struct ProductOpts {
  std::string x;
  std::string y;
  std::string f;
  std::string g;
  int radius = 16;
};

Outcome run_product(const ProductOpts& o) {
  ProductParams p;
  p.r_max = o.radius;
  CheckReport rep = product_check(parse_group(o.x), parse_group(o.y), parse_embedding(o.f), parse_embedding(o.g), p);
  Outcome r;
  r.results = rep.to_json();
  r.verdict = rep.verdict;
  return r;
}

struct ComposeOpts {
  std::string group;
  std::string f;
  std::string g;
  int radius = 16;
};

Outcome run_compose(const ComposeOpts& o) {
  CompositionParams p;
  p.r_max = o.radius;
  Space space(parse_group(o.group));
  CheckReport rep = composition_check(space, parse_embedding(o.f), parse_embedding(o.g), p);
  Outcome r;
  r.results = rep.to_json();
  r.verdict = rep.verdict;
  return r;
}

}  // namespace

PointCloud resolve_cloud(const std::string& id) {
  if (id.rfind("ball:", 0) != 0) return fixtures::resolve(id, SpaceOptions::from_env());
  std::vector<std::string> parts;
  std::stringstream ss(id.substr(5));
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 2 && parts.size() != 3) throw InputError("ball cloud id is ball:G:R or ball:G:R:H, got " + id);
  Space source(parse_group(parts[0]));
  double radius = parse_number(parts[1], "ball radius");
  Ball ball = source.ball(static_cast<int>(radius));
  Space metric = parts.size() == 3 ? Space(parse_group(parts[2])) : source;
  const auto& pts = ball.points;
  for (const auto& p : pts)
    if (!metric.contains(p)) throw ConfigError("point " + p.str() + " is not in " + metric.name());
  const std::size_t n = pts.size();
  std::vector<double> m(n * n, 0.0);
  parallel_blocks(n, 32, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) m[i * n + j] = metric.distance(pts[i], pts[j]);
  });
  return PointCloud::from_distances(id, n, std::move(m));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compression profiles, kernel checks and coarse-geometry checks for finitely generated groups", "hcomp"};
  app.require_subcommand(1);
  unsigned threads = 0;
  std::string report_path;
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--report", report_path, "Also write the JSON report to this path");

  json config = json::object();
  std::function<Outcome()> action;

  BallOpts ball;
  auto* c_ball = app.add_subcommand("ball", "Enumerate a ball and its sphere sizes");
  c_ball->add_option("--group", ball.group, "Group spec")->required();
  c_ball->add_option("--radius", ball.radius, "Ball radius")->check(CLI::NonNegativeNumber);
  c_ball->add_option("--out", ball.out, "Ball CSV");
  c_ball->add_option("--growth", ball.growth, "Growth CSV");
  c_ball->callback([&] {
    config = {{"group", ball.group}, {"radius", ball.radius}};
    action = [&] { return run_ball(ball); };
  });

  ProfileOpts prof;
  auto* c_prof = app.add_subcommand("profile", "Compression profile and asymptotic estimate");
  c_prof->add_option("--group", prof.group, "Group spec")->required();
  c_prof->add_option("--embedding", prof.embedding, "Embedding spec")->required();
  c_prof->add_option("--radius", prof.radius, "Largest r of the profile")->check(CLI::PositiveNumber);
  c_prof->add_option("--ball-radius", prof.ball_radius, "Enumerated ball radius (default ceil(radius/2))");
  c_prof->add_option("--strategy", prof.strategy, "auto | exact | closed-form | sampled(seed=S,count=N)");
  c_prof->add_option("--window", prof.window, "lo,hi (default r_max/2,r_max)");
  c_prof->add_option("--out", prof.out, "Profile CSV");
  c_prof->callback([&] {
    config = {{"group", prof.group}, {"embedding", prof.embedding}, {"radius", prof.radius},
              {"ball_radius", prof.ball_radius}, {"strategy", prof.strategy}, {"window", prof.window}};
    action = [&] { return run_profile(prof); };
  });

  ProfileOpts est;
  auto* c_est = app.add_subcommand("estimate", "Asymptotic compression from a profile");
  c_est->add_option("--group", est.group, "Group spec");
  c_est->add_option("--embedding", est.embedding, "Embedding spec");
  c_est->add_option("--radius", est.radius, "Largest r of the profile")->check(CLI::PositiveNumber);
  c_est->add_option("--strategy", est.strategy, "Profile strategy");
  c_est->add_option("--window", est.window, "lo,hi (default r_max/2,r_max)");
  c_est->add_option("--from", est.from, "Read a profile CSV instead of computing one");
  c_est->callback([&] {
    config = {{"group", est.group}, {"embedding", est.embedding}, {"radius", est.radius},
              {"strategy", est.strategy}, {"window", est.window}, {"from", est.from}};
    action = [&] { return run_estimate(est); };
  });

  KernelOpts ker;
  auto* c_ker = app.add_subcommand("kernel", "Schoenberg kernel checks on a ball");
  c_ker->add_option("--group", ker.group, "Group spec")->required();
  c_ker->add_option("--embedding", ker.embedding, "Embedding spec")->required();
  c_ker->add_option("--radius", ker.radius, "Ball radius")->check(CLI::NonNegativeNumber);
  c_ker->add_option("--k", ker.k, "Kernel scale: u = exp(-|f(s)-f(t)|^2 / k)")->check(CLI::PositiveNumber);
  c_ker->add_option("--checks", ker.checks, "psd[:tol=T],schur:kappa=K[,eps=E,r0=R,n=N,hyp=H],width:w=W[|W...]");
  c_ker->add_option("--seed", ker.seed, "Seed for sampled base points");
  c_ker->add_option("--out", ker.out, "Kernel CSV");
  c_ker->callback([&] {
    config = {{"group", ker.group}, {"embedding", ker.embedding}, {"radius", ker.radius},
              {"k", ker.k}, {"checks", ker.checks}, {"seed", ker.seed}};
    action = [&] { return run_kernel(ker); };
  });

  QGOpts qg;
  auto* c_qg = app.add_subcommand("qgcheck", "Quasi-geodesic check on a point cloud");
  c_qg->add_option("--points", qg.points, "CSV path or fixture id")->required();
  c_qg->add_option("--lambda", qg.lambda, "lambda >= 1");
  c_qg->add_option("--delta", qg.delta, "delta > 0");
  c_qg->callback([&] {
    config = {{"points", qg.points}, {"lambda", qg.lambda}, {"delta", qg.delta}};
    action = [&] { return run_qgcheck(qg); };
  });

  MapOpts qi;
  auto* c_qi = app.add_subcommand("qicheck", "Quasi-isometry fit or verification");
  c_qi->add_option("--source", qi.source, "Source cloud (CSV, fixture id, ball:G:R[:H]); {n} is replaced per --range")
      ->required();
  c_qi->add_option("--target", qi.target, "Target cloud, parallel to the source")->required();
  c_qi->add_option("--range", qi.range, "Comma-separated sizes substituted for {n}");
  c_qi->add_option("--d-allow", qi.d_allow, "Additive budget for the fitted D");
  c_qi->add_option("--C", qi.C, "Verify this C (with --D)");
  c_qi->add_option("--D", qi.D, "Verify this D (with --C)");
  c_qi->add_option("--K", qi.K, "Require the image to be K-dense in the target");
  c_qi->callback([&] {
    config = {{"source", qi.source}, {"target", qi.target}, {"range", qi.range}, {"d_allow", qi.d_allow}};
    if (qi.C) config["C"] = *qi.C;
    if (qi.D) config["D"] = *qi.D;
    if (qi.K) config["K"] = *qi.K;
    action = [&] { return run_qicheck(qi); };
  });

  MapOpts ue;
  auto* c_ue = app.add_subcommand("uecheck", "Uniform-embedding check, or map classification over a range");
  c_ue->add_option("--source", ue.source, "Source cloud; {n} is replaced per --range")->required();
  c_ue->add_option("--target", ue.target, "Target cloud, parallel to the source")->required();
  c_ue->add_option("--range", ue.range, "Comma-separated sizes substituted for {n}");
  c_ue->add_option("--r-max", ue.r_max, "Tested range (default: the sample's coverage)");
  c_ue->callback([&] {
    config = {{"source", ue.source}, {"target", ue.target}, {"range", ue.range}, {"r_max", ue.r_max}};
    action = [&] { return run_uecheck(ue); };
  });

  CocycleOpts co;
  auto* c_co = app.add_subcommand("cocycle-check", "Tree cocycle identity and equivariant compression on F2");
  c_co->add_option("--radius", co.radius, "Sampling ball radius")->check(CLI::NonNegativeNumber);
  c_co->add_option("--samples", co.samples, "Random pairs");
  c_co->add_option("--seed", co.seed, "Seed");
  c_co->add_option("--r-max", co.r_max, "Largest r of the compression profile")->check(CLI::Range(4, 64));
  c_co->callback([&] {
    config = {{"radius", co.radius}, {"samples", co.samples}, {"seed", co.seed}, {"r_max", co.r_max}};
    action = [&] { return run_cocycle(co); };
  });

  ProductOpts pr;
  auto* c_pr = app.add_subcommand("product-check", "Direct-sum compression on a product");
  c_pr->add_option("--x", pr.x, "First factor group")->required();
  c_pr->add_option("--y", pr.y, "Second factor group")->required();
  c_pr->add_option("--f", pr.f, "Embedding of the first factor")->required();
  c_pr->add_option("--g", pr.g, "Embedding of the second factor")->required();
  c_pr->add_option("--radius", pr.radius, "Largest r")->check(CLI::PositiveNumber);
  c_pr->callback([&] {
    config = {{"x", pr.x}, {"y", pr.y}, {"f", pr.f}, {"g", pr.g}, {"radius", pr.radius}};
    action = [&] { return run_product(pr); };
  });

  ComposeOpts cm;
  auto* c_cm = app.add_subcommand("compose-check", "Compression of a composition f o g");
  c_cm->add_option("--group", cm.group, "Source group of g")->required();
  c_cm->add_option("--f", cm.f, "Outer map")->required();
  c_cm->add_option("--g", cm.g, "Inner map (must produce coordinates)")->required();
  c_cm->add_option("--radius", cm.radius, "Largest r")->check(CLI::PositiveNumber);
  c_cm->callback([&] {
    config = {{"group", cm.group}, {"f", cm.f}, {"g", cm.g}, {"radius", cm.radius}};
    action = [&] { return run_compose(cm); };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  set_thread_count(threads);
  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = action();
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << " (predicted size " << e.predicted_size() << ")\n";
    return kUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  json report = {{"version", HCOMP_VERSION}, {"command", command}, {"config", config}, {"results", outcome.results}};
  if (outcome.verdict) report["verdict"] = to_string(*outcome.verdict);
  report["timing"] = {{"wall_ms", ms}, {"threads", thread_count()}};
  const std::string text = report.dump(2);
  out << text << '\n';
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    if (!f) {
      err << "error: cannot write " << report_path << "\n";
      return kUsage;
    }
    f << text << '\n';
  }
  if (!outcome.verdict) return kPass;
  return *outcome.verdict == Verdict::Pass ? kPass : kFail;
}

}  // namespace hcomp::cli
