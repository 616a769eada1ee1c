// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every tolerance used below is pinned here.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cli.hpp"
#include "hcomp/coarse.hpp"
#include "hcomp/compression.hpp"
#include "hcomp/embeddings.hpp"
#include "hcomp/equivariant.hpp"
#include "hcomp/error.hpp"
#include "hcomp/kernels.hpp"
#include "hcomp/parse.hpp"

using namespace hcomp;

namespace {

namespace tol {
constexpr double c1_seconds = 5.0;
constexpr double c2_seconds = 10.0;
constexpr double slope_f2 = 0.05;
constexpr double slope_synthetic = 1e-6;
constexpr double c4_bound = 0.125;
constexpr double slope_lattice = 0.02;
constexpr double c7_slope = 0.03;
constexpr double psd = 1e-8;
constexpr double c9_seconds = 60.0;
constexpr double width_slack = 1e-10;
constexpr double cocycle = 1e-12;
constexpr double rho_exact = 1e-12;
constexpr double equivariant_slope = 0.02;
}  // namespace tol

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ProfileParams closed_form(int r_max, int ball_radius = -1) {
  ProfileParams p;
  p.r_max = r_max;
  p.ball_radius = ball_radius;
  p.strategy = Strategy::closed_form();
  return p;
}

// A pair with |s| = ks, |t| = kt and common prefix exactly p.
std::pair<ReducedWord, ReducedWord> representative(int ks, int kt, int p) {
  std::string s(static_cast<std::size_t>(p), 'a');
  std::string t = s;
  s.append(static_cast<std::size_t>(ks - p), 'b');
  t.append(static_cast<std::size_t>(kt - p), ks > p ? 'B' : 'b');
  return {reduce_word(s, 2), reduce_word(t, 2)};
}

// ---------------------------------------------------------------------------

Outcome tree_identity() {
  auto t0 = Clock::now();
  Space f(GroupSpec::free_group(2));
  const auto spec = EmbeddingSpec::tree();
  std::uint64_t pairs = 0, mismatches = 0;
  for (const auto& tr : tree_triples(2, 8)) {
    double closed = weighted_tree_closed_form(tr.ks, tr.kt, tr.p, 0.0);
    auto [s, t] = representative(tr.ks, tr.kt, tr.p);
    auto v = embed(spec, f, Point(s)) - embed(spec, f, Point(t));
    double d = f.distance(Point(s), Point(t));
    if (closed != tr.ks + tr.kt - 2.0 * tr.p || v.squared_norm() != d || d != tr.ks + tr.kt - 2.0 * tr.p)
      ++mismatches;
    pairs += tr.ordered_pairs;
  }
  const std::uint64_t ball = f.predicted_ball_size(8);
  double secs = seconds_since(t0);
  bool covered = pairs == ball * ball - ball;
  return {mismatches == 0 && covered && secs < tol::c1_seconds,
          fmt("|B(8)| = %llu, ordered pairs %llu, mismatches %llu, %.3f s", static_cast<unsigned long long>(ball),
              static_cast<unsigned long long>(pairs), static_cast<unsigned long long>(mismatches), secs)};
}

Outcome weighted_lower_bound() {
  auto t0 = Clock::now();
  Space f(GroupSpec::free_group(2));
  int violations = 0;
  double worst_ratio = INFINITY;
  for (double eps : {0.1, 0.25, 0.4}) {
    auto prof = compression_profile(f, EmbeddingSpec::tree(eps), closed_form(24, 12));
    double c = compression_lower_constant(eps);
    for (int r = 1; r <= 24; ++r) {
      double lhs = prof.rho_at(r) * prof.rho_at(r);
      double rhs = c * std::pow(r, 1.0 + 2.0 * eps);
      worst_ratio = std::min(worst_ratio, lhs / rhs);
      if (lhs < rhs) ++violations;
    }
  }
  double secs = seconds_since(t0);
  return {violations == 0 && secs < tol::c2_seconds,
          fmt("violations %d, min rho^2 / bound = %.4f, %.3f s", violations, worst_ratio, secs)};
}

Outcome slope_recovery() {
  Space f(GroupSpec::free_group(2));
  double s0 = asymptotic_compression(compression_profile(f, EmbeddingSpec::tree(0.0), closed_form(16)), {8, 16}).slope;
  double s1 = asymptotic_compression(compression_profile(f, EmbeddingSpec::tree(0.25), closed_form(16)), {8, 16}).slope;
  double synth = 0.0;
  for (double alpha : {0.2, 0.5, 0.75, 1.0, 1.5}) {
    auto p = CompressionProfile::synthetic(32, [alpha](int r) { return std::pow(r, alpha); });
    synth = std::max(synth, std::fabs(asymptotic_compression(p, {8, 32}).slope - alpha));
  }
  bool ok = std::fabs(s0 - 0.5) <= tol::slope_f2 && std::fabs(s1 - 0.75) <= tol::slope_f2 && synth <= tol::slope_synthetic;
  return {ok, fmt("eps 0: %.4f, eps 0.25: %.4f, synthetic max error %.2e", s0, s1, synth)};
}

Outcome generator_lipschitz() {
  Space f(GroupSpec::free_group(2));
  const double eps = 0.25;
  const auto spec = EmbeddingSpec::tree(eps);
  const double bound = 1.0 + lipschitz_generator_bound(eps);
  Ball b = f.ball(10);
  double worst = 0.0;
  std::size_t edges = 0;
  for (const auto& s : b.points) {
    const auto& w = s.word();
    if (w.is_identity()) continue;
    worst = std::max(worst, pair_distance_squared(spec, f, s, Point(w.prefix(w.length() - 1))));
    ++edges;
  }
  bool ok = std::fabs(lipschitz_generator_bound(eps) - tol::c4_bound) < 1e-15 && worst <= bound;
  return {ok, fmt("%zu edges, max |f(s)-f(t)|^2 = %.6f <= %.6f", edges, worst, bound)};
}

Outcome staircase() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::int64_t> num(-100000, 100000), den(1, 9973);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    Rational x(num(rng), den(rng)), y(num(rng), den(rng));
    Rational gap = x > y ? x - y : y - x;
    auto diff = staircase_vector(x) - staircase_vector(y);
    Rational got(0);
    for (const auto& [key, fn] : diff.intervals()) got += fn.exact_squared_norm();
    if (got != gap) ++bad;
  }
  Space z3(GroupSpec::lattice(3));
  ProfileParams p;
  p.r_max = 16;
  p.strategy = Strategy::exact();
  auto est = asymptotic_compression(compression_profile(z3, EmbeddingSpec::l1_to_l2(), p));
  bool ok = bad == 0 && std::fabs(est.slope - 0.5) <= tol::slope_f2;
  return {ok, fmt("exact mismatches %d / 1000, l1->l2 on Z^3 slope %.4f", bad, est.slope)};
}

Outcome product_formula() {
  auto slope = [](const std::string& g, const std::string& e) {
    ProfileParams p;
    p.r_max = 16;
    return asymptotic_compression(compression_profile(Space(parse_group(g)), parse_embedding(e), p)).slope;
  };
  double zz = slope("prod(z1,z1)", "sum(iso,iso)");
  double zf = slope("prod(z1,f2)", "sum(iso,tree)");
  ProductParams pp;
  pp.r_max = 16;
  pp.slope_tolerance = tol::slope_f2;
  int violations = 0;
  for (auto [x, y, f, g] : {std::tuple{"z1", "z1", "iso", "iso"}, std::tuple{"z1", "f2", "iso", "tree"},
                            std::tuple{"z2", "f2", "iso", "weighted-tree:eps=0.25"}}) {
    auto rep = product_check(parse_group(x), parse_group(y), parse_embedding(f), parse_embedding(g), pp);
    violations += rep.details["pointwise_violations"].get<int>();
  }
  bool ok = std::fabs(zz - 1.0) <= tol::slope_lattice && std::fabs(zf - 0.5) <= tol::slope_f2 && violations == 0;
  return {ok, fmt("ZxZ slope %.4f, ZxF2 slope %.4f, pointwise violations %d", zz, zf, violations)};
}

Outcome composition() {
  CompositionParams p;
  p.r_max = 12;
  p.slope_tolerance = tol::c7_slope;
  int violations = 0, failed = 0, count = 0;
  for (auto [g, f, inner] : {std::tuple{"z1", "staircase", "iso"}, std::tuple{"z3", "l1l2", "iso"},
                             std::tuple{"z2", "iso", "iso"}, std::tuple{"z2", "l1l2", "const"}}) {
    auto rep = composition_check(Space(parse_group(g)), parse_embedding(f), parse_embedding(inner), p);
    violations += rep.details["pointwise_violations"].get<int>();
    if (!rep.passed()) ++failed;
    ++count;
  }
  return {violations == 0 && failed == 0,
          fmt("%d compositions, pointwise violations %d, slope failures %d", count, violations, failed)};
}

Outcome kernel_psd() {
  Space f(GroupSpec::free_group(2));
  Ball b = f.ball(5);
  double worst = INFINITY;
  bool diag = true;
  for (double k : {1.0, 2.0, 4.0, 8.0}) {
    auto u = schoenberg_kernel(f, EmbeddingSpec::tree(), k, b);
    diag = diag && u.normalized();
    worst = std::min(worst, psd_check(u, tol::psd).min_eigenvalue);
  }
  return {worst >= -tol::psd && diag, fmt("%zu points, min eigenvalue %.3e, unit diagonal %s", b.points.size(), worst,
                                          diag ? "yes" : "no")};
}

Outcome schur_suite() {
  auto t0 = Clock::now();
  Space f(GroupSpec::free_group(2));
  const double eps = 0.25, kappa = 0.25;
  const auto spec = EmbeddingSpec::tree(eps);
  auto hyp = compression_profile(f, spec, closed_form(96));
  SchurParams sp;
  sp.eps = eps;
  sp.kappa = kappa;
  sp.r0 = hypothesis_r0(hyp, eps);
  auto u = schoenberg_kernel(f, spec, 1.0 / kappa, f.ball(6));
  auto rep = schur_analysis(u, f, sp, hyp);
  bool spectral = !rep.spectral.empty();
  for (const auto& t : rep.spectral) spectral = spectral && t.spectral_norm <= t.max_row_sum;
  double secs = seconds_since(t0);
  bool ok = rep.bound_applicable && rep.row_sums_ok && spectral && secs < tol::c9_seconds;
  return {ok, fmt("%zu points, r0 = %d, m = %d, max row sum %.4f <= 10^%.1f, %zu truncations, %.2f s", u.size(),
                  rep.r0, rep.m, rep.max_row_sum, rep.analytic_bound_log10, rep.spectral.size(), secs)};
}

Outcome finite_width() {
  Space f(GroupSpec::free_group(2));
  auto u = schoenberg_kernel(f, EmbeddingSpec::tree(), 4.0, f.ball(5));
  std::ostringstream errs;
  double prev = INFINITY;
  bool monotone = true, bounds = true;
  for (int w : {2, 4, 6, 8}) {
    WidthParams p;
    p.w = w;
    p.tol = tol::psd;
    p.slack = tol::width_slack;
    KernelMatrix approx;
    auto rep = finite_width_approx(u, p, &approx);
    monotone = monotone && rep.sup_error < prev;
    prev = rep.sup_error;
    bounds = bounds && rep.sup_error <= rep.chain_bound + tol::width_slack && approx.width() <= 2.0 * w &&
             rep.min_eig_approx >= -tol::psd;
    errs << (w == 2 ? "" : ", ") << rep.sup_error;
  }
  return {monotone && bounds, "sup|u - u_hat| over w = 2,4,6,8: " + errs.str()};
}

Outcome extraction() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> len(2, 80);
  const double lambdas[] = {1.0, 1.5, 2.0, 3.0};
  int violations = 0, chains = 0, rejected = 0;
  while (chains < 1000) {
    const double delta = 0.25 + 4.0 * unit(rng);
    const double lambda = lambdas[chains % 4];
    std::vector<std::array<double, 2>> pts{{0.0, 0.0}};
    double length = 0.0;
    const double heading = 2.0 * std::numbers::pi * unit(rng);
    for (int i = 1, n = len(rng); i < n; ++i) {
      double step = delta * unit(rng);
      double angle = heading + (unit(rng) - 0.5) * 2.0 * std::numbers::pi * (lambda - 1.0) / lambda;
      pts.push_back({pts.back()[0] + step * std::cos(angle), pts.back()[1] + step * std::sin(angle)});
      length += step;
    }
    auto dist = [&pts](std::size_t i, std::size_t j) { return std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]); };
    const double d = dist(0, pts.size() - 1);
    if (length > lambda * d) {
      ++rejected;
      continue;
    }
    ++chains;
    auto s = extract_subchain(pts.size(), dist, delta);
    for (double g : s.gaps)
      if (g < delta / 2 || g > 1.5 * delta) ++violations;
    if (s.terminal_gap > delta / 2) ++violations;
    if (static_cast<double>(s.m()) > 2.0 * lambda * d / delta) ++violations;
  }
  return {violations == 0, fmt("%d valid chains (%d rejected as not lambda-quasi-geodesic), violations %d", chains,
                               rejected, violations)};
}

Outcome appendix_constants() {
  auto q = coarse_to_qi_constants(2, 0, 1, 1);
  bool table = q.delta_prime == 3.0 && q.lambda_prime == 13.0;

  // Z -> 2Z, phi(n) = 2n, psi(y) = floor(y / 2).
  const int n = 40;
  auto x = fixtures::line(n);
  auto y = fixtures::line(2 * n - 1);
  std::vector<std::size_t> phi(n), psi(2 * n - 1);
  for (int i = 0; i < n; ++i) phi[i] = 2 * i;
  for (int j = 0; j < 2 * n - 1; ++j) psi[j] = j / 2;
  MapSample f(x, y, phi), g(y, x, psi);
  double K = 0.0;
  for (int i = 0; i < n; ++i) K = std::max(K, x.distance(i, psi[phi[i]]));
  for (int j = 0; j < 2 * n - 1; ++j) K = std::max(K, y.distance(j, phi[psi[j]]));
  QGParams unit_qg;
  bool qg_sources = check_quasi_geodesic(x, unit_qg).passed() && check_quasi_geodesic(y, unit_qg).passed();
  CoarseEquivalence ce{lslip_from_rho_plus(f.pairs(), 1, 1), lslip_from_rho_plus(g.pairs(), 1, 1), K};
  auto qz = qi_from_coarse_equivalence(ce, 1, 1);
  QIParams verify;
  verify.C = qz.C;
  verify.D = qz.D;
  verify.K = qz.K;
  bool z_ok = qg_sources && check_quasi_isometry(f, verify).passed() && check_quasi_isometry(g, verify).passed();
  QGParams image_qg;
  image_qg.lambda = qz.lambda_prime;
  image_qg.delta = qz.delta_prime;
  z_ok = z_ok && check_quasi_geodesic(f.image_cloud(), image_qg).passed();

  // F2 with generators {a, b} against {a, b, ab} on the ball of radius 3.
  auto fx = cli::resolve_cloud("ball:f2:3");
  auto fy = cli::resolve_cloud("ball:f2:3:f2+ab");
  auto id = MapSample::parallel(fx, fy), id_back = MapSample::parallel(fy, fx);
  QGParams qx, qy;
  qy.lambda = 2.0;
  bool f2_qg = check_quasi_geodesic(fx, qx).passed() && check_quasi_geodesic(fy, qy).passed();
  CoarseEquivalence fe{lslip_from_rho_plus(id.pairs(), qx.lambda, qx.delta),
                       lslip_from_rho_plus(id_back.pairs(), qy.lambda, qy.delta), 0.0};
  auto qf = qi_from_coarse_equivalence(fe, qx.lambda, qx.delta);
  verify.C = qf.C;
  verify.D = qf.D;
  verify.K = qf.K;
  bool f2_ok = f2_qg && check_quasi_isometry(id, verify).passed() && check_quasi_isometry(id_back, verify).passed();

  return {table && z_ok && f2_ok,
          fmt("(2,0,1,1) -> delta' %.0f, lambda' %.0f; Z->2Z C %.0f D %.0f K %.0f delta' %.0f lambda' %.0f: %s; "
              "F2 generators C %.0f D %.0f: %s",
              q.delta_prime, q.lambda_prime, qz.C, qz.D, qz.K, qz.delta_prime, qz.lambda_prime, z_ok ? "ok" : "fail",
              qf.C, qf.D, f2_ok ? "ok" : "fail")};
}

Outcome cocycle() {
  auto check = verify_cocycle(random_ball_pairs(2, 8, 10000, 8));
  EquivariantParams p;
  p.r_max = 16;
  p.window = {8, 16};
  auto e = equivariant_compression(p);
  double rho_err = 0.0;
  for (std::size_t i = 0; i < e.r_grid.size(); ++i) {
    double expect = std::sqrt(static_cast<double>(e.r_grid[i]));
    rho_err = std::max({rho_err, std::fabs(e.rho_sphere[i] - expect), std::fabs(e.rho_pairwise[i] - expect)});
  }
  bool ok = check.max_residual <= tol::cocycle && rho_err <= tol::rho_exact && e.representative_error <= tol::rho_exact &&
            std::fabs(e.slope.slope - 0.5) <= tol::equivariant_slope;
  return {ok, fmt("max residual %.1e over %zu pairs, max |rho_b - sqrt r| %.1e, slope %.4f", check.max_residual,
                  check.samples, rho_err, e.slope.slope)};
}

Outcome pathology() {
  std::vector<MapSample> f, g;
  for (int n : {8, 16, 32, 64, 128}) {
    f.push_back(MapSample::parallel(fixtures::pathological_plane(n), fixtures::pathological_plane_image(n)));
    g.push_back(MapSample::parallel(fixtures::squares(n), fixtures::squares_image(n)));
  }
  auto rf = classify_map_family(f);
  auto rg = classify_map_family(g);
  bool f_ok = rf.uniform_embedding.passed() && rf.is_large_scale_lipschitz() == Verdict::Pass &&
              rf.is_lipschitz() == Verdict::Fail;
  bool g_ok = rg.uniform_embedding.passed() && rg.is_large_scale_lipschitz() == Verdict::Fail;

  auto table = heisenberg_length_table(14);
  QGParams qg;
  qg.lambda = 2.0;
  qg.delta = 3.0;
  bool qg_fails = !check_quasi_geodesic(fixtures::heisenberg_center(48, *table), qg).passed();
  std::vector<MapSample> range;
  for (int n : {12, 16, 24, 32, 48})
    range.push_back(MapSample::parallel(fixtures::line(n), fixtures::heisenberg_center(n, *table)));
  auto qi = check_quasi_isometry_over_range(range);
  bool qi_fails = qi.verdict == Verdict::Fail;

  return {f_ok && g_ok && qg_fails && qi_fails,
          fmt("ex0 f: Lipschitz slope %.2f, large-scale slope %.2f; ex0 g: large-scale slope %.2f; "
              "Heisenberg center: qg %s, QI range %s (C_lower slope %.2f)",
              rf.lipschitz.log_slope, rf.large_scale.log_slope, rg.large_scale.log_slope,
              qg_fails ? "fails" : "passes", qi_fails ? "fails" : "passes",
              qi.details.value("C_lower_slope", std::nan("")))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"tree embedding identity on B(8)", tree_identity},
      {"weighted embedding lower bound", weighted_lower_bound},
      {"slope recovery", slope_recovery},
      {"generator-step Lipschitz bound", generator_lipschitz},
      {"staircase identity and l1->l2 slope", staircase},
      {"product formula", product_formula},
      {"composition inequality", composition},
      {"kernel PSD on B(5)", kernel_psd},
      {"Schur suite on B(6)", schur_suite},
      {"finite-width approximation", finite_width},
      {"subchain extraction", extraction},
      {"coarse-to-QI constants", appendix_constants},
      {"tree cocycle", cocycle},
      {"pathology fixtures", pathology},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %-38s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
