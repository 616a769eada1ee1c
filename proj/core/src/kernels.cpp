#include "hcomp/kernels.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "hcomp/error.hpp"
#include "hcomp/parallel.hpp"

namespace hcomp {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const Matrix> view(const KernelMatrix& k) {
  return Eigen::Map<const Matrix>(k.values().data(), static_cast<Eigen::Index>(k.size()),
                                  static_cast<Eigen::Index>(k.size()));
}

Eigen::VectorXd eigenvalues(const Matrix& m) {
  if (m.rows() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EstimationError("eigensolver did not converge");
  return solver.eigenvalues();
}

double max_abs_eigenvalue(const Matrix& m) {
  auto ev = eigenvalues(m);
  if (ev.size() == 0) return 0.0;
  return std::max(std::fabs(ev(0)), std::fabs(ev(ev.size() - 1)));
}

long double max_row_sum(const KernelMatrix& k, std::size_t* worst = nullptr) {
  long double best = 0.0L;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < k.size(); ++j) s += k(i, j);
    if (s > best) {
      best = s;
      arg = i;
    }
  }
  if (worst) *worst = arg;
  return best;
}

}  // namespace

std::size_t kernel_cap_from_env() {
  if (const char* v = std::getenv("HCOMP_MAX_KERNEL")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (end && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    throw ConfigError("HCOMP_MAX_KERNEL must be a positive integer");
  }
  return 4000;
}

KernelMatrix::KernelMatrix(std::size_t n, std::vector<double> values, std::vector<double> distances)
    : n_(n), values_(std::move(values)), distances_(std::move(distances)) {
  if (values_.size() != n * n || distances_.size() != n * n) throw InputError("kernel matrix size mismatch");
}

double KernelMatrix::width() const {
  double w = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] != 0.0) w = std::max(w, distances_[i]);
  return w;
}

bool KernelMatrix::normalized() const {
  for (std::size_t i = 0; i < n_; ++i)
    if (values_[i * n_ + i] != 1.0) return false;
  return true;
}

bool KernelMatrix::symmetric() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (values_[i * n_ + j] != values_[j * n_ + i]) return false;
  return true;
}

KernelMatrix KernelMatrix::truncated(int n) const {
  KernelMatrix out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!(distances_[i] > n)) out.values_[i] = 0.0;
  return out;
}

KernelMatrix schoenberg_kernel(const Space& space, const EmbeddingSpec& spec, double k, const Ball& ball,
                               std::size_t cap) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("kernel parameter k must be positive");
  validate_embedding(spec, space);
  const std::size_t n = ball.points.size();
  if (n > cap)
    throw CapacityError("kernel on " + std::to_string(n) + " points exceeds the eigensolver cap " +
                            std::to_string(cap) + " (HCOMP_MAX_KERNEL)",
                        n);
  const double kappa = 1.0 / k;
  std::vector<double> values(n * n, 1.0), dist(n * n, 0.0);
  parallel_blocks(n, 16, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double d = space.distance(ball.points[i], ball.points[j]);
        double u = std::exp(-kappa * pair_distance_squared(spec, space, ball.points[i], ball.points[j]));
        values[i * n + j] = values[j * n + i] = u;
        dist[i * n + j] = dist[j * n + i] = d;
      }
  });
  KernelMatrix m(n, std::move(values), std::move(dist));
  m.points = ball.points;
  m.kappa = kappa;
  m.embedding = spec.name();
  m.space = space.name();
  m.ball_radius = ball.radius;
  return m;
}

void write_kernel_csv(std::ostream& out, const KernelMatrix& k) {
  out << "i,j,value\n";
  out.precision(17);
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = i; j < k.size(); ++j) out << i << ',' << j << ',' << k(i, j) << '\n';
}

PsdResult psd_check(const KernelMatrix& k, double tol) {
  if (!k.symmetric()) throw DomainError("psd_check needs a symmetric matrix");
  PsdResult r;
  r.tol = tol;
  auto ev = eigenvalues(view(k));
  r.min_eigenvalue = ev.size() ? ev(0) : 0.0;
  r.pass = r.min_eigenvalue >= -tol;
  return r;
}

double spectral_norm(const KernelMatrix& k) {
  if (!k.symmetric()) throw DomainError("spectral_norm needs a symmetric matrix");
  return max_abs_eigenvalue(view(k));
}

// ---------------------------------------------------------------------------

int schur_cutoff(int card_s, double kappa, double eps, int r0, int limit) {
  if (card_s < 1 || !(kappa > 0.0) || eps < 0.0) throw DomainError("invalid Schur parameters");
  const long double log_s = std::log(static_cast<long double>(card_s));
  auto ok = [&](long double m) { return log_s < static_cast<long double>(kappa) * std::pow(m, static_cast<long double>(eps)); };
  int start = std::max(r0, 0);
  if (eps == 0.0) return ok(1.0L) ? start : -1;
  long double guess = std::pow(log_s / kappa, 1.0L / eps);
  if (guess > limit) return -1;
  int m = std::max(start, static_cast<int>(std::floor(guess)) - 1);
  while (m > start && ok(m - 1)) --m;
  while (m <= limit && !ok(m)) ++m;
  return m <= limit ? m : -1;
}

nlohmann::json SchurReport::to_json() const {
  nlohmann::json spheres = nlohmann::json::array();
  for (const auto& s : per_sphere) spheres.push_back({{"n", s.n}, {"sum", s.sum}, {"count", s.count}});
  nlohmann::json norms = nlohmann::json::array();
  for (const auto& t : spectral)
    norms.push_back({{"n", t.n}, {"max_row_sum", t.max_row_sum}, {"spectral_norm", t.spectral_norm}, {"ok", t.ok}});
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& [i, s] : base_points) bases.push_back({{"row", i}, {"row_sum", s}});
  double bound = static_cast<double>(analytic_bound);
  return {{"max_row_sum", max_row_sum},
          {"worst_row", worst_row},
          {"analytic_bound", std::isfinite(bound) ? nlohmann::json(bound) : nlohmann::json(nullptr)},
          {"analytic_bound_log10", analytic_bound_log10},
          {"bound_applicable", bound_applicable},
          {"m", m},
          {"r0", r0},
          {"eps", eps},
          {"kappa", kappa},
          {"card_S", card_s},
          {"hypothesis_checked_to", hypothesis_checked_to},
          {"sigma_exact_to", sigma_exact_to},
          {"row_sums_ok", row_sums_ok},
          {"per_sphere", spheres},
          {"base_points", bases},
          {"spectral", norms},
          {"spectral_ok", spectral_ok},
          {"warnings", warnings},
          {"strategy", "exact"}};
}

int hypothesis_r0(const CompressionProfile& profile, double eps) {
  if (profile.r_grid.empty()) throw EstimationError("empty hypothesis profile");
  int r0 = profile.r_grid.front();
  for (std::size_t i = 0; i < profile.r_grid.size(); ++i)
    if (profile.rho[i] < std::pow(static_cast<double>(profile.r_grid[i]), (1.0 + eps) / 2.0)) r0 = profile.r_grid[i] + 1;
  if (r0 > profile.r_max())
    throw HypothesisError("rho(r) < r^((1+eps)/2) at the end of the profile, r = " + std::to_string(profile.r_max()),
                          profile.r_max());
  return r0;
}

SchurReport schur_analysis(const KernelMatrix& kernel, const Space& space, const SchurParams& params,
                           const CompressionProfile& hypothesis) {
  if (!kernel.normalized()) throw DomainError("Schur analysis needs a normalized kernel");
  if (!(params.kappa > 0.0) || params.eps < 0.0) throw DomainError("kappa must be positive and eps non-negative");
  SchurReport rep;
  rep.eps = params.eps;
  rep.kappa = params.kappa;
  rep.r0 = params.r0;
  rep.card_s = space.generator_count();

  for (std::size_t i = 0; i < hypothesis.r_grid.size(); ++i) {
    int r = hypothesis.r_grid[i];
    if (r < params.r0) continue;
    if (hypothesis.rho[i] < std::pow(static_cast<double>(r), (1.0 + params.eps) / 2.0))
      throw HypothesisError("rho(" + std::to_string(r) + ") = " + std::to_string(hypothesis.rho[i]) +
                                " < r^((1+eps)/2) for r >= r0 = " + std::to_string(params.r0),
                            r);
  }
  rep.hypothesis_checked_to = hypothesis.r_max();
  if (hypothesis.r_max() < params.r0) rep.warnings.push_back("hypothesis profile ends before r0");
  else
    rep.warnings.push_back("growth hypothesis verified on r0.." + std::to_string(hypothesis.r_max()) +
                           " only (finite range)");

  KernelMatrix k = params.truncation >= 0 ? kernel.truncated(params.truncation) : kernel;
  rep.max_row_sum = static_cast<double>(max_row_sum(k, &rep.worst_row));

  rep.m = schur_cutoff(rep.card_s, params.kappa, params.eps, params.r0);
  if (rep.m < 0) {
    rep.bound_applicable = false;
    rep.warnings.push_back("card(S) >= exp(kappa m^eps) for every admissible m: bound inapplicable");
  } else {
    long double growth = 0.0L;
    for (int n = 0; n <= rep.m; ++n) {
      auto exact = space.sphere_size(n);
      if (exact) {
        growth += static_cast<long double>(*exact);
        rep.sigma_exact_to = n;
      } else {
        growth += std::pow(static_cast<long double>(rep.card_s), static_cast<long double>(n));
      }
    }
    long double q = rep.card_s * std::exp(-static_cast<long double>(params.kappa) *
                                          std::pow(static_cast<long double>(rep.m), static_cast<long double>(params.eps)));
    long double tail = std::pow(q, static_cast<long double>(rep.m + 1)) / (1.0L - q);
    rep.analytic_bound = growth + tail;
    rep.bound_applicable = std::isfinite(static_cast<double>(std::log10(rep.analytic_bound))) && q < 1.0L;
    rep.analytic_bound_log10 = static_cast<double>(std::log10(rep.analytic_bound));
    if (!rep.bound_applicable) rep.warnings.push_back("analytic bound overflows long double");
    if (rep.m > kernel.ball_radius)
      rep.warnings.push_back("cutoff m = " + std::to_string(rep.m) + " exceeds the ball radius " +
                             std::to_string(kernel.ball_radius) +
                             ": on this ball the bound is dominated by the growth term sum sigma(n)");
  }
  rep.row_sums_ok = !rep.bound_applicable || static_cast<long double>(rep.max_row_sum) <= rep.analytic_bound;

  std::map<int, SphereContribution> spheres;
  for (std::size_t j = 0; j < k.size(); ++j) {
    int n = static_cast<int>(std::ceil(k.distance(rep.worst_row, j)));
    auto& s = spheres[n];
    s.n = n;
    s.sum += k(rep.worst_row, j);
    ++s.count;
  }
  for (const auto& [n, s] : spheres) rep.per_sphere.push_back(s);

  std::mt19937_64 rng(params.seed);
  if (k.size() > 0) {
    std::uniform_int_distribution<std::size_t> pick(0, k.size() - 1);
    for (int i = 0; i < 10; ++i) {
      std::size_t row = pick(rng);
      long double s = 0.0L;
      for (std::size_t j = 0; j < k.size(); ++j) s += k(row, j);
      rep.base_points.emplace_back(row, static_cast<double>(s));
      if (rep.bound_applicable && s > rep.analytic_bound) rep.row_sums_ok = false;
    }
  }

  std::vector<int> truncs = params.spectral_truncations;
  if (truncs.empty()) {
    truncs.push_back(-1);
    for (int n = 0; n <= 2 * kernel.ball_radius; n += 2) truncs.push_back(n);
  }
  rep.spectral_ok = true;
  for (int n : truncs) {
    KernelMatrix kn = kernel.truncated(n);
    TruncationNorm t;
    t.n = n;
    t.max_row_sum = static_cast<double>(max_row_sum(kn));
    t.spectral_norm = spectral_norm(kn);
    t.ok = t.spectral_norm <= t.max_row_sum * (1.0 + 1e-12) + 1e-12;
    rep.spectral_ok = rep.spectral_ok && t.ok;
    rep.spectral.push_back(t);
  }
  return rep;
}

// ---------------------------------------------------------------------------

nlohmann::json WidthApproxReport::to_json() const {
  return {{"w", w},
          {"sup_error", sup_error},
          {"min_eig_u", min_eig_u},
          {"min_eig_approx", min_eig_approx},
          {"norm_V", norm_v},
          {"norm_diff", norm_diff},
          {"chain_bound", chain_bound},
          {"width_approx", width_approx},
          {"diag_error", diag_error},
          {"clipped", clipped},
          {"inequality_ok", inequality_ok},
          {"width_ok", width_ok},
          {"psd_ok", psd_ok},
          {"converged", converged},
          {"strategy", "exact"}};
}

WidthApproxReport finite_width_approx(const KernelMatrix& kernel, const WidthParams& params, KernelMatrix* approx) {
  if (params.w < 0) throw DomainError("width must be non-negative");
  if (!kernel.symmetric()) throw DomainError("finite-width approximation needs a symmetric kernel");
  const auto n = static_cast<Eigen::Index>(kernel.size());
  WidthApproxReport rep;
  rep.w = params.w;
  Matrix u = view(kernel);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(u);
  if (solver.info() != Eigen::Success) throw EstimationError("eigensolver did not converge");
  Eigen::VectorXd ev = solver.eigenvalues();
  rep.min_eig_u = n ? ev(0) : 0.0;
  if (rep.min_eig_u < -params.tol)
    throw DomainError("kernel is not positive semidefinite: eigenvalue " + std::to_string(rep.min_eig_u));
  Eigen::VectorXd root(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) < 0.0) rep.clipped = std::max(rep.clipped, -ev(i));
    root(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  Matrix v = solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
  v = (0.5 * (v + v.transpose())).eval();
  rep.norm_v = n ? root.maxCoeff() : 0.0;

  Matrix w = v;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (kernel.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) > params.w) w(i, j) = 0.0;
  Matrix uh = w.transpose() * w;

  rep.norm_diff = max_abs_eigenvalue(v - w);
  rep.sup_error = n ? (u - uh).cwiseAbs().maxCoeff() : 0.0;
  rep.chain_bound = rep.norm_diff * (2.0 * rep.norm_v + rep.norm_diff);
  rep.inequality_ok = rep.sup_error <= rep.chain_bound + params.slack;

  Matrix sym = 0.5 * (uh + uh.transpose());
  auto ev_hat = eigenvalues(sym);
  rep.min_eig_approx = ev_hat.size() ? ev_hat(0) : 0.0;
  rep.psd_ok = rep.min_eig_approx >= -params.tol;

  for (Eigen::Index i = 0; i < n; ++i) {
    rep.diag_error = std::max(rep.diag_error, std::fabs(1.0 - uh(i, i)));
    for (Eigen::Index j = 0; j < n; ++j)
      if (uh(i, j) != 0.0)
        rep.width_approx =
            std::max(rep.width_approx, kernel.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  }
  rep.width_ok = rep.width_approx <= 2.0 * params.w;
  rep.converged = rep.sup_error <= params.convergence_tol;

  if (approx) {
    std::vector<double> values(sym.data(), sym.data() + sym.size());
    *approx = KernelMatrix(kernel.size(), std::move(values), kernel.distances());
    approx->points = kernel.points;
    approx->kappa = kernel.kappa;
    approx->embedding = kernel.embedding + " width<=" + std::to_string(2 * params.w);
    approx->space = kernel.space;
    approx->ball_radius = kernel.ball_radius;
  }
  return rep;
}

CheckReport convergence_support_check(const std::vector<KernelMatrix>& kernels, double strip, double width_cap) {
  if (kernels.empty()) throw InputError("no kernels given");
  for (const auto& k : kernels)
    if (k.size() != kernels.front().size() || k.distances() != kernels.front().distances())
      throw InputError("kernels must live on a common ball");
  CheckReport rep;
  rep.check = "convergence-support";
  nlohmann::json rows = nlohmann::json::array();
  std::vector<double> sup;
  bool support = true;
  for (std::size_t idx = 0; idx < kernels.size(); ++idx) {
    const auto& k = kernels[idx];
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i)
      for (std::size_t j = 0; j < k.size(); ++j)
        if (k.distance(i, j) <= strip) s = std::max(s, std::fabs(1.0 - k(i, j)));
    sup.push_back(s);
    double width = k.width();
    bool ok = width <= width_cap;
    support = support && ok;
    rows.push_back({{"index", idx}, {"embedding", k.embedding}, {"kappa", k.kappa}, {"sup_strip_error", s},
                    {"width", width}, {"support_ok", ok}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < sup.size(); ++i)
    if (!(sup[i] < sup[i - 1] || (sup[i] == 0.0 && sup[i - 1] == 0.0))) decreasing = false;
  rep.details = {{"strip", strip},
                 {"width_cap", width_cap},
                 {"kernels", rows},
                 {"convergence_ok", decreasing},
                 {"support_ok", support},
                 {"strategy", "exact"}};
  rep.notes.push_back("finite matrices on a ball stand in for operators on l^2 of the group");
  rep.verdict = decreasing && support ? Verdict::Pass : Verdict::Fail;
  return rep;
}

}  // namespace hcomp
