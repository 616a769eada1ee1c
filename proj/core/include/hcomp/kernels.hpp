#pragma once

// Kernels on finite balls: Schoenberg kernels u(s,t) = exp(-kappa |f(s)-f(t)|^2),
// truncations, the Schur test with the spherical-growth bound, and the
// finite-width approximation through the positive square root.
//
// Operators on l^2(ball) stand in for the uniform Roe algebra; every norm
// below is a finite-dimensional spectral norm.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcomp/compression.hpp"
#include "hcomp/embeddings.hpp"
#include "hcomp/report.hpp"
#include "hcomp/spaces.hpp"

namespace hcomp {

/// HCOMP_MAX_KERNEL, default 4000.
std::size_t kernel_cap_from_env();

class KernelMatrix {
 public:
  KernelMatrix() = default;
  /// Row-major n x n values with matching source distances. Throws
  /// InputError on size mismatch.
  KernelMatrix(std::size_t n, std::vector<double> values, std::vector<double> distances);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double distance(std::size_t i, std::size_t j) const { return distances_[i * n_ + j]; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& distances() const noexcept { return distances_; }

  /// max d(s,t) over nonzero entries (0 for the zero kernel).
  double width() const;
  bool normalized() const;
  bool symmetric() const;

  /// Entries with d(s,t) > n kept, others zeroed (k_n).
  KernelMatrix truncated(int n) const;

  std::vector<Point> points;
  double kappa = 0.0;
  std::string embedding;
  std::string space;
  int ball_radius = 0;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
  std::vector<double> distances_;
};

/// u(s,t) = exp(-|f(s) - f(t)|^2 / k) on the ball. Throws CapacityError
/// when the ball holds more than `cap` points.
KernelMatrix schoenberg_kernel(const Space& space, const EmbeddingSpec& spec, double k, const Ball& ball,
                               std::size_t cap = kernel_cap_from_env());

/// `i,j,value` over the upper triangle.
void write_kernel_csv(std::ostream& out, const KernelMatrix& kernel);

struct PsdResult {
  double min_eigenvalue = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Smallest eigenvalue of a symmetric matrix; pass iff >= -tol. Throws
/// DomainError on a non-symmetric input.
PsdResult psd_check(const KernelMatrix& kernel, double tol = 1e-8);

/// Largest |eigenvalue| of a symmetric kernel.
double spectral_norm(const KernelMatrix& kernel);

struct SchurParams {
  /// Truncation n for the row-sum test (k_n keeps d(s,t) > n); -1 keeps all.
  int truncation = -1;
  double eps = 0.25;
  double kappa = 0.25;
  int r0 = 1;
  /// Truncations whose spectral norm is compared with their max row sum;
  /// empty means 2j for j = 0..R plus -1.
  std::vector<int> spectral_truncations;
  std::uint64_t seed = 0;
};

struct SphereContribution {
  int n = 0;
  double sum = 0.0;
  std::uint64_t count = 0;
};

struct TruncationNorm {
  int n = 0;
  double max_row_sum = 0.0;
  double spectral_norm = 0.0;
  bool ok = false;
};

struct SchurReport {
  double max_row_sum = 0.0;
  std::size_t worst_row = 0;
  /// The majorant sum_{n<=m} sigma(n) + q^{m+1} / (1 - q), q = card(S) e^{-kappa m^eps},
  /// in long double; `analytic_bound` is +inf when it overflows a double.
  long double analytic_bound = 0.0L;
  double analytic_bound_log10 = 0.0;
  bool bound_applicable = false;
  int m = 0;
  int r0 = 0;
  double eps = 0.0;
  double kappa = 0.0;
  int card_s = 0;
  int hypothesis_checked_to = 0;
  /// sigma(n) is exact for n <= this value and bounded by card(S)^n beyond.
  int sigma_exact_to = -1;
  bool row_sums_ok = false;
  std::vector<SphereContribution> per_sphere;
  /// Row sums at random base points (seeded).
  std::vector<std::pair<std::size_t, double>> base_points;
  std::vector<TruncationNorm> spectral;
  bool spectral_ok = false;
  std::vector<std::string> warnings;

  bool passed() const noexcept { return row_sums_ok && spectral_ok; }
  nlohmann::json to_json() const;
};

/// Smallest r0 such that rho(r) >= r^{(1+eps)/2} for every grid r >= r0.
/// Throws HypothesisError when the inequality fails at the last grid point.
int hypothesis_r0(const CompressionProfile& profile, double eps);

/// Smallest m >= r0 with card_s < exp(kappa m^eps), searched up to
/// `limit`; -1 when none exists.
int schur_cutoff(int card_s, double kappa, double eps, int r0, int limit = 1'000'000'000);

/// Exact row sums of the truncated kernel against the analytic bound, plus
/// the spectral norms of truncations against their row sums.
///
/// Throws HypothesisError when rho(r) < r^{(1+eps)/2} for some r >= r0 on
/// `hypothesis` (a profile of the same embedding, usually over a larger
/// ball). When no cutoff exists the bound is marked inapplicable and the
/// verdict rests on the Schur comparison alone.
SchurReport schur_analysis(const KernelMatrix& kernel, const Space& space, const SchurParams& params,
                           const CompressionProfile& hypothesis);

struct WidthApproxReport {
  int w = 0;
  double sup_error = 0.0;
  double min_eig_u = 0.0;
  double min_eig_approx = 0.0;
  double norm_v = 0.0;
  double norm_diff = 0.0;
  double chain_bound = 0.0;
  double width_approx = 0.0;
  double diag_error = 0.0;
  double clipped = 0.0;
  bool inequality_ok = false;
  bool width_ok = false;
  bool psd_ok = false;
  bool converged = false;

  bool passed() const noexcept { return inequality_ok && width_ok && psd_ok; }
  nlohmann::json to_json() const;
};

struct WidthParams {
  int w = 0;
  /// Negative-eigenvalue tolerance for U and the PSD floor for u-hat.
  double tol = 1e-8;
  /// Additive roundoff slack on sup|u - u_hat| <= ||V-W||(2||V|| + ||V-W||).
  double slack = 1e-10;
  /// sup|u - u_hat| at or below this counts as converged.
  double convergence_tol = 1e-3;
};

/// V = sqrt(U) (eigenvalues clipped at 0), W = V zeroed where d > w,
/// u_hat = W^T W. Throws DomainError when U has an eigenvalue < -tol.
WidthApproxReport finite_width_approx(const KernelMatrix& kernel, const WidthParams& params,
                                      KernelMatrix* approx = nullptr);

/// sup_{d <= strip} |1 - u| per kernel must decrease (to 0), and every
/// kernel's width must be at most `width_cap`.
CheckReport convergence_support_check(const std::vector<KernelMatrix>& kernels, double strip, double width_cap);

}  // namespace hcomp
