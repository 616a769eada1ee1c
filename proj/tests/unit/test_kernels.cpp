#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "hcomp/compression.hpp"
#include "hcomp/embeddings.hpp"
#include "hcomp/error.hpp"
#include "hcomp/kernels.hpp"

using namespace hcomp;

namespace {

Eigen::MatrixXd dense(const KernelMatrix& k) {
  Eigen::MatrixXd m(k.size(), k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j) m(i, j) = k(i, j);
  return m;
}

KernelMatrix tree_kernel(int radius, double k, double eps = 0.0) {
  Space f(GroupSpec::free_group(2));
  return schoenberg_kernel(f, EmbeddingSpec::tree(eps), k, f.ball(radius));
}

}  // namespace

TEST(Schoenberg, EntriesAreExponentialOfWordDistance) {
  auto u = tree_kernel(3, 2.0);
  ASSERT_EQ(u.size(), 53u);
  EXPECT_TRUE(u.normalized());
  EXPECT_TRUE(u.symmetric());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) EXPECT_DOUBLE_EQ(u(i, j), std::exp(-u.distance(i, j) / 2.0));
}

TEST(Schoenberg, PositiveDefiniteByCholesky) {
  for (double k : {1.0, 4.0}) {
    auto u = tree_kernel(3, k);
    Eigen::MatrixXd m = dense(u);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    EXPECT_EQ(llt.info(), Eigen::Success);
    EXPECT_TRUE(psd_check(u).pass);
    EXPECT_GT(psd_check(u).min_eigenvalue, 0.0);
  }
}

TEST(Schoenberg, RejectsNonPositiveParameterAndCap) {
  Space f(GroupSpec::free_group(2));
  EXPECT_THROW(schoenberg_kernel(f, EmbeddingSpec::tree(), 0.0, f.ball(1)), DomainError);
  EXPECT_THROW(schoenberg_kernel(f, EmbeddingSpec::tree(), 1.0, f.ball(3), 10), CapacityError);
}

TEST(Psd, DetectsNegativeEigenvalue) {
  KernelMatrix m(2, {1.0, 2.0, 2.0, 1.0}, {0.0, 1.0, 1.0, 0.0});
  auto r = psd_check(m);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-12);
  EXPECT_NEAR(spectral_norm(m), 3.0, 1e-12);
  KernelMatrix asym(2, {1.0, 2.0, 0.0, 1.0}, {0.0, 1.0, 1.0, 0.0});
  EXPECT_THROW(psd_check(asym), DomainError);
  EXPECT_THROW(KernelMatrix(2, {1.0}, {0.0}), InputError);
}

TEST(Truncation, KeepsOnlyFarEntries) {
  auto u = tree_kernel(2, 1.0);
  auto t = u.truncated(2);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j)
      EXPECT_EQ(t(i, j), u.distance(i, j) > 2 ? u(i, j) : 0.0);
  EXPECT_EQ(u.truncated(-1).values(), u.values());
}

TEST(SpectralNorm, MatchesEigenAndRowSumBound) {
  auto u = tree_kernel(3, 1.5);
  for (int n : {-1, 0, 2, 4}) {
    auto t = u.truncated(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(t));
    double expect = es.eigenvalues().cwiseAbs().maxCoeff();
    EXPECT_NEAR(spectral_norm(t), expect, 1e-10);
    double row = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < t.size(); ++j) s += std::fabs(t(i, j));
      row = std::max(row, s);
    }
    EXPECT_LE(spectral_norm(t), row + 1e-12);
  }
}

TEST(Schur, CutoffIsSmallestAdmissible) {
  for (double kappa : {0.25, 1.0}) {
    for (double eps : {0.25, 0.5}) {
      int m = schur_cutoff(4, kappa, eps, 1);
      ASSERT_GE(m, 1);
      EXPECT_LT(std::log(4.0), kappa * std::pow(m, eps));
      if (m > 1) EXPECT_GE(std::log(4.0), kappa * std::pow(m - 1, eps));
    }
  }
  EXPECT_EQ(schur_cutoff(4, 0.25, 0.0, 3), -1);
  EXPECT_EQ(schur_cutoff(4, 2.0, 0.0, 3), 3);
  EXPECT_THROW(schur_cutoff(0, 1.0, 0.5, 1), DomainError);
}

TEST(Schur, HypothesisR0FromProfile) {
  // Meets r^0.625 from r = 5 on.
  auto p = CompressionProfile::synthetic(12, [](int r) { return r < 5 ? 1.0 : std::pow(r, 0.7); });
  EXPECT_EQ(hypothesis_r0(p, 0.25), 5);
  auto never = CompressionProfile::synthetic(12, [](int r) { return std::pow(r, 0.5); });
  EXPECT_THROW(hypothesis_r0(never, 0.25), HypothesisError);
}

TEST(Schur, RowSumsBelowBoundAndSpectralBelowRowSums) {
  Space f(GroupSpec::free_group(2));
  auto spec = EmbeddingSpec::tree(0.25);
  auto u = schoenberg_kernel(f, spec, 4.0, f.ball(3));
  ProfileParams pp;
  pp.r_max = 48;
  pp.strategy = Strategy::closed_form();
  auto hyp = compression_profile(f, spec, pp);
  SchurParams sp;
  sp.eps = 0.25;
  sp.kappa = 0.25;
  sp.r0 = hypothesis_r0(hyp, 0.25);
  auto rep = schur_analysis(u, f, sp, hyp);
  EXPECT_TRUE(rep.bound_applicable);
  EXPECT_TRUE(rep.row_sums_ok);
  EXPECT_TRUE(rep.spectral_ok);
  for (const auto& t : rep.spectral) EXPECT_LE(t.spectral_norm, t.max_row_sum + 1e-12);
  double total = 0.0;
  for (const auto& s : rep.per_sphere) total += s.sum;
  EXPECT_NEAR(total, rep.max_row_sum, 1e-9);

  SchurParams bad = sp;
  bad.r0 = 1;
  EXPECT_THROW(schur_analysis(u, f, bad, hyp), HypothesisError);
}

TEST(FiniteWidth, ApproximationBoundsHold) {
  auto u = tree_kernel(3, 4.0);
  double prev = std::numeric_limits<double>::infinity();
  for (int w : {1, 2, 3, 4}) {
    KernelMatrix approx;
    WidthParams p;
    p.w = w;
    auto rep = finite_width_approx(u, p, &approx);
    EXPECT_TRUE(rep.passed()) << rep.to_json().dump();
    EXPECT_LE(approx.width(), 2.0 * w);
    EXPECT_LE(rep.sup_error, rep.chain_bound + 1e-10);
    EXPECT_LE(rep.sup_error, prev + 1e-12);
    prev = rep.sup_error;
    double sup = 0.0;
    for (std::size_t i = 0; i < u.size() * u.size(); ++i)
      sup = std::max(sup, std::fabs(u.values()[i] - approx.values()[i]));
    EXPECT_NEAR(sup, rep.sup_error, 1e-12);
  }
}

TEST(FiniteWidth, RejectsIndefiniteInput) {
  KernelMatrix m(2, {1.0, 2.0, 2.0, 1.0}, {0.0, 1.0, 1.0, 0.0});
  EXPECT_THROW(finite_width_approx(m, WidthParams{}), DomainError);
}

TEST(ConvergenceSupport, DecreasingKernels) {
  Space f(GroupSpec::free_group(2));
  Ball b = f.ball(2);
  std::vector<KernelMatrix> ks;
  for (double k : {1.0, 4.0, 16.0}) {
    auto u = schoenberg_kernel(f, EmbeddingSpec::tree(), k, b);
    ks.push_back(u);
  }
  auto rep = convergence_support_check(ks, 2.0, 4.0);
  EXPECT_TRUE(rep.passed()) << rep.to_json().dump();
  std::reverse(ks.begin(), ks.end());
  EXPECT_FALSE(convergence_support_check(ks, 2.0, 4.0).passed());
}
