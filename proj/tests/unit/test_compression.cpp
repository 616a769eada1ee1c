#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hcomp/compression.hpp"
#include "hcomp/embeddings.hpp"
#include "hcomp/error.hpp"
#include "hcomp/parse.hpp"

using namespace hcomp;

namespace {

CompressionProfile profile(const std::string& group, const std::string& embedding, int r_max,
                           Strategy strategy = Strategy::automatic()) {
  ProfileParams p;
  p.r_max = r_max;
  p.strategy = strategy;
  return compression_profile(Space(parse_group(group)), parse_embedding(embedding), p);
}

}  // namespace

TEST(Strategy, TagsRoundTrip) {
  for (auto s : {Strategy::automatic(), Strategy::exact(), Strategy::closed_form(), Strategy::product_levels(),
                 Strategy::sampled(42, 1000)})
    EXPECT_EQ(Strategy::parse(s.tag()).tag(), s.tag());
  EXPECT_THROW(Strategy::parse("sampled(seed=x)"), InputError);
  EXPECT_THROW(Strategy::parse("fastest"), InputError);
}

TEST(LevelTable, FloorForMinimaCeilForMaxima) {
  LevelTable t;
  t.record(2.5, 7.0);
  t.record(2.0, 3.0);
  t.record(3.0, 9.0);
  ASSERT_GE(t.max_level(), 3);
  EXPECT_EQ(t.min_image[2], 3.0);
  EXPECT_EQ(t.max_image[3], 9.0);
  EXPECT_EQ(t.max_image[2], 3.0);
  EXPECT_EQ(t.min_image[3], 9.0);
  EXPECT_EQ(t.pairs[3], 2u);
}

TEST(TreeTriples, OrderedCountsCoverOffDiagonalPairs) {
  for (int radius = 0; radius <= 6; ++radius) {
    std::uint64_t ball = 2 * static_cast<std::uint64_t>(std::pow(3, radius)) - 1;
    std::uint64_t total = 0;
    for (const auto& tr : tree_triples(2, radius)) total += tr.ordered_pairs;
    EXPECT_EQ(total, ball * ball - ball) << "radius " << radius;
  }
}

TEST(TreeTriples, CountsMatchEnumeration) {
  Space f(GroupSpec::free_group(2));
  Ball b = f.ball(3);
  std::map<std::tuple<int, int, int>, std::uint64_t> seen;
  for (const auto& s : b.points)
    for (const auto& t : b.points)
      if (!(s == t))
        ++seen[{static_cast<int>(s.word().length()), static_cast<int>(t.word().length()),
              static_cast<int>(common_prefix(s.word(), t.word()))}];
  auto triples = tree_triples(2, 3);
  EXPECT_EQ(triples.size(), seen.size());
  for (const auto& tr : triples) EXPECT_EQ(tr.ordered_pairs, (seen[{tr.ks, tr.kt, tr.p}])) << tr.ks << tr.kt << tr.p;
}

TEST(Profile, TreeCompressionIsSquareRoot) {
  auto p = profile("f2", "tree", 12, Strategy::closed_form());
  ASSERT_EQ(p.r_max(), 12);
  for (int r = 1; r <= 12; ++r) EXPECT_NEAR(p.rho_at(r), std::sqrt(r), 1e-12);
  EXPECT_EQ(p.ball_radius, 6);
}

TEST(Profile, ClosedFormAgreesWithExactPairwise) {
  for (std::string emb : {"tree", "weighted-tree:eps=0.25"}) {
    auto a = profile("f2", emb, 8, Strategy::closed_form());
    auto b = profile("f2", emb, 8, Strategy::exact());
    for (int r = 1; r <= 8; ++r) {
      EXPECT_NEAR(a.rho_at(r), b.rho_at(r), 1e-10) << emb << " r=" << r;
      EXPECT_NEAR(a.rho_plus_at(r), b.rho_plus_at(r), 1e-10) << emb << " r=" << r;
    }
  }
}

TEST(Profile, ProductLevelsAgreesWithExactPairwise) {
  auto a = profile("prod(z1,f2)", "sum(iso,tree)", 8, Strategy::product_levels());
  auto b = profile("prod(z1,f2)", "sum(iso,tree)", 8, Strategy::exact());
  for (int r = 1; r <= 8; ++r) EXPECT_NEAR(a.rho_at(r), b.rho_at(r), 1e-10) << "r=" << r;
}

TEST(Profile, SampledNeverUndershootsExact) {
  auto exact = profile("z2", "iso", 8, Strategy::exact());
  auto sampled = profile("z2", "iso", 8, Strategy::sampled(5, 2000));
  for (int r = 1; r <= 8; ++r) EXPECT_GE(sampled.rho_at(r), exact.rho_at(r) - 1e-12);
}

TEST(Profile, WeightedTreeLowerBound) {
  for (double eps : {0.1, 0.25, 0.4}) {
    ProfileParams p;
    p.r_max = 16;
    p.strategy = Strategy::closed_form();
    auto prof = compression_profile(Space(GroupSpec::free_group(2)), EmbeddingSpec::tree(eps), p);
    double c = compression_lower_constant(eps);
    for (int r = 1; r <= 16; ++r) {
      double rho = prof.rho_at(r);
      EXPECT_GE(rho * rho, c * std::pow(r, 1 + 2 * eps)) << "eps " << eps << " r " << r;
    }
  }
}

TEST(Profile, RhoStarAndMonotonicity) {
  auto p = profile("z1", "const", 6);
  for (int r = 1; r <= 6; ++r) {
    EXPECT_EQ(p.rho_at(r), 0.0);
    EXPECT_EQ(p.rho_star[r - 1], 1.0);
  }
  auto q = profile("f2", "weighted-tree:eps=0.25", 10, Strategy::closed_form());
  for (int r = 2; r <= 10; ++r) {
    EXPECT_GE(q.rho_at(r), q.rho_at(r - 1));
    EXPECT_GE(q.rho_plus_at(r), q.rho_plus_at(r - 1));
  }
  EXPECT_THROW(q.rho_at(0), DomainError);
  EXPECT_THROW(q.rho_at(11), DomainError);
}

TEST(Profile, CsvRoundTrip) {
  auto p = profile("f2", "tree", 8, Strategy::closed_form());
  std::stringstream ss;
  write_profile_csv(ss, p);
  auto back = read_profile_csv(ss);
  ASSERT_EQ(back.r_max(), 8);
  for (int r = 1; r <= 8; ++r) {
    EXPECT_DOUBLE_EQ(back.rho_at(r), p.rho_at(r));
    EXPECT_DOUBLE_EQ(back.rho_plus_at(r), p.rho_plus_at(r));
  }
  std::stringstream bad("r,rho\n1,2\n");
  EXPECT_THROW(read_profile_csv(bad), InputError);
  std::stringstream gap("r,rho,rho_star,rho_plus,pairs\n1,1,1,1,1\n3,1,1,1,1\n");
  EXPECT_THROW(read_profile_csv(gap), InputError);
}

TEST(Asymptotic, RecoversSyntheticExponent) {
  for (double alpha : {0.0, 0.3, 0.5, 0.75, 1.0, 1.7}) {
    auto p = CompressionProfile::synthetic(64, [alpha](int r) { return std::pow(r, alpha); });
    auto est = asymptotic_compression(p, {4, 64});
    EXPECT_NEAR(est.slope, alpha, 1e-9) << alpha;
    EXPECT_NEAR(est.residual, 0.0, 1e-9);
  }
}

TEST(Asymptotic, LeastSquaresMatchesHandComputation) {
  auto p = CompressionProfile::synthetic(8, [](int r) { return r == 4 ? 8.0 : std::pow(r, 1.0); });
  auto est = asymptotic_compression(p, {2, 5});
  double xs[] = {std::log(2.0), std::log(3.0), std::log(4.0), std::log(5.0)};
  double ys[] = {std::log(2.0), std::log(3.0), std::log(8.0), std::log(5.0)};
  double mx = 0, my = 0;
  for (int i = 0; i < 4; ++i) mx += xs[i] / 4, my += ys[i] / 4;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 4; ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  EXPECT_NEAR(est.slope, sxy / sxx, 1e-12);
  double tail = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) tail = std::min(tail, ys[i] / xs[i]);
  EXPECT_NEAR(est.tail_min, tail, 1e-12);
}

TEST(Asymptotic, RejectsBadWindows) {
  auto p = CompressionProfile::synthetic(16, [](int r) { return std::sqrt(r); });
  EXPECT_THROW(asymptotic_compression(p, {1, 8}), EstimationError);
  EXPECT_THROW(asymptotic_compression(p, {8, 10}), EstimationError);
  EXPECT_THROW(asymptotic_compression(p, {8, 20}), EstimationError);
}

TEST(Asymptotic, TreeSlopes) {
  EXPECT_NEAR(asymptotic_compression(profile("f2", "tree", 16), {8, 16}).slope, 0.5, 1e-9);
  double weighted = asymptotic_compression(profile("f2", "weighted-tree:eps=0.25", 16), {8, 16}).slope;
  EXPECT_NEAR(weighted, 0.75, 0.05);
  EXPECT_NEAR(asymptotic_compression(profile("z2", "iso", 16), {8, 16}).slope, 1.0, 0.02);
}

TEST(Asymptotic, WeightedTreeSlopeApproachesThreeQuarters) {
  // Window [r/2, r]; the finite-window slope rises toward 1/2 + eps from below.
  double previous = 0.0;
  for (int r : {16, 32, 64}) {
    double s = asymptotic_compression(profile("f2", "weighted-tree:eps=0.25", r), {r / 2, r}).slope;
    EXPECT_GT(s, previous) << "r = " << r;
    EXPECT_LT(s, 0.75) << "r = " << r;
    previous = s;
    if (r >= 32) {
      EXPECT_GE(s, 0.72) << "r = " << r;
      EXPECT_LE(s, 0.78) << "r = " << r;
    }
  }
}

TEST(PairProfile, MatchesBruteForce) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 200; ++i) pairs.emplace_back(u(rng), u(rng));
  PairProfile p(pairs);
  for (double r : {0.0, 0.5, 3.3, 7.0, 9.99, 11.0}) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (auto [s, i] : pairs) {
      if (s >= r) lo = std::min(lo, i);
      if (s <= r) hi = std::max(hi, i);
    }
    EXPECT_EQ(p.rho(r), lo);
    EXPECT_EQ(p.rho_plus(r), hi);
  }
}

TEST(LipschitzFit, ConstantsFromPairs) {
  // image = 2 * source + 1 for source >= 1, and image 3 at source 0.5.
  PairProfile p({{0.5, 3.0}, {1.0, 3.0}, {2.0, 5.0}, {4.0, 9.0}});
  auto pointwise = lipschitz_fit(p, 0.0);
  EXPECT_DOUBLE_EQ(pointwise.D, 0.0);
  EXPECT_DOUBLE_EQ(pointwise.C, 6.0);
  auto large = lipschitz_fit(p, 1.0);
  EXPECT_DOUBLE_EQ(large.D, 3.0);
  EXPECT_DOUBLE_EQ(large.C, 1.5);
  EXPECT_THROW(lipschitz_fit(PairProfile({{0.0, 1.0}})), EstimationError);
}

TEST(Growth, Classification) {
  std::vector<double> n{8, 16, 32, 64, 128};
  EXPECT_EQ(classify_growth(n, {3, 3, 3, 3, 3}).growth, Growth::Bounded);
  EXPECT_EQ(classify_growth(n, {8, 16, 32, 64, 128}).growth, Growth::Grows);
  EXPECT_NEAR(classify_growth(n, {8, 16, 32, 64, 128}).log_slope, 1.0, 1e-12);
  std::vector<double> sqrt_like;
  for (double x : n) sqrt_like.push_back(std::pow(x, 0.27));
  EXPECT_EQ(classify_growth(n, sqrt_like).growth, Growth::Inconclusive);
}

TEST(Composition, StaircaseAfterIsometryOnZ) {
  CompositionParams p;
  p.r_max = 12;
  auto rep = composition_check(Space(GroupSpec::lattice(1)), EmbeddingSpec::staircase(), EmbeddingSpec::isometric(),
                               p);
  EXPECT_TRUE(rep.passed()) << rep.to_json().dump(2);
  EXPECT_EQ(rep.details["pointwise_violations"], 0);
}

TEST(Composition, BoundedInnerMapShortCircuits) {
  CompositionParams p;
  p.r_max = 8;
  auto rep = composition_check(Space(GroupSpec::lattice(2)), EmbeddingSpec::isometric(), EmbeddingSpec::constant(), p);
  EXPECT_TRUE(rep.passed()) << rep.to_json().dump(2);
  EXPECT_EQ(rep.details["slopes"]["short_circuit"], true);
}

TEST(Product, LatticeTimesFreeGroup) {
  ProductParams p;
  p.r_max = 12;
  p.slope_tolerance = 0.05;
  auto rep = product_check(GroupSpec::lattice(1), GroupSpec::free_group(2), EmbeddingSpec::isometric(),
                           EmbeddingSpec::tree(), p);
  EXPECT_EQ(rep.details["pointwise_violations"], 0);
  EXPECT_TRUE(rep.passed()) << rep.to_json().dump(2);
}
