#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "hcomp/embeddings.hpp"
#include "hcomp/error.hpp"
#include "hcomp/parse.hpp"

using namespace hcomp;

namespace {

// Weighted tree vector as a map from the child endpoint of each edge on
// the geodesic [e, s] to its coefficient (k - m + 1)^eps, m = child depth.
std::map<std::string, double> tree_oracle(const std::string& s, double eps) {
  std::map<std::string, double> v;
  const auto k = static_cast<double>(s.size());
  for (std::size_t m = 1; m <= s.size(); ++m) v[s.substr(0, m)] = std::pow(k - m + 1, eps);
  return v;
}

double oracle_distance_squared(const std::string& s, const std::string& t, double eps) {
  auto a = tree_oracle(s, eps);
  auto b = tree_oracle(t, eps);
  for (const auto& [key, value] : b) a[key] -= value;
  double sum = 0.0;
  for (const auto& [key, value] : a) sum += value * value;
  return sum;
}

}  // namespace

TEST(TreeEmbedding, SquaredDistanceEqualsWordDistance) {
  Space f(GroupSpec::free_group(2));
  auto spec = EmbeddingSpec::tree();
  Ball b = f.ball(3);
  for (const auto& s : b.points)
    for (const auto& t : b.points) {
      double d = f.distance(s, t);
      EXPECT_EQ(pair_distance_squared(spec, f, s, t), d);
      double m = materialized_pair_distance(spec, f, s, t);
      EXPECT_EQ(std::llround(m * m), std::llround(d));
    }
}

TEST(TreeEmbedding, WeightedMatchesEdgeOracle) {
  Space f(GroupSpec::free_group(2));
  Ball b = f.ball(4);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, b.points.size() - 1);
  for (double eps : {0.1, 0.25, 0.4}) {
    auto spec = EmbeddingSpec::tree(eps);
    for (int i = 0; i < 500; ++i) {
      const auto& s = b.points[pick(rng)];
      const auto& t = b.points[pick(rng)];
      double expect = oracle_distance_squared(s.word().letters(), t.word().letters(), eps);
      EXPECT_NEAR(pair_distance_squared(spec, f, s, t), expect, 1e-10);
      double m = materialized_pair_distance(spec, f, s, t);
      EXPECT_NEAR(m * m, expect, 1e-10);
    }
  }
}

TEST(TreeEmbedding, GeneratorStepsObeyLipschitzBound) {
  Space f(GroupSpec::free_group(2));
  Ball b = f.ball(6);
  for (double eps : {0.1, 0.25, 0.4}) {
    auto spec = EmbeddingSpec::tree(eps);
    double bound = 1.0 + lipschitz_generator_bound(eps);
    for (const auto& s : b.points)
      for (char c : std::string("aAbB")) {
        auto t = s.word() * reduce_word(std::string(1, c));
        EXPECT_LE(pair_distance_squared(spec, f, s, Point(t)), bound + 1e-12);
      }
  }
}

TEST(TreeEmbedding, Constants) {
  EXPECT_DOUBLE_EQ(lipschitz_generator_bound(0.25), 0.125);
  EXPECT_DOUBLE_EQ(compression_lower_constant(0.0), 0.5);
  EXPECT_DOUBLE_EQ(compression_lower_constant(0.25), 1.0 / (std::pow(2.0, 1.5) * 1.5));
  EXPECT_THROW(lipschitz_generator_bound(0.5), DomainError);
  EXPECT_THROW(EmbeddingSpec::tree(-0.1), Error);
}

TEST(Staircase, SquaredDistanceIsExactGap) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> num(-500, 500), den(1, 97);
  for (int i = 0; i < 300; ++i) {
    Rational x(num(rng), den(rng)), y(num(rng), den(rng));
    auto diff = staircase_vector(x) - staircase_vector(y);
    Rational expect = x > y ? x - y : y - x;
    if (expect == Rational(0)) {
      EXPECT_TRUE(diff.is_zero());
      continue;
    }
    ASSERT_EQ(diff.intervals().size(), 1u);
    EXPECT_EQ(diff.intervals().begin()->second.exact_squared_norm(), expect);
  }
}

TEST(Isometric, LatticeDistanceIsEuclidean) {
  Space z(GroupSpec::lattice(2));
  auto spec = EmbeddingSpec::isometric();
  Point x(IntVector{3, -1}), y(IntVector{0, 3});
  EXPECT_DOUBLE_EQ(pair_distance_squared(spec, z, x, y), 25.0);
  EXPECT_DOUBLE_EQ(materialized_pair_distance(spec, z, x, y), 5.0);
}

TEST(L1ToL2, SquaredDistanceIsL1) {
  Space z(GroupSpec::lattice(3));
  auto spec = EmbeddingSpec::l1_to_l2();
  Point x(IntVector{1, -2, 4}), y(IntVector{-3, 0, 4});
  EXPECT_DOUBLE_EQ(pair_distance_squared(spec, z, x, y), 6.0);
  double m = materialized_pair_distance(spec, z, x, y);
  EXPECT_NEAR(m * m, 6.0, 1e-12);
}

TEST(DirectSum, AddsSquaredDistances) {
  Space p(parse_group("prod(z1,f2)"));
  auto spec = parse_embedding("sum(iso,tree)");
  Point x(ProductPoint{Point(IntVector{2}), Point(reduce_word("ab"))});
  Point y(ProductPoint{Point(IntVector{-1}), Point(reduce_word("aB"))});
  EXPECT_DOUBLE_EQ(pair_distance_squared(spec, p, x, y), 9.0 + 2.0);
  double m = materialized_pair_distance(spec, p, x, y);
  EXPECT_NEAR(m * m, 11.0, 1e-12);
}

TEST(Embedding, ValidationRejectsMismatch) {
  Space heis(GroupSpec::heisenberg());
  EXPECT_THROW(validate_embedding(EmbeddingSpec::tree(), heis), Error);
  Space z(GroupSpec::lattice(2));
  EXPECT_THROW(validate_embedding(EmbeddingSpec::staircase(), z), Error);
}

TEST(Embedding, ParseRoundTrip) {
  for (std::string text : {"tree", "iso", "staircase", "l1l2", "const", "sum(iso,tree)", "compose(l1l2,iso)"})
    EXPECT_EQ(parse_embedding(text).name(), text);
  EXPECT_THROW(parse_embedding("sum(iso)"), InputError);
  EXPECT_THROW(parse_embedding("bogus"), InputError);
}
