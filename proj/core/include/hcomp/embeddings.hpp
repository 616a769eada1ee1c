#pragma once

// Large-scale Lipschitz maps into Hilbert space: (weighted) tree embeddings
// of free groups, staircase maps R -> L^2(R), l^1 -> l^2 maps, coordinate
// isometries, orthogonal direct sums and compositions.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "hcomp/hilbert.hpp"
#include "hcomp/spaces.hpp"

namespace hcomp {

/// f_eps(s) = sum_j j^eps * delta_{e_j(s)}, where e_1(s), e_2(s), ... are
/// the edges of the geodesic from s toward the identity, counted from s.
/// eps = 0 is the unweighted tree embedding.
struct TreeEmbedding {
  double eps = 0.0;
};
/// The coordinate vector itself (Axis keys). `dimension` < 0 accepts any
/// source dimension.
struct CoordinateIsometric {
  int dimension = -1;
};
/// x -> indicator of [0, x] (or [x, 0]) in L^2(R).
struct Staircase {};
/// Direct sum of staircases, one per coordinate.
struct L1ToL2 {};
/// Every point to the zero vector.
struct ConstantMap {};

class EmbeddingSpec;

struct DirectSumSpec {
  std::shared_ptr<const EmbeddingSpec> first;
  std::shared_ptr<const EmbeddingSpec> second;
};

struct ComposeSpec {
  std::shared_ptr<const EmbeddingSpec> outer;
  std::shared_ptr<const EmbeddingSpec> inner;
};

class EmbeddingSpec {
 public:
  using Variant = std::variant<TreeEmbedding, CoordinateIsometric, Staircase, L1ToL2, ConstantMap,
                               DirectSumSpec, ComposeSpec>;

  /// Throws DomainError unless 0 <= eps < 1/2.
  static EmbeddingSpec tree(double eps = 0.0);
  static EmbeddingSpec isometric(int dimension = -1) { return EmbeddingSpec(CoordinateIsometric{dimension}); }
  static EmbeddingSpec staircase() { return EmbeddingSpec(Staircase{}); }
  static EmbeddingSpec l1_to_l2() { return EmbeddingSpec(L1ToL2{}); }
  static EmbeddingSpec constant() { return EmbeddingSpec(ConstantMap{}); }

  const Variant& variant() const noexcept { return v_; }
  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(v_);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(v_);
  }

  /// Canonical spec string, parseable by parse_embedding.
  std::string name() const;

 private:
  explicit EmbeddingSpec(Variant v) : v_(std::move(v)) {}
  friend EmbeddingSpec direct_sum(EmbeddingSpec f, EmbeddingSpec g);
  friend EmbeddingSpec compose(EmbeddingSpec outer, EmbeddingSpec inner);
  Variant v_;
};

/// h(x, y) = f(x) (+) g(y) on a two-factor product.
EmbeddingSpec direct_sum(EmbeddingSpec f, EmbeddingSpec g);
/// outer o inner. The inner map must produce coordinate vectors.
EmbeddingSpec compose(EmbeddingSpec outer, EmbeddingSpec inner);

/// Throws ConfigError when `spec` cannot be evaluated on `space`.
void validate_embedding(const EmbeddingSpec& spec, const Space& space);

HilbertVector embed(const EmbeddingSpec& spec, const Space& space, const Point& x);

/// ||f(x) - f(y)||^2 through per-variant closed forms; nothing is
/// materialized for trees, lattices and sums.
double pair_distance_squared(const EmbeddingSpec& spec, const Space& space, const Point& x, const Point& y);
double pair_distance(const EmbeddingSpec& spec, const Space& space, const Point& x, const Point& y);
/// Reference path: embeds both points and takes the sparse difference.
double materialized_pair_distance(const EmbeddingSpec& spec, const Space& space, const Point& x,
                                  const Point& y);

/// Staircase image of a rational point, kept exact.
HilbertVector staircase_vector(const Rational& x);

/// Squared tree distance from the (|s|, |t|, common prefix) triple:
///   sum_{j<=ks-p} j^{2eps} + sum_{j<=kt-p} j^{2eps}
///     + sum_{m=1..p} ((ks-m+1)^eps - (kt-m+1)^eps)^2.
/// Throws DomainError unless 0 <= p <= min(ks, kt).
double weighted_tree_closed_form(int ks, int kt, int p, double eps);

/// eps^2 / (1 - 2 eps): bound on sum_{j>=2} (j^eps - (j-1)^eps)^2.
double lipschitz_generator_bound(double eps);

/// 1 / (2^{2eps+1} (2eps+1)): ||f_eps(s) - f_eps(t)||^2 >= C r^{1+2eps}
/// whenever d(s,t) >= r.
double compression_lower_constant(double eps);

}  // namespace hcomp
