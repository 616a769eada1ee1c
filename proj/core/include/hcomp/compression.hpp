#pragma once

// Compression and expansion profiles over finite balls, the asymptotic
// compression estimate, Lipschitz fits, and the composition / product
// checks.
//
// Every profile is an infimum (or supremum) over pairs inside a finite ball
// only; it is never smaller than the true compression restricted to those
// points and can exceed the compression of the whole space.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcomp/embeddings.hpp"
#include "hcomp/report.hpp"
#include "hcomp/spaces.hpp"

namespace hcomp {

enum class StrategyKind { Auto, ExactPairwise, TreeClosedForm, Sampled, ProductLevels };

struct Strategy {
  StrategyKind kind = StrategyKind::Auto;
  std::uint64_t seed = 0;
  std::uint64_t count = 1'000'000;

  static Strategy automatic() { return {}; }
  static Strategy exact() { return {StrategyKind::ExactPairwise}; }
  static Strategy closed_form() { return {StrategyKind::TreeClosedForm}; }
  static Strategy sampled(std::uint64_t seed, std::uint64_t count = 1'000'000) {
    return {StrategyKind::Sampled, seed, count};
  }
  static Strategy product_levels() { return {StrategyKind::ProductLevels}; }

  /// "exact-pairwise", "tree-closed-form", "sampled(seed=S,count=N)",
  /// "product-levels", "auto".
  std::string tag() const;
  /// Inverse of tag(); also accepts "exact", "closed-form", "sampled" with
  /// defaults. Throws InputError.
  static Strategy parse(const std::string& text);
  bool is_exact() const noexcept { return kind != StrategyKind::Sampled; }
};

/// Extreme image distances per integer source-distance level.
///
/// A pair at source distance d contributes its image distance to min_image
/// at level floor(d) and to max_image at level ceil(d); for integer metrics
/// both coincide. Then rho(r) = min over levels >= r and rho_plus(r) = max
/// over levels <= r, both exact at integer r.
struct LevelTable {
  std::vector<double> min_image;
  std::vector<double> max_image;
  /// Unordered pairs of distinct points with ceil(d) == level.
  std::vector<std::uint64_t> pairs;
  std::uint64_t points = 0;

  void record(double source, double image, std::uint64_t count = 1);
  void merge(const LevelTable& other);
  int max_level() const noexcept { return static_cast<int>(min_image.size()) - 1; }

 private:
  void grow(std::size_t level);
};

struct CompressionProfile {
  std::vector<int> r_grid;
  std::vector<double> rho;
  std::vector<double> rho_star;
  std::vector<double> rho_plus;
  std::vector<std::uint64_t> pair_count;
  Strategy strategy;
  int requested_r_max = 0;
  int ball_radius = 0;
  std::uint64_t ball_points = 0;
  std::string space;
  std::string embedding;
  std::vector<std::string> warnings;

  int r_max() const noexcept { return r_grid.empty() ? 0 : r_grid.back(); }
  /// Values at integer r in 1..r_max; throws DomainError outside the grid.
  double rho_at(int r) const;
  double rho_plus_at(int r) const;

  /// Profile of an explicit function, e.g. r^alpha; strategy tag "exact".
  static CompressionProfile synthetic(int r_max, const std::function<double(int)>& rho);
  static CompressionProfile from_levels(const LevelTable& table, int r_max);

  nlohmann::json to_json() const;
};

/// `r,rho,rho_star,rho_plus,pairs`.
void write_profile_csv(std::ostream& out, const CompressionProfile& profile);
/// Inverse of write_profile_csv; the strategy tag is "exact" unless given.
/// Throws InputError on a malformed table.
CompressionProfile read_profile_csv(std::istream& in, const Strategy& strategy = Strategy::exact());

struct ProfileParams {
  int r_max = 16;
  /// Radius of the enumerated ball; < 0 means ceil(r_max / 2), the smallest
  /// ball realizing source distance r_max.
  int ball_radius = -1;
  Strategy strategy;
  /// Cap on evaluated pairs for the exact strategy (HCOMP_MAX_PAIRS).
  std::uint64_t max_pairs = 150'000'000;
};

/// Throws CapacityError (suggesting the sampled strategy) when the ball or
/// the pair count exceeds its cap, ConfigError for an unsupported
/// strategy/space/embedding combination. A profile with no pair at
/// distance >= r for some r <= r_max is truncated with a warning.
CompressionProfile compression_profile(const Space& space, const EmbeddingSpec& spec, const ProfileParams& params);

/// Level table behind a profile, for the given strategy (Auto resolved).
LevelTable level_table(const Space& space, const EmbeddingSpec& spec, int ball_radius, const Strategy& strategy,
                       std::uint64_t max_pairs = 150'000'000);

/// Strategy chosen by Auto for this pairing.
Strategy resolve_strategy(const Space& space, const EmbeddingSpec& spec, const Strategy& requested);

/// One realizable (|s|, |t|, lcp) class of ordered pairs in a standard free
/// group ball.
struct TreeTriple {
  int ks = 0;
  int kt = 0;
  int p = 0;
  /// Ordered pairs (s, t) in the class; the diagonal s = t is left out.
  std::uint64_t ordered_pairs = 0;
};

/// All classes with |s|, |t| <= radius in F_rank, with exact ordered counts
/// (saturating at 2^64 - 1).
std::vector<TreeTriple> tree_triples(int rank, int radius);

// ---------------------------------------------------------------------------

struct Window {
  int lo = 0;
  int hi = 0;
};

struct AsymptoticEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double tail_min = 0.0;
  Window window;
  double residual = 0.0;
  int points = 0;
  std::string strategy;

  nlohmann::json to_json() const;
};

/// Least-squares slope of log rho*(r) against log r over the window, and
/// the minimum of log rho*(r) / log r there. Throws EstimationError when
/// lo < 2, the window leaves the grid, or it holds fewer than 4 points.
AsymptoticEstimate asymptotic_compression(const CompressionProfile& profile, Window window);
/// Window [r_max/2, r_max].
AsymptoticEstimate asymptotic_compression(const CompressionProfile& profile);

// ---------------------------------------------------------------------------

/// Evaluated (source distance, image distance) pairs supporting profile
/// queries at real arguments.
class PairProfile {
 public:
  PairProfile() = default;
  explicit PairProfile(std::vector<std::pair<double, double>> pairs);

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  const std::vector<std::pair<double, double>>& pairs() const noexcept { return pairs_; }
  double max_source() const noexcept { return pairs_.empty() ? 0.0 : pairs_.back().first; }

  /// min image over pairs with source >= r; +inf when there are none.
  double rho(double r) const;
  /// max image over pairs with source <= r; 0 when there are none.
  double rho_plus(double r) const;

  /// Integer-grid profile 1..r_max built from these pairs.
  CompressionProfile to_profile(int r_max, const std::string& tag) const;

 private:
  std::vector<std::pair<double, double>> pairs_;  // sorted by source
  std::vector<double> suffix_min_;
  std::vector<double> prefix_max_;
};

/// All unordered pairs (i < j) of a finite sample: source distances from
/// `source`, image distances from `image`.
PairProfile pair_profile(std::size_t n, const std::function<double(std::size_t, std::size_t)>& source,
                         const std::function<double(std::size_t, std::size_t)>& image);

/// Pairs of ball points under an embedding.
PairProfile embedding_pairs(const Space& space, const EmbeddingSpec& spec, const Ball& ball);

struct LipschitzFit {
  double C = 0.0;
  double D = 0.0;
  double max_violation = 0.0;
  std::size_t pairs = 0;

  nlohmann::json to_json() const;
};

/// D := rho_plus(d_scale), C := max over pairs of (image - D) / source,
/// clipped at 0. With d_scale = 0 this is the pointwise Lipschitz constant.
/// Throws EstimationError without a pair at source distance > 0.
LipschitzFit lipschitz_fit(const PairProfile& pairs, double d_scale = 1.0);

enum class Growth { Bounded, Grows, Inconclusive };
std::string to_string(Growth g);

struct GrowthFit {
  std::vector<double> sizes;
  std::vector<double> values;
  double log_slope = 0.0;
  Growth growth = Growth::Inconclusive;
};

/// Classifies how a fitted constant behaves over growing sample sizes by
/// the log-log slope of value against size: >= 0.35 grows, <= 0.2 bounded.
GrowthFit classify_growth(std::vector<double> sizes, std::vector<double> values);

// ---------------------------------------------------------------------------

struct CompositionParams {
  int r_max = 16;
  /// Additive slack on R_{f o g} >= R_f R_g.
  double slope_tolerance = 0.03;
  /// Relative slack on the pointwise inequality (floating roundoff only).
  double pointwise_tolerance = 1e-9;
};

/// Checks rho_{f o g}(r) >= rho_f(rho_g(r)) on 1..r_max and
/// R_{f o g} >= R_f R_g - tolerance, with g : space -> coordinates and f
/// evaluated on the image cloud g(B). The image cloud carries the l^1 metric
/// when f is a staircase-type map and the Euclidean metric otherwise. When
/// rho_g is constant on the tail window (g bounded on the tested range) the
/// slope comparison is short-circuited. Throws ConfigError when g does not
/// produce coordinates or the grids are incompatible.
CheckReport composition_check(const Space& space, const EmbeddingSpec& f, const EmbeddingSpec& g,
                              const CompositionParams& params);

struct ProductParams {
  int r_max = 16;
  double slope_tolerance = 0.02;
  double pointwise_tolerance = 1e-9;
};

/// On X x Y with h = f (+) g: rho_h(r) >= (1/sqrt 2) min(rho_f(ceil(r/2)),
/// rho_g(ceil(r/2))) for r in 1..r_max, and R_h >= min(R_f, R_g) - tolerance.
/// A factor without pairs (a single point) drops out of the minimum.
CheckReport product_check(const GroupSpec& x, const GroupSpec& y, const EmbeddingSpec& f, const EmbeddingSpec& g,
                          const ProductParams& params, const SpaceOptions& options = SpaceOptions::from_env());

}  // namespace hcomp
