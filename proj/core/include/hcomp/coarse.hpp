#pragma once

// Coarse geometry on finite samples: uniform embeddings, quasi-geodesic
// chains, the subchain extraction behind large-scale Lipschitz bounds, and
// quasi-isometry constants.
//
// Properness and boundedness cannot be decided from finite data. Every
// verdict here is pass / fail / inconclusive on the tested range, and the
// range is part of the report.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcomp/compression.hpp"
#include "hcomp/report.hpp"
#include "hcomp/spaces.hpp"

namespace hcomp {

using Metric = std::function<double(std::size_t, std::size_t)>;

/// A map f: X -> Y known on finitely many points: source point i goes to
/// target point image[i].
struct MapSample {
  PointCloud source;
  PointCloud target;
  std::vector<std::size_t> image;

  /// image[i] = i. Throws InputError unless both clouds have the same size.
  static MapSample parallel(PointCloud source, PointCloud target);
  /// Throws InputError on an out-of-range image index.
  MapSample(PointCloud source, PointCloud target, std::vector<std::size_t> image);

  std::size_t size() const noexcept { return image.size(); }
  double dx(std::size_t i, std::size_t j) const { return source.distance(i, j); }
  double dy(std::size_t i, std::size_t j) const { return target.distance(image[i], image[j]); }
  /// Largest source distance in the sample.
  double coverage() const;
  PairProfile pairs() const;
  /// The image f(X) as a cloud with the metric induced from the target.
  PointCloud image_cloud() const;
};

/// Pass when rho_- strictly increases through r_max/4, r_max/2, r_max;
/// fail when rho_-(r_max) <= rho_-(r_max/4); inconclusive when the sample
/// does not reach source distance r_max or the increase is not strict.
CheckReport check_uniform_embedding(const MapSample& sample, double r_max);

struct QGPair {
  std::size_t from = 0;
  std::size_t to = 0;
  double distance = 0.0;
  /// Shortest path length in the delta-graph; +inf when disconnected.
  double path_length = 0.0;
  /// Smallest possible largest step over all chains from `from` to `to`.
  double bottleneck = 0.0;
  std::vector<std::size_t> chain;
  bool ok = false;
};

struct QGWitness {
  double lambda = 1.0;
  double delta = 1.0;
  std::size_t tested = 0;
  std::size_t failures = 0;
  /// Component sizes of the delta-graph, largest first.
  std::vector<std::size_t> components;
  /// The pair with the largest path_length / (lambda * distance).
  std::optional<QGPair> worst;
  /// Failing pairs, in order, up to `max_reported`.
  std::vector<QGPair> failing;
  /// Minimum spanning tree edges longer than delta: jumps no delta-chain
  /// can avoid.
  std::vector<double> gaps;

  bool connected() const noexcept { return components.size() <= 1; }
  bool passed() const noexcept { return failures == 0; }
  CheckReport report() const;
};

struct QGParams {
  double lambda = 1.0;
  double delta = 1.0;
  /// Pairs to test; empty means all unordered pairs.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t max_reported = 16;
};

/// Dijkstra over the graph joining points at distance <= delta, weighted
/// by distance. A pair passes when its path length is at most
/// lambda * distance. Throws DomainError unless lambda >= 1 and delta > 0.
QGWitness check_quasi_geodesic(std::size_t n, const Metric& metric, const QGParams& params);
QGWitness check_quasi_geodesic(const PointCloud& cloud, const QGParams& params);

struct Subchain {
  /// i_0 = 0 < i_1 < ... < i_m.
  std::vector<std::size_t> indices;
  /// Last chain index.
  std::size_t terminal = 0;
  std::vector<double> gaps;
  double terminal_gap = 0.0;

  std::size_t m() const noexcept { return indices.empty() ? 0 : indices.size() - 1; }
  /// The indices followed by the terminal, unless it is already the last one.
  std::vector<std::size_t> with_terminal() const;
};

/// Greedy extraction: from x_{i_j}, take the first later point at distance
/// >= delta/2; stop when none is left. Gaps then lie in [delta/2, 3delta/2]
/// and the terminal point is within delta/2 of x_{i_m}. Throws DomainError
/// on an empty chain, delta <= 0, or a step longer than delta.
Subchain extract_subchain(std::size_t length, const Metric& metric, double delta);
Subchain extract_subchain(const std::vector<double>& chain, double delta);

/// C = 2 lambda rho_+(3 delta/2) / delta, D = rho_+(delta/2). Throws
/// EstimationError when rho_+ is not finite and non-negative there.
LipschitzFit lslip_from_rho_plus(const std::function<double(double)>& rho_plus, double lambda, double delta);
/// Same from sampled pairs; max_violation is max(image - C source - D).
LipschitzFit lslip_from_rho_plus(const PairProfile& pairs, double lambda, double delta);

struct QIConstants {
  double C = 1.0;
  double D = 0.0;
  double K = 0.0;
  double delta_prime = 0.0;
  double lambda_prime = 0.0;

  nlohmann::json to_json() const;
};

/// delta' = 3 delta C / 2 + D, lambda' = 2 C (D + delta') lambda / delta + 1.
/// Throws DomainError unless C > 0, D >= 0, lambda >= 1, delta > 0.
QIConstants coarse_to_qi_constants(double C, double D, double lambda, double delta);

/// Large-scale Lipschitz constants of f and of a coarse inverse g with
/// d(gf(x), x) <= K and d(fg(y), y) <= K.
struct CoarseEquivalence {
  LipschitzFit f;
  LipschitzFit g;
  double K = 0.0;
};

/// C = max(C_f, C_g), D = max(D_f, (2K + D_g) / C_g), so that
/// d_X / C - D <= d_Y(f x, f x') <= C d_X + D. delta' and lambda' follow
/// from (C, D, lambda, delta).
QIConstants qi_from_coarse_equivalence(const CoarseEquivalence& e, double lambda, double delta);

struct QIParams {
  /// Additive budget: the fit takes the smallest grid C whose minimal D is
  /// at most this.
  double d_allow = 0.0;
  /// When both are set, verify these constants instead of fitting.
  std::optional<double> C;
  std::optional<double> D;
  /// When set, also require every target point within K of the image.
  std::optional<double> K;
};

/// Two-sided fit of C^-1 d_X - D <= d_Y <= C d_X + D with a shared C, over
/// the grid C = 2^(i/8), i = 0..80. Details carry C_upper = max (d_Y - D)/d_X
/// and C_lower = max d_X/(d_Y + D) at D = d_allow. Fails when no grid C
/// fits. Throws EstimationError on a sample without two distinct points.
CheckReport check_quasi_isometry(const MapSample& sample, const QIParams& params = {});

/// Fits each sample and classifies C_lower and C_upper against the source
/// coverage. Fails when either grows, passes when both stay bounded.
CheckReport check_quasi_isometry_over_range(const std::vector<MapSample>& samples, const QIParams& params = {});

struct MapFamilyReport {
  CheckReport uniform_embedding;
  /// Pointwise Lipschitz constant (d_scale = 0) per sample.
  GrowthFit lipschitz;
  /// Large-scale constant C at d_scale = 1 per sample.
  GrowthFit large_scale;

  Verdict is_lipschitz() const;
  Verdict is_large_scale_lipschitz() const;
  nlohmann::json to_json() const;
};

/// Classifies a map from growing samples of it. Sample sizes are the source
/// coverages; the uniform-embedding check runs on the largest sample.
MapFamilyReport classify_map_family(const std::vector<MapSample>& samples);

}  // namespace hcomp
