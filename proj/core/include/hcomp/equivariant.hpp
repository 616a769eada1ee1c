#pragma once

// The left action of a free group on its Cayley-graph edges, the tree
// cocycle b, and the equivariant compression of b.
//
// b(s) is the sum of oriented edge vectors along the path from s back to
// the identity, so b(st) = pi_s b(t) + b(s) holds exactly and
// |b(s) - b(t)|^2 = d(s, t).

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcomp/compression.hpp"
#include "hcomp/hilbert.hpp"
#include "hcomp/spaces.hpp"

namespace hcomp {

/// pi_s: left translation of edge keys, {u, w} -> {su, sw}, with the sign
/// following the orientation. Throws DomainError on a non-edge coordinate.
HilbertVector act(const ReducedWord& s, const HilbertVector& v);

/// The tree cocycle b(s).
HilbertVector tree_cocycle(const ReducedWord& s);

/// s . x = pi_s(x) + b(s).
HilbertVector affine_act(const ReducedWord& s, const HilbertVector& x);

using Cocycle = std::function<HilbertVector(const ReducedWord&)>;
using Representation = std::function<HilbertVector(const ReducedWord&, const HilbertVector&)>;

struct CocycleCheck {
  double max_residual = 0.0;
  std::size_t samples = 0;
  ReducedWord worst_s;
  ReducedWord worst_t;

  nlohmann::json to_json() const;
};

/// max over the samples of |b(st) - pi_s b(t) - b(s)|.
CocycleCheck verify_cocycle(const std::vector<std::pair<ReducedWord, ReducedWord>>& samples,
                            const Cocycle& b = tree_cocycle, const Representation& pi = act);

/// `count` pairs drawn uniformly from the ball of radius `radius` in F_rank.
std::vector<std::pair<ReducedWord, ReducedWord>> random_ball_pairs(int rank, int radius, std::size_t count,
                                                                   std::uint64_t seed);

struct EquivariantParams {
  int r_max = 16;
  int rank = 2;
  /// Spheres up to this size are enumerated in full; larger ones are sampled.
  std::size_t sphere_cap = 200'000;
  std::size_t sphere_samples = 4096;
  std::uint64_t seed = 0;
  /// Slope window; lo = 0 means [r_max/2, r_max].
  Window window;
};

struct EquivariantEstimate {
  std::vector<int> r_grid;
  /// (a) inf of |b(s)| over r <= |s| <= r_max.
  std::vector<double> rho_sphere;
  /// (b) inf of |b(s) - b(t)| over pairs with d(s, t) >= r.
  std::vector<double> rho_pairwise;
  /// min |b(s)| on the sphere |s| = n, n = 0..r_max.
  std::vector<double> sphere_min;
  /// "exact" or "sampled" per sphere.
  std::vector<std::string> sphere_strategy;
  double max_disagreement = 0.0;
  /// Largest |b(s) - b(t)|^2 - d(s,t) over the materialized representative pairs.
  double representative_error = 0.0;
  AsymptoticEstimate slope;

  bool consistent(double tol = 1e-12) const noexcept { return max_disagreement <= tol; }
  nlohmann::json to_json() const;
};

/// (a) from sphere norms of b, (b) from the pairwise profile of b over
/// B(ceil(r_max/2)) with every (|s|, |t|, lcp) class checked on a
/// materialized representative. The slope is a lower estimate for the
/// equivariant compression of F_rank; its ceiling of 1/2 is not computed.
EquivariantEstimate equivariant_compression(const EquivariantParams& params = {});

}  // namespace hcomp
