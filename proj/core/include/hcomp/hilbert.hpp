#pragma once

// Finitely supported vectors in l^2 over symbolic coordinates, plus step
// functions in L^2(R) with exact rational breakpoints.

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "hcomp/spaces.hpp"

namespace hcomp {

using Rational = boost::rational<std::int64_t>;

/// An unordered Cayley-graph edge {parent, child}, stored with the shorter
/// endpoint first. In a free group one endpoint is always a one-letter
/// extension of the other, so "shorter first" is also the lexicographic
/// order. The oriented basis vector delta_edge is positive when the edge is
/// traversed from child to parent.
struct EdgeKey {
  ReducedWord parent;
  ReducedWord child;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

struct AxisKey {
  std::size_t index = 0;
  friend auto operator<=>(const AxisKey&, const AxisKey&) = default;
};

/// Canonicalizes an adjacent pair. Returns the edge and the sign of the
/// traversal u -> w relative to the canonical orientation (+1 for
/// child -> parent). Throws DomainError when u and w are not adjacent in the
/// standard Cayley graph.
std::pair<EdgeKey, int> make_edge(const ReducedWord& u, const ReducedWord& w);

/// `block` separates the summands of orthogonal direct sums.
struct CoordinateKey {
  std::uint32_t block = 0;
  std::variant<EdgeKey, AxisKey> key;

  friend bool operator==(const CoordinateKey&, const CoordinateKey&) = default;
  friend std::strong_ordering operator<=>(const CoordinateKey& a, const CoordinateKey& b);
};

struct Interval {
  Rational lo;
  Rational hi;
  double weight = 0.0;
};

/// A step function on R: disjoint sorted intervals with nonzero weights.
class IntervalFunction {
 public:
  IntervalFunction() = default;
  /// weight * indicator of [lo, hi] (empty if lo == hi).
  static IntervalFunction indicator(Rational lo, Rational hi, double weight = 1.0);

  const std::vector<Interval>& pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }

  IntervalFunction& add(const IntervalFunction& other, double scale = 1.0);

  double squared_norm() const;
  /// Exact sum of weight^2 * length; throws DomainError unless every
  /// weight^2 is an integer.
  Rational exact_squared_norm() const;
  double dot(const IntervalFunction& other) const;

 private:
  std::vector<Interval> pieces_;
};

class HilbertVector {
 public:
  using SparseMap = std::map<CoordinateKey, double>;
  using IntervalKey = std::pair<std::uint32_t, std::size_t>;  // (block, coordinate)
  using IntervalMap = std::map<IntervalKey, IntervalFunction>;

  HilbertVector() = default;

  void add(const CoordinateKey& key, double value);
  void add_interval(IntervalKey key, const IntervalFunction& f, double scale = 1.0);

  const SparseMap& sparse() const noexcept { return sparse_; }
  const IntervalMap& intervals() const noexcept { return intervals_; }
  bool is_zero() const noexcept { return sparse_.empty() && intervals_.empty(); }
  std::size_t support_size() const noexcept { return sparse_.size() + intervals_.size(); }

  HilbertVector& operator+=(const HilbertVector& other);
  HilbertVector& operator-=(const HilbertVector& other);
  HilbertVector& operator*=(double s);
  friend HilbertVector operator+(HilbertVector a, const HilbertVector& b) { return a += b; }
  friend HilbertVector operator-(HilbertVector a, const HilbertVector& b) { return a -= b; }

  double dot(const HilbertVector& other) const;
  double squared_norm() const;
  double norm() const;

  /// Remaps every block b to 2*b + side, the encoding of a binary direct sum.
  HilbertVector in_summand(unsigned side) const;

  /// Dense coordinates when the support is Axis keys in block 0 only.
  std::optional<std::vector<double>> axis_coordinates(std::size_t dimension) const;
  bool edge_supported() const;

 private:
  SparseMap sparse_;
  IntervalMap intervals_;
};

}  // namespace hcomp
