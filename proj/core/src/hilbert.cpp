#include "hcomp/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "hcomp/error.hpp"

namespace hcomp {

namespace {

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

// Weight of `f` on the open elementary interval starting at `at`; `cursor`
// advances monotonically across calls with increasing `at`.
double weight_at(const std::vector<Interval>& f, const Rational& at, std::size_t& cursor) {
  while (cursor < f.size() && f[cursor].hi <= at) ++cursor;
  if (cursor < f.size() && f[cursor].lo <= at) return f[cursor].weight;
  return 0.0;
}

}  // namespace

std::pair<EdgeKey, int> make_edge(const ReducedWord& u, const ReducedWord& w) {
  if (u.length() + 1 == w.length() && common_prefix(u, w) == u.length()) return {EdgeKey{u, w}, -1};
  if (w.length() + 1 == u.length() && common_prefix(u, w) == w.length()) return {EdgeKey{w, u}, +1};
  throw DomainError("words " + u.str() + " and " + w.str() + " are not adjacent");
}

std::strong_ordering operator<=>(const CoordinateKey& a, const CoordinateKey& b) {
  if (auto c = a.block <=> b.block; c != 0) return c;
  if (auto c = a.key.index() <=> b.key.index(); c != 0) return c;
  if (a.key.index() == 0) {
    const auto& x = std::get<EdgeKey>(a.key);
    const auto& y = std::get<EdgeKey>(b.key);
    if (auto c = x.parent <=> y.parent; c != 0) return c;
    return x.child <=> y.child;
  }
  return std::get<AxisKey>(a.key).index <=> std::get<AxisKey>(b.key).index;
}

// ---------------------------------------------------------------------------

IntervalFunction IntervalFunction::indicator(Rational lo, Rational hi, double weight) {
  if (hi < lo) throw DomainError("interval with hi < lo");
  IntervalFunction f;
  if (lo != hi && weight != 0.0) f.pieces_.push_back({lo, hi, weight});
  return f;
}

IntervalFunction& IntervalFunction::add(const IntervalFunction& other, double scale) {
  std::vector<Rational> cuts;
  cuts.reserve(2 * (pieces_.size() + other.pieces_.size()));
  for (const auto& p : pieces_) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  for (const auto& p : other.pieces_) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Interval> merged;
  std::size_t ca = 0, cb = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double w = weight_at(pieces_, cuts[i], ca) + scale * weight_at(other.pieces_, cuts[i], cb);
    if (w == 0.0) continue;
    if (!merged.empty() && merged.back().hi == cuts[i] && merged.back().weight == w)
      merged.back().hi = cuts[i + 1];
    else
      merged.push_back({cuts[i], cuts[i + 1], w});
  }
  pieces_ = std::move(merged);
  return *this;
}

double IntervalFunction::squared_norm() const {
  double s = 0.0;
  for (const auto& p : pieces_) s += p.weight * p.weight * to_double(p.hi - p.lo);
  return s;
}

Rational IntervalFunction::exact_squared_norm() const {
  Rational s = 0;
  for (const auto& p : pieces_) {
    double w2 = p.weight * p.weight;
    if (w2 != std::floor(w2) || w2 > 1e15) throw DomainError("exact norm needs integral squared weights");
    s += Rational(static_cast<std::int64_t>(w2)) * (p.hi - p.lo);
  }
  return s;
}

double IntervalFunction::dot(const IntervalFunction& other) const {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < other.pieces_.size()) {
    const auto& a = pieces_[i];
    const auto& b = other.pieces_[j];
    Rational lo = std::max(a.lo, b.lo);
    Rational hi = std::min(a.hi, b.hi);
    if (lo < hi) s += a.weight * b.weight * to_double(hi - lo);
    if (a.hi < b.hi)
      ++i;
    else
      ++j;
  }
  return s;
}

// ---------------------------------------------------------------------------

void HilbertVector::add(const CoordinateKey& key, double value) {
  if (value == 0.0) return;
  auto [it, inserted] = sparse_.emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) sparse_.erase(it);
  }
}

void HilbertVector::add_interval(IntervalKey key, const IntervalFunction& f, double scale) {
  auto& slot = intervals_[key];
  slot.add(f, scale);
  if (slot.empty()) intervals_.erase(key);
}

HilbertVector& HilbertVector::operator+=(const HilbertVector& other) {
  for (const auto& [k, v] : other.sparse_) add(k, v);
  for (const auto& [k, f] : other.intervals_) add_interval(k, f, 1.0);
  return *this;
}

HilbertVector& HilbertVector::operator-=(const HilbertVector& other) {
  for (const auto& [k, v] : other.sparse_) add(k, -v);
  for (const auto& [k, f] : other.intervals_) add_interval(k, f, -1.0);
  return *this;
}

HilbertVector& HilbertVector::operator*=(double s) {
  if (s == 0.0) {
    sparse_.clear();
    intervals_.clear();
    return *this;
  }
  for (auto& [k, v] : sparse_) v *= s;
  for (auto& [k, f] : intervals_) {
    IntervalFunction scaled;
    scaled.add(f, s);
    f = std::move(scaled);
  }
  return *this;
}

double HilbertVector::dot(const HilbertVector& other) const {
  double s = 0.0;
  auto a = sparse_.begin();
  auto b = other.sparse_.begin();
  while (a != sparse_.end() && b != other.sparse_.end()) {
    if (a->first < b->first)
      ++a;
    else if (b->first < a->first)
      ++b;
    else {
      s += a->second * b->second;
      ++a;
      ++b;
    }
  }
  for (const auto& [k, f] : intervals_) {
    auto it = other.intervals_.find(k);
    if (it != other.intervals_.end()) s += f.dot(it->second);
  }
  return s;
}

double HilbertVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [k, v] : sparse_) s += v * v;
  for (const auto& [k, f] : intervals_) s += f.squared_norm();
  return s;
}

double HilbertVector::norm() const { return std::sqrt(squared_norm()); }

HilbertVector HilbertVector::in_summand(unsigned side) const {
  HilbertVector out;
  for (const auto& [k, v] : sparse_) {
    CoordinateKey key = k;
    key.block = 2 * k.block + side;
    out.sparse_.emplace(std::move(key), v);
  }
  for (const auto& [k, f] : intervals_) out.intervals_.emplace(IntervalKey{2 * k.first + side, k.second}, f);
  return out;
}

std::optional<std::vector<double>> HilbertVector::axis_coordinates(std::size_t dimension) const {
  if (!intervals_.empty()) return std::nullopt;
  std::vector<double> coords(dimension, 0.0);
  for (const auto& [k, v] : sparse_) {
    auto* axis = std::get_if<AxisKey>(&k.key);
    if (!axis || k.block != 0 || axis->index >= dimension) return std::nullopt;
    coords[axis->index] = v;
  }
  return coords;
}

bool HilbertVector::edge_supported() const {
  if (!intervals_.empty()) return false;
  return std::all_of(sparse_.begin(), sparse_.end(),
                     [](const auto& kv) { return std::holds_alternative<EdgeKey>(kv.first.key); });
}

}  // namespace hcomp
