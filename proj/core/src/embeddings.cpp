#include "hcomp/embeddings.hpp"

#include <cmath>
#include <sstream>

#include "hcomp/error.hpp"

namespace hcomp {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Source dimension of a coordinate-bearing space, or nullopt.
std::optional<std::size_t> coordinate_dimension(const Space& space) {
  if (space.is_lattice()) return static_cast<std::size_t>(space.lattice_dimension());
  if (space.is_point_cloud() && space.cloud().has_coordinates()) return space.cloud().dimension();
  return std::nullopt;
}

std::vector<double> coordinates_of(const Space& space, const Point& x) {
  if (space.is_lattice()) {
    const auto& v = x.vector();
    return {v.begin(), v.end()};
  }
  return space.cloud().coordinates(std::get<CloudPoint>(x.value).index);
}

// Output dimension when `spec` maps coordinate vectors to coordinate vectors.
std::optional<std::size_t> coordinate_output(const EmbeddingSpec& spec, std::size_t dim) {
  if (spec.is<CoordinateIsometric>()) return dim;
  if (spec.is<ConstantMap>()) return std::size_t{0};
  if (spec.is<ComposeSpec>()) {
    const auto& c = spec.as<ComposeSpec>();
    auto mid = coordinate_output(*c.inner, dim);
    if (!mid) return std::nullopt;
    return coordinate_output(*c.outer, *mid);
  }
  return std::nullopt;
}

bool accepts_coordinates(const EmbeddingSpec& spec, std::size_t dim) {
  if (auto* iso = std::get_if<CoordinateIsometric>(&spec.variant()))
    return iso->dimension < 0 || static_cast<std::size_t>(iso->dimension) == dim;
  if (spec.is<Staircase>()) return dim == 1;
  if (spec.is<L1ToL2>() || spec.is<ConstantMap>()) return true;
  if (spec.is<ComposeSpec>()) {
    const auto& c = spec.as<ComposeSpec>();
    if (!accepts_coordinates(*c.inner, dim)) return false;
    auto mid = coordinate_output(*c.inner, dim);
    return mid && accepts_coordinates(*c.outer, *mid);
  }
  return false;
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite staircase coordinate");
  if (x == std::floor(x) && std::fabs(x) < 4e18) return Rational(static_cast<std::int64_t>(x));
  // Dyadic approximation to within 2^-33.
  constexpr std::int64_t scale = std::int64_t{1} << 32;
  return Rational(static_cast<std::int64_t>(std::llround(x * static_cast<double>(scale))), scale);
}

std::vector<double> map_coordinates(const EmbeddingSpec& spec, const std::vector<double>& x) {
  if (spec.is<CoordinateIsometric>()) return x;
  if (spec.is<ConstantMap>()) return {};
  const auto& c = spec.as<ComposeSpec>();
  return map_coordinates(*c.outer, map_coordinates(*c.inner, x));
}

HilbertVector embed_coordinates(const EmbeddingSpec& spec, const std::vector<double>& x) {
  HilbertVector v;
  if (spec.is<CoordinateIsometric>()) {
    for (std::size_t i = 0; i < x.size(); ++i) v.add({0, AxisKey{i}}, x[i]);
  } else if (spec.is<Staircase>() || spec.is<L1ToL2>()) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      Rational r = to_rational(x[i]);
      Rational zero(0);
      v.add_interval({0, i}, r >= zero ? IntervalFunction::indicator(zero, r) : IntervalFunction::indicator(r, zero));
    }
  } else if (spec.is<ComposeSpec>()) {
    const auto& c = spec.as<ComposeSpec>();
    return embed_coordinates(*c.outer, map_coordinates(*c.inner, x));
  }
  return v;
}

double coordinate_distance_squared(const EmbeddingSpec& spec, const std::vector<double>& a,
                                   const std::vector<double>& b) {
  if (spec.is<CoordinateIsometric>()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  }
  if (spec.is<Staircase>() || spec.is<L1ToL2>()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s;
  }
  if (spec.is<ConstantMap>()) return 0.0;
  const auto& c = spec.as<ComposeSpec>();
  return coordinate_distance_squared(*c.outer, map_coordinates(*c.inner, a), map_coordinates(*c.inner, b));
}

}  // namespace

// ---------------------------------------------------------------------------

EmbeddingSpec EmbeddingSpec::tree(double eps) {
  if (!(eps >= 0.0 && eps < 0.5))
    throw DomainError("tree embedding weight exponent must lie in [0, 1/2), got " + format_number(eps));
  return EmbeddingSpec(TreeEmbedding{eps});
}

EmbeddingSpec direct_sum(EmbeddingSpec f, EmbeddingSpec g) {
  return EmbeddingSpec(DirectSumSpec{std::make_shared<const EmbeddingSpec>(std::move(f)),
                                     std::make_shared<const EmbeddingSpec>(std::move(g))});
}

EmbeddingSpec compose(EmbeddingSpec outer, EmbeddingSpec inner) {
  if (coordinate_output(inner, 1) == std::nullopt && !inner.is<CoordinateIsometric>())
    throw ConfigError("inner map of a composition must produce coordinate vectors, got " + inner.name());
  return EmbeddingSpec(ComposeSpec{std::make_shared<const EmbeddingSpec>(std::move(outer)),
                                   std::make_shared<const EmbeddingSpec>(std::move(inner))});
}

std::string EmbeddingSpec::name() const {
  struct Visitor {
    std::string operator()(const TreeEmbedding& t) const {
      return t.eps == 0.0 ? "tree" : "weighted-tree:eps=" + format_number(t.eps);
    }
    std::string operator()(const CoordinateIsometric& i) const {
      return i.dimension < 0 ? "iso" : "iso-zn:n=" + std::to_string(i.dimension);
    }
    std::string operator()(const Staircase&) const { return "staircase"; }
    std::string operator()(const L1ToL2&) const { return "l1l2"; }
    std::string operator()(const ConstantMap&) const { return "const"; }
    std::string operator()(const DirectSumSpec& s) const {
      return "sum(" + s.first->name() + "," + s.second->name() + ")";
    }
    std::string operator()(const ComposeSpec& c) const {
      return "compose(" + c.outer->name() + "," + c.inner->name() + ")";
    }
  };
  return std::visit(Visitor{}, v_);
}

void validate_embedding(const EmbeddingSpec& spec, const Space& space) {
  if (spec.is<ConstantMap>()) return;
  if (spec.is<TreeEmbedding>()) {
    if (!space.is_free_group()) throw ConfigError("tree embeddings need a free group source, got " + space.name());
    return;
  }
  if (spec.is<DirectSumSpec>()) {
    if (!space.is_product() || space.factors().size() != 2)
      throw ConfigError("direct sums need a two-factor product source, got " + space.name());
    validate_embedding(*spec.as<DirectSumSpec>().first, space.factors()[0]);
    validate_embedding(*spec.as<DirectSumSpec>().second, space.factors()[1]);
    return;
  }
  auto dim = coordinate_dimension(space);
  if (!dim) throw ConfigError(spec.name() + " needs a coordinate source (lattice or coordinate cloud), got " + space.name());
  if (!accepts_coordinates(spec, *dim))
    throw ConfigError(spec.name() + " cannot be evaluated on " + std::to_string(*dim) + "-dimensional " + space.name());
}

HilbertVector embed(const EmbeddingSpec& spec, const Space& space, const Point& x) {
  validate_embedding(spec, space);
  if (!space.contains(x)) throw InputError("point " + x.str() + " is not valid in " + space.name());
  if (spec.is<ConstantMap>()) return {};
  if (spec.is<TreeEmbedding>()) {
    const double eps = spec.as<TreeEmbedding>().eps;
    const ReducedWord& s = x.word();
    const std::size_t k = s.length();
    HilbertVector v;
    for (std::size_t j = 1; j <= k; ++j) {
      auto [edge, sign] = make_edge(s.prefix(k - j + 1), s.prefix(k - j));
      double weight = eps == 0.0 ? 1.0 : std::pow(static_cast<double>(j), eps);
      v.add({0, std::move(edge)}, sign * weight);
    }
    return v;
  }
  if (spec.is<DirectSumSpec>()) {
    const auto& s = spec.as<DirectSumSpec>();
    HilbertVector v = embed(*s.first, space.factors()[0], x.factors()[0]).in_summand(0);
    v += embed(*s.second, space.factors()[1], x.factors()[1]).in_summand(1);
    return v;
  }
  return embed_coordinates(spec, coordinates_of(space, x));
}

double pair_distance_squared(const EmbeddingSpec& spec, const Space& space, const Point& x, const Point& y) {
  if (spec.is<ConstantMap>()) return 0.0;
  if (spec.is<TreeEmbedding>()) {
    if (!space.is_free_group()) validate_embedding(spec, space);
    const auto& s = x.word();
    const auto& t = y.word();
    const double eps = spec.as<TreeEmbedding>().eps;
    const auto p = common_prefix(s, t);
    if (eps == 0.0) return static_cast<double>(s.length() + t.length() - 2 * p);
    return weighted_tree_closed_form(static_cast<int>(s.length()), static_cast<int>(t.length()),
                                     static_cast<int>(p), eps);
  }
  if (spec.is<DirectSumSpec>()) {
    if (!space.is_product()) validate_embedding(spec, space);
    const auto& s = spec.as<DirectSumSpec>();
    return pair_distance_squared(*s.first, space.factors()[0], x.factors()[0], y.factors()[0]) +
           pair_distance_squared(*s.second, space.factors()[1], x.factors()[1], y.factors()[1]);
  }
  return coordinate_distance_squared(spec, coordinates_of(space, x), coordinates_of(space, y));
}

double pair_distance(const EmbeddingSpec& spec, const Space& space, const Point& x, const Point& y) {
  return std::sqrt(pair_distance_squared(spec, space, x, y));
}

double materialized_pair_distance(const EmbeddingSpec& spec, const Space& space, const Point& x,
                                  const Point& y) {
  return (embed(spec, space, x) - embed(spec, space, y)).norm();
}

HilbertVector staircase_vector(const Rational& x) {
  HilbertVector v;
  Rational zero(0);
  v.add_interval({0, 0}, x >= zero ? IntervalFunction::indicator(zero, x) : IntervalFunction::indicator(x, zero));
  return v;
}

double weighted_tree_closed_form(int ks, int kt, int p, double eps) {
  if (ks < 0 || kt < 0 || p < 0 || p > std::min(ks, kt))
    throw DomainError("common prefix length out of range");
  auto w = [eps](int j) { return std::pow(static_cast<double>(j), eps); };
  double s = 0.0;
  for (int j = 1; j <= ks - p; ++j) s += std::pow(static_cast<double>(j), 2.0 * eps);
  for (int j = 1; j <= kt - p; ++j) s += std::pow(static_cast<double>(j), 2.0 * eps);
  if (ks != kt) {
    for (int m = 1; m <= p; ++m) {
      double d = w(ks - m + 1) - w(kt - m + 1);
      s += d * d;
    }
  }
  return s;
}

double lipschitz_generator_bound(double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) throw DomainError("weight exponent must lie in [0, 1/2)");
  return eps * eps / (1.0 - 2.0 * eps);
}

double compression_lower_constant(double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) throw DomainError("weight exponent must lie in [0, 1/2)");
  return 1.0 / (std::pow(2.0, 2.0 * eps + 1.0) * (2.0 * eps + 1.0));
}

}  // namespace hcomp
