#include "hcomp/spaces.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include "hcomp/error.hpp"

namespace hcomp {

namespace {

bool letter_in_alphabet(char c, int rank) {
  if (c >= 'a' && c < 'a' + rank) return true;
  if (c >= 'A' && c < 'A' + rank) return true;
  return false;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                          : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of points of Z^n at l1 distance exactly r from the origin.
std::uint64_t lattice_sphere(int n, int r) {
  if (r == 0) return 1;
  std::uint64_t total = 0;
  for (int k = 1; k <= std::min(n, r); ++k) {
    total += (std::uint64_t{1} << k) * binomial(static_cast<std::uint64_t>(n), k) *
             binomial(static_cast<std::uint64_t>(r - 1), k - 1);
  }
  return total;
}

int parse_positive(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size() || v <= 0) throw InputError("bad " + what + ": " + text);
    return v;
  } catch (const std::logic_error&) {
    throw InputError("bad " + what + ": " + text);
  }
}

void enumerate_lattice(int dim, int radius, IntVector& current, int used, std::vector<IntVector>& out) {
  if (static_cast<int>(current.size()) == dim) {
    out.push_back(current);
    return;
  }
  for (int v = -(radius - used); v <= radius - used; ++v) {
    current.push_back(v);
    enumerate_lattice(dim, radius, current, used + std::abs(v), out);
    current.pop_back();
  }
}

std::int64_t l1_norm(const IntVector& v) {
  std::int64_t s = 0;
  for (auto c : v) s += c < 0 ? -c : c;
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

char inverse_letter(char c) noexcept {
  return std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c))
                                                     : static_cast<char>(std::tolower(c));
}

ReducedWord ReducedWord::reduce(std::string_view letters, int rank) {
  std::string out;
  out.reserve(letters.size());
  for (char c : letters) {
    if (!letter_in_alphabet(c, rank))
      throw InputError(std::string("letter '") + c + "' is not in the alphabet of F_" +
                       std::to_string(rank));
    if (!out.empty() && out.back() == inverse_letter(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return ReducedWord(std::move(out));
}

ReducedWord reduce_word(std::string_view letters, int rank) { return ReducedWord::reduce(letters, rank); }

ReducedWord ReducedWord::inverse() const {
  std::string out(letters_.rbegin(), letters_.rend());
  for (char& c : out) c = inverse_letter(c);
  return ReducedWord(std::move(out));
}

ReducedWord operator*(const ReducedWord& x, const ReducedWord& y) {
  const std::string& a = x.letters_;
  const std::string& b = y.letters_;
  std::size_t cancel = 0;
  while (cancel < a.size() && cancel < b.size() &&
         a[a.size() - 1 - cancel] == inverse_letter(b[cancel]))
    ++cancel;
  std::string out;
  out.reserve(a.size() + b.size() - 2 * cancel);
  out.append(a, 0, a.size() - cancel);
  out.append(b, cancel, std::string::npos);
  return ReducedWord(std::move(out));
}

std::strong_ordering operator<=>(const ReducedWord& x, const ReducedWord& y) {
  int c = x.letters_.compare(y.letters_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t common_prefix(const ReducedWord& x, const ReducedWord& y) noexcept {
  const auto& a = x.letters();
  const auto& b = y.letters();
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

std::string reduced_word_alphabet(int rank) {
  std::string s;
  for (int i = 0; i < rank; ++i) {
    s.push_back(static_cast<char>('a' + i));
    s.push_back(static_cast<char>('A' + i));
  }
  return s;
}

// ---------------------------------------------------------------------------

std::size_t HeisenbergHash::operator()(const HeisenbergElement& h) const noexcept {
  std::uint64_t k = static_cast<std::uint64_t>(h.x) * 0x9E3779B97F4A7C15ull;
  k ^= static_cast<std::uint64_t>(h.y) + 0x7F4A7C159E3779B9ull + (k << 6) + (k >> 2);
  k ^= static_cast<std::uint64_t>(h.z) * 0xC2B2AE3D27D4EB4Full + (k << 6) + (k >> 2);
  return static_cast<std::size_t>(k);
}

HeisenbergLengthTable::HeisenbergLengthTable(int radius) : radius_(radius) {
  if (radius < 0) throw DomainError("Heisenberg table radius must be non-negative");
  static constexpr HeisenbergElement gens[] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  lengths_.emplace(HeisenbergElement{}, 0);
  order_.push_back({});
  spheres_.push_back(1);
  std::size_t frontier_begin = 0;
  for (int n = 1; n <= radius; ++n) {
    std::size_t frontier_end = order_.size();
    std::uint64_t count = 0;
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& g : gens) {
        HeisenbergElement next = order_[i] * g;
        if (lengths_.emplace(next, n).second) {
          order_.push_back(next);
          ++count;
        }
      }
    }
    // Deterministic order within each sphere.
    std::sort(order_.begin() + static_cast<std::ptrdiff_t>(frontier_end), order_.end());
    spheres_.push_back(count);
    frontier_begin = frontier_end;
  }
}

std::optional<int> HeisenbergLengthTable::find(const HeisenbergElement& h) const {
  auto it = lengths_.find(h);
  if (it == lengths_.end()) return std::nullopt;
  return it->second;
}

int HeisenbergLengthTable::length(const HeisenbergElement& h) const {
  if (auto v = find(h)) return *v;
  // Split at a geodesic midpoint: if |h| = L <= 2R there is g with |g| = floor(L/2)
  // and |g^-1 h| = ceil(L/2), both inside the table, and every split is an upper bound.
  int best = std::numeric_limits<int>::max();
  for (const auto& g : order_) {
    int k = lengths_.find(g)->second;
    if (k >= best) break;
    if (auto rest = find(g.inverse() * h)) best = std::min(best, k + *rest);
  }
  if (best <= 2 * radius_) return best;
  int required = best == std::numeric_limits<int>::max() ? 2 * radius_ + 1 : (best + 1) / 2;
  std::ostringstream msg;
  msg << "Heisenberg element (" << h.x << "," << h.y << "," << h.z << ") has length beyond "
      << 2 * radius_ << ", the exact range of the table of radius " << radius_ << "; requires radius >= "
      << required;
  throw RangeError(msg.str(), required);
}

std::shared_ptr<const HeisenbergLengthTable> heisenberg_length_table(int radius, int cap) {
  if (radius > cap) {
    // Growth is quartic; c * R^4 with c ~ 1 is a loose size estimate.
    throw CapacityError("Heisenberg table radius " + std::to_string(radius) + " exceeds cap " +
                            std::to_string(cap),
                        static_cast<std::uint64_t>(std::pow(radius, 4)));
  }
  return std::make_shared<const HeisenbergLengthTable>(radius);
}

// ---------------------------------------------------------------------------

PointCloud PointCloud::from_coordinates(std::string id, std::vector<std::vector<double>> coords,
                                        CoordinateNorm norm) {
  PointCloud c;
  c.norm_ = norm;
  c.id_ = std::move(id);
  c.n_ = coords.size();
  for (const auto& p : coords)
    if (p.size() != coords.front().size())
      throw InputError("point cloud '" + c.id_ + "' has mixed dimensions");
  c.coords_ = std::move(coords);
  return c;
}

PointCloud PointCloud::from_distances(std::string id, std::size_t n, std::vector<double> matrix) {
  if (matrix.size() != n * n) throw InputError("distance matrix size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i * n + i] != 0.0) throw InputError("distance matrix has nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix[i * n + j] != matrix[j * n + i]) throw InputError("distance matrix is not symmetric");
      if (matrix[i * n + j] < 0.0) throw InputError("distance matrix has negative entries");
    }
  }
  PointCloud c;
  c.id_ = std::move(id);
  c.n_ = n;
  c.matrix_ = std::move(matrix);
  return c;
}

double PointCloud::distance(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw InputError("point index out of range in cloud '" + id_ + "'");
  if (!matrix_.empty()) return matrix_[i * n_ + j];
  const auto& p = coords_[i];
  const auto& q = coords_[j];
  double s = 0.0;
  if (norm_ == CoordinateNorm::L1) {
    for (std::size_t k = 0; k < p.size(); ++k) s += std::fabs(p[k] - q[k]);
    return s;
  }
  for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - q[k]) * (p[k] - q[k]);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

GroupSpec GroupSpec::free_group(int rank, std::vector<ReducedWord> extra) {
  if (rank < 1 || rank > 26) throw DomainError("free group rank must be in [1, 26]");
  for (const auto& w : extra) {
    for (char c : w.letters())
      if (!letter_in_alphabet(c, rank)) throw InputError("extra generator outside alphabet");
    if (w.is_identity()) throw InputError("extra generator must be nontrivial");
  }
  return GroupSpec{FreeGroupSpec{rank, std::move(extra)}};
}
GroupSpec GroupSpec::lattice(int dimension) {
  if (dimension < 0) throw DomainError("lattice dimension must be non-negative");
  return GroupSpec{LatticeSpec{dimension}};
}
GroupSpec GroupSpec::heisenberg() { return GroupSpec{HeisenbergSpec{}}; }
GroupSpec GroupSpec::product(std::vector<GroupSpec> factors) {
  if (factors.size() < 2) throw ConfigError("a product needs at least two factors");
  return GroupSpec{ProductSpec{std::move(factors)}};
}
GroupSpec GroupSpec::point_cloud(std::string fixture) { return GroupSpec{PointCloudSpec{std::move(fixture)}}; }

std::string GroupSpec::name() const {
  struct Visitor {
    std::string operator()(const FreeGroupSpec& f) const {
      std::string s = "f" + std::to_string(f.rank);
      for (const auto& w : f.extra_generators) s += "+" + w.letters();
      return s;
    }
    std::string operator()(const LatticeSpec& l) const { return "z" + std::to_string(l.dimension); }
    std::string operator()(const HeisenbergSpec&) const { return "heis"; }
    std::string operator()(const ProductSpec& p) const {
      std::string s = "prod(";
      for (std::size_t i = 0; i < p.factors.size(); ++i) s += (i ? "," : "") + p.factors[i].name();
      return s + ")";
    }
    std::string operator()(const PointCloudSpec& c) const { return "cloud:" + c.fixture; }
  };
  return std::visit(Visitor{}, variant);
}

// ---------------------------------------------------------------------------

bool operator==(const Point& a, const Point& b) {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, ProductPoint>) {
          if (x.size() != y.size()) return false;
          for (std::size_t i = 0; i < x.size(); ++i)
            if (!(x[i] == y[i])) return false;
          return true;
        } else {
          return x == y;
        }
      },
      a.value);
}

std::string Point::str() const {
  struct Visitor {
    std::string operator()(const ReducedWord& w) const { return w.str(); }
    std::string operator()(const IntVector& v) const {
      if (v.empty()) return "()";
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
      return s;
    }
    std::string operator()(const HeisenbergElement& h) const {
      return std::to_string(h.x) + ";" + std::to_string(h.y) + ";" + std::to_string(h.z);
    }
    std::string operator()(const CloudPoint& c) const { return "#" + std::to_string(c.index); }
    std::string operator()(const ProductPoint& p) const {
      std::string s;
      for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "|" : "") + p[i].str();
      return s;
    }
  };
  return std::visit(Visitor{}, value);
}

// ---------------------------------------------------------------------------

SpaceOptions SpaceOptions::from_env() {
  SpaceOptions o;
  if (const char* v = std::getenv("HCOMP_HEIS_CAP")) o.heisenberg_cap = parse_positive(v, "HCOMP_HEIS_CAP");
  if (const char* v = std::getenv("HCOMP_WORD_TABLE_RADIUS"))
    o.word_table_radius = parse_positive(v, "HCOMP_WORD_TABLE_RADIUS");
  if (const char* v = std::getenv("HCOMP_MAX_BALL"))
    o.max_ball_points = static_cast<std::uint64_t>(parse_positive(v, "HCOMP_MAX_BALL"));
  return o;
}

Space::Space(GroupSpec spec, SpaceOptions options) : spec_(std::move(spec)), options_(options) {
  if (auto* p = std::get_if<ProductSpec>(&spec_.variant)) {
    for (const auto& f : p->factors) factors_.emplace_back(f, options_);
  } else if (std::holds_alternative<HeisenbergSpec>(spec_.variant)) {
    heisenberg_ = heisenberg_length_table(options_.heisenberg_cap, options_.heisenberg_cap);
  } else if (auto* c = std::get_if<PointCloudSpec>(&spec_.variant)) {
    cloud_ = std::make_shared<const PointCloud>(fixtures::resolve(c->fixture, options_));
  } else if (auto* f = std::get_if<FreeGroupSpec>(&spec_.variant); f && !f->extra_generators.empty()) {
    std::vector<ReducedWord> gens;
    for (int i = 0; i < f->rank; ++i) {
      gens.push_back(reduce_word(std::string(1, static_cast<char>('a' + i)), f->rank));
      gens.push_back(gens.back().inverse());
    }
    for (const auto& w : f->extra_generators) {
      gens.push_back(w);
      gens.push_back(w.inverse());
    }
    auto table = std::make_shared<std::unordered_map<std::string, int>>();
    table->emplace("", 0);
    std::vector<ReducedWord> frontier{ReducedWord{}};
    for (int n = 1; n <= options_.word_table_radius; ++n) {
      std::vector<ReducedWord> next;
      for (const auto& x : frontier)
        for (const auto& g : gens) {
          ReducedWord y = x * g;
          if (table->emplace(y.letters(), n).second) next.push_back(std::move(y));
        }
      frontier = std::move(next);
      if (table->size() > options_.max_ball_points)
        throw CapacityError("word-length table exceeds HCOMP_MAX_BALL", table->size());
    }
    word_table_ = std::move(table);
    word_table_radius_ = options_.word_table_radius;
  }
}

Space Space::from_cloud(PointCloud cloud, SpaceOptions options) {
  Space s(GroupSpec::lattice(0), options);
  s.spec_ = GroupSpec::point_cloud(cloud.id());
  s.cloud_ = std::make_shared<const PointCloud>(std::move(cloud));
  return s;
}

bool Space::is_free_group() const noexcept { return std::holds_alternative<FreeGroupSpec>(spec_.variant); }
bool Space::is_standard_free_group() const noexcept {
  auto* f = std::get_if<FreeGroupSpec>(&spec_.variant);
  return f && f->extra_generators.empty();
}
bool Space::is_lattice() const noexcept { return std::holds_alternative<LatticeSpec>(spec_.variant); }
bool Space::is_heisenberg() const noexcept { return std::holds_alternative<HeisenbergSpec>(spec_.variant); }
bool Space::is_product() const noexcept { return std::holds_alternative<ProductSpec>(spec_.variant); }
bool Space::is_point_cloud() const noexcept { return std::holds_alternative<PointCloudSpec>(spec_.variant); }

bool Space::integer_metric() const noexcept {
  if (is_point_cloud()) return false;
  for (const auto& f : factors_)
    if (!f.integer_metric()) return false;
  return true;
}

int Space::free_rank() const {
  if (auto* f = std::get_if<FreeGroupSpec>(&spec_.variant)) return f->rank;
  throw ConfigError(name() + " is not a free group");
}

int Space::lattice_dimension() const {
  if (auto* l = std::get_if<LatticeSpec>(&spec_.variant)) return l->dimension;
  throw ConfigError(name() + " is not a lattice");
}

const PointCloud& Space::cloud() const {
  if (!cloud_) throw ConfigError(name() + " is not a point cloud");
  return *cloud_;
}

const HeisenbergLengthTable& Space::heisenberg_table() const {
  if (!heisenberg_) throw ConfigError(name() + " is not the Heisenberg group");
  return *heisenberg_;
}

int Space::generator_count() const {
  struct Visitor {
    const Space& self;
    int operator()(const FreeGroupSpec& f) const {
      return 2 * (f.rank + static_cast<int>(f.extra_generators.size()));
    }
    int operator()(const LatticeSpec& l) const { return 2 * l.dimension; }
    int operator()(const HeisenbergSpec&) const { return 4; }
    int operator()(const ProductSpec&) const {
      int s = 0;
      for (const auto& f : self.factors_) s += f.generator_count();
      return s;
    }
    int operator()(const PointCloudSpec&) const { return 0; }
  };
  return std::visit(Visitor{*this}, spec_.variant);
}

Point Space::identity() const {
  struct Visitor {
    const Space& self;
    Point operator()(const FreeGroupSpec&) const { return ReducedWord{}; }
    Point operator()(const LatticeSpec& l) const {
      return IntVector(static_cast<std::size_t>(l.dimension), 0);
    }
    Point operator()(const HeisenbergSpec&) const { return HeisenbergElement{}; }
    Point operator()(const ProductSpec&) const {
      ProductPoint p;
      for (const auto& f : self.factors_) p.push_back(f.identity());
      return p;
    }
    Point operator()(const PointCloudSpec&) const { return CloudPoint{0}; }
  };
  return std::visit(Visitor{*this}, spec_.variant);
}

bool Space::contains(const Point& x) const {
  if (auto* f = std::get_if<FreeGroupSpec>(&spec_.variant)) {
    auto* w = std::get_if<ReducedWord>(&x.value);
    if (!w) return false;
    for (char c : w->letters())
      if (!letter_in_alphabet(c, f->rank)) return false;
    return true;
  }
  if (auto* l = std::get_if<LatticeSpec>(&spec_.variant)) {
    auto* v = std::get_if<IntVector>(&x.value);
    return v && static_cast<int>(v->size()) == l->dimension;
  }
  if (is_heisenberg()) return std::holds_alternative<HeisenbergElement>(x.value);
  if (is_point_cloud()) {
    auto* c = std::get_if<CloudPoint>(&x.value);
    return c && c->index < cloud_->size();
  }
  auto* p = std::get_if<ProductPoint>(&x.value);
  if (!p || p->size() != factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (!factors_[i].contains((*p)[i])) return false;
  return true;
}

double Space::distance(const Point& x, const Point& y) const {
  if (!contains(x) || !contains(y))
    throw InputError("point " + x.str() + " or " + y.str() + " is not valid in " + name());
  if (auto* f = std::get_if<FreeGroupSpec>(&spec_.variant)) {
    const auto& a = x.word();
    const auto& b = y.word();
    if (f->extra_generators.empty()) {
      std::size_t p = common_prefix(a, b);
      return static_cast<double>(a.length() + b.length() - 2 * p);
    }
    ReducedWord diff = a.inverse() * b;
    auto it = word_table_->find(diff.letters());
    if (it == word_table_->end())
      throw RangeError("element " + diff.str() + " is outside the word-length table of radius " +
                           std::to_string(word_table_radius_) + "; requires radius >= " +
                           std::to_string(word_table_radius_ + 1),
                       word_table_radius_ + 1);
    return it->second;
  }
  if (is_lattice()) {
    const auto& a = x.vector();
    const auto& b = y.vector();
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    return static_cast<double>(s);
  }
  if (is_heisenberg()) {
    return heisenberg_->length(x.heisenberg().inverse() * y.heisenberg());
  }
  if (is_point_cloud()) {
    return cloud_->distance(std::get<CloudPoint>(x.value).index, std::get<CloudPoint>(y.value).index);
  }
  const auto& p = x.factors();
  const auto& q = y.factors();
  double s = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) s += factors_[i].distance(p[i], q[i]);
  return s;
}

std::optional<std::uint64_t> Space::sphere_size(int n) const {
  if (n < 0) return 0;
  if (is_standard_free_group()) {
    if (n == 0) return 1;
    std::uint64_t q = 2 * static_cast<std::uint64_t>(free_rank());
    std::uint64_t s = q;
    for (int i = 1; i < n; ++i) s = saturating_mul(s, q - 1);
    return s;
  }
  if (is_lattice()) return lattice_sphere(lattice_dimension(), n);
  if (is_heisenberg() && n <= heisenberg_->radius()) return heisenberg_->sphere_sizes()[static_cast<std::size_t>(n)];
  return std::nullopt;
}

std::uint64_t Space::predicted_ball_size(int radius) const {
  if (radius < 0) return 0;
  if (is_product()) {
    // Convolve factor sphere counts.
    std::vector<std::uint64_t> acc(static_cast<std::size_t>(radius) + 1, 0);
    acc[0] = 1;
    for (const auto& f : factors_) {
      std::vector<std::uint64_t> spheres(static_cast<std::size_t>(radius) + 1, 0);
      std::uint64_t prev = 0;
      for (int n = 0; n <= radius; ++n) {
        std::uint64_t b = f.predicted_ball_size(n);
        spheres[static_cast<std::size_t>(n)] = b - prev;
        prev = b;
      }
      std::vector<std::uint64_t> next(acc.size(), 0);
      for (std::size_t i = 0; i < acc.size(); ++i)
        for (std::size_t j = 0; i + j < acc.size(); ++j)
          next[i + j] = saturating_add(next[i + j], saturating_mul(acc[i], spheres[j]));
      acc = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto v : acc) total = saturating_add(total, v);
    return total;
  }
  if (is_point_cloud()) return cloud_->size();
  if (is_free_group() && !is_standard_free_group()) return word_table_->size();
  if (is_heisenberg() && radius > heisenberg_->radius())
    return static_cast<std::uint64_t>(std::pow(radius, 4));
  std::uint64_t total = 0;
  for (int n = 0; n <= radius; ++n) total = saturating_add(total, *sphere_size(n));
  return total;
}

Ball Space::ball(int radius) const {
  if (radius < 0) throw DomainError("ball radius must be non-negative");
  std::uint64_t predicted = predicted_ball_size(radius);
  if (predicted > options_.max_ball_points)
    throw CapacityError("ball of radius " + std::to_string(radius) + " in " + name() + " would hold " +
                            std::to_string(predicted) + " points (cap " +
                            std::to_string(options_.max_ball_points) + ")",
                        predicted);

  Ball ball;
  ball.center = identity();
  ball.radius = radius;

  if (is_standard_free_group()) {
    std::string alphabet = reduced_word_alphabet(free_rank());
    std::sort(alphabet.begin(), alphabet.end());
    ball.points.reserve(predicted);
    ball.points.emplace_back(ReducedWord{});
    ball.lengths.push_back(0);
    std::size_t begin = 0;
    for (int n = 1; n <= radius; ++n) {
      std::size_t end = ball.points.size();
      for (std::size_t i = begin; i < end; ++i) {
        const std::string base = ball.points[i].word().letters();
        for (char c : alphabet) {
          if (!base.empty() && base.back() == inverse_letter(c)) continue;
          ball.points.emplace_back(reduce_word(base + c, free_rank()));
          ball.lengths.push_back(n);
        }
      }
      begin = end;
    }
  } else if (is_free_group()) {
    if (radius > word_table_radius_)
      throw RangeError("ball radius exceeds the word-length table", radius);
    std::vector<std::pair<int, std::string>> entries;
    for (const auto& [w, len] : *word_table_)
      if (len <= radius) entries.emplace_back(len, w);
    std::sort(entries.begin(), entries.end());
    for (const auto& [len, w] : entries) {
      ball.points.emplace_back(reduce_word(w, free_rank()));
      ball.lengths.push_back(len);
    }
  } else if (is_lattice()) {
    std::vector<IntVector> pts;
    IntVector cur;
    enumerate_lattice(lattice_dimension(), radius, cur, 0, pts);
    std::stable_sort(pts.begin(), pts.end(),
                     [](const IntVector& a, const IntVector& b) { return l1_norm(a) < l1_norm(b); });
    for (auto& p : pts) {
      ball.lengths.push_back(static_cast<double>(l1_norm(p)));
      ball.points.emplace_back(std::move(p));
    }
  } else if (is_heisenberg()) {
    if (radius > heisenberg_->radius())
      throw CapacityError("Heisenberg ball radius exceeds the table cap " +
                              std::to_string(heisenberg_->radius()),
                          predicted);
    for (const auto& h : heisenberg_->elements()) {
      int len = *heisenberg_->find(h);
      if (len > radius) break;
      ball.points.emplace_back(h);
      ball.lengths.push_back(len);
    }
  } else if (is_point_cloud()) {
    for (std::size_t i = 0; i < cloud_->size(); ++i) {
      double d = cloud_->distance(0, i);
      if (d <= radius) {
        ball.points.emplace_back(CloudPoint{i});
        ball.lengths.push_back(d);
      }
    }
  } else {
    std::vector<Ball> fb;
    for (const auto& f : factors_) fb.push_back(f.ball(radius));
    struct Entry {
      double len;
      ProductPoint p;
    };
    std::vector<Entry> entries;
    std::function<void(std::size_t, double, ProductPoint&)> rec = [&](std::size_t k, double used,
                                                                      ProductPoint& cur) {
      if (k == fb.size()) {
        entries.push_back({used, cur});
        return;
      }
      for (std::size_t i = 0; i < fb[k].points.size(); ++i) {
        double l = fb[k].lengths[i];
        if (used + l > radius) continue;
        cur.push_back(fb[k].points[i]);
        rec(k + 1, used + l, cur);
        cur.pop_back();
      }
    };
    ProductPoint cur;
    rec(0, 0.0, cur);
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.len < b.len; });
    for (auto& e : entries) {
      ball.points.emplace_back(std::move(e.p));
      ball.lengths.push_back(e.len);
    }
  }

  ball.sphere_sizes.assign(static_cast<std::size_t>(radius) + 1, 0);
  for (double l : ball.lengths) ++ball.sphere_sizes[static_cast<std::size_t>(std::ceil(l))];
  return ball;
}

void write_ball_csv(std::ostream& out, const Ball& ball) {
  out << "index,word_or_coords,length\n";
  for (std::size_t i = 0; i < ball.points.size(); ++i)
    out << i << ',' << ball.points[i].str() << ',' << ball.lengths[i] << '\n';
}

void write_growth_csv(std::ostream& out, const Ball& ball) {
  out << "n,sigma\n";
  for (std::size_t n = 0; n < ball.sphere_sizes.size(); ++n) out << n << ',' << ball.sphere_sizes[n] << '\n';
}

PointCloud read_point_cloud_csv(std::istream& in, std::string id) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      auto b = cell.find_first_not_of(" \t\r");
      auto e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
  };
  auto number = [&](const std::string& text, std::size_t row) {
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw InputError(id + ": row " + std::to_string(row) + ": not a number: '" + text + "'");
    }
  };

  std::string line;
  if (!std::getline(in, line)) throw InputError(id + ": empty CSV");
  auto header = split(line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    rows.push_back(split(line));
  }

  if (header.size() == 3 && header[0] == "i" && header[1] == "j" && header[2] == "d") {
    std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != 3) throw InputError(id + ": row " + std::to_string(r + 2) + ": expected i,j,d");
      double i = number(rows[r][0], r + 2), j = number(rows[r][1], r + 2);
      if (i < 0 || j < 0 || i != std::floor(i) || j != std::floor(j))
        throw InputError(id + ": row " + std::to_string(r + 2) + ": indices must be non-negative integers");
      entries.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j), number(rows[r][2], r + 2));
      n = std::max({n, static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1});
    }
    std::vector<double> m(n * n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 0.0;
    for (auto [i, j, d] : entries) {
      m[i * n + j] = d;
      if (std::isnan(m[j * n + i]) || i == j) m[j * n + i] = d;
    }
    for (double d : m)
      if (std::isnan(d)) throw InputError(id + ": distance matrix is missing entries");
    return PointCloud::from_distances(std::move(id), n, std::move(m));
  }
  if (!header.empty() && header[0] == "id" && header.size() >= 2) {
    std::vector<std::vector<double>> coords;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != header.size())
        throw InputError(id + ": row " + std::to_string(r + 2) + ": expected " + std::to_string(header.size()) +
                         " columns");
      std::vector<double> p;
      for (std::size_t c = 1; c < rows[r].size(); ++c) p.push_back(number(rows[r][c], r + 2));
      coords.push_back(std::move(p));
    }
    return PointCloud::from_coordinates(std::move(id), std::move(coords));
  }
  throw InputError(id + ": header must be 'i,j,d' or 'id,x1,...'");
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  std::ostringstream row;
  row.precision(17);
  const std::size_t n = cloud.size();
  if (n > 0 && cloud.has_coordinates()) {
    row << "id";
    for (std::size_t c = 0; c < cloud.dimension(); ++c) row << ",x" << c + 1;
    row << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      row << i;
      for (double x : cloud.coordinates(i)) row << ',' << x;
      row << '\n';
    }
  } else {
    row << "i,j,d\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) row << i << ',' << j << ',' << cloud.distance(i, j) << '\n';
  }
  out << row.str();
}

PointCloud load_point_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_point_cloud_csv(in, path);
}

// ---------------------------------------------------------------------------

namespace fixtures {

PointCloud pathological_plane(int count) {
  std::vector<std::vector<double>> pts;
  for (int n = 1; n <= count; ++n) {
    pts.push_back({static_cast<double>(n), 1.0 / n});
    pts.push_back({static_cast<double>(n), 0.0});
  }
  return PointCloud::from_coordinates("ex0-x:" + std::to_string(count), std::move(pts));
}

PointCloud pathological_plane_image(int count) {
  std::vector<std::vector<double>> pts;
  for (int n = 1; n <= count; ++n) {
    pts.push_back({static_cast<double>(n), 1.0});
    pts.push_back({static_cast<double>(n), 0.0});
  }
  return PointCloud::from_coordinates("ex0-x-image:" + std::to_string(count), std::move(pts));
}

PointCloud squares(int count) {
  std::vector<std::vector<double>> pts;
  for (int n = 1; n <= count; ++n) pts.push_back({static_cast<double>(n) * n});
  return PointCloud::from_coordinates("ex0-y:" + std::to_string(count), std::move(pts));
}

PointCloud squares_image(int count) {
  std::vector<std::vector<double>> pts;
  for (int n = 1; n <= count; ++n) {
    double y = static_cast<double>(n) * n;
    pts.push_back({y * y});
  }
  return PointCloud::from_coordinates("ex0-y-image:" + std::to_string(count), std::move(pts));
}

PointCloud heisenberg_center(int count, const HeisenbergLengthTable& table) {
  auto n = static_cast<std::size_t>(count);
  std::vector<double> by_gap(n, 0.0);
  for (std::size_t g = 1; g < n; ++g) by_gap[g] = table.length({0, 0, static_cast<std::int64_t>(g)});
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = by_gap[i > j ? i - j : j - i];
  return PointCloud::from_distances("heis-center:" + std::to_string(count), n, std::move(m));
}

PointCloud line(int count, double spacing) {
  std::vector<std::vector<double>> coords;
  for (int i = 0; i < count; ++i) coords.push_back({spacing * i});
  std::ostringstream id;
  id << "line:" << count;
  if (spacing != 1.0) id << ':' << spacing;
  return PointCloud::from_coordinates(id.str(), std::move(coords));
}

PointCloud resolve(const std::string& id, const SpaceOptions& options) {
  if (id.size() > 4 && id.ends_with(".csv")) return load_point_cloud(id);
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t colon; (colon = id.find(':', start)) != std::string::npos; start = colon + 1)
    parts.push_back(id.substr(start, colon - start));
  parts.push_back(id.substr(start));
  if (parts.size() < 2) throw InputError("fixture id needs a size suffix: " + id);
  const std::string& name = parts[0];
  int count = parse_positive(parts[1], "fixture size");
  if (name == "line" && parts.size() <= 3) {
    double spacing = 1.0;
    if (parts.size() == 3) {
      try {
        spacing = std::stod(parts[2]);
      } catch (const std::logic_error&) {
        throw InputError("bad line spacing in fixture id: " + id);
      }
      if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InputError("line spacing must be positive: " + id);
    }
    return line(count, spacing);
  }
  if (parts.size() == 2) {
    if (name == "ex0-x") return pathological_plane(count);
    if (name == "ex0-x-image") return pathological_plane_image(count);
    if (name == "ex0-y") return squares(count);
    if (name == "ex0-y-image") return squares_image(count);
    if (name == "heis-center")
      return heisenberg_center(count, *heisenberg_length_table(options.heisenberg_cap, options.heisenberg_cap));
  }
  throw InputError("unknown fixture: " + id);
}

}  // namespace fixtures

}  // namespace hcomp
