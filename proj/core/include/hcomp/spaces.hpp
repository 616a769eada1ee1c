#pragma once

// Finitely generated groups and fixture metric spaces: word metrics, balls,
// spherical growth.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace hcomp {

// ---------------------------------------------------------------------------
// Free group words
// ---------------------------------------------------------------------------

/// Letter `x` and its inverse `X` (case toggled). Rank k uses a..(a+k-1).
char inverse_letter(char c) noexcept;

/// A freely reduced word over {a, A, b, B, ...}. The empty word is the
/// identity and prints as "e".
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Freely reduces `letters`. Throws InputError on a letter outside the
  /// alphabet of a free group of the given rank.
  static ReducedWord reduce(std::string_view letters, int rank = 26);

  const std::string& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }

  ReducedWord inverse() const;
  ReducedWord prefix(std::size_t n) const { return ReducedWord(letters_.substr(0, n)); }

  /// Group product: concatenation followed by free reduction.
  friend ReducedWord operator*(const ReducedWord& x, const ReducedWord& y);

  std::string str() const { return letters_.empty() ? std::string("e") : letters_; }

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend std::strong_ordering operator<=>(const ReducedWord& x, const ReducedWord& y);

 private:
  explicit ReducedWord(std::string s) : letters_(std::move(s)) {}
  std::string letters_;
};

ReducedWord reduce_word(std::string_view letters, int rank = 26);

/// Length of the longest common prefix.
std::size_t common_prefix(const ReducedWord& x, const ReducedWord& y) noexcept;

// ---------------------------------------------------------------------------
// Heisenberg group
// ---------------------------------------------------------------------------

/// Element of the discrete Heisenberg group in upper unitriangular
/// coordinates [[1,x,z],[0,1,y],[0,0,1]]. a = (1,0,0), b = (0,1,0) and the
/// central commutator c = aba^-1b^-1 = (0,0,1).
struct HeisenbergElement {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  HeisenbergElement inverse() const noexcept { return {-x, -y, -z + x * y}; }
  friend HeisenbergElement operator*(const HeisenbergElement& p,
                                     const HeisenbergElement& q) noexcept {
    return {p.x + q.x, p.y + q.y, p.z + q.z + p.x * q.y};
  }
  friend auto operator<=>(const HeisenbergElement&, const HeisenbergElement&) = default;
};

struct HeisenbergHash {
  std::size_t operator()(const HeisenbergElement& h) const noexcept;
};

/// Exact word lengths for every element of length <= radius under {a±1, b±1}.
class HeisenbergLengthTable {
 public:
  explicit HeisenbergLengthTable(int radius);

  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return lengths_.size(); }
  std::optional<int> find(const HeisenbergElement& h) const;
  /// Exact length for |h| <= 2 * radius: table lookup, else a midpoint split
  /// over the table. Throws RangeError naming a sufficient table radius.
  int length(const HeisenbergElement& h) const;
  /// Elements in BFS order (non-decreasing length).
  const std::vector<HeisenbergElement>& elements() const noexcept { return order_; }
  const std::vector<std::uint64_t>& sphere_sizes() const noexcept { return spheres_; }

 private:
  int radius_;
  std::unordered_map<HeisenbergElement, int, HeisenbergHash> lengths_;
  std::vector<HeisenbergElement> order_;
  std::vector<std::uint64_t> spheres_;
};

/// Builds the length table. Throws CapacityError when R exceeds `cap`.
std::shared_ptr<const HeisenbergLengthTable> heisenberg_length_table(int radius, int cap = 14);

// ---------------------------------------------------------------------------
// Fixture point clouds
// ---------------------------------------------------------------------------

enum class CoordinateNorm { Euclidean, L1 };

/// A finite metric space given either by coordinates (Euclidean or l^1
/// metric) or by an explicit symmetric distance matrix.
class PointCloud {
 public:
  static PointCloud from_coordinates(std::string id, std::vector<std::vector<double>> coords,
                                     CoordinateNorm norm = CoordinateNorm::Euclidean);
  static PointCloud from_distances(std::string id, std::size_t n, std::vector<double> matrix);

  const std::string& id() const noexcept { return id_; }
  std::size_t size() const noexcept { return n_; }
  bool has_coordinates() const noexcept { return !coords_.empty() || n_ == 0; }
  const std::vector<double>& coordinates(std::size_t i) const { return coords_.at(i); }
  std::size_t dimension() const noexcept { return coords_.empty() ? 0 : coords_.front().size(); }
  CoordinateNorm norm() const noexcept { return norm_; }
  double distance(std::size_t i, std::size_t j) const;

 private:
  std::string id_;
  std::size_t n_ = 0;
  std::vector<std::vector<double>> coords_;
  CoordinateNorm norm_ = CoordinateNorm::Euclidean;
  std::vector<double> matrix_;
};

// ---------------------------------------------------------------------------
// Group specs and points
// ---------------------------------------------------------------------------

struct GroupSpec;

struct FreeGroupSpec {
  int rank = 2;
  /// Extra generators beyond the standard basis (their inverses are added).
  std::vector<ReducedWord> extra_generators;
};
struct LatticeSpec {
  int dimension = 1;
};
struct HeisenbergSpec {};
struct ProductSpec {
  std::vector<GroupSpec> factors;
};
struct PointCloudSpec {
  std::string fixture;
};

struct GroupSpec {
  std::variant<FreeGroupSpec, LatticeSpec, HeisenbergSpec, ProductSpec, PointCloudSpec> variant;

  static GroupSpec free_group(int rank, std::vector<ReducedWord> extra = {});
  static GroupSpec lattice(int dimension);
  static GroupSpec heisenberg();
  static GroupSpec product(std::vector<GroupSpec> factors);
  static GroupSpec point_cloud(std::string fixture);

  std::string name() const;
};

using IntVector = std::vector<std::int64_t>;

struct CloudPoint {
  std::size_t index = 0;
  friend auto operator<=>(const CloudPoint&, const CloudPoint&) = default;
};

struct Point;
using ProductPoint = std::vector<Point>;

struct Point {
  std::variant<ReducedWord, IntVector, HeisenbergElement, CloudPoint, ProductPoint> value;

  Point() = default;
  Point(ReducedWord w) : value(std::move(w)) {}
  Point(IntVector v) : value(std::move(v)) {}
  Point(HeisenbergElement h) : value(h) {}
  Point(CloudPoint c) : value(c) {}
  Point(ProductPoint p) : value(std::move(p)) {}

  const ReducedWord& word() const { return std::get<ReducedWord>(value); }
  const IntVector& vector() const { return std::get<IntVector>(value); }
  const HeisenbergElement& heisenberg() const { return std::get<HeisenbergElement>(value); }
  const ProductPoint& factors() const { return std::get<ProductPoint>(value); }

  friend bool operator==(const Point& a, const Point& b);
  std::string str() const;
};

struct Ball {
  Point center;
  int radius = 0;
  std::vector<Point> points;
  /// Distance of each point to the center (parallel to `points`).
  std::vector<double> lengths;
  /// sphere_sizes[n] = number of points with (ceil of) distance n.
  std::vector<std::uint64_t> sphere_sizes;
};

struct SpaceOptions {
  int heisenberg_cap = 14;
  int word_table_radius = 8;
  std::uint64_t max_ball_points = 5'000'000;

  /// Reads HCOMP_HEIS_CAP, HCOMP_WORD_TABLE_RADIUS, HCOMP_MAX_BALL.
  static SpaceOptions from_env();
};

/// A metric space built from a GroupSpec. Owns the precomputed tables the
/// metric needs; immutable and safe to share across threads.
class Space {
 public:
  explicit Space(GroupSpec spec, SpaceOptions options = SpaceOptions::from_env());
  /// Wraps an already built cloud; the GroupSpec carries the cloud's id.
  static Space from_cloud(PointCloud cloud, SpaceOptions options = SpaceOptions::from_env());

  const GroupSpec& spec() const noexcept { return spec_; }
  const SpaceOptions& options() const noexcept { return options_; }
  std::string name() const { return spec_.name(); }

  bool is_free_group() const noexcept;
  /// Free group with the standard basis only (lcp metric applies).
  bool is_standard_free_group() const noexcept;
  bool is_lattice() const noexcept;
  bool is_heisenberg() const noexcept;
  bool is_product() const noexcept;
  bool is_point_cloud() const noexcept;
  bool integer_metric() const noexcept;

  int free_rank() const;
  int lattice_dimension() const;
  const std::vector<Space>& factors() const noexcept { return factors_; }
  const PointCloud& cloud() const;
  const HeisenbergLengthTable& heisenberg_table() const;

  /// card(S) of the symmetric generating set; 0 for point clouds.
  int generator_count() const;

  Point identity() const;
  double distance(const Point& x, const Point& y) const;
  /// Distance to the identity (word length for groups).
  double length(const Point& x) const { return distance(identity(), x); }
  bool contains(const Point& x) const;

  /// Exact sphere size when a closed form is known (standard free groups,
  /// lattices); otherwise nullopt.
  std::optional<std::uint64_t> sphere_size(int n) const;
  /// Upper bound on |B(R)| used for capacity checks.
  std::uint64_t predicted_ball_size(int radius) const;

  /// Ball around the identity (index 0 for point clouds). Throws
  /// CapacityError when the predicted size exceeds max_ball_points.
  Ball ball(int radius) const;

 private:
  GroupSpec spec_;
  SpaceOptions options_;
  std::vector<Space> factors_;
  std::shared_ptr<const HeisenbergLengthTable> heisenberg_;
  std::shared_ptr<const PointCloud> cloud_;
  /// Word lengths under a non-standard free generating set.
  std::shared_ptr<const std::unordered_map<std::string, int>> word_table_;
  int word_table_radius_ = 0;
};

std::string reduced_word_alphabet(int rank);

/// Reads a cloud from CSV. A header `i,j,d` selects the distance-matrix form
/// (missing pairs are an error, the diagonal may be omitted); a header
/// starting with `id` selects coordinates `id,x1,x2,...`. Throws InputError.
PointCloud read_point_cloud_csv(std::istream& in, std::string id);
PointCloud load_point_cloud(const std::string& path);
/// Coordinates as `id,x1,...` when present, else the upper triangle as `i,j,d`.
/// The coordinate norm is not recorded; reading back gives Euclidean.
void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud);

/// Ball dump: `index,word_or_coords,length`.
void write_ball_csv(std::ostream& out, const Ball& ball);
/// Growth table: `n,sigma`.
void write_growth_csv(std::ostream& out, const Ball& ball);

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

namespace fixtures {

/// X = {(n, 1/n), (n, 0) : n = 1..count} in R^2. Even indices hold (n,1/n).
PointCloud pathological_plane(int count);
/// f(n,1/n) = (n,1), f(n,0) = (n,0), parallel to pathological_plane.
PointCloud pathological_plane_image(int count);
/// Y = {n^2 : n = 1..count} in R.
PointCloud squares(int count);
/// g(y) = y^2 on `squares`.
PointCloud squares_image(int count);
/// {c^m : m = 0..count-1} in the Heisenberg group with the induced word
/// metric (distance matrix).
PointCloud heisenberg_center(int count, const HeisenbergLengthTable& table);

/// {0, c, 2c, ..., (count-1)c} in R.
PointCloud line(int count, double spacing = 1.0);

/// Resolves fixture ids "ex0-x:N", "ex0-y:N", "heis-center:M",
/// "ex0-x-image:N", "ex0-y-image:N", "line:N", "line:N:c", or a path ending
/// in ".csv".
PointCloud resolve(const std::string& id, const SpaceOptions& options);

}  // namespace fixtures

}  // namespace hcomp
