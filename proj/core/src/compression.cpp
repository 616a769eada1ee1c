#include "hcomp/compression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "hcomp/error.hpp"
#include "hcomp/parallel.hpp"
#include "hcomp/parse.hpp"

namespace hcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::uint64_t sat_pow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r = sat_mul(r, base);
  return r;
}

const char* bias_note() {
  return "finite-ball surrogate: rho is an infimum over pairs inside the evaluated ball only";
}

std::string number_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

// Per-level extrema combined over a two-factor product with the sum metric
// and an orthogonal direct sum. Domain: B_X(R) x B_Y(R).
LevelTable combine_levels(const LevelTable& a, const LevelTable& b) {
  auto ordered = [](const LevelTable& t, int level) -> std::uint64_t {
    if (level == 0) return t.points;
    return sat_mul(2, t.pairs[static_cast<std::size_t>(level)]);
  };
  auto min_sq = [](const LevelTable& t, int level) {
    if (level == 0) return 0.0;
    double v = t.min_image[static_cast<std::size_t>(level)];
    return v * v;
  };
  auto max_sq = [](const LevelTable& t, int level) {
    if (level == 0) return 0.0;
    double v = t.max_image[static_cast<std::size_t>(level)];
    return v * v;
  };
  auto present = [&](const LevelTable& t, int level) {
    if (level == 0) return t.points > 0;
    return std::isfinite(t.min_image[static_cast<std::size_t>(level)]);
  };

  LevelTable out;
  out.points = sat_mul(a.points, b.points);
  for (int i = 0; i <= std::max(a.max_level(), 0); ++i) {
    if (!present(a, i)) continue;
    for (int j = 0; j <= std::max(b.max_level(), 0); ++j) {
      if ((i == 0 && j == 0) || !present(b, j)) continue;
      std::uint64_t count = sat_mul(ordered(a, i), ordered(b, j)) / 2;
      double lo = std::sqrt(min_sq(a, i) + min_sq(b, j));
      double hi = std::sqrt(max_sq(a, i) + max_sq(b, j));
      out.record(i + j, lo, count);
      out.record(i + j, hi, 0);
    }
  }
  return out;
}

LevelTable closed_form_levels(const Space& space, const EmbeddingSpec& spec, int radius) {
  if (!space.is_standard_free_group() || !spec.is<TreeEmbedding>())
    throw ConfigError("tree-closed-form needs a tree embedding on a standard free group, got " + spec.name() +
                      " on " + space.name());
  const double eps = spec.as<TreeEmbedding>().eps;
  LevelTable t;
  t.points = 1;
  for (int n = 1; n <= radius; ++n) t.points = sat_add(t.points, *space.sphere_size(n));
  for (const auto& tr : tree_triples(space.free_rank(), radius)) {
    int d = tr.ks + tr.kt - 2 * tr.p;
    double image = std::sqrt(weighted_tree_closed_form(tr.ks, tr.kt, tr.p, eps));
    t.record(d, image, tr.ordered_pairs / 2);
  }
  return t;
}

LevelTable exact_levels(const Space& space, const EmbeddingSpec& spec, int radius, std::uint64_t max_pairs) {
  validate_embedding(spec, space);
  Ball ball = space.ball(radius);
  const std::size_t n = ball.points.size();
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (pairs > max_pairs)
    throw CapacityError("exact-pairwise profile over " + std::to_string(n) + " points needs " +
                            std::to_string(pairs) + " pairs (cap " + std::to_string(max_pairs) +
                            "); use the sampled strategy",
                        pairs);
  constexpr std::size_t block = 32;
  std::vector<LevelTable> partial(block_count(n, block));
  parallel_blocks(n, block, [&](std::size_t b, std::size_t begin, std::size_t end) {
    LevelTable& t = partial[b];
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        t.record(space.distance(ball.points[i], ball.points[j]),
                 pair_distance(spec, space, ball.points[i], ball.points[j]));
  });
  LevelTable out;
  for (const auto& t : partial) out.merge(t);
  out.points = n;
  return out;
}

LevelTable sampled_levels(const Space& space, const EmbeddingSpec& spec, int radius, const Strategy& s) {
  validate_embedding(spec, space);
  Ball ball = space.ball(radius);
  const std::size_t n = ball.points.size();
  if (n < 2) throw EstimationError("sampling needs at least two points in the ball");
  constexpr std::size_t block = 1 << 16;
  std::vector<LevelTable> partial(block_count(s.count, block));
  parallel_blocks(s.count, block, [&](std::size_t b, std::size_t begin, std::size_t end) {
    std::mt19937_64 rng(s.seed ^ (0x9E3779B97F4A7C15ULL * (b + 1)));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    LevelTable& t = partial[b];
    for (std::size_t k = begin; k < end; ++k) {
      std::size_t i = pick(rng), j = pick(rng);
      while (j == i) j = pick(rng);
      t.record(space.distance(ball.points[i], ball.points[j]),
               pair_distance(spec, space, ball.points[i], ball.points[j]));
    }
  });
  LevelTable out;
  for (const auto& t : partial) out.merge(t);
  out.points = n;
  return out;
}

double least_squares(const std::vector<double>& x, const std::vector<double>& y, double& intercept,
                     double& rms) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  double slope = sxy / sxx;
  intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  rms = std::sqrt(ss / n);
  return slope;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string Strategy::tag() const {
  switch (kind) {
    case StrategyKind::Auto:
      return "auto";
    case StrategyKind::ExactPairwise:
      return "exact-pairwise";
    case StrategyKind::TreeClosedForm:
      return "tree-closed-form";
    case StrategyKind::ProductLevels:
      return "product-levels";
    case StrategyKind::Sampled:
      return "sampled(seed=" + std::to_string(seed) + ",count=" + std::to_string(count) + ")";
  }
  return "auto";
}

Strategy Strategy::parse(const std::string& text) {
  if (text == "auto") return automatic();
  if (text == "exact" || text == "exact-pairwise") return exact();
  if (text == "closed-form" || text == "tree-closed-form") return closed_form();
  if (text == "product-levels") return product_levels();
  if (text == "sampled") return sampled(0);
  if (text.starts_with("sampled(") && text.ends_with(")")) {
    Strategy s = sampled(0);
    for (const auto& part : split_top_level(text.substr(8, text.size() - 9))) {
      auto eq = part.find('=');
      if (eq == std::string::npos) throw InputError("bad sampled parameter '" + part + "'");
      std::string key = part.substr(0, eq), value = part.substr(eq + 1);
      std::uint64_t v = 0;
      try {
        std::size_t used = 0;
        v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw InputError("bad sampled parameter '" + part + "'");
      }
      if (key == "seed")
        s.seed = v;
      else if (key == "count")
        s.count = v;
      else
        throw InputError("unknown sampled parameter '" + key + "'");
    }
    if (s.count == 0) throw InputError("sampled strategy needs count > 0");
    return s;
  }
  throw InputError("unknown strategy '" + text + "'");
}

void LevelTable::grow(std::size_t level) {
  if (level < min_image.size()) return;
  min_image.resize(level + 1, kInf);
  max_image.resize(level + 1, -kInf);
  pairs.resize(level + 1, 0);
}

void LevelTable::record(double source, double image, std::uint64_t count) {
  if (!(source >= 0.0) || !std::isfinite(source)) throw DomainError("invalid source distance");
  auto lo = static_cast<std::size_t>(std::floor(source));
  auto hi = static_cast<std::size_t>(std::ceil(source));
  grow(hi);
  min_image[lo] = std::min(min_image[lo], image);
  max_image[hi] = std::max(max_image[hi], image);
  pairs[hi] = sat_add(pairs[hi], count);
}

void LevelTable::merge(const LevelTable& other) {
  if (other.min_image.empty()) return;
  grow(other.min_image.size() - 1);
  for (std::size_t i = 0; i < other.min_image.size(); ++i) {
    min_image[i] = std::min(min_image[i], other.min_image[i]);
    max_image[i] = std::max(max_image[i], other.max_image[i]);
    pairs[i] = sat_add(pairs[i], other.pairs[i]);
  }
  points = std::max(points, other.points);
}

// ---------------------------------------------------------------------------

double CompressionProfile::rho_at(int r) const {
  if (r < 1 || r > r_max()) throw DomainError("r = " + std::to_string(r) + " outside the profile grid");
  return rho[static_cast<std::size_t>(r - 1)];
}

double CompressionProfile::rho_plus_at(int r) const {
  if (r < 1 || r > r_max()) throw DomainError("r = " + std::to_string(r) + " outside the profile grid");
  return rho_plus[static_cast<std::size_t>(r - 1)];
}

CompressionProfile CompressionProfile::synthetic(int r_max, const std::function<double(int)>& f) {
  CompressionProfile p;
  p.requested_r_max = r_max;
  p.strategy = Strategy::exact();
  p.embedding = "synthetic";
  for (int r = 1; r <= r_max; ++r) {
    double v = f(r);
    p.r_grid.push_back(r);
    p.rho.push_back(v);
    p.rho_star.push_back(std::max(v, 1.0));
    p.rho_plus.push_back(v);
    p.pair_count.push_back(0);
  }
  return p;
}

CompressionProfile CompressionProfile::from_levels(const LevelTable& t, int r_max) {
  CompressionProfile p;
  p.requested_r_max = r_max;
  p.ball_points = t.points;
  const int top = t.max_level();
  std::vector<double> suffix(static_cast<std::size_t>(std::max(top, 0)) + 2, kInf);
  for (int l = top; l >= 0; --l)
    suffix[static_cast<std::size_t>(l)] = std::min(suffix[static_cast<std::size_t>(l) + 1], t.min_image[static_cast<std::size_t>(l)]);
  double running_max = 0.0;
  for (int r = 1; r <= r_max; ++r) {
    double rho = r <= top ? suffix[static_cast<std::size_t>(r)] : kInf;
    if (!std::isfinite(rho)) {
      p.warnings.push_back("no pair at source distance >= " + std::to_string(r) +
                           "; profile truncated at r = " + std::to_string(r - 1));
      break;
    }
    if (r == 1 && top >= 0) running_max = std::max(running_max, t.max_image[0]);
    if (r <= top) running_max = std::max(running_max, t.max_image[static_cast<std::size_t>(r)]);
    p.r_grid.push_back(r);
    p.rho.push_back(rho);
    p.rho_star.push_back(std::max(rho, 1.0));
    p.rho_plus.push_back(running_max);
    p.pair_count.push_back(r <= top ? t.pairs[static_cast<std::size_t>(r)] : 0);
  }
  return p;
}

nlohmann::json CompressionProfile::to_json() const {
  nlohmann::json j;
  j["space"] = space;
  j["embedding"] = embedding;
  j["strategy"] = strategy.tag();
  j["requested_r_max"] = requested_r_max;
  j["r_max"] = r_max();
  j["ball_radius"] = ball_radius;
  j["ball_points"] = ball_points;
  j["r"] = r_grid;
  j["rho"] = rho;
  j["rho_star"] = rho_star;
  j["rho_plus"] = rho_plus;
  j["pairs"] = pair_count;
  j["warnings"] = warnings;
  j["note"] = bias_note();
  return j;
}

void write_profile_csv(std::ostream& out, const CompressionProfile& p) {
  out << "r,rho,rho_star,rho_plus,pairs\n";
  for (std::size_t i = 0; i < p.r_grid.size(); ++i)
    out << p.r_grid[i] << ',' << number_text(p.rho[i]) << ',' << number_text(p.rho_star[i]) << ','
        << number_text(p.rho_plus[i]) << ',' << p.pair_count[i] << '\n';
}

CompressionProfile read_profile_csv(std::istream& in, const Strategy& strategy) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,rho,rho_star,rho_plus,pairs", 0) != 0)
    throw InputError("profile CSV must start with the header r,rho,rho_star,rho_plus,pairs");
  CompressionProfile p;
  p.strategy = strategy;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw InputError("profile CSV row " + std::to_string(row) + " needs 5 fields");
    try {
      int r = std::stoi(cells[0]);
      if (r != static_cast<int>(p.r_grid.size()) + 1)
        throw InputError("profile CSV row " + std::to_string(row) + ": r must run 1, 2, 3, ...");
      p.r_grid.push_back(r);
      p.rho.push_back(std::stod(cells[1]));
      p.rho_star.push_back(std::stod(cells[2]));
      p.rho_plus.push_back(std::stod(cells[3]));
      p.pair_count.push_back(std::stoull(cells[4]));
    } catch (const std::logic_error&) {
      throw InputError("profile CSV row " + std::to_string(row) + " has a non-numeric field");
    }
  }
  p.requested_r_max = p.r_max();
  return p;
}

// ---------------------------------------------------------------------------

std::vector<TreeTriple> tree_triples(int rank, int radius) {
  if (rank < 1) throw DomainError("free group rank must be positive");
  if (radius < 0) throw DomainError("radius must be non-negative");
  const std::uint64_t q = 2 * static_cast<std::uint64_t>(rank);
  auto words = [&](int p) -> std::uint64_t { return p == 0 ? 1 : sat_mul(q, sat_pow(q - 1, p - 1)); };
  // Reduced continuations of length m >= 1 of a fixed word of length p.
  auto extensions = [&](int p, int m) -> std::uint64_t {
    return p == 0 ? sat_mul(q, sat_pow(q - 1, m - 1)) : sat_pow(q - 1, m);
  };
  std::vector<TreeTriple> out;
  for (int p = 0; p <= radius; ++p)
    for (int ks = p; ks <= radius; ++ks)
      for (int kt = p; kt <= radius; ++kt) {
        if (ks == p && kt == p) continue;
        std::uint64_t count;
        if (ks == p)
          count = sat_mul(words(p), extensions(p, kt - p));
        else if (kt == p)
          count = sat_mul(words(p), extensions(p, ks - p));
        else if (p == 0)
          count = sat_mul(q, sat_pow(q - 1, ks + kt - 1));
        else
          count = sat_mul(sat_mul(words(p), sat_mul(q - 1, q - 2)), sat_pow(q - 1, ks + kt - 2 * p - 2));
        if (count > 0) out.push_back({ks, kt, p, count});
      }
  return out;
}

Strategy resolve_strategy(const Space& space, const EmbeddingSpec& spec, const Strategy& requested) {
  if (requested.kind != StrategyKind::Auto) return requested;
  if (space.is_standard_free_group() && spec.is<TreeEmbedding>()) return Strategy::closed_form();
  if (space.is_product() && space.factors().size() == 2 && spec.is<DirectSumSpec>() &&
      space.factors()[0].integer_metric() && space.factors()[1].integer_metric())
    return Strategy::product_levels();
  return Strategy::exact();
}

LevelTable level_table(const Space& space, const EmbeddingSpec& spec, int radius, const Strategy& requested,
                       std::uint64_t max_pairs) {
  Strategy s = resolve_strategy(space, spec, requested);
  switch (s.kind) {
    case StrategyKind::TreeClosedForm:
      return closed_form_levels(space, spec, radius);
    case StrategyKind::Sampled:
      return sampled_levels(space, spec, radius, s);
    case StrategyKind::ProductLevels: {
      validate_embedding(spec, space);
      if (!spec.is<DirectSumSpec>() || !space.factors()[0].integer_metric() || !space.factors()[1].integer_metric())
        throw ConfigError("product-levels needs a direct sum on a product of integer-metric factors");
      const auto& sum = spec.as<DirectSumSpec>();
      return combine_levels(level_table(space.factors()[0], *sum.first, radius, Strategy::automatic(), max_pairs),
                            level_table(space.factors()[1], *sum.second, radius, Strategy::automatic(), max_pairs));
    }
    default:
      return exact_levels(space, spec, radius, max_pairs);
  }
}

CompressionProfile compression_profile(const Space& space, const EmbeddingSpec& spec, const ProfileParams& params) {
  if (params.r_max < 1) throw DomainError("r_max must be at least 1");
  validate_embedding(spec, space);
  int radius = params.ball_radius >= 0 ? params.ball_radius : (params.r_max + 1) / 2;
  Strategy s = resolve_strategy(space, spec, params.strategy);
  LevelTable t = level_table(space, spec, radius, s, params.max_pairs);
  CompressionProfile p = CompressionProfile::from_levels(t, params.r_max);
  p.strategy = s;
  p.ball_radius = radius;
  p.space = space.name();
  p.embedding = spec.name();
  if (s.kind == StrategyKind::ProductLevels)
    p.warnings.push_back("product-levels domain is B_X(R) x B_Y(R) with R = " + std::to_string(radius));
  return p;
}

// ---------------------------------------------------------------------------

nlohmann::json AsymptoticEstimate::to_json() const {
  return {{"slope", slope},
          {"tail_min", tail_min},
          {"window", {window.lo, window.hi}},
          {"residual", residual},
          {"points", points},
          {"strategy", strategy}};
}

AsymptoticEstimate asymptotic_compression(const CompressionProfile& p, Window w) {
  if (w.lo < 2) throw EstimationError("window must start at r >= 2");
  if (w.hi > p.r_max() || w.hi < w.lo)
    throw EstimationError("window [" + std::to_string(w.lo) + "," + std::to_string(w.hi) +
                          "] leaves the profile grid 1.." + std::to_string(p.r_max()));
  std::vector<double> x, y;
  for (std::size_t i = 0; i < p.r_grid.size(); ++i) {
    int r = p.r_grid[i];
    if (r < w.lo || r > w.hi) continue;
    x.push_back(std::log(static_cast<double>(r)));
    y.push_back(std::log(p.rho_star[i]));
  }
  if (x.size() < 4) throw EstimationError("window holds fewer than 4 grid points");
  AsymptoticEstimate e;
  e.window = w;
  e.points = static_cast<int>(x.size());
  e.slope = least_squares(x, y, e.intercept, e.residual);
  e.tail_min = kInf;
  for (std::size_t i = 0; i < x.size(); ++i) e.tail_min = std::min(e.tail_min, y[i] / x[i]);
  e.strategy = p.strategy.tag();
  return e;
}

AsymptoticEstimate asymptotic_compression(const CompressionProfile& p) {
  return asymptotic_compression(p, Window{std::max(2, p.r_max() / 2), p.r_max()});
}

// ---------------------------------------------------------------------------

PairProfile::PairProfile(std::vector<std::pair<double, double>> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  suffix_min_.assign(pairs_.size() + 1, kInf);
  for (std::size_t i = pairs_.size(); i-- > 0;) suffix_min_[i] = std::min(suffix_min_[i + 1], pairs_[i].second);
  prefix_max_.assign(pairs_.size() + 1, 0.0);
  for (std::size_t i = 0; i < pairs_.size(); ++i) prefix_max_[i + 1] = std::max(prefix_max_[i], pairs_[i].second);
}

double PairProfile::rho(double r) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), r,
                             [](const std::pair<double, double>& p, double v) { return p.first < v; });
  return suffix_min_[static_cast<std::size_t>(it - pairs_.begin())];
}

double PairProfile::rho_plus(double r) const {
  auto it = std::upper_bound(pairs_.begin(), pairs_.end(), r,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  return prefix_max_[static_cast<std::size_t>(it - pairs_.begin())];
}

CompressionProfile PairProfile::to_profile(int r_max, const std::string& tag) const {
  LevelTable t;
  for (const auto& [d, e] : pairs_) t.record(d, e);
  CompressionProfile p = CompressionProfile::from_levels(t, r_max);
  p.strategy = Strategy::exact();
  p.embedding = tag;
  return p;
}

PairProfile pair_profile(std::size_t n, const std::function<double(std::size_t, std::size_t)>& source,
                         const std::function<double(std::size_t, std::size_t)>& image) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(n < 2 ? 0 : n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(source(i, j), image(i, j));
  return PairProfile(std::move(pairs));
}

PairProfile embedding_pairs(const Space& space, const EmbeddingSpec& spec, const Ball& ball) {
  validate_embedding(spec, space);
  const auto& pts = ball.points;
  return pair_profile(
      pts.size(), [&](std::size_t i, std::size_t j) { return space.distance(pts[i], pts[j]); },
      [&](std::size_t i, std::size_t j) { return pair_distance(spec, space, pts[i], pts[j]); });
}

nlohmann::json LipschitzFit::to_json() const {
  return {{"C", C}, {"D", D}, {"max_violation", max_violation}, {"pairs", pairs}};
}

LipschitzFit lipschitz_fit(const PairProfile& pairs, double d_scale) {
  if (pairs.empty() || !(pairs.max_source() > 0.0)) throw EstimationError("no pair at positive source distance");
  LipschitzFit fit;
  fit.D = d_scale > 0.0 ? pairs.rho_plus(d_scale) : 0.0;
  fit.pairs = pairs.size();
  for (const auto& [dx, dy] : pairs.pairs()) {
    if (dx <= 0.0) continue;
    fit.C = std::max(fit.C, (dy - fit.D) / dx);
  }
  fit.max_violation = 0.0;
  for (const auto& [dx, dy] : pairs.pairs())
    fit.max_violation = std::max(fit.max_violation, dy - (fit.C * dx + fit.D));
  return fit;
}

std::string to_string(Growth g) {
  switch (g) {
    case Growth::Bounded:
      return "bounded";
    case Growth::Grows:
      return "grows";
    case Growth::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

GrowthFit classify_growth(std::vector<double> sizes, std::vector<double> values) {
  if (sizes.size() != values.size() || sizes.size() < 2)
    throw EstimationError("growth classification needs at least two (size, value) points");
  GrowthFit g;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0)) throw EstimationError("sizes must be positive");
    x.push_back(std::log(sizes[i]));
    y.push_back(std::log(std::max(values[i], 1e-300)));
  }
  double intercept = 0.0, rms = 0.0;
  g.log_slope = least_squares(x, y, intercept, rms);
  if (g.log_slope >= 0.35)
    g.growth = Growth::Grows;
  else if (g.log_slope <= 0.2)
    g.growth = Growth::Bounded;
  g.sizes = std::move(sizes);
  g.values = std::move(values);
  return g;
}

// ---------------------------------------------------------------------------

namespace {

bool staircase_type(const EmbeddingSpec& f) { return f.is<Staircase>() || f.is<L1ToL2>(); }

std::optional<AsymptoticEstimate> tail_estimate(const CompressionProfile& p, int r_max) {
  if (p.r_max() < r_max) return std::nullopt;
  return asymptotic_compression(p, Window{std::max(2, r_max / 2), r_max});
}

}  // namespace

CheckReport composition_check(const Space& space, const EmbeddingSpec& f, const EmbeddingSpec& g,
                              const CompositionParams& params) {
  if (params.r_max < 8) throw DomainError("composition check needs r_max >= 8");
  validate_embedding(g, space);
  CheckReport report;
  report.check = "composition";
  report.notes.push_back(bias_note());

  const int radius = (params.r_max + 1) / 2;
  Ball ball = space.ball(radius);
  const std::size_t n = ball.points.size();

  std::vector<HilbertVector> images;
  std::size_t dim = 0;
  for (const auto& x : ball.points) {
    images.push_back(embed(g, space, x));
    if (!images.back().intervals().empty())
      throw ConfigError("inner map " + g.name() + " does not produce coordinate vectors");
    for (const auto& [k, v] : images.back().sparse()) {
      auto* axis = std::get_if<AxisKey>(&k.key);
      if (!axis || k.block != 0) throw ConfigError("inner map " + g.name() + " does not produce coordinate vectors");
      dim = std::max(dim, axis->index + 1);
    }
  }
  std::vector<std::vector<double>> coords;
  for (const auto& v : images) coords.push_back(*v.axis_coordinates(dim));
  Space y = Space::from_cloud(
      PointCloud::from_coordinates("image", coords, staircase_type(f) ? CoordinateNorm::L1 : CoordinateNorm::Euclidean),
      space.options());
  validate_embedding(f, y);

  std::vector<std::pair<double, double>> fg, gp, fp;
  fg.reserve(n * (n - 1) / 2);
  gp.reserve(n * (n - 1) / 2);
  fp.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = space.distance(ball.points[i], ball.points[j]);
      double dy = y.cloud().distance(i, j);
      double e = pair_distance(f, y, CloudPoint{i}, CloudPoint{j});
      fg.emplace_back(dx, e);
      gp.emplace_back(dx, dy);
      fp.emplace_back(dy, e);
    }
  PairProfile rho_fg(std::move(fg)), rho_g(std::move(gp)), rho_f(std::move(fp));
  if (rho_fg.max_source() < params.r_max)
    throw ConfigError("source ball does not realize distance r_max = " + std::to_string(params.r_max));

  nlohmann::json rows = nlohmann::json::array();
  int violations = 0;
  for (int r = 1; r <= params.r_max; ++r) {
    double lhs = rho_fg.rho(r);
    double g_r = rho_g.rho(r);
    double rhs = rho_f.rho(g_r);
    bool ok = !std::isfinite(rhs) || lhs >= rhs * (1.0 - params.pointwise_tolerance) - params.pointwise_tolerance;
    if (!ok) ++violations;
    rows.push_back({{"r", r}, {"rho_fg", lhs}, {"rho_g", g_r}, {"rho_f_of_rho_g", finite_or_null(rhs)}, {"ok", ok}});
  }

  const int lo = params.r_max / 2;
  const bool bounded_g = rho_g.rho(lo) == rho_g.rho(params.r_max);
  auto est_fg = asymptotic_compression(rho_fg.to_profile(params.r_max, "compose(" + f.name() + "," + g.name() + ")"));
  nlohmann::json slopes = {{"R_fg", est_fg.to_json()}};
  Verdict slope_verdict = Verdict::Pass;
  if (bounded_g) {
    report.notes.push_back("rho_g is constant on the tail window (g bounded on the tested range): R_g = 0 and "
                           "R_fg >= R_f R_g holds trivially");
    slopes["short_circuit"] = true;
  } else {
    auto est_g = asymptotic_compression(rho_g.to_profile(params.r_max, g.name()));
    auto pf = rho_f.to_profile(params.r_max, f.name());
    auto est_f = tail_estimate(pf, params.r_max);
    if (!est_f)
      throw ConfigError("image cloud g(B) realizes distances only up to " + number_text(rho_f.max_source()) +
                        "; incompatible with the grid 1.." + std::to_string(params.r_max));
    double product = est_f->slope * est_g.slope;
    slopes["R_f"] = est_f->to_json();
    slopes["R_g"] = est_g.to_json();
    slopes["R_f_times_R_g"] = product;
    slopes["short_circuit"] = false;
    if (est_fg.slope < product - params.slope_tolerance) slope_verdict = Verdict::Fail;
  }
  report.details = {{"space", space.name()},
                    {"f", f.name()},
                    {"g", g.name()},
                    {"r_max", params.r_max},
                    {"ball_radius", radius},
                    {"strategy", "exact-pairwise"},
                    {"pointwise", rows},
                    {"pointwise_violations", violations},
                    {"slopes", slopes},
                    {"slope_tolerance", params.slope_tolerance}};
  report.verdict = combine({violations == 0 ? Verdict::Pass : Verdict::Fail, slope_verdict});
  return report;
}

CheckReport product_check(const GroupSpec& xs, const GroupSpec& ys, const EmbeddingSpec& f, const EmbeddingSpec& g,
                          const ProductParams& params, const SpaceOptions& options) {
  if (params.r_max < 8) throw DomainError("product check needs r_max >= 8");
  Space x(xs, options), y(ys, options);
  validate_embedding(f, x);
  validate_embedding(g, y);
  if (!x.integer_metric() || !y.integer_metric()) throw ConfigError("product check needs integer-metric factors");
  const int radius = (params.r_max + 1) / 2;

  LevelTable tf = level_table(x, f, radius, Strategy::automatic());
  LevelTable tg = level_table(y, g, radius, Strategy::automatic());
  LevelTable th = combine_levels(tf, tg);
  auto pf = CompressionProfile::from_levels(tf, params.r_max);
  auto pg = CompressionProfile::from_levels(tg, params.r_max);
  auto ph = CompressionProfile::from_levels(th, params.r_max);

  CheckReport report;
  report.check = "product";
  report.notes.push_back(bias_note());
  report.notes.push_back("domain of h is B_X(R) x B_Y(R) with R = " + std::to_string(radius) +
                         "; factor profiles are taken over B_X(R) and B_Y(R)");

  auto value = [](const CompressionProfile& p, int r) { return r <= p.r_max() ? p.rho_at(r) : kInf; };
  nlohmann::json rows = nlohmann::json::array();
  int violations = 0;
  for (int r = 1; r <= ph.r_max(); ++r) {
    int half = (r + 1) / 2;
    double bound = std::min(value(pf, half), value(pg, half)) / std::sqrt(2.0);
    double lhs = ph.rho_at(r);
    bool ok = !std::isfinite(bound) || lhs >= bound * (1.0 - params.pointwise_tolerance) - params.pointwise_tolerance;
    if (!ok) ++violations;
    rows.push_back({{"r", r}, {"rho_h", lhs}, {"bound", finite_or_null(bound)}, {"ok", ok}});
  }

  nlohmann::json slopes;
  Verdict slope_verdict = Verdict::Inconclusive;
  auto eh = tail_estimate(ph, params.r_max);
  auto ef = tail_estimate(pf, params.r_max);
  auto eg = tail_estimate(pg, params.r_max);
  if (eh) {
    slopes["R_h"] = eh->to_json();
    double floor = kInf;
    if (ef) {
      slopes["R_f"] = ef->to_json();
      floor = std::min(floor, ef->slope);
    }
    if (eg) {
      slopes["R_g"] = eg->to_json();
      floor = std::min(floor, eg->slope);
    }
    if (std::isfinite(floor)) {
      slopes["min_R_f_R_g"] = floor;
      slope_verdict = eh->slope >= floor - params.slope_tolerance ? Verdict::Pass : Verdict::Fail;
    } else {
      report.notes.push_back("neither factor has pairs on the tail window; slope comparison skipped");
      slope_verdict = Verdict::Pass;
    }
  } else {
    report.notes.push_back("product profile does not reach r_max");
  }

  report.details = {{"x", x.name()},
                    {"y", y.name()},
                    {"f", f.name()},
                    {"g", g.name()},
                    {"r_max", params.r_max},
                    {"factor_radius", radius},
                    {"strategy", "product-levels"},
                    {"profile_h", ph.to_json()},
                    {"pointwise", rows},
                    {"pointwise_violations", violations},
                    {"slopes", slopes},
                    {"slope_tolerance", params.slope_tolerance}};
  report.verdict = combine({violations == 0 ? Verdict::Pass : Verdict::Fail, slope_verdict});
  return report;
}

}  // namespace hcomp
