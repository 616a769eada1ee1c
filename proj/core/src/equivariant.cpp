#include "hcomp/equivariant.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hcomp/error.hpp"

namespace hcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t sphere_count(int rank, int n) {
  if (n == 0) return 1;
  std::uint64_t q = 2 * static_cast<std::uint64_t>(rank);
  std::uint64_t c = q;
  for (int i = 1; i < n; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / (q - 1)) return std::numeric_limits<std::uint64_t>::max();
    c *= q - 1;
  }
  return c;
}

// Uniform reduced word of length n: a free first letter, then any letter
// but the inverse of the previous one.
std::string random_word(const std::string& alphabet, int n, std::mt19937_64& rng) {
  std::string w;
  std::uniform_int_distribution<std::size_t> first(0, alphabet.size() - 1);
  std::uniform_int_distribution<std::size_t> next(0, alphabet.size() - 2);
  for (int i = 0; i < n; ++i) {
    if (w.empty()) {
      w.push_back(alphabet[first(rng)]);
      continue;
    }
    char banned = inverse_letter(w.back());
    std::size_t k = next(rng);
    std::size_t banned_at = alphabet.find(banned);
    if (k >= banned_at) ++k;
    w.push_back(alphabet[k]);
  }
  return w;
}

void sphere_words(const std::string& alphabet, int n, std::string& prefix, const std::function<void(const std::string&)>& fn) {
  if (static_cast<int>(prefix.size()) == n) {
    fn(prefix);
    return;
  }
  for (char c : alphabet) {
    if (!prefix.empty() && c == inverse_letter(prefix.back())) continue;
    prefix.push_back(c);
    sphere_words(alphabet, n, prefix, fn);
    prefix.pop_back();
  }
}

// A pair with |s| = ks, |t| = kt and common prefix exactly p.
std::pair<ReducedWord, ReducedWord> representative(int ks, int kt, int p) {
  std::string s(static_cast<std::size_t>(p), 'a');
  std::string t = s;
  s.append(static_cast<std::size_t>(ks - p), 'b');
  t.append(static_cast<std::size_t>(kt - p), ks > p ? 'B' : 'b');
  return {ReducedWord::reduce(s, 2), ReducedWord::reduce(t, 2)};
}

}  // namespace

HilbertVector act(const ReducedWord& s, const HilbertVector& v) {
  if (!v.intervals().empty()) throw DomainError("the edge action is defined on edge coordinates only");
  HilbertVector out;
  for (const auto& [key, value] : v.sparse()) {
    const auto* edge = std::get_if<EdgeKey>(&key.key);
    if (!edge) throw DomainError("the edge action is defined on edge coordinates only");
    auto [moved, sign] = make_edge(s * edge->child, s * edge->parent);
    out.add({key.block, std::move(moved)}, sign * value);
  }
  return out;
}

HilbertVector tree_cocycle(const ReducedWord& s) {
  HilbertVector v;
  const std::size_t k = s.length();
  for (std::size_t j = 1; j <= k; ++j) {
    auto [edge, sign] = make_edge(s.prefix(k - j + 1), s.prefix(k - j));
    v.add({0, std::move(edge)}, sign);
  }
  return v;
}

HilbertVector affine_act(const ReducedWord& s, const HilbertVector& x) { return act(s, x) + tree_cocycle(s); }

nlohmann::json CocycleCheck::to_json() const {
  return {{"max_residual", max_residual},
          {"samples", samples},
          {"worst", {{"s", worst_s.str()}, {"t", worst_t.str()}}}};
}

CocycleCheck verify_cocycle(const std::vector<std::pair<ReducedWord, ReducedWord>>& samples, const Cocycle& b,
                            const Representation& pi) {
  CocycleCheck c;
  c.samples = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [s, t] = samples[i];
    double residual = (b(s * t) - pi(s, b(t)) - b(s)).norm();
    if (i == 0 || residual > c.max_residual) {
      c.max_residual = residual;
      c.worst_s = s;
      c.worst_t = t;
    }
  }
  return c;
}

std::vector<std::pair<ReducedWord, ReducedWord>> random_ball_pairs(int rank, int radius, std::size_t count,
                                                                   std::uint64_t seed) {
  if (rank < 1 || rank > 13) throw DomainError("free group rank must lie in 1..13");
  if (radius < 0) throw DomainError("radius must be non-negative");
  const std::string alphabet = reduced_word_alphabet(rank);
  std::vector<double> weights;
  for (int n = 0; n <= radius; ++n) weights.push_back(static_cast<double>(sphere_count(rank, n)));
  std::discrete_distribution<int> length(weights.begin(), weights.end());
  std::mt19937_64 rng(seed);
  std::vector<std::pair<ReducedWord, ReducedWord>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ReducedWord s = ReducedWord::reduce(random_word(alphabet, length(rng), rng), rank);
    ReducedWord t = ReducedWord::reduce(random_word(alphabet, length(rng), rng), rank);
    out.emplace_back(std::move(s), std::move(t));
  }
  return out;
}

nlohmann::json EquivariantEstimate::to_json() const {
  nlohmann::json profile = nlohmann::json::array();
  for (std::size_t i = 0; i < r_grid.size(); ++i)
    profile.push_back({{"r", r_grid[i]}, {"rho_sphere", rho_sphere[i]}, {"rho_pairwise", rho_pairwise[i]}});
  nlohmann::json spheres = nlohmann::json::array();
  for (std::size_t n = 0; n < sphere_min.size(); ++n)
    spheres.push_back({{"n", n}, {"min_norm", sphere_min[n]}, {"strategy", sphere_strategy[n]}});
  return {{"rho_profile", profile},
          {"spheres", spheres},
          {"max_disagreement", max_disagreement},
          {"representative_error", representative_error},
          {"slope", slope.to_json()},
          {"pairwise_strategy", "tree-closed-form"},
          {"note", "lower estimate of the equivariant compression; its ceiling of 1/2 is not computed here"}};
}

EquivariantEstimate equivariant_compression(const EquivariantParams& params) {
  if (params.r_max < 4) throw DomainError("equivariant compression needs r_max >= 4");
  if (params.rank < 2 || params.rank > 13) throw DomainError("free group rank must lie in 2..13");
  EquivariantEstimate e;
  const std::string alphabet = reduced_word_alphabet(params.rank);
  std::mt19937_64 rng(params.seed);

  for (int n = 0; n <= params.r_max; ++n) {
    double best = kInf;
    auto visit = [&](const std::string& w) {
      best = std::min(best, tree_cocycle(ReducedWord::reduce(w, params.rank)).norm());
    };
    if (sphere_count(params.rank, n) <= params.sphere_cap) {
      std::string prefix;
      sphere_words(alphabet, n, prefix, visit);
      e.sphere_strategy.push_back("exact");
    } else {
      for (std::size_t i = 0; i < params.sphere_samples; ++i) visit(random_word(alphabet, n, rng));
      e.sphere_strategy.push_back("sampled(seed=" + std::to_string(params.seed) +
                                  ",count=" + std::to_string(params.sphere_samples) + ")");
    }
    e.sphere_min.push_back(best);
  }

  Space space(GroupSpec::free_group(params.rank));
  ProfileParams pp;
  pp.r_max = params.r_max;
  pp.strategy = Strategy::closed_form();
  CompressionProfile pairwise = compression_profile(space, EmbeddingSpec::tree(0.0), pp);

  for (const auto& tr : tree_triples(params.rank, (params.r_max + 1) / 2)) {
    auto [s, t] = representative(tr.ks, tr.kt, tr.p);
    double err = std::fabs((tree_cocycle(s) - tree_cocycle(t)).squared_norm() - (tr.ks + tr.kt - 2.0 * tr.p));
    e.representative_error = std::max(e.representative_error, err);
  }

  for (int r = 1; r <= params.r_max; ++r) {
    double a = kInf;
    for (int n = r; n <= params.r_max; ++n) a = std::min(a, e.sphere_min[static_cast<std::size_t>(n)]);
    double b = pairwise.rho_at(r);
    e.r_grid.push_back(r);
    e.rho_sphere.push_back(a);
    e.rho_pairwise.push_back(b);
    e.max_disagreement = std::max(e.max_disagreement, std::fabs(a - b));
  }
  Window w = params.window.lo > 0 ? params.window : Window{params.r_max / 2, params.r_max};
  e.slope = asymptotic_compression(pairwise, w);
  return e;
}

}  // namespace hcomp
