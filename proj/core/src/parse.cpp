#include "hcomp/parse.hpp"

#include <cctype>
#include <charconv>

#include "hcomp/error.hpp"

namespace hcomp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view context) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InputError("expected an integer in '" + std::string(context) + "'");
  return v;
}

double parse_double(std::string_view s, std::string_view context) {
  try {
    std::size_t used = 0;
    std::string copy(s);
    double v = std::stod(copy, &used);
    if (used != copy.size()) throw std::invalid_argument(copy);
    return v;
  } catch (const std::exception&) {
    throw InputError("expected a number in '" + std::string(context) + "'");
  }
}

// "name(args)" -> args, or nullopt when `text` is not a call to `name`.
std::optional<std::string_view> call_args(std::string_view text, std::string_view name) {
  if (text.size() < name.size() + 2 || text.substr(0, name.size()) != name) return std::nullopt;
  if (text[name.size()] != '(' || text.back() != ')') return std::nullopt;
  return text.substr(name.size() + 1, text.size() - name.size() - 2);
}

// "key=value" parameter after a colon.
std::string_view param(std::string_view text, std::string_view key) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || trim(text.substr(0, eq)) != key)
    throw InputError("expected '" + std::string(key) + "=...' in '" + std::string(text) + "'");
  return trim(text.substr(eq + 1));
}

}  // namespace

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) throw InputError("unbalanced parentheses in '" + std::string(text) + "'");
    if (c == sep && depth == 0) {
      out.emplace_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw InputError("unbalanced parentheses in '" + std::string(text) + "'");
  out.emplace_back(trim(text.substr(start)));
  return out;
}

GroupSpec parse_group(std::string_view raw) {
  std::string_view text = trim(raw);
  if (text.empty()) throw InputError("empty group spec");

  if (auto args = call_args(text, "prod")) {
    std::vector<GroupSpec> factors;
    for (const auto& part : split_top_level(*args)) factors.push_back(parse_group(part));
    return GroupSpec::product(std::move(factors));
  }
  if (text.starts_with("cloud:")) {
    auto id = trim(text.substr(6));
    if (id.empty()) throw InputError("cloud spec needs a fixture id");
    return GroupSpec::point_cloud(std::string(id));
  }
  if (text == "heis") return GroupSpec::heisenberg();
  if (text == "z") return GroupSpec::lattice(1);
  if (text.starts_with("zn:")) return GroupSpec::lattice(parse_int(param(text.substr(3), "n"), text));
  if (text[0] == 'z') return GroupSpec::lattice(parse_int(text.substr(1), text));
  if (text[0] == 'f') {
    auto parts = split_top_level(text.substr(1), '+');
    int rank = parse_int(parts[0], text);
    if (rank < 1 || rank > 26) throw InputError("free group rank must be in [1, 26]: '" + std::string(text) + "'");
    std::vector<ReducedWord> extra;
    for (std::size_t i = 1; i < parts.size(); ++i) extra.push_back(reduce_word(parts[i], rank));
    return GroupSpec::free_group(rank, std::move(extra));
  }
  throw InputError("unknown group spec '" + std::string(text) + "'");
}

EmbeddingSpec parse_embedding(std::string_view raw) {
  std::string_view text = trim(raw);
  if (text.empty()) throw InputError("empty embedding spec");

  for (std::string_view name : {"sum", "compose"}) {
    if (auto args = call_args(text, name)) {
      auto parts = split_top_level(*args);
      if (parts.size() != 2)
        throw InputError(std::string(name) + "(...) takes two arguments: '" + std::string(text) + "'");
      auto f = parse_embedding(parts[0]);
      auto g = parse_embedding(parts[1]);
      return name == "sum" ? direct_sum(std::move(f), std::move(g)) : compose(std::move(f), std::move(g));
    }
  }
  if (text == "tree") return EmbeddingSpec::tree(0.0);
  if (text.starts_with("weighted-tree:"))
    return EmbeddingSpec::tree(parse_double(param(text.substr(14), "eps"), text));
  if (text == "iso") return EmbeddingSpec::isometric();
  if (text.starts_with("iso-zn:")) {
    int n = parse_int(param(text.substr(7), "n"), text);
    if (n < 0) throw InputError("dimension must be non-negative: '" + std::string(text) + "'");
    return EmbeddingSpec::isometric(n);
  }
  if (text == "staircase") return EmbeddingSpec::staircase();
  if (text == "l1l2") return EmbeddingSpec::l1_to_l2();
  if (text == "const") return EmbeddingSpec::constant();
  throw InputError("unknown embedding spec '" + std::string(text) + "'");
}

}  // namespace hcomp
