#pragma once

// Spec strings for groups and embeddings.
//
//   group:     f2 | fK | f2+ab[+w...] | z | zN | zn:n=N | heis
//              | prod(G,G[,G...]) | cloud:<fixture-id or path.csv>
//   embedding: tree | weighted-tree:eps=E | iso | iso-zn:n=N | staircase
//              | l1l2 | const | sum(F,G) | compose(F,G)

#include <string>
#include <string_view>
#include <vector>

#include "hcomp/embeddings.hpp"
#include "hcomp/spaces.hpp"

namespace hcomp {

/// Throws InputError on malformed strings.
GroupSpec parse_group(std::string_view text);
EmbeddingSpec parse_embedding(std::string_view text);

/// Splits on top-level commas (ignoring commas nested inside parentheses).
std::vector<std::string> split_top_level(std::string_view text, char sep = ',');

}  // namespace hcomp
