#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gmsnp/structure.hpp"

namespace gmsnp {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

struct HomOptions {
  std::uint64_t node_budget = kDefaultNodeBudget;
};

/// witness[v] is the image of source vertex v.
using HomWitness = std::vector<Vertex>;

struct HomSearch {
  std::optional<HomWitness> witness;
  std::uint64_t nodes = 0;
};

/// Backtracking search with generalized arc consistency.
///
/// Connected components of `from` are searched one after another. Variable
/// order: smallest ratio of candidate count to the conflict weight of the
/// variable's constraints (each wipeout bumps the failing constraint), ties by
/// declared vertex order.
/// Values are tried in target vertex order, so results are reproducible.
/// Throws SignatureMismatch, and BudgetExhausted when more than
/// options.node_budget search nodes are needed.
HomSearch search_hom(const Structure& from, const Structure& to, const HomOptions& options = {});

std::optional<HomWitness> find_hom(const Structure& from, const Structure& to,
                                   const HomOptions& options = {});

inline bool maps_to(const Structure& from, const Structure& to, const HomOptions& options = {}) {
  return find_hom(from, to, options).has_value();
}

/// Checks a candidate map tuple by tuple, independently of the search.
bool verify_hom(const Structure& from, const Structure& to, const HomWitness& map);

bool hom_equivalent(const Structure& a, const Structure& b, const HomOptions& options = {});

/// The core of a: a minimal induced substructure that a retracts onto.
///
/// Greedy descent: whenever a maps into itself minus one vertex, continue from
/// the image of that map. Terminates once no single-vertex deletion admits a
/// homomorphism, which certifies that every endomorphism is surjective.
Structure core(const Structure& a, const HomOptions& options = {});

}  // namespace gmsnp
