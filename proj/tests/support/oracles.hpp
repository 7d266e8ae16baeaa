#pragma once

// Brute-force reference implementations used to check the library. None of
// them calls the search code under test.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gmsnp/duality.hpp"
#include "gmsnp/logic.hpp"
#include "gmsnp/patterns.hpp"
#include "gmsnp/structure.hpp"

namespace oracle {

using gmsnp::Structure;

/// Tries every vertex map |b|^|a|.
bool brute_hom(const Structure& a, const Structure& b);

/// Checks a map tuple by tuple.
bool is_hom(const Structure& a, const Structure& b, const std::vector<gmsnp::Vertex>& map);

/// Enumerates every proper colouring of `a` and tests every pattern with brute_hom.
bool brute_fpp(const gmsnp::PatternSet& f, const Structure& a);

/// Second-order model checking: every interpretation of the existential
/// relations (restricted to the tuples their atoms can be evaluated on) is
/// tried, and each clause is checked under every variable assignment.
bool models(const gmsnp::Sentence& s, const Structure& a);

/// Returns an empty string iff the dual's domain is exactly the sets of
/// universe members satisfying D1-D4, and its relations are exactly the R2
/// closed tuples. Members are checked against rooted substructures, glues
/// and whole-tree rootings computed here by exhaustive enumeration.
/// Domain exhaustiveness is only checked for universes of at most
/// `exhaustive_limit` members.
std::string validate_dual(const gmsnp::Dual& d, const std::vector<Structure>& trees,
                          std::size_t exhaustive_limit = 16);

/// Rooted connected substructures of (t, root) by subset enumeration over tuples.
std::vector<std::string> rooted_substructure_codes(const Structure& t, gmsnp::Vertex root);

/// Random sentence over the digraph signature {E/2} within the compilable
/// fragment: 1-2 existentials, 1-2 clauses of at most 3 atoms.
gmsnp::Sentence random_sentence(std::mt19937_64& rng);

/// Random structure with `n` vertices and independent tuples of probability p.
Structure random_structure(const gmsnp::Signature& sig, std::size_t n, double p, std::mt19937_64& rng);

/// Random loopless graph: each pair becomes an edge with probability p.
Structure random_graph(std::size_t n, double p, std::mt19937_64& rng);

/// Pattern set for "no monochromatic triangle" in a 2-vertex-colouring.
gmsnp::PatternSet mono_triangle();
std::string mono_triangle_text();

/// Checks girth > l by looking for a short cycle with a plain DFS on the incidence multigraph.
bool girth_exceeds(const Structure& s, int l);

}  // namespace oracle
