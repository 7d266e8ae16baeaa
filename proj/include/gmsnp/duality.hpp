#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmsnp/homomorphism.hpp"
#include "gmsnp/patterns.hpp"
#include "gmsnp/structure.hpp"
#include "gmsnp/verdict.hpp"

namespace gmsnp {

struct RootedTree {
  Structure tree;
  Vertex root = 0;
  /// rooted_code(tree, root)
  std::string code;
};

inline constexpr std::size_t kDefaultDomainCap = 20'000;
inline constexpr std::size_t kDefaultUniverseCap = 5'000;

/// Which rooted trees the dual elements are built from. Substructures: every
/// rooted connected substructure of a tree. WholeBranches: for each vertex,
/// the subsets of its incident tuples, each with everything beyond it; a
/// smaller universe for which the same construction is a dual.
enum class UniverseKind { Substructures, WholeBranches };

struct DualOptions {
  UniverseKind universe = UniverseKind::Substructures;
  std::size_t domain_cap = kDefaultDomainCap;
  std::size_t universe_cap = kDefaultUniverseCap;
};

/// The rooted trees of the chosen universe kind (by default all rooted
/// connected substructures of the trees), one per rooted isomorphism class,
/// sorted by code. Throws DataError if some member is not
/// a non-empty tree over `sigma`, SizeGuardExceeded past options.universe_cap.
std::vector<RootedTree> rooted_universe(const Signature& sigma, const std::vector<Structure>& trees,
                                        const DualOptions& options = {});

struct Dual {
  /// Over sigma; element i is the vertex "d<i>".
  Structure structure;
  std::vector<RootedTree> universe;
  /// Universe indices of the members of each element.
  std::vector<std::vector<std::size_t>> members;
};

/// Finite dual of a set of trees: A -> dual iff no tree maps to A.
///
/// Elements are the sets of universe members that contain the point, are
/// closed under rooted substructures and under gluing two members at the root
/// (when the glue is again in the universe), and contain no rooting of a whole
/// tree. A tuple (U_1..U_r) lies in R iff for every rooted tree (S,s) and
/// every R-tuple e of S with s at position j: if the pieces of S minus e
/// hanging at each e_k lie in U_k, then (S,s) lies in U_j.
/// Throws SizeGuardExceeded past options.domain_cap elements.
Dual dual_of_trees(const Signature& sigma, const std::vector<Structure>& trees,
                   const DualOptions& options = {});

/// Colour-forgetting reduct of a σ-structure with the colour choices used to
/// pull colourings back.
struct Reduct {
  Structure factor;
  /// factor vertex -> vertex of the σ-structure
  std::vector<Vertex> origin;
  /// factor vertex -> least vertex colour (index into palette.vertex_colors())
  std::vector<std::size_t> vertex_color;
  /// per τ-symbol: factor tuple -> least colour of that symbol
  std::vector<std::map<Tuple, std::size_t>> tuple_color;
};

/// Keeps the vertices with a vertex colour and, per τ-symbol, the tuples that
/// carry one of its colours. Ties go to the least colour name. A structure
/// already over palette.tau() is returned unchanged.
Reduct forget_colors(const Structure& d, const Palette& palette);

/// Colouring of `a` read off a homomorphism a -> reduct.factor.
Structure pull_back(const Reduct& reduct, const Palette& palette, const Structure& a,
                    const HomWitness& a_to_factor);

struct FactorOptions {
  bool core = false;
  /// dual.universe is tried first; WholeBranches is the fallback when the
  /// domain cap is hit, unless strict_universe is set.
  DualOptions dual;
  bool strict_universe = false;
  HomOptions hom;
  std::size_t quotient_bound = kDefaultQuotientVertexBound;
};

struct FactorReport {
  PatternSet patterns;
  std::vector<Structure> trees;
  Structure dual;
  UniverseKind universe = UniverseKind::Substructures;
  std::size_t universe_size = 0;
  Structure factor;
  /// Largest pattern vertex count; instances of girth above it are decided by the factor.
  std::size_t threshold = 1;
  std::optional<Verdict> verdict;
};

/// Trees of the patterns, their dual, and the dual's colour-forgetting reduct
/// (optionally reduced to its core).
FactorReport minimal_finite_factor(const PatternSet& f, const FactorOptions& options = {});

}  // namespace gmsnp
