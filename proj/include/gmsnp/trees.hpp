#pragma once

#include <string>

#include "gmsnp/structure.hpp"

namespace gmsnp {

/// Canonical code of a tree rooted at `root`.
///
/// Built bottom-up: a vertex is "(" + its sorted branch codes + ")"; a branch is
/// the symbol index, the root's position in the tuple ("~" for symmetric
/// symbols) and the codes of the subtrees hanging off the other positions.
/// Equal codes iff rooted-isomorphic. The bare vertex has code "()".
/// Throws DataError if `tree` is not a tree.
std::string rooted_code(const Structure& tree, Vertex root);

/// Isomorphism-invariant code of a tree: the least rooted code over all roots.
/// The empty structure has the empty code.
std::string tree_code(const Structure& tree);

inline const std::string kPointCode = "()";

}  // namespace gmsnp
