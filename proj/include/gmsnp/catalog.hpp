#pragma once

#include <cstddef>

#include "gmsnp/structure.hpp"

// Small named structures used across the toolkit, the tests and the CLI.
namespace gmsnp::catalog {

/// {E/2}, E symmetric.
Signature graph_signature();
/// {E/2}, E not symmetric.
Signature digraph_signature();

Structure complete_graph(std::size_t n);
/// Undirected cycle C_n (n >= 3).
Structure cycle_graph(std::size_t n);
Structure directed_cycle(std::size_t n);
/// Directed path on n vertices: 0 -> 1 -> ... -> n-1.
Structure directed_path(std::size_t n);
/// Transitive tournament T_n: arcs i -> j for i < j.
Structure transitive_tournament(std::size_t n);
/// One vertex carrying a loop in every relation of the signature.
Structure loop(const Signature& signature);

/// Ternary signature {R/3}.
Signature ternary_signature();
/// ({0,1}, {(1,0,0),(0,1,0),(0,0,1)})
Structure one_in_three();
/// ({0,1}, {0,1}^3 minus the two constant tuples)
Structure not_all_equal();

}  // namespace gmsnp::catalog
