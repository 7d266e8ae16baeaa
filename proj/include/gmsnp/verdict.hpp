#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmsnp/structure.hpp"

namespace gmsnp {

/// A 4-ary operation on the vertices of a structure with n vertices.
/// table[((a*n + b)*n + c)*n + d] = s(a,b,c,d).
struct OperationTable {
  std::size_t domain_size = 0;
  std::vector<Vertex> table;

  Vertex operator()(Vertex a, Vertex b, Vertex c, Vertex d) const {
    auto n = domain_size;
    return table[((a * n + b) * n + c) * n + d];
  }
  bool operator==(const OperationTable&) const = default;
};

struct Verdict {
  enum class Tag { P, NPComplete, Unknown };

  Tag tag = Tag::Unknown;
  /// Siggers table on the core (P verdicts from classify).
  std::optional<OperationTable> table;
  /// The core the table lives on.
  std::optional<Structure> core;
  /// Least odd k with C_k -> factor and C_k accepted by the patterns.
  std::optional<std::size_t> odd_cycle;
  /// Exhausted search nodes (NP-complete) or the budget that ran out (unknown).
  std::uint64_t search_nodes = 0;
  std::string note;
};

std::string to_string(Verdict::Tag tag);

}  // namespace gmsnp
