#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "gmsnp/duality.hpp"
#include "gmsnp/homomorphism.hpp"
#include "gmsnp/patterns.hpp"
#include "gmsnp/structure.hpp"
#include "gmsnp/verdict.hpp"

namespace gmsnp {

inline constexpr std::size_t kDefaultSiggersDomain = 4;

struct SiggersOptions {
  std::size_t max_domain = kDefaultSiggersDomain;
  HomOptions hom;
};

struct SiggersSearch {
  std::optional<OperationTable> table;
  std::uint64_t nodes = 0;
};

/// Searches an idempotent 4-ary polymorphism s of c with
/// s(a,r,e,a) = s(r,a,r,e). Argument tuples identified by the equation share
/// one variable; relation preservation becomes a homomorphism problem from
/// the quotient of c^4 to c. Idempotency is pinned, which loses nothing when
/// c is a core. Throws DataError past options.max_domain vertices and
/// BudgetExhausted.
SiggersSearch siggers_search(const Structure& c, const SiggersOptions& options = {});

/// Empty iff `table` satisfies the equation for all a,r,e and preserves every
/// relation of c; otherwise the first violation found.
std::string siggers_violation(const Structure& c, const OperationTable& table);

/// Core, then Siggers search: a table gives P, an exhausted search
/// NP-complete, a budget cut or an oversized core unknown.
Verdict classify(const Structure& c, const SiggersOptions& options = {});

/// Two-colourable, loops excluded. Arcs count in both directions.
bool is_bipartite(const Structure& g);

/// The undirected cycle on k vertices over a graph signature.
Structure cycle_over(const Signature& graph, std::size_t k);

/// Graph factors: a loop or a bipartite factor gives P; otherwise NP-complete
/// with the least odd k in (2l, 2l + 2|factor| + 2] such that C_k maps to the
/// factor and is accepted by the patterns, or unknown if the window has none.
/// Throws SignatureMismatch unless τ is a single symmetric binary symbol.
Verdict graph_factor_report(const FactorReport& report, const FppOptions& options = {});

}  // namespace gmsnp
