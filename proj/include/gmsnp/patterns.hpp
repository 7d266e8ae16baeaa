#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmsnp/homomorphism.hpp"
#include "gmsnp/structure.hpp"

namespace gmsnp {

/// Vertex colours and per-symbol tuple colours over a base signature τ.
///
/// A colouring is represented as a Structure over the expanded signature
/// sigma(): vertex colour c becomes the unary symbol "@c", and colour c of
/// τ-symbol R becomes the symbol "R#c" with R's arity and symmetry.
/// Vertex colour symbols come first, then tuple colours in τ order.
class Palette {
 public:
  Palette() = default;
  Palette(Signature tau, std::vector<std::string> vertex_colors,
          std::vector<std::vector<std::string>> tuple_colors);

  const Signature& tau() const { return tau_; }
  const Signature& sigma() const { return sigma_; }
  const std::vector<std::string>& vertex_colors() const { return vertex_colors_; }
  const std::vector<std::string>& tuple_colors(std::size_t tau_symbol) const {
    return tuple_colors_[tau_symbol];
  }

  std::size_t vertex_symbol(std::size_t color) const { return color; }
  std::size_t tuple_symbol(std::size_t tau_symbol, std::size_t color) const {
    return offsets_[tau_symbol] + color;
  }

  /// What a σ-symbol stands for.
  struct Meaning {
    bool is_vertex_color;
    std::size_t tau_symbol;  // unused for vertex colours
    std::size_t color;
  };
  Meaning meaning(std::size_t sigma_symbol) const;

  bool operator==(const Palette& other) const {
    return tau_ == other.tau_ && vertex_colors_ == other.vertex_colors_ &&
           tuple_colors_ == other.tuple_colors_;
  }

 private:
  Signature tau_;
  std::vector<std::string> vertex_colors_;
  std::vector<std::vector<std::string>> tuple_colors_;
  std::vector<std::size_t> offsets_;
  Signature sigma_;
};

/// The τ-structure underlying a σ-structure: same vertices, a τ-tuple wherever
/// some colour of that symbol holds.
Structure base_of(const Palette& palette, const Structure& colored);

/// Builds the σ-structure of a colouring of `base`. vertex_color[v] indexes
/// palette.vertex_colors(); tuple_color(symbol, tuple) returns a colour index
/// of that τ-symbol (called once per occurrence).
template <typename TupleColor>
Structure make_coloring(const Palette& palette, const Structure& base,
                        const std::vector<std::size_t>& vertex_color, TupleColor&& tuple_color) {
  Structure s(palette.sigma(), base.names());
  for (Vertex v = 0; v < base.size(); ++v) s.add_tuple(palette.vertex_symbol(vertex_color[v]), {v});
  for (const auto& o : occurrences(base)) {
    s.add_tuple(palette.tuple_symbol(o.symbol, tuple_color(o.symbol, o.tuple)), o.tuple);
  }
  return s;
}

/// Exactly one vertex colour per vertex and one colour per tuple occurrence.
bool is_proper_coloring(const Palette& palette, const Structure& colored);

/// Forbidden patterns sharing one palette. Each pattern is a proper colouring
/// (over palette.sigma()) of a non-empty connected τ-structure.
struct PatternSet {
  Palette palette;
  std::vector<Structure> patterns;

  /// Throws DataError when an invariant fails.
  void validate() const;
  /// Largest pattern vertex count (at least 1).
  std::size_t max_pattern_size() const;
};

struct FppOptions {
  std::uint64_t node_budget = kDefaultNodeBudget;
  HomOptions hom;
};

/// A colouring of `a` into which no pattern maps, or nullopt if none exists.
///
/// Every homomorphism from the base of a pattern into `a` yields a nogood: the
/// colours of its image that would complete the pattern. Colourings are then
/// searched with unit propagation on the nogoods, one connected component at a
/// time, choosing the element with fewest colours per conflict weight. Both the
/// enumeration and the search count towards options.node_budget.
/// Throws BudgetExhausted.
std::optional<Structure> fpp_decide(const PatternSet& f, const Structure& a,
                                    const FppOptions& options = {});

/// True iff no pattern maps to the σ-structure `colored`.
bool avoids_patterns(const PatternSet& f, const Structure& colored, const HomOptions& options = {});

/// Tree-shaped surjective homomorphic images of the patterns, one per
/// isomorphism class, as σ-structures. Merged vertices and tuples keep the
/// union of their colours.
std::vector<Structure> tree_images(const PatternSet& f,
                                   std::size_t max_vertices = kDefaultQuotientVertexBound);

struct ClosureReport {
  std::size_t inverse_hom_checks = 0;
  std::size_t union_checks = 0;
  std::vector<std::string> counterexamples;

  bool ok() const { return counterexamples.empty(); }
};

/// Checks closure of FPP(f) under inverse homomorphisms and disjoint unions on
/// the sample. Besides homomorphisms between sample members, a few random
/// preimages of every accepted member are generated from `seed`.
ClosureReport fpp_closure_check(const PatternSet& f, const std::vector<Structure>& sample,
                                std::uint64_t seed, const FppOptions& options = {});

/// Patterns expressing CSP(h): one vertex colour per vertex of h, one colour
/// per symbol, and one forbidden single-tuple pattern per colour combination
/// that is not a tuple of h.
PatternSet csp_patterns(const Structure& h);

}  // namespace gmsnp
