#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmsnp/patterns.hpp"
#include "gmsnp/structure.hpp"

namespace gmsnp {

/// Existentially quantified relation. `target` is "vertex" for vertex colours,
/// the name of a τ-symbol for tuple colours, or empty when unannotated.
struct Existential {
  std::string name;
  int arity = 1;
  std::string target;

  bool on_vertex() const { return target == "vertex"; }
  bool operator==(const Existential&) const = default;
};

struct Atom {
  std::string symbol;
  std::vector<std::string> args;
  bool negated = false;

  bool operator==(const Atom&) const = default;
};

/// One negated conjunct !(atoms...). Positive atoms form the α part,
/// negated atoms the β part.
struct Clause {
  std::vector<Atom> atoms;

  bool operator==(const Clause&) const = default;
};

struct Sentence {
  Signature tau;
  std::vector<Existential> existentials;
  std::vector<std::string> variables;
  std::vector<Clause> clauses;

  const Existential* existential(std::string_view name) const;
  bool operator==(const Sentence&) const = default;
};

/// Parses
///
///   sentence := ["exists" decl {"," decl}] "forall" IDENT {"," IDENT} ":" clause {"&" clause}
///   decl     := IDENT "/" INT "on" ("vertex" | IDENT)
///   clause   := "!(" atom {"&" atom} ")"
///   atom     := ["~"] IDENT "(" IDENT {"," IDENT} ")"
///
/// Symbols that are not declared existential are τ-symbols. With `tau` given,
/// they must be declared there; otherwise τ is inferred (non-symmetric, in
/// order of first use). Throws ParseError on syntax errors, unguarded negated
/// atoms, negated τ-atoms, unknown symbols or variables and arity mismatches.
Sentence parse_sentence(std::string_view text, const std::optional<Signature>& tau = std::nullopt);

/// Inverse of parse_sentence (up to whitespace).
std::string print_sentence(const Sentence& s);

struct Diagnostic {
  std::string code;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// Empty iff the sentence lies in the compilable fragment: every existential
/// is annotated, every existential atom repeats the variables of a τ-atom of
/// its target symbol in the same clause (any single variable for vertex
/// annotations), and every clause's τ-structure is connected.
std::vector<Diagnostic> validate_fragment(const Sentence& s);

/// τ-structure of a clause: its variables as vertices, its τ-atoms as tuples.
Structure clause_structure(const Sentence& s, const Clause& c);

/// Colour name for a subset of existential names, e.g. "{}" or "{M,N}".
std::string subset_color(const std::vector<std::string>& members);

inline constexpr std::size_t kDefaultPatternCap = 100'000;

/// Compiles a fragment sentence to forbidden patterns.
///
/// Vertex colours are the subsets of vertex-annotated existentials; colours
/// of τ-symbol R are the subsets of the existentials annotated on R. Each
/// clause contributes every colouring of its τ-structure that agrees with
/// its existential atoms. Throws DataError if validate_fragment() is not
/// empty and SizeGuardExceeded past `pattern_cap` patterns.
PatternSet compile_to_patterns(const Sentence& s, std::size_t pattern_cap = kDefaultPatternCap);

}  // namespace gmsnp
