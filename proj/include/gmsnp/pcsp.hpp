#pragma once

#include "gmsnp/duality.hpp"
#include "gmsnp/patterns.hpp"
#include "gmsnp/sparse.hpp"
#include "gmsnp/structure.hpp"

namespace gmsnp {

/// A promise template (a, b) and a pattern set whose FPP is the sandwiched
/// CSP, with the factor report of those patterns.
struct SandwichSpec {
  Structure a;
  Structure b;
  PatternSet patterns;
  FactorReport report;
};

struct SandwichCheck {
  /// a is accepted by the patterns.
  bool a_in_s = false;
  /// The factor maps to b.
  bool s_to_b = false;

  bool valid() const { return a_in_s && s_to_b; }
};

/// Throws SignatureMismatch unless a, b and the patterns share τ.
SandwichCheck sandwich_check(const SandwichSpec& spec, const FppOptions& options = {});

/// Lifts x above the report's threshold protecting a and b, then answers
/// with FPP membership of the lift. Yes whenever x -> a, no whenever x does
/// not map to b; the sandwich must pass sandwich_check.
bool pcsp_solve(const SandwichSpec& spec, const Structure& x, LiftParams params = {},
                const FppOptions& options = {});

}  // namespace gmsnp
