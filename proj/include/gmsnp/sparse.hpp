#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "gmsnp/duality.hpp"
#include "gmsnp/homomorphism.hpp"
#include "gmsnp/patterns.hpp"
#include "gmsnp/structure.hpp"

namespace gmsnp {

struct LiftParams {
  /// Target: girth strictly above l.
  int l = 1;
  /// Structures c for which a -> c iff lift -> c must hold.
  std::vector<Structure> protect;
  std::uint64_t seed = 0;
  /// Copies per vertex on the first attempt; doubled on every retry.
  std::size_t blowup = 4;
  std::size_t max_retries = 6;
  /// Scales the number of random copies placed per tuple.
  double density = 1.0;
  HomOptions hom;
};

struct Lift {
  Structure structure;
  /// The copy-erasing map to the input, a verified homomorphism.
  HomWitness projection;
  /// 0 when the input already had girth above l and is returned as is.
  std::size_t attempts = 0;
  std::size_t copies = 1;
};

/// Random high-girth cover of `a` (Las Vegas).
///
/// Vertices are pairs "name/i" for i < N. Unary tuples are copied to every
/// copy of their vertex; every other tuple (orbit for symmetric symbols)
/// receives max(N, density * ceil(N ln N) / arity) copies with independent
/// uniform copy indices. Short cycles are then broken by deleting the least
/// tuple on each incidence cycle of length <= 2l. The projection, the girth
/// and the protected homomorphism behaviour are verified exactly; a failed
/// attempt is retried with fresh randomness and doubled N. Throws
/// RetriesExhausted naming the last failed check.
Lift girth_lift(const Structure& a, const LiftParams& params);

/// Lift of `a` with l = the report's threshold, protecting the factor:
/// a -> factor iff the lift is accepted by the report's patterns.
Lift csp_to_fpp_reduce(const Structure& a, const FactorReport& report, LiftParams params = {});

struct ProbeOptions {
  /// Census of every structure with at most `bound` vertices and girth above the threshold.
  std::size_t bound = 5;
  std::size_t max_tuples = 10;
  /// Random high-girth samples on up to sample_vertices vertices.
  std::size_t samples = 0;
  std::size_t sample_vertices = 8;
  std::uint64_t seed = 0;
  FppOptions fpp;
};

struct ProbeReport {
  std::size_t census_checked = 0;
  std::size_t samples_checked = 0;
  std::size_t agreements = 0;
  /// Instances accepted by both sides.
  std::size_t accepted = 0;
  std::vector<Structure> counterexamples;

  std::size_t checked() const { return census_checked + samples_checked; }
  bool ok() const { return counterexamples.empty(); }
};

/// Compares FPP membership with homomorphisms to the factor on high-girth instances.
ProbeReport equivalence_probe(const PatternSet& f, const FactorReport& report,
                              const ProbeOptions& options = {});

}  // namespace gmsnp
