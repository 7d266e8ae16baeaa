#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "gmsnp/structure.hpp"

namespace gmsnp {

struct CensusOptions {
  std::size_t max_vertices = 3;
  /// Bound on tuple occurrences (orbits for symmetric symbols).
  std::size_t max_tuples = 4;
  /// Keep only structures whose girth exceeds this.
  std::optional<int> girth_above;
};

/// Every structure on 0..max_vertices vertices named "0".."k-1" with at most
/// max_tuples occurrences, one per labelled tuple set. With girth_above set,
/// tuple sets are grown only while the girth stays above the bound.
void for_each_structure(const Signature& signature, const CensusOptions& options,
                        const std::function<void(const Structure&)>& visit);

std::vector<Structure> census(const Signature& signature, const CensusOptions& options);

/// Every possible occurrence over k vertices, in lexicographic order.
std::vector<Occurrence> candidate_occurrences(const Signature& signature, std::size_t k);

/// Each candidate occurrence on `vertices` vertices is kept with probability p.
Structure random_structure(const Signature& signature, std::size_t vertices, double p,
                           std::mt19937_64& rng);

/// Random candidate occurrences are added in random order while the girth
/// stays above l, until `tuples` have been placed or none fits.
Structure random_high_girth(const Signature& signature, std::size_t vertices, int l,
                            std::size_t tuples, std::mt19937_64& rng);

/// Uniform index in [0, n); independent of the standard library's distributions.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace gmsnp
