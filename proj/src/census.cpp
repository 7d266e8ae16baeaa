#include "gmsnp/census.hpp"

#include <algorithm>

namespace gmsnp {

std::vector<Occurrence> candidate_occurrences(const Signature& signature, std::size_t k) {
  std::vector<Occurrence> out;
  if (k == 0) return out;
  for (std::size_t r = 0; r < signature.size(); ++r) {
    auto arity = static_cast<std::size_t>(signature[r].arity);
    Tuple t(arity, 0);
    while (true) {
      if (!signature[r].symmetric || t[0] <= t[1]) out.push_back({r, t});
      std::size_t i = arity;
      while (i > 0 && ++t[i - 1] == k) t[--i] = 0;
      if (i == 0) break;
    }
  }
  return out;
}

namespace {

bool girth_ok(const Structure& s, const std::optional<int>& bound) {
  return !bound || !find_short_cycle(s, 2 * *bound).has_value();
}

}  // namespace

void for_each_structure(const Signature& signature, const CensusOptions& options,
                        const std::function<void(const Structure&)>& visit) {
  for (std::size_t k = 0; k <= options.max_vertices; ++k) {
    auto cand = candidate_occurrences(signature, k);
    Structure s(signature, k);
    auto rec = [&](auto&& self, std::size_t from, std::size_t used) -> void {
      visit(s);
      if (used == options.max_tuples) return;
      for (std::size_t i = from; i < cand.size(); ++i) {
        s.add_tuple(cand[i].symbol, cand[i].tuple);
        if (girth_ok(s, options.girth_above)) self(self, i + 1, used + 1);
        s.remove_tuple(cand[i].symbol, cand[i].tuple);
      }
    };
    rec(rec, 0, 0);
  }
}

std::vector<Structure> census(const Signature& signature, const CensusOptions& options) {
  std::vector<Structure> out;
  for_each_structure(signature, options, [&](const Structure& s) { out.push_back(s); });
  return out;
}

Structure random_structure(const Signature& signature, std::size_t vertices, double p,
                           std::mt19937_64& rng) {
  Structure s(signature, vertices);
  for (const auto& o : candidate_occurrences(signature, vertices)) {
    if (uniform_unit(rng) < p) s.add_tuple(o.symbol, o.tuple);
  }
  return s;
}

Structure random_high_girth(const Signature& signature, std::size_t vertices, int l,
                            std::size_t tuples, std::mt19937_64& rng) {
  Structure s(signature, vertices);
  auto cand = candidate_occurrences(signature, vertices);
  for (std::size_t i = cand.size(); i > 1; --i) std::swap(cand[i - 1], cand[uniform_index(rng, i)]);
  std::size_t placed = 0;
  for (const auto& o : cand) {
    if (placed == tuples) break;
    if (has_repeated_entry(o.tuple) && l >= 1) continue;
    s.add_tuple(o.symbol, o.tuple);
    if (find_short_cycle(s, 2 * l)) {
      s.remove_tuple(o.symbol, o.tuple);
    } else {
      ++placed;
    }
  }
  return s;
}

}  // namespace gmsnp
