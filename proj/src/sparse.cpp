#include "gmsnp/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "gmsnp/census.hpp"
#include "gmsnp/errors.hpp"

namespace gmsnp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::uint64_t mix(std::uint64_t seed, std::uint64_t attempt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (attempt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Incidence multigraph with deletable occurrences. Deletes the least
/// occurrence on short cycles, one BFS root at a time; a root once cleared
/// stays clear because deletions never create cycles.
class CycleBreaker {
 public:
  explicit CycleBreaker(const Structure& s) : g_(incidence_graph(s)), adj_(g_.adjacency()) {
    alive_.assign(g_.occurrences.size(), 1);
    dist_.assign(adj_.size(), kNone);
    parent_.assign(adj_.size(), kNone);
    parent_edge_.assign(adj_.size(), kNone);
  }

  void run(std::size_t limit) {
    for (std::size_t root = 0; root < g_.vertex_count; ++root) {
      while (auto occ = cycle_through(root, limit)) alive_[*occ] = 0;
    }
  }

  const std::vector<Occurrence>& occurrences() const { return g_.occurrences; }
  bool alive(std::size_t i) const { return alive_[i]; }

 private:
  bool usable(std::size_t node) const {
    return node < g_.vertex_count || alive_[node - g_.vertex_count];
  }

  /// Least occurrence on a cycle of length <= limit found by BFS from root.
  std::optional<std::size_t> cycle_through(std::size_t root, std::size_t limit) {
    std::vector<std::size_t> touched{root};
    dist_[root] = 0;
    parent_[root] = kNone;
    parent_edge_[root] = kNone;
    std::deque<std::size_t> queue{root};
    std::size_t u_hit = kNone, w_hit = kNone;
    while (!queue.empty() && u_hit == kNone) {
      auto u = queue.front();
      queue.pop_front();
      for (auto [w, e] : adj_[u]) {
        if (e == parent_edge_[u] || !usable(w)) continue;
        if (dist_[w] == kNone) {
          if (dist_[u] + 1 > limit / 2) continue;
          dist_[w] = dist_[u] + 1;
          parent_[w] = u;
          parent_edge_[w] = e;
          touched.push_back(w);
          queue.push_back(w);
        } else if (dist_[u] + dist_[w] + 1 <= limit) {
          u_hit = u;
          w_hit = w;
          break;
        }
      }
    }
    std::optional<std::size_t> least;
    if (u_hit != kNone) {
      std::vector<std::size_t> pu{u_hit}, pw{w_hit};
      while (parent_[pu.back()] != kNone) pu.push_back(parent_[pu.back()]);
      while (parent_[pw.back()] != kNone) pw.push_back(parent_[pw.back()]);
      while (pu.size() > 1 && pw.size() > 1 && pu[pu.size() - 2] == pw[pw.size() - 2]) {
        pu.pop_back();
        pw.pop_back();
      }
      pu.insert(pu.end(), pw.begin(), pw.end());
      for (auto node : pu) {
        if (node < g_.vertex_count) continue;
        auto occ = node - g_.vertex_count;
        if (!least || occ < *least) least = occ;
      }
    }
    for (auto n : touched) dist_[n] = kNone;
    return least;
  }

  IncidenceGraph g_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj_;
  std::vector<char> alive_;
  std::vector<std::size_t> dist_, parent_, parent_edge_;
};

struct Attempt {
  Structure structure;
  HomWitness projection;
};

Attempt random_cover(const Structure& a, std::size_t n, double density, int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  HomWitness projection;
  for (Vertex v = 0; v < a.size(); ++v) {
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back(a.name(v) + "/" + std::to_string(i));
      projection.push_back(v);
    }
  }
  Structure dense(a.signature(), std::move(names));
  auto copy = [&](Vertex v, std::size_t i) { return static_cast<Vertex>(v * n + i); };
  auto nln = static_cast<double>(std::ceil(static_cast<double>(n) * std::log(static_cast<double>(n))));
  for (const auto& o : occurrences(a)) {
    auto arity = o.tuple.size();
    if (arity == 1) {
      for (std::size_t i = 0; i < n; ++i) dense.add_tuple(o.symbol, {copy(o.tuple[0], i)});
      continue;
    }
    auto count = std::max<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(density * nln / static_cast<double>(arity))));
    for (std::size_t k = 0; k < count; ++k) {
      Tuple t;
      for (auto v : o.tuple) t.push_back(copy(v, uniform_index(rng, n)));
      dense.add_tuple(o.symbol, std::move(t));
    }
  }
  CycleBreaker breaker(dense);
  breaker.run(static_cast<std::size_t>(2 * l));
  Structure sparse(a.signature(), dense.names());
  const auto& occ = breaker.occurrences();
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (breaker.alive(i)) sparse.add_tuple(occ[i].symbol, occ[i].tuple);
  }
  return {std::move(sparse), std::move(projection)};
}

}  // namespace

Lift girth_lift(const Structure& a, const LiftParams& params) {
  if (params.l < 1) throw DataError("girth_lift: l must be positive");
  if (params.blowup < 1) throw DataError("girth_lift: blowup must be positive");
  if (params.density <= 0) throw DataError("girth_lift: density must be positive");
  for (const auto& c : params.protect) {
    if (!(c.signature() == a.signature())) throw SignatureMismatch("girth_lift: protected structure over another signature");
  }
  if (girth(a).exceeds(params.l)) {
    Lift out{a, {}, 0, 1};
    for (Vertex v = 0; v < a.size(); ++v) out.projection.push_back(v);
    return out;
  }
  std::vector<std::optional<HomWitness>> a_maps(params.protect.size());
  for (std::size_t i = 0; i < params.protect.size(); ++i) a_maps[i] = find_hom(a, params.protect[i], params.hom);

  std::string failure;
  std::size_t n = params.blowup;
  for (std::size_t attempt = 0; attempt < params.max_retries; ++attempt, n *= 2) {
    auto [b, projection] = random_cover(a, n, params.density, params.l, mix(params.seed, attempt));
    if (!verify_hom(b, a, projection)) {
      failure = "projection is not a homomorphism";
      continue;
    }
    if (!girth(b).exceeds(params.l)) {
      failure = "girth not above " + std::to_string(params.l);
      continue;
    }
    bool agrees = true;
    for (std::size_t i = 0; i < params.protect.size() && agrees; ++i) {
      bool b_maps;
      if (a_maps[i]) {
        // b -> a -> c through the projection
        HomWitness composed;
        for (auto v : projection) composed.push_back((*a_maps[i])[v]);
        b_maps = verify_hom(b, params.protect[i], composed);
      } else {
        b_maps = maps_to(b, params.protect[i], params.hom);
      }
      if (a_maps[i].has_value() != b_maps) {
        failure = "protected structure " + std::to_string(i) + " separates the lift from the input";
        agrees = false;
      }
    }
    if (agrees) return {std::move(b), std::move(projection), attempt + 1, n};
  }
  throw RetriesExhausted("girth_lift: " + std::to_string(params.max_retries) + " attempts failed, last: " + failure);
}

Lift csp_to_fpp_reduce(const Structure& a, const FactorReport& report, LiftParams params) {
  if (!(a.signature() == report.factor.signature())) throw SignatureMismatch("reduce: instance over another signature");
  params.l = static_cast<int>(report.threshold);
  params.protect = {report.factor};
  return girth_lift(a, params);
}

ProbeReport equivalence_probe(const PatternSet& f, const FactorReport& report, const ProbeOptions& options) {
  ProbeReport out;
  auto l = static_cast<int>(report.threshold);
  const auto& tau = f.palette.tau();
  auto check = [&](const Structure& s) {
    bool in_fpp = fpp_decide(f, s, options.fpp).has_value();
    bool to_factor = maps_to(s, report.factor, options.fpp.hom);
    if (in_fpp == to_factor) {
      ++out.agreements;
      if (in_fpp) ++out.accepted;
    } else {
      out.counterexamples.push_back(s);
    }
  };
  if (options.bound > 0) {
    CensusOptions c{options.bound, options.max_tuples, l};
    for_each_structure(tau, c, [&](const Structure& s) {
      ++out.census_checked;
      check(s);
    });
  }
  std::mt19937_64 rng(options.seed);
  auto max_v = std::max<std::size_t>(options.sample_vertices, 1);
  for (std::size_t i = 0; i < options.samples; ++i) {
    auto n = 1 + uniform_index(rng, max_v);
    auto tuples = uniform_index(rng, 2 * n + 1);
    auto s = random_high_girth(tau, n, l, tuples, rng);
    ++out.samples_checked;
    check(s);
  }
  return out;
}

}  // namespace gmsnp
