#include "gmsnp/patterns.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "gmsnp/errors.hpp"
#include "gmsnp/trees.hpp"

namespace gmsnp {

namespace {

void require_unique_nonempty(const std::vector<std::string>& names, const std::string& scope) {
  if (names.empty()) throw DataError("palette: no colours for " + scope);
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw DataError("palette: empty colour name for " + scope);
    if (!seen.insert(n).second) throw DataError("palette: duplicate colour " + n + " for " + scope);
  }
}

}  // namespace

Palette::Palette(Signature tau, std::vector<std::string> vertex_colors,
                 std::vector<std::vector<std::string>> tuple_colors)
    : tau_(std::move(tau)),
      vertex_colors_(std::move(vertex_colors)),
      tuple_colors_(std::move(tuple_colors)) {
  require_unique_nonempty(vertex_colors_, "vertices");
  if (tuple_colors_.size() != tau_.size()) {
    throw DataError("palette: tuple colours must be given for every symbol");
  }
  for (const auto& c : vertex_colors_) sigma_.add({"@" + c, 1, false});
  for (std::size_t r = 0; r < tau_.size(); ++r) {
    require_unique_nonempty(tuple_colors_[r], "symbol " + tau_[r].name);
    offsets_.push_back(sigma_.size());
    for (const auto& c : tuple_colors_[r]) {
      sigma_.add({tau_[r].name + "#" + c, tau_[r].arity, tau_[r].symmetric});
    }
  }
}

Palette::Meaning Palette::meaning(std::size_t sigma_symbol) const {
  if (sigma_symbol < vertex_colors_.size()) return {true, 0, sigma_symbol};
  std::size_t r = tau_.size() - 1;
  while (offsets_[r] > sigma_symbol) --r;
  return {false, r, sigma_symbol - offsets_[r]};
}

Structure base_of(const Palette& palette, const Structure& colored) {
  Structure base(palette.tau(), colored.names());
  for (std::size_t s = 0; s < palette.sigma().size(); ++s) {
    auto m = palette.meaning(s);
    if (m.is_vertex_color) continue;
    for (const auto& t : colored.relation(s)) base.add_tuple(m.tau_symbol, t);
  }
  return base;
}

bool is_proper_coloring(const Palette& palette, const Structure& colored) {
  if (!(colored.signature() == palette.sigma())) return false;
  std::vector<int> vertex_hits(colored.size(), 0);
  for (std::size_t c = 0; c < palette.vertex_colors().size(); ++c) {
    for (const auto& t : colored.relation(palette.vertex_symbol(c))) ++vertex_hits[t[0]];
  }
  if (std::any_of(vertex_hits.begin(), vertex_hits.end(), [](int h) { return h != 1; })) {
    return false;
  }
  for (std::size_t r = 0; r < palette.tau().size(); ++r) {
    std::set<Tuple> seen;
    for (std::size_t c = 0; c < palette.tuple_colors(r).size(); ++c) {
      for (const auto& t : colored.relation(palette.tuple_symbol(r, c))) {
        if (!seen.insert(t).second) return false;
      }
    }
  }
  return true;
}

void PatternSet::validate() const {
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const auto& p = patterns[i];
    auto where = "pattern " + std::to_string(i);
    if (!(p.signature() == palette.sigma())) throw DataError(where + " is not over the palette");
    if (p.size() == 0) throw DataError(where + " is empty");
    if (!is_proper_coloring(palette, p)) throw DataError(where + " is not a proper colouring");
    if (!is_connected(base_of(palette, p))) throw DataError(where + " is not connected");
  }
}

std::size_t PatternSet::max_pattern_size() const {
  std::size_t l = 1;
  for (const auto& p : patterns) l = std::max(l, p.size());
  return l;
}

bool avoids_patterns(const PatternSet& f, const Structure& colored, const HomOptions& options) {
  return std::none_of(f.patterns.begin(), f.patterns.end(),
                      [&](const Structure& p) { return maps_to(p, colored, options); });
}

namespace {

class ColoringSearch {
 public:
  ColoringSearch(const PatternSet& f, const Structure& a, const FppOptions& options)
      : f_(f), a_(a), options_(options), occ_(occurrences(a)) {
    const auto& pal = f.palette;
    for (Vertex v = 0; v < a.size(); ++v) colors_.push_back(pal.vertex_colors().size());
    for (std::size_t i = 0; i < occ_.size(); ++i) {
      occ_index_[{occ_[i].symbol, occ_[i].tuple}] = i;
      colors_.push_back(pal.tuple_colors(occ_[i].symbol).size());
    }
    for (auto c : colors_) {
      if (c > 64) throw DataError("fpp_decide: at most 64 colours per vertex or tuple");
    }
    const auto& tau = a.signature();
    incident_.assign(tau.size(), {});
    for (std::size_t r = 0; r < tau.size(); ++r) {
      incident_[r].assign(static_cast<std::size_t>(tau[r].arity), std::vector<std::vector<const Tuple*>>(a.size()));
      for (const auto& t : a.relation(r)) {
        for (std::size_t i = 0; i < t.size(); ++i) incident_[r][i][t[i]].push_back(&t);
      }
    }
    for (const auto& p : f.patterns) add_nogoods(p);
    watch_.assign(colors_.size(), {});
    for (std::size_t g = 0; g < nogoods_.size(); ++g) {
      for (const auto& lit : nogoods_[g]) watch_[lit.var].push_back(g);
    }
    weight_.assign(nogoods_.size(), 1);
  }

  std::optional<Structure> run() {
    std::vector<Word> d(colors_.size());
    for (std::size_t v = 0; v < d.size(); ++v) d[v] = colors_[v] == 64 ? ~Word{0} : (Word{1} << colors_[v]) - 1;
    std::vector<std::size_t> all(nogoods_.size());
    for (std::size_t g = 0; g < all.size(); ++g) all[g] = g;
    if (!check_all(d, all) || !search_components(d)) return std::nullopt;
    const auto& pal = f_.palette;
    Structure colored(pal.sigma(), a_.names());
    for (Vertex v = 0; v < a_.size(); ++v) colored.add_tuple(pal.vertex_symbol(value(d, v)), {v});
    for (std::size_t i = 0; i < occ_.size(); ++i) {
      colored.add_tuple(pal.tuple_symbol(occ_[i].symbol, value(d, a_.size() + i)), occ_[i].tuple);
    }
    return colored;
  }

 private:
  using Word = std::uint64_t;

  // variable: vertex v, or occurrence i as a.size() + i
  struct Literal {
    std::size_t var;
    std::size_t color;
    auto operator<=>(const Literal&) const = default;
  };
  using Nogood = std::vector<Literal>;

  static std::size_t value(const std::vector<Word>& d, std::size_t var) {
    return static_cast<std::size_t>(std::countr_zero(d[var]));
  }

  void tick() {
    if (++nodes_ > options_.node_budget) {
      throw BudgetExhausted("colouring search exceeded " + std::to_string(options_.node_budget) + " nodes");
    }
  }

  /// One nogood per homomorphism from the base of p into a: the colours that
  /// would complete an image of p.
  void add_nogoods(const Structure& p) {
    if (p.size() == 0) {
      if (seen_.insert(Nogood{}).second) nogoods_.emplace_back();
      return;
    }
    const auto& pal = f_.palette;
    std::vector<std::size_t> vertex_color(p.size());
    struct Edge {
      std::size_t symbol, color;
      Tuple tuple;
    };
    std::vector<Edge> edges;
    for (std::size_t s = 0; s < pal.sigma().size(); ++s) {
      auto m = pal.meaning(s);
      for (const auto& t : p.relation(s)) {
        if (m.is_vertex_color) {
          vertex_color[t[0]] = m.color;
        } else if (!(pal.tau()[m.tau_symbol].symmetric && t[0] > t[1])) {
          edges.push_back({m.tau_symbol, m.color, t});
        }
      }
    }
    // connected order; edges become checkable once their last vertex is placed
    std::vector<Vertex> order{0};
    std::vector<char> placed(p.size(), 0);
    placed[0] = 1;
    struct Anchor {
      std::size_t edge, from, to;
    };
    std::vector<std::optional<Anchor>> anchor(p.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& t = edges[e].tuple;
        auto from = std::find(t.begin(), t.end(), order[k]) - t.begin();
        if (from == static_cast<std::ptrdiff_t>(t.size())) continue;
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (placed[t[i]]) continue;
          placed[t[i]] = 1;
          anchor[t[i]] = Anchor{e, static_cast<std::size_t>(from), i};
          order.push_back(t[i]);
        }
      }
    }
    if (order.size() != p.size()) throw DataError("fpp_decide: pattern is not connected");
    std::vector<std::size_t> rank(p.size());
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
    std::vector<std::vector<std::size_t>> closing(p.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      std::size_t last = 0;
      for (auto x : edges[e].tuple) last = std::max(last, rank[x]);
      closing[last].push_back(e);
    }

    std::vector<Vertex> h(p.size());
    auto emit = [&] {
      Nogood g;
      for (Vertex x = 0; x < p.size(); ++x) g.push_back({h[x], vertex_color[x]});
      for (const auto& e : edges) {
        Tuple image;
        for (auto x : e.tuple) image.push_back(h[x]);
        if (a_.signature()[e.symbol].symmetric && image[0] > image[1]) std::swap(image[0], image[1]);
        g.push_back({a_.size() + occ_index_.at({e.symbol, image}), e.color});
      }
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      for (std::size_t i = 1; i < g.size(); ++i) {
        if (g[i].var == g[i - 1].var) return;  // one element would need two colours
      }
      if (seen_.insert(g).second) nogoods_.push_back(std::move(g));
    };
    auto extend = [&](auto&& self, std::size_t k) -> void {
      if (k == order.size()) {
        emit();
        return;
      }
      auto x = order[k];
      auto place = [&](Vertex v) {
        tick();
        h[x] = v;
        for (auto e : closing[k]) {
          Tuple image;
          for (auto y : edges[e].tuple) image.push_back(h[y]);
          if (!a_.has_tuple(edges[e].symbol, image)) return;
        }
        self(self, k + 1);
      };
      if (!anchor[x]) {
        for (Vertex v = 0; v < a_.size(); ++v) place(v);
        return;
      }
      const auto& [e, from, to] = *anchor[x];
      const auto& t = edges[e].tuple;
      std::set<Vertex> candidates;
      for (const auto* tt : incident_[edges[e].symbol][from][h[t[from]]]) candidates.insert((*tt)[to]);
      for (auto v : candidates) place(v);
    };
    extend(extend, 0);
  }

  /// Unit propagation over nogoods; false on a conflict.
  bool check(std::vector<Word>& d, std::size_t g, std::deque<std::size_t>& changed) {
    const Literal* open = nullptr;
    for (const auto& lit : nogoods_[g]) {
      Word bit = Word{1} << lit.color;
      if (!(d[lit.var] & bit)) return true;
      if (d[lit.var] == bit) continue;
      if (open) return true;
      open = &lit;
    }
    if (!open) {
      ++weight_[g];
      return false;
    }
    d[open->var] &= ~(Word{1} << open->color);
    if (!d[open->var]) {
      ++weight_[g];
      return false;
    }
    changed.push_back(open->var);
    return true;
  }

  bool check_all(std::vector<Word>& d, const std::vector<std::size_t>& seed) {
    std::deque<std::size_t> changed;
    for (auto g : seed) {
      if (!check(d, g, changed)) return false;
    }
    return propagate(d, changed);
  }

  bool propagate(std::vector<Word>& d, std::deque<std::size_t>& changed) {
    while (!changed.empty()) {
      auto var = changed.front();
      changed.pop_front();
      for (auto g : watch_[var]) {
        if (!check(d, g, changed)) return false;
      }
    }
    return true;
  }

  bool search_components(std::vector<Word>& d) {
    std::vector<std::size_t> parent(colors_.size());
    for (std::size_t v = 0; v < parent.size(); ++v) parent[v] = v;
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const auto& g : nogoods_) {
      for (const auto& lit : g) parent[find(lit.var)] = find(g[0].var);
    }
    std::vector<std::vector<std::size_t>> groups(colors_.size());
    for (std::size_t v = 0; v < parent.size(); ++v) {
      if (!watch_[v].empty()) groups[find(v)].push_back(v);
    }
    for (const auto& group : groups) {
      if (!group.empty() && !search(d, group)) return false;
    }
    return true;
  }

  bool search(std::vector<Word>& d, const std::vector<std::size_t>& vars) {
    std::size_t var = colors_.size(), best = 0;
    std::uint64_t best_weight = 0;
    for (auto v : vars) {
      auto c = static_cast<std::size_t>(std::popcount(d[v]));
      if (c < 2) continue;
      std::uint64_t w = 0;
      for (auto g : watch_[v]) w += weight_[g];
      if (var == colors_.size() || c * best_weight < best * w) {
        var = v;
        best = c;
        best_weight = w;
      }
    }
    if (var == colors_.size()) return true;
    auto saved = d;
    for (Word bits = saved[var]; bits; bits &= bits - 1) {
      tick();
      d[var] = bits & -bits;
      std::deque<std::size_t> changed{var};
      if (propagate(d, changed) && search(d, vars)) return true;
      d = saved;
    }
    return false;
  }

  const PatternSet& f_;
  const Structure& a_;
  const FppOptions& options_;
  std::vector<Occurrence> occ_;
  std::map<std::pair<std::size_t, Tuple>, std::size_t> occ_index_;
  std::vector<std::size_t> colors_;
  std::vector<std::vector<std::vector<std::vector<const Tuple*>>>> incident_;
  std::vector<Nogood> nogoods_;
  std::set<Nogood> seen_;
  std::vector<std::vector<std::size_t>> watch_;
  std::vector<std::uint64_t> weight_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<Structure> fpp_decide(const PatternSet& f, const Structure& a,
                                    const FppOptions& options) {
  if (!(a.signature() == f.palette.tau())) {
    throw SignatureMismatch("fpp_decide: instance signature differs from the pattern palette");
  }
  return ColoringSearch(f, a, options).run();
}

std::vector<Structure> tree_images(const PatternSet& f, std::size_t max_vertices) {
  std::set<std::string> seen;
  std::vector<Structure> out;
  for (const auto& p : f.patterns) {
    for (auto& q : quotients(p, max_vertices)) {
      if (!is_tree(q.image)) continue;
      if (seen.insert(tree_code(q.image)).second) out.push_back(std::move(q.image));
    }
  }
  return out;
}

namespace {

/// Random structure b with a homomorphism to a (through a random vertex map).
Structure random_preimage(const Structure& a, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size_dist(1, a.size() + 2);
  std::size_t n = size_dist(rng);
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(a.size() - 1));
  std::vector<Vertex> phi(n);
  for (auto& x : phi) x = pick(rng);
  Structure b(a.signature(), n);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    auto arity = static_cast<std::size_t>(a.signature()[r].arity);
    Tuple t(arity, 0);
    // all n^arity tuples, odometer order
    while (true) {
      Tuple image(arity);
      for (std::size_t i = 0; i < arity; ++i) image[i] = phi[t[i]];
      if (a.has_tuple(r, image) && coin(rng)) b.add_tuple(r, t);
      std::size_t i = 0;
      while (i < arity && ++t[i] == n) t[i++] = 0;
      if (i == arity) break;
    }
  }
  return b;
}

}  // namespace

ClosureReport fpp_closure_check(const PatternSet& f, const std::vector<Structure>& sample,
                                std::uint64_t seed, const FppOptions& options) {
  ClosureReport report;
  std::vector<char> member(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    member[i] = fpp_decide(f, sample[i], options).has_value();
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!member[i]) continue;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (!maps_to(sample[j], sample[i], options.hom)) continue;
      ++report.inverse_hom_checks;
      if (!member[j]) {
        report.counterexamples.push_back("sample " + std::to_string(j) + " maps to accepted sample " +
                                         std::to_string(i) + " but is rejected");
      }
    }
    for (std::size_t j = i; j < sample.size(); ++j) {
      if (!member[j]) continue;
      ++report.union_checks;
      if (!fpp_decide(f, disjoint_union(sample[i], sample[j]), options)) {
        report.counterexamples.push_back("union of accepted samples " + std::to_string(i) + " and " +
                                         std::to_string(j) + " is rejected");
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!member[i] || sample[i].size() == 0) continue;
    for (int k = 0; k < 3; ++k) {
      auto b = random_preimage(sample[i], rng);
      ++report.inverse_hom_checks;
      if (!fpp_decide(f, b, options)) {
        report.counterexamples.push_back("random preimage of accepted sample " + std::to_string(i) +
                                         " is rejected");
      }
    }
  }
  return report;
}

PatternSet csp_patterns(const Structure& h) {
  const auto& tau = h.signature();
  std::vector<std::vector<std::string>> tuple_colors(tau.size(), std::vector<std::string>{"t"});
  PatternSet f{Palette(tau, h.names(), std::move(tuple_colors)), {}};
  const auto n = static_cast<Vertex>(h.size());
  for (std::size_t r = 0; r < tau.size(); ++r) {
    auto arity = static_cast<std::size_t>(tau[r].arity);
    Tuple colors(arity, 0);
    while (true) {
      bool canonical = !tau[r].symmetric || colors[0] <= colors[1];
      if (canonical && !h.has_tuple(r, colors)) {
        Structure base(tau, arity);
        Tuple t(arity);
        for (std::size_t i = 0; i < arity; ++i) t[i] = static_cast<Vertex>(i);
        base.add_tuple(r, t);
        std::vector<std::size_t> vc(colors.begin(), colors.end());
        f.patterns.push_back(
            make_coloring(f.palette, base, vc, [](std::size_t, const Tuple&) { return 0; }));
      }
      std::size_t i = arity;
      // odometer, most significant position first
      while (i > 0 && ++colors[i - 1] == n) colors[--i] = 0;
      if (i == 0) break;
    }
  }
  return f;
}

}  // namespace gmsnp
