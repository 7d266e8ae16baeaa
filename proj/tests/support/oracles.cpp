#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gmsnp/catalog.hpp"
#include "gmsnp/trees.hpp"

namespace oracle {

using gmsnp::Signature;
using gmsnp::Tuple;
using gmsnp::Vertex;

namespace {

struct Occ {
  std::size_t symbol;
  Tuple tuple;
};

// One entry per tuple, one per unordered pair for symmetric symbols.
std::vector<Occ> occs(const Structure& s) {
  std::vector<Occ> out;
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    for (const auto& t : s.relation(r)) {
      if (s.signature()[r].symmetric && t[0] > t[1]) continue;
      out.push_back({r, t});
    }
  }
  return out;
}

// Odometer over {0..base-1}^n; returns false after the last value.
bool next(std::vector<std::size_t>& digits, std::size_t base) {
  for (auto& d : digits) {
    if (++d < base) return true;
    d = 0;
  }
  return false;
}

}  // namespace

bool is_hom(const Structure& a, const Structure& b, const std::vector<Vertex>& map) {
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    for (const auto& t : a.relation(r)) {
      Tuple img;
      for (auto v : t) img.push_back(map[v]);
      if (!b.relation(r).contains(img)) return false;
    }
  }
  return true;
}

bool brute_hom(const Structure& a, const Structure& b) {
  if (a.signature() != b.signature()) throw std::invalid_argument("brute_hom: signatures differ");
  if (a.size() == 0) return true;
  if (b.size() == 0) return false;
  std::vector<std::size_t> digits(a.size(), 0);
  do {
    std::vector<Vertex> map(digits.begin(), digits.end());
    if (is_hom(a, b, map)) return true;
  } while (next(digits, b.size()));
  return false;
}

bool brute_fpp(const gmsnp::PatternSet& f, const Structure& a) {
  const auto& pal = f.palette;
  auto os = occs(a);
  std::size_t nv = pal.vertex_colors().size();
  std::vector<std::size_t> vc(a.size(), 0);
  do {
    std::vector<std::size_t> tc(os.size(), 0);
    bool more = true;
    while (more) {
      Structure c(pal.sigma(), a.names());
      for (Vertex v = 0; v < a.size(); ++v) c.add_tuple(pal.vertex_symbol(vc[v]), {v});
      for (std::size_t i = 0; i < os.size(); ++i) c.add_tuple(pal.tuple_symbol(os[i].symbol, tc[i]), os[i].tuple);
      bool clean = std::none_of(f.patterns.begin(), f.patterns.end(),
                                [&](const Structure& p) { return brute_hom(p, c); });
      if (clean) return true;
      // mixed-radix increment over per-occurrence palettes
      more = false;
      for (std::size_t i = 0; i < os.size(); ++i) {
        if (++tc[i] < pal.tuple_colors(os[i].symbol).size()) {
          more = true;
          break;
        }
        tc[i] = 0;
      }
    }
  } while (a.size() > 0 && next(vc, nv));
  return false;
}

bool models(const gmsnp::Sentence& s, const Structure& a) {
  // bit layout: each existential gets a block indexed by vertex or by R-tuple
  std::vector<std::size_t> offset;
  std::vector<std::map<Tuple, std::size_t>> slot(s.existentials.size());
  std::size_t bits = 0;
  for (std::size_t i = 0; i < s.existentials.size(); ++i) {
    const auto& e = s.existentials[i];
    offset.push_back(bits);
    if (e.on_vertex()) {
      for (Vertex v = 0; v < a.size(); ++v) slot[i][{v}] = bits++;
    } else {
      auto r = a.signature().index_of(e.target);
      bool sym = a.signature()[r].symmetric;
      for (const auto& t : a.relation(r)) {
        Tuple key = t;
        if (sym && key[0] > key[1]) std::swap(key[0], key[1]);
        if (!slot[i].contains(key)) slot[i][key] = bits++;
      }
    }
  }
  if (bits > 24) throw std::runtime_error("models: too many interpretation bits");

  struct Literal {
    std::size_t bit;
    bool negated;
  };
  // every clause instance whose τ-atoms hold, as a list of existential literals
  std::vector<std::vector<Literal>> instances;
  for (const auto& c : s.clauses) {
    std::vector<std::string> vars;
    for (const auto& at : c.atoms) {
      for (const auto& x : at.args) {
        if (std::find(vars.begin(), vars.end(), x) == vars.end()) vars.push_back(x);
      }
    }
    auto pos = [&](const std::string& x) {
      return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), x) - vars.begin());
    };
    if (a.size() == 0) continue;
    std::vector<std::size_t> asg(vars.size(), 0);
    do {
      bool holds = true;
      std::vector<Literal> lits;
      for (const auto& at : c.atoms) {
        Tuple t;
        for (const auto& x : at.args) t.push_back(static_cast<Vertex>(asg[pos(x)]));
        auto ex = std::find_if(s.existentials.begin(), s.existentials.end(),
                               [&](const gmsnp::Existential& e) { return e.name == at.symbol; });
        if (ex == s.existentials.end()) {
          holds = holds && a.has_tuple(a.signature().index_of(at.symbol), t);
          continue;
        }
        auto i = static_cast<std::size_t>(ex - s.existentials.begin());
        if (!ex->on_vertex() && a.signature()[a.signature().index_of(ex->target)].symmetric && t[0] > t[1]) {
          std::swap(t[0], t[1]);
        }
        auto it = slot[i].find(t);
        if (it == slot[i].end()) {
          // only reachable when the carrying τ-atom fails
          holds = false;
          continue;
        }
        lits.push_back({it->second, at.negated});
      }
      if (holds) instances.push_back(std::move(lits));
    } while (next(asg, a.size()));
  }

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    bool violated = std::any_of(instances.begin(), instances.end(), [&](const std::vector<Literal>& lits) {
      return std::all_of(lits.begin(), lits.end(),
                         [&](const Literal& l) { return (((mask >> l.bit) & 1) != 0) != l.negated; });
    });
    if (!violated) return true;
  }
  return false;
}

namespace {

// Substructure of t made of the given occurrences plus `root`, with vertex order
// root first; returns the structure and the new index of the root (always 0).
Structure sub_of(const Structure& t, Vertex root, const std::vector<Occ>& chosen) {
  std::vector<Vertex> verts{root};
  for (const auto& o : chosen) {
    for (auto v : o.tuple) {
      if (std::find(verts.begin(), verts.end(), v) == verts.end()) verts.push_back(v);
    }
  }
  std::vector<std::string> names;
  for (auto v : verts) names.push_back(t.name(v));
  Structure s(t.signature(), names);
  for (const auto& o : chosen) {
    Tuple nt;
    for (auto v : o.tuple) nt.push_back(static_cast<Vertex>(std::find(verts.begin(), verts.end(), v) - verts.begin()));
    s.add_tuple(o.symbol, nt);
  }
  return s;
}

bool connected_to_root(Vertex root, const std::vector<Occ>& chosen) {
  std::set<Vertex> reached{root};
  std::vector<bool> used(chosen.size(), false);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (used[i]) continue;
      bool touches = std::any_of(chosen[i].tuple.begin(), chosen[i].tuple.end(),
                                 [&](Vertex v) { return reached.contains(v); });
      if (!touches) continue;
      used[i] = grew = true;
      reached.insert(chosen[i].tuple.begin(), chosen[i].tuple.end());
    }
  }
  return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
}

// Component of t minus occurrence `skip` that contains v, rooted at v.
std::string piece_code(const Structure& t, const std::vector<Occ>& all, std::size_t skip, Vertex v) {
  std::set<Vertex> reached{v};
  std::vector<Occ> keep;
  std::vector<bool> used(all.size(), false);
  used[skip] = true;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (used[i]) continue;
      if (std::none_of(all[i].tuple.begin(), all[i].tuple.end(), [&](Vertex x) { return reached.contains(x); })) {
        continue;
      }
      used[i] = grew = true;
      keep.push_back(all[i]);
      reached.insert(all[i].tuple.begin(), all[i].tuple.end());
    }
  }
  return gmsnp::rooted_code(sub_of(t, v, keep), 0);
}

Structure glue(const Structure& s1, Vertex r1, const Structure& s2, Vertex r2) {
  std::vector<std::string> names{"r"};
  std::vector<Vertex> m1(s1.size()), m2(s2.size());
  for (Vertex v = 0; v < s1.size(); ++v) {
    if (v == r1) continue;
    m1[v] = static_cast<Vertex>(names.size());
    names.push_back("a" + std::to_string(v));
  }
  for (Vertex v = 0; v < s2.size(); ++v) {
    if (v == r2) continue;
    m2[v] = static_cast<Vertex>(names.size());
    names.push_back("b" + std::to_string(v));
  }
  m1[r1] = 0;
  m2[r2] = 0;
  Structure g(s1.signature(), names);
  for (const auto& o : occs(s1)) {
    Tuple t;
    for (auto v : o.tuple) t.push_back(m1[v]);
    g.add_tuple(o.symbol, t);
  }
  for (const auto& o : occs(s2)) {
    Tuple t;
    for (auto v : o.tuple) t.push_back(m2[v]);
    g.add_tuple(o.symbol, t);
  }
  return g;
}

}  // namespace

std::vector<std::string> rooted_substructure_codes(const Structure& t, Vertex root) {
  auto all = occs(t);
  if (all.size() > 20) throw std::runtime_error("rooted_substructure_codes: tree too large");
  std::set<std::string> codes;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
    std::vector<Occ> chosen;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if ((mask >> i) & 1) chosen.push_back(all[i]);
    }
    if (!connected_to_root(root, chosen)) continue;
    codes.insert(gmsnp::rooted_code(sub_of(t, root, chosen), 0));
  }
  return {codes.begin(), codes.end()};
}

std::string validate_dual(const gmsnp::Dual& d, const std::vector<Structure>& trees, std::size_t exhaustive_limit) {
  std::ostringstream why;
  const auto& u = d.universe;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < u.size(); ++i) index[u[i].code] = i;

  // the universe is every rooted substructure of every tree
  std::set<std::string> expected;
  std::set<std::string> full;
  for (const auto& t : trees) {
    for (Vertex r = 0; r < t.size(); ++r) {
      for (auto& c : rooted_substructure_codes(t, r)) expected.insert(c);
      full.insert(gmsnp::rooted_code(t, r));
    }
  }
  std::set<std::string> got;
  for (const auto& m : u) got.insert(m.code);
  if (got != expected) return "universe differs from the rooted substructures";
  for (const auto& m : u) {
    if (gmsnp::rooted_code(m.tree, m.root) != m.code) return "stored code does not match its tree";
  }

  const std::size_t n = u.size();
  std::vector<std::vector<std::size_t>> subs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& c : rooted_substructure_codes(u[i].tree, u[i].root)) subs[i].push_back(index.at(c));
  }
  std::vector<std::vector<long>> glued(n, std::vector<long>(n, -1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto code = gmsnp::rooted_code(glue(u[i].tree, u[i].root, u[j].tree, u[j].root), 0);
      if (auto it = index.find(code); it != index.end()) glued[i][j] = static_cast<long>(it->second);
    }
  }
  auto closed = [&](const std::vector<bool>& in) -> std::string {
    if (n == 0) return "";
    if (!index.contains(gmsnp::kPointCode) || !in[index.at(gmsnp::kPointCode)]) return "D1";
    for (std::size_t i = 0; i < n; ++i) {
      if (!in[i]) continue;
      if (full.contains(u[i].code)) return "D3";
      for (auto s : subs[i]) {
        if (!in[s]) return "D2";
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (in[j] && glued[i][j] >= 0 && !in[static_cast<std::size_t>(glued[i][j])]) return "D4";
      }
    }
    return "";
  };

  std::set<std::vector<bool>> elements;
  for (std::size_t e = 0; e < d.members.size(); ++e) {
    std::vector<bool> in(n, false);
    for (auto i : d.members[e]) in[i] = true;
    if (auto bad = closed(in); !bad.empty()) {
      why << "element " << e << " violates " << bad;
      return why.str();
    }
    if (!elements.insert(in).second) return "duplicate element";
  }
  if (n == 0 && d.members.size() != 1) return "empty universe must give one element";
  if (n > 0 && n <= exhaustive_limit) {
    std::size_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<bool> in(n);
      for (std::size_t i = 0; i < n; ++i) in[i] = (mask >> i) & 1;
      if (closed(in).empty()) {
        ++count;
        if (!elements.contains(in)) return "a closed set is missing from the domain";
      }
    }
    if (count != elements.size()) return "domain has sets that are not closed";
  }

  // R2 rules: (symbol, antecedent codes per position, consequent position, consequent code)
  struct Rule {
    std::vector<std::size_t> need;
    std::size_t j;
    std::size_t then;
  };
  const auto& sig = d.structure.signature();
  std::vector<std::vector<Rule>> rules(sig.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto all = occs(u[i].tree);
    for (std::size_t k = 0; k < all.size(); ++k) {
      std::vector<Tuple> orients{all[k].tuple};
      if (sig[all[k].symbol].symmetric && all[k].tuple[0] != all[k].tuple[1]) {
        orients.push_back({all[k].tuple[1], all[k].tuple[0]});
      }
      for (const auto& t : orients) {
        for (std::size_t j = 0; j < t.size(); ++j) {
          if (t[j] != u[i].root) continue;
          Rule rule{{}, j, i};
          bool in_universe = true;
          for (auto v : t) {
            auto it = index.find(piece_code(u[i].tree, all, k, v));
            if (it == index.end()) {
              in_universe = false;
              break;
            }
            rule.need.push_back(it->second);
          }
          if (in_universe) rules[all[k].symbol].push_back(rule);
        }
      }
    }
  }
  std::vector<std::vector<bool>> member(d.members.size(), std::vector<bool>(n, false));
  for (std::size_t e = 0; e < d.members.size(); ++e) {
    for (auto i : d.members[e]) member[e][i] = true;
  }
  const std::size_t m = d.members.size();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    std::vector<std::size_t> t(static_cast<std::size_t>(sig[r].arity), 0);
    do {
      bool ok = std::all_of(rules[r].begin(), rules[r].end(), [&](const Rule& rule) {
        for (std::size_t k = 0; k < t.size(); ++k) {
          if (!member[t[k]][rule.need[k]]) return true;
        }
        return static_cast<bool>(member[t[rule.j]][rule.then]);
      });
      Tuple tv(t.begin(), t.end());
      if (ok != d.structure.has_tuple(r, tv)) {
        why << "relation " << sig[r].name << (ok ? " misses an R2-closed tuple" : " has a tuple violating R2");
        return why.str();
      }
    } while (m > 0 && next(t, m));
  }
  return "";
}

gmsnp::Sentence random_sentence(std::mt19937_64& rng) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const std::vector<std::string> var_names{"x", "y", "z"};
  for (;;) {
    std::size_t k = 1 + pick(2);
    std::vector<std::pair<std::string, bool>> ex;  // name, on vertex
    std::ostringstream text;
    text << "exists ";
    for (std::size_t i = 0; i < k; ++i) {
      bool vertex = pick(2) == 0;
      ex.push_back({i == 0 ? "M" : "N", vertex});
      text << (i ? ", " : "") << ex.back().first << (vertex ? "/1 on vertex" : "/2 on E");
    }
    std::set<std::string> used;
    std::vector<std::string> clauses;
    std::size_t clause_count = 1 + pick(2);
    for (std::size_t c = 0; c < clause_count; ++c) {
      std::vector<std::pair<std::string, std::string>> arcs;
      std::size_t tau_atoms = 1 + pick(2);
      auto a = var_names[pick(3)];
      arcs.push_back({a, var_names[pick(3)]});
      if (tau_atoms == 2) {
        auto shared = pick(2) ? arcs[0].first : arcs[0].second;
        auto other = var_names[pick(3)];
        arcs.push_back(pick(2) ? std::pair{shared, other} : std::pair{other, shared});
      }
      std::vector<std::string> vars;
      for (auto& [p, q] : arcs) {
        for (const auto& v : {p, q}) {
          if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
      }
      std::vector<std::string> atoms;
      for (auto& [p, q] : arcs) atoms.push_back("E(" + p + "," + q + ")");
      std::size_t extra = 3 - tau_atoms - pick(2);
      for (std::size_t i = 0; i < extra; ++i) {
        const auto& [name, vertex] = ex[pick(ex.size())];
        std::string neg = pick(2) ? "~" : "";
        if (vertex) {
          atoms.push_back(neg + name + "(" + vars[pick(vars.size())] + ")");
        } else {
          const auto& [p, q] = arcs[pick(arcs.size())];
          atoms.push_back(neg + name + "(" + p + "," + q + ")");
        }
      }
      used.insert(vars.begin(), vars.end());
      std::string clause = "!(";
      for (std::size_t i = 0; i < atoms.size(); ++i) clause += (i ? " & " : "") + atoms[i];
      clauses.push_back(clause + ")");
    }
    text << " forall ";
    bool first = true;
    for (const auto& v : used) {
      text << (first ? "" : ", ") << v;
      first = false;
    }
    text << " : ";
    for (std::size_t i = 0; i < clauses.size(); ++i) text << (i ? " & " : "") << clauses[i];
    auto s = gmsnp::parse_sentence(text.str(), gmsnp::catalog::digraph_signature());
    if (gmsnp::validate_fragment(s).empty()) return s;
  }
}

Structure random_structure(const Signature& sig, std::size_t n, double p, std::mt19937_64& rng) {
  Structure s(sig, n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t r = 0; r < sig.size(); ++r) {
    std::vector<std::size_t> t(static_cast<std::size_t>(sig[r].arity), 0);
    do {
      Tuple tv(t.begin(), t.end());
      if (sig[r].symmetric && tv[0] > tv[1]) continue;
      if (coin(rng) < p) s.add_tuple(r, tv);
    } while (n > 0 && next(t, n));
  }
  return s;
}

Structure random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  Structure s(gmsnp::catalog::graph_signature(), n);
  std::bernoulli_distribution edge(p);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (edge(rng)) s.add_tuple(0, {u, v});
    }
  }
  return s;
}

std::string mono_triangle_text() {
  return "exists M/1 on vertex forall x,y,z : !(E(x,y) & E(y,z) & E(z,x) & M(x) & M(y) & M(z)) & "
         "!(E(x,y) & E(y,z) & E(z,x) & ~M(x) & ~M(y) & ~M(z))";
}

gmsnp::PatternSet mono_triangle() {
  return gmsnp::compile_to_patterns(gmsnp::parse_sentence(mono_triangle_text(), gmsnp::catalog::graph_signature()));
}

bool girth_exceeds(const Structure& s, int l) {
  // incidence multigraph: vertex nodes, then one node per occurrence
  auto all = occs(s);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (auto v : all[i].tuple) edges.push_back({v, s.size() + i});
  }
  const std::size_t nodes = s.size() + all.size();
  // shortest cycle through each edge: drop it, BFS between its ends
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::vector<std::vector<std::size_t>> adj(nodes);
    for (std::size_t f = 0; f < edges.size(); ++f) {
      if (f == e) continue;
      adj[edges[f].first].push_back(edges[f].second);
      adj[edges[f].second].push_back(edges[f].first);
    }
    std::vector<long> dist(nodes, -1);
    std::vector<std::size_t> queue{edges[e].first};
    dist[edges[e].first] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (auto w : adj[queue[h]]) {
        if (dist[w] < 0) {
          dist[w] = dist[queue[h]] + 1;
          queue.push_back(w);
        }
      }
    }
    long d = dist[edges[e].second];
    if (d >= 0 && d + 1 <= 2L * l) return false;
  }
  return true;
}

}  // namespace oracle
