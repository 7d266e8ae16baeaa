#include "gmsnp/complexity.hpp"

#include <numeric>

#include "gmsnp/errors.hpp"

namespace gmsnp {

std::string to_string(Verdict::Tag tag) {
  switch (tag) {
    case Verdict::Tag::P:
      return "P";
    case Verdict::Tag::NPComplete:
      return "NP-complete";
    case Verdict::Tag::Unknown:
      break;
  }
  return "unknown";
}

namespace {

struct Classes {
  std::vector<std::size_t> parent;

  explicit Classes(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

SiggersSearch siggers_search(const Structure& c, const SiggersOptions& options) {
  const std::size_t n = c.size();
  if (n > options.max_domain) {
    throw DataError("siggers_search: " + std::to_string(n) + " vertices exceed the domain limit of " +
                    std::to_string(options.max_domain));
  }
  if (n == 0) return {OperationTable{0, {}}, 0};
  const std::size_t n4 = n * n * n * n;
  auto index = [n](std::size_t a, std::size_t b, std::size_t x, std::size_t d) {
    return ((a * n + b) * n + x) * n + d;
  };
  Classes classes(n4);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t e = 0; e < n; ++e) classes.unite(index(a, r, e, a), index(r, a, r, e));
    }
  }
  std::vector<std::size_t> var(n4, 0);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n4; ++i) {
    if (classes.find(i) == i) {
      var[i] = names.size();
      names.push_back("x" + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n4; ++i) var[i] = var[classes.find(i)];

  // c's signature extended by one pin per vertex
  Signature sig = c.signature();
  std::vector<std::size_t> pins;
  for (Vertex v = 0; v < n; ++v) pins.push_back(sig.add({"pin#" + std::to_string(v), 1, false}));
  Structure target(sig, c.names());
  Structure source(sig, names);
  for (std::size_t r = 0; r < c.signature().size(); ++r) {
    for (const auto& t : c.relation(r)) target.add_tuple(r, t);
    std::vector<Tuple> tuples(c.relation(r).begin(), c.relation(r).end());
    auto m = tuples.size();
    auto arity = static_cast<std::size_t>(c.signature()[r].arity);
    for (std::size_t i = 0; i < m * m * m * m; ++i) {
      const auto& t1 = tuples[i / (m * m * m)];
      const auto& t2 = tuples[(i / (m * m)) % m];
      const auto& t3 = tuples[(i / m) % m];
      const auto& t4 = tuples[i % m];
      Tuple image(arity);
      for (std::size_t k = 0; k < arity; ++k) {
        image[k] = static_cast<Vertex>(var[index(t1[k], t2[k], t3[k], t4[k])]);
      }
      if (!source.has_tuple(r, image)) source.add_tuple(r, std::move(image));
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    target.add_tuple(pins[v], {v});
    source.add_tuple(pins[v], {static_cast<Vertex>(var[index(v, v, v, v)])});
  }
  auto search = search_hom(source, target, options.hom);
  SiggersSearch out{std::nullopt, search.nodes};
  if (search.witness) {
    OperationTable table{n, std::vector<Vertex>(n4)};
    for (std::size_t i = 0; i < n4; ++i) table.table[i] = (*search.witness)[var[i]];
    out.table = std::move(table);
  }
  return out;
}

std::string siggers_violation(const Structure& c, const OperationTable& table) {
  const std::size_t n = c.size();
  if (table.domain_size != n || table.table.size() != n * n * n * n) return "table has the wrong size";
  for (auto v : table.table) {
    if (v >= n) return "table value outside the domain";
  }
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex r = 0; r < n; ++r) {
      for (Vertex e = 0; e < n; ++e) {
        if (table(a, r, e, a) != table(r, a, r, e)) {
          return "s(a,r,e,a) != s(r,a,r,e) at a=" + c.name(a) + " r=" + c.name(r) + " e=" + c.name(e);
        }
      }
    }
  }
  for (std::size_t r = 0; r < c.signature().size(); ++r) {
    std::vector<Tuple> tuples(c.relation(r).begin(), c.relation(r).end());
    auto m = tuples.size();
    for (std::size_t i = 0; i < m * m * m * m; ++i) {
      const auto& t1 = tuples[i / (m * m * m)];
      const auto& t2 = tuples[(i / (m * m)) % m];
      const auto& t3 = tuples[(i / m) % m];
      const auto& t4 = tuples[i % m];
      Tuple image;
      for (std::size_t k = 0; k < t1.size(); ++k) image.push_back(table(t1[k], t2[k], t3[k], t4[k]));
      if (!c.has_tuple(r, image)) return "relation " + c.signature()[r].name + " is not preserved";
    }
  }
  return {};
}

Verdict classify(const Structure& c, const SiggersOptions& options) {
  Verdict v;
  Structure k;
  try {
    k = core(c, options.hom);
  } catch (const BudgetExhausted& e) {
    v.note = std::string("core: ") + e.what();
    return v;
  }
  if (k.size() > options.max_domain) {
    v.note = "core has " + std::to_string(k.size()) + " vertices, beyond the Siggers search limit of " +
             std::to_string(options.max_domain);
    v.core = std::move(k);
    return v;
  }
  try {
    auto s = siggers_search(k, options);
    v.search_nodes = s.nodes;
    if (s.table) {
      v.tag = Verdict::Tag::P;
      v.table = std::move(s.table);
      v.note = "Siggers polymorphism on the core";
    } else {
      v.tag = Verdict::Tag::NPComplete;
      v.note = "no Siggers polymorphism on the core (exhaustive search)";
    }
  } catch (const BudgetExhausted& e) {
    v.search_nodes = options.hom.node_budget;
    v.note = e.what();
  }
  v.core = std::move(k);
  return v;
}

bool is_bipartite(const Structure& g) {
  std::vector<std::vector<Vertex>> adj(g.size());
  for (std::size_t r = 0; r < g.signature().size(); ++r) {
    if (g.signature()[r].arity != 2) continue;
    for (const auto& t : g.relation(r)) {
      if (t[0] == t[1]) return false;
      adj[t[0]].push_back(t[1]);
      adj[t[1]].push_back(t[0]);
    }
  }
  std::vector<int> side(g.size(), -1);
  for (Vertex s = 0; s < g.size(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<Vertex> stack{s};
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto w : adj[u]) {
        if (side[w] < 0) {
          side[w] = 1 - side[u];
          stack.push_back(w);
        } else if (side[w] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

Structure cycle_over(const Signature& graph, std::size_t k) {
  Structure c(graph, k);
  for (std::size_t i = 0; i < k; ++i) {
    c.add_tuple(0, {static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % k)});
  }
  return c;
}

Verdict graph_factor_report(const FactorReport& report, const FppOptions& options) {
  const auto& tau = report.factor.signature();
  if (tau.size() != 1 || tau[0].arity != 2 || !tau[0].symmetric) {
    throw SignatureMismatch("graph_factor_report: τ must be one symmetric binary symbol");
  }
  Verdict v;
  const auto& factor = report.factor;
  for (Vertex x = 0; x < factor.size(); ++x) {
    if (factor.has_tuple(0, {x, x})) {
      v.tag = Verdict::Tag::P;
      v.note = "factor has a loop";
      return v;
    }
  }
  if (is_bipartite(factor)) {
    v.tag = Verdict::Tag::P;
    v.note = "factor is bipartite";
    return v;
  }
  auto l = report.threshold;
  for (std::size_t k = 2 * l + 1; k <= 2 * l + 2 * factor.size() + 2; k += 2) {
    auto ck = cycle_over(tau, k);
    if (!maps_to(ck, factor, options.hom)) continue;
    if (!fpp_decide(report.patterns, ck, options)) continue;
    v.tag = Verdict::Tag::NPComplete;
    v.odd_cycle = k;
    v.note = "non-bipartite loopless factor";
    return v;
  }
  v.note = "no odd cycle witness in the search window";
  return v;
}

}  // namespace gmsnp
