#include "gmsnp/structure.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

#include "gmsnp/errors.hpp"

namespace gmsnp {

Signature::Signature(std::vector<Symbol> symbols) {
  for (auto& s : symbols) add(std::move(s));
}

std::size_t Signature::add(Symbol symbol) {
  if (symbol.name.empty()) throw DataError("empty symbol name");
  if (symbol.arity <= 0) throw DataError("symbol " + symbol.name + " has non-positive arity");
  if (symbol.symmetric && symbol.arity != 2) {
    throw DataError("symbol " + symbol.name + " is marked symmetric but is not binary");
  }
  if (find(symbol.name)) throw DataError("duplicate symbol " + symbol.name);
  symbols_.push_back(std::move(symbol));
  return symbols_.size() - 1;
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Signature::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw DataError("unknown symbol " + std::string(name));
}

Structure::Structure(Signature signature)
    : signature_(std::move(signature)), relations_(signature_.size()) {}

Structure::Structure(Signature signature, std::size_t vertex_count)
    : Structure(std::move(signature)) {
  for (std::size_t i = 0; i < vertex_count; ++i) add_vertex(std::to_string(i));
}

Structure::Structure(Signature signature, std::vector<std::string> vertex_names)
    : Structure(std::move(signature)) {
  for (auto& n : vertex_names) add_vertex(std::move(n));
}

Vertex Structure::add_vertex(std::string name) {
  if (index_.count(name)) throw DataError("duplicate vertex " + name);
  auto v = static_cast<Vertex>(names_.size());
  index_.emplace(name, v);
  names_.push_back(std::move(name));
  return v;
}

void Structure::check_tuple(std::size_t symbol, const Tuple& tuple) const {
  if (symbol >= signature_.size()) throw DataError("symbol index out of range");
  const auto& sym = signature_[symbol];
  if (static_cast<int>(tuple.size()) != sym.arity) {
    throw DataError("tuple of length " + std::to_string(tuple.size()) + " for symbol " +
                    sym.name + " of arity " + std::to_string(sym.arity));
  }
  for (auto v : tuple) {
    if (v >= names_.size()) throw DataError("tuple entry is not a vertex of the structure");
  }
}

void Structure::add_tuple(std::size_t symbol, Tuple tuple) {
  check_tuple(symbol, tuple);
  if (signature_[symbol].symmetric) relations_[symbol].insert({tuple[1], tuple[0]});
  relations_[symbol].insert(std::move(tuple));
}

void Structure::add_tuple(std::string_view symbol, const std::vector<std::string>& vertex_names) {
  Tuple t;
  t.reserve(vertex_names.size());
  for (const auto& n : vertex_names) t.push_back(vertex(n));
  add_tuple(signature_.index_of(symbol), std::move(t));
}

bool Structure::remove_tuple(std::size_t symbol, const Tuple& tuple) {
  bool removed = relations_[symbol].erase(tuple) > 0;
  if (signature_[symbol].symmetric) relations_[symbol].erase(Tuple{tuple[1], tuple[0]});
  return removed;
}

bool Structure::has_tuple(std::size_t symbol, const Tuple& tuple) const {
  return relations_[symbol].count(tuple) > 0;
}

std::optional<Vertex> Structure::find_vertex(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vertex Structure::vertex(std::string_view name) const {
  if (auto v = find_vertex(name)) return *v;
  throw DataError("unknown vertex " + std::string(name));
}

std::size_t Structure::tuple_count() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.size();
  return n;
}

bool Structure::operator==(const Structure& other) const {
  return signature_ == other.signature_ && names_ == other.names_ &&
         relations_ == other.relations_;
}

std::string Girth::to_string() const {
  return value_ ? std::to_string(*value_) : std::string("infinite");
}

bool has_repeated_entry(const Tuple& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (t[i] == t[j]) return true;
    }
  }
  return false;
}

std::vector<Occurrence> occurrences(const Structure& s) {
  std::vector<Occurrence> out;
  const auto& sig = s.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    for (const auto& t : s.relation(r)) {
      if (sig[r].symmetric && t[0] > t[1]) continue;
      out.push_back({r, t});
    }
  }
  return out;
}

IncidenceGraph incidence_graph(const Structure& s) {
  IncidenceGraph g;
  g.vertex_count = s.size();
  g.occurrences = occurrences(s);
  for (std::size_t i = 0; i < g.occurrences.size(); ++i) {
    const auto& t = g.occurrences[i].tuple;
    for (std::size_t p = 0; p < t.size(); ++p) g.edges.push_back({t[p], i, p});
  }
  return g;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> IncidenceGraph::adjacency() const {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(node_count());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::size_t a = edges[e].vertex;
    std::size_t b = vertex_count + edges[e].occurrence;
    adj[a].emplace_back(b, e);
    adj[b].emplace_back(a, e);
  }
  return adj;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct CycleSearch {
  const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj;
  std::vector<std::size_t> dist, parent, parent_edge;

  explicit CycleSearch(const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& a)
      : adj(a), dist(a.size()), parent(a.size()), parent_edge(a.size()) {}

  /// BFS from root up to depth `depth`. Returns the shortest closed walk length
  /// detected and the two endpoints of the closing edge.
  struct Hit {
    std::size_t length = kNone, u = kNone, w = kNone;
  };

  Hit run(std::size_t root, std::size_t depth, bool stop_at_first) {
    std::fill(dist.begin(), dist.end(), kNone);
    std::deque<std::size_t> queue{root};
    dist[root] = 0;
    parent[root] = kNone;
    parent_edge[root] = kNone;
    Hit best;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      if (best.length != kNone && 2 * dist[u] + 1 >= best.length) break;
      for (auto [w, e] : adj[u]) {
        if (e == parent_edge[u]) continue;
        if (dist[w] == kNone) {
          if (dist[u] + 1 > depth) continue;
          dist[w] = dist[u] + 1;
          parent[w] = u;
          parent_edge[w] = e;
          queue.push_back(w);
        } else {
          auto len = dist[u] + dist[w] + 1;
          if (len < best.length) best = {len, u, w};
          if (stop_at_first) return best;
        }
      }
    }
    return best;
  }

  /// Nodes of the simple cycle closed by the edge (u, w).
  std::vector<std::size_t> extract(std::size_t u, std::size_t w) const {
    std::vector<std::size_t> pu{u}, pw{w};
    while (parent[pu.back()] != kNone) pu.push_back(parent[pu.back()]);
    while (parent[pw.back()] != kNone) pw.push_back(parent[pw.back()]);
    // drop the common tail (path to the root shared by both)
    while (pu.size() > 1 && pw.size() > 1 && pu[pu.size() - 2] == pw[pw.size() - 2]) {
      pu.pop_back();
      pw.pop_back();
    }
    std::vector<std::size_t> cycle(pu.begin(), pu.end());
    if (pu.back() == pw.back()) pw.pop_back();
    cycle.insert(cycle.end(), pw.rbegin(), pw.rend());
    return cycle;
  }
};

}  // namespace

Girth girth(const Structure& s) {
  auto g = incidence_graph(s);
  auto adj = g.adjacency();
  CycleSearch search(adj);
  std::size_t best = kNone;
  for (std::size_t root = 0; root < adj.size(); ++root) {
    auto hit = search.run(root, kNone, false);
    best = std::min(best, hit.length);
  }
  if (best == kNone) return Girth::infinite();
  return Girth::finite(static_cast<int>((best + 1) / 2));
}

std::optional<std::vector<std::size_t>> find_short_cycle(const Structure& s,
                                                        int max_incidence_length) {
  if (max_incidence_length < 2) return std::nullopt;
  auto g = incidence_graph(s);
  auto adj = g.adjacency();
  CycleSearch search(adj);
  auto limit = static_cast<std::size_t>(max_incidence_length);
  // A cycle of length L through the root is found with BFS depth floor(L/2).
  for (std::size_t root = 0; root < g.vertex_count; ++root) {
    auto hit = search.run(root, limit / 2, false);
    if (hit.length == kNone || hit.length > limit) continue;
    std::vector<std::size_t> occ;
    for (auto node : search.extract(hit.u, hit.w)) {
      if (node >= g.vertex_count) occ.push_back(node - g.vertex_count);
    }
    std::sort(occ.begin(), occ.end());
    occ.erase(std::unique(occ.begin(), occ.end()), occ.end());
    return occ;
  }
  return std::nullopt;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

bool is_connected(const Structure& s) {
  auto g = incidence_graph(s);
  if (g.node_count() == 0) return true;
  UnionFind uf(g.node_count());
  std::size_t components = g.node_count();
  for (const auto& e : g.edges) {
    if (uf.unite(e.vertex, g.vertex_count + e.occurrence)) --components;
  }
  return components == 1;
}

bool is_tree(const Structure& s) {
  auto g = incidence_graph(s);
  if (g.node_count() == 0) return true;
  return is_connected(s) && g.edges.size() + 1 == g.node_count();
}

Structure quotient(const Structure& s, const std::vector<std::size_t>& block_of) {
  std::size_t blocks = 0;
  for (auto b : block_of) blocks = std::max(blocks, b + 1);
  std::vector<std::string> names(blocks);
  for (std::size_t v = 0; v < s.size(); ++v) {
    auto& n = names[block_of[v]];
    if (!n.empty()) n += '+';
    n += s.name(static_cast<Vertex>(v));
  }
  Structure image(s.signature(), std::move(names));
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    for (const auto& t : s.relation(r)) {
      Tuple u(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) u[i] = static_cast<Vertex>(block_of[t[i]]);
      image.add_tuple(r, std::move(u));
    }
  }
  return image;
}

std::vector<Quotient> quotients(const Structure& s, std::size_t max_vertices) {
  if (s.size() > max_vertices) {
    throw SizeGuardExceeded("quotient enumeration over " + std::to_string(s.size()) +
                            " vertices exceeds the bound of " + std::to_string(max_vertices));
  }
  std::vector<Quotient> out;
  for_each_partition(s.size(), [&](const std::vector<std::size_t>& block, std::size_t) {
    out.push_back({block, quotient(s, block)});
  });
  return out;
}

Structure disjoint_union(const Structure& a, const Structure& b) {
  if (!(a.signature() == b.signature())) {
    throw SignatureMismatch("disjoint union of structures over different signatures");
  }
  Structure u(a.signature());
  for (const auto& n : a.names()) u.add_vertex("0:" + n);
  for (const auto& n : b.names()) u.add_vertex("1:" + n);
  auto offset = static_cast<Vertex>(a.size());
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    for (const auto& t : a.relation(r)) u.add_tuple(r, t);
    for (auto t : b.relation(r)) {
      for (auto& v : t) v += offset;
      u.add_tuple(r, std::move(t));
    }
  }
  return u;
}

Structure induced_substructure(const Structure& s, const std::vector<Vertex>& keep) {
  std::vector<std::size_t> map(s.size(), kNone);
  Structure sub(s.signature());
  for (auto v : keep) map[v] = sub.add_vertex(s.name(v));
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    for (const auto& t : s.relation(r)) {
      Tuple u;
      u.reserve(t.size());
      for (auto v : t) {
        if (map[v] == kNone) break;
        u.push_back(static_cast<Vertex>(map[v]));
      }
      if (u.size() == t.size()) sub.add_tuple(r, std::move(u));
    }
  }
  return sub;
}

Structure without_tuples(const Structure& s) { return Structure(s.signature(), s.names()); }

}  // namespace gmsnp
