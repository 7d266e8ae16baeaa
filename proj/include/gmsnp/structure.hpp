#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gmsnp {

using Vertex = std::uint32_t;
using Tuple = std::vector<Vertex>;

struct Symbol {
  std::string name;
  int arity = 0;
  bool symmetric = false;

  bool operator==(const Symbol&) const = default;
};

/// Finite relational signature. Symbol order is significant: it fixes the
/// iteration order of every algorithm that walks relations.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<Symbol> symbols);

  /// Appends a symbol and returns its index.
  std::size_t add(Symbol symbol);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Like find() but throws DataError for unknown names.
  std::size_t index_of(std::string_view name) const;

  bool operator==(const Signature& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<Symbol> symbols_;
};

/// Finite relational structure with named vertices.
///
/// Relations are kept as ordered tuple sets per symbol. Relations of
/// symmetric symbols are kept closed under reversal by add_tuple() and
/// remove_tuple(). Vertex names are opaque and unique.
class Structure {
 public:
  Structure() = default;
  explicit Structure(Signature signature);
  /// Vertices named "0", "1", ..., "n-1".
  Structure(Signature signature, std::size_t vertex_count);
  Structure(Signature signature, std::vector<std::string> vertex_names);

  Vertex add_vertex(std::string name);
  /// Inserts a tuple (and its reversal for symmetric symbols).
  void add_tuple(std::size_t symbol, Tuple tuple);
  void add_tuple(std::string_view symbol, const std::vector<std::string>& vertex_names);
  bool remove_tuple(std::size_t symbol, const Tuple& tuple);
  bool has_tuple(std::size_t symbol, const Tuple& tuple) const;

  const Signature& signature() const { return signature_; }
  std::size_t size() const { return names_.size(); }
  const std::string& name(Vertex v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Vertex> find_vertex(std::string_view name) const;
  Vertex vertex(std::string_view name) const;

  const std::set<Tuple>& relation(std::size_t symbol) const { return relations_[symbol]; }
  /// Total number of stored tuples over all symbols.
  std::size_t tuple_count() const;

  bool operator==(const Structure& other) const;

 private:
  void check_tuple(std::size_t symbol, const Tuple& tuple) const;

  Signature signature_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::set<Tuple>> relations_;
};

/// One right-hand node of the incidence graph. For symmetric symbols a node
/// stands for the unordered orbit {(a,b),(b,a)}; `tuple` is its least orientation.
struct Occurrence {
  std::size_t symbol = 0;
  Tuple tuple;

  bool operator==(const Occurrence&) const = default;
  auto operator<=>(const Occurrence&) const = default;
};

/// Bipartite incidence multigraph. Node ids: vertices are 0..vertex_count-1,
/// occurrence i is node vertex_count + i. A tuple with a repeated entry
/// contributes parallel edges.
struct IncidenceGraph {
  struct Edge {
    Vertex vertex;
    std::size_t occurrence;
    std::size_t position;
  };

  std::size_t vertex_count = 0;
  std::vector<Occurrence> occurrences;
  std::vector<Edge> edges;

  std::size_t node_count() const { return vertex_count + occurrences.size(); }
  /// adjacency()[node] lists (neighbour node, edge id).
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency() const;
};

class Girth {
 public:
  static Girth infinite() { return Girth{}; }
  static Girth finite(int value) { return Girth{value}; }

  bool is_finite() const { return value_.has_value(); }
  int value() const { return *value_; }
  /// True iff the girth is strictly larger than l.
  bool exceeds(int l) const { return !value_ || *value_ > l; }
  std::string to_string() const;

  bool operator==(const Girth&) const = default;
  friend std::strong_ordering operator<=>(const Girth& a, const Girth& b) {
    if (a.value_ && b.value_) return *a.value_ <=> *b.value_;
    if (a.value_) return std::strong_ordering::less;
    if (b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Girth() = default;
  explicit Girth(int v) : value_(v) {}
  std::optional<int> value_;
};

std::vector<Occurrence> occurrences(const Structure& s);
IncidenceGraph incidence_graph(const Structure& s);

Girth girth(const Structure& s);

/// Occurrence indices (into occurrences(s)) of some incidence cycle of length
/// at most max_incidence_length, or nullopt if none exists.
std::optional<std::vector<std::size_t>> find_short_cycle(const Structure& s,
                                                        int max_incidence_length);

bool is_connected(const Structure& s);
bool is_tree(const Structure& s);

/// Surjective image under the vertex map v -> block_of[v]. Blocks must be
/// numbered 0..k-1; block names join the member names with '+'.
Structure quotient(const Structure& s, const std::vector<std::size_t>& block_of);

struct Quotient {
  std::vector<std::size_t> block_of;
  Structure image;
};

inline constexpr std::size_t kDefaultQuotientVertexBound = 10;

/// All quotients in restricted-growth order (the identity partition is last).
/// Throws SizeGuardExceeded if s has more than max_vertices vertices.
std::vector<Quotient> quotients(const Structure& s,
                                std::size_t max_vertices = kDefaultQuotientVertexBound);

/// Calls visit(block_of, block_count) for every set partition of n elements.
template <typename Visit>
void for_each_partition(std::size_t n, Visit&& visit) {
  std::vector<std::size_t> block(n, 0);
  // prefix_max[i] = number of blocks used by block[0..i]
  std::vector<std::size_t> used(n + 1, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      visit(static_cast<const std::vector<std::size_t>&>(block), used[n]);
      return;
    }
    for (std::size_t b = 0; b <= used[i]; ++b) {
      block[i] = b;
      used[i + 1] = std::max(used[i], b + 1);
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

/// Vertices tagged "0:" and "1:"; throws SignatureMismatch.
Structure disjoint_union(const Structure& a, const Structure& b);

/// Substructure induced on `keep` (in the given order).
Structure induced_substructure(const Structure& s, const std::vector<Vertex>& keep);

/// Same vertices, every relation emptied.
Structure without_tuples(const Structure& s);

bool has_repeated_entry(const Tuple& t);

}  // namespace gmsnp
