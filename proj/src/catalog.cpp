#include "gmsnp/catalog.hpp"

namespace gmsnp::catalog {

Signature graph_signature() { return Signature({{"E", 2, true}}); }

Signature digraph_signature() { return Signature({{"E", 2, false}}); }

Structure complete_graph(std::size_t n) {
  Structure s(graph_signature(), n);
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) s.add_tuple(0, {i, j});
  }
  return s;
}

Structure cycle_graph(std::size_t n) {
  Structure s(graph_signature(), n);
  for (Vertex i = 0; i < n; ++i) s.add_tuple(0, {i, static_cast<Vertex>((i + 1) % n)});
  return s;
}

Structure directed_cycle(std::size_t n) {
  Structure s(digraph_signature(), n);
  for (Vertex i = 0; i < n; ++i) s.add_tuple(0, {i, static_cast<Vertex>((i + 1) % n)});
  return s;
}

Structure directed_path(std::size_t n) {
  Structure s(digraph_signature(), n);
  for (Vertex i = 0; i + 1 < n; ++i) s.add_tuple(0, {i, i + 1});
  return s;
}

Structure transitive_tournament(std::size_t n) {
  Structure s(digraph_signature(), n);
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) s.add_tuple(0, {i, j});
  }
  return s;
}

Structure loop(const Signature& signature) {
  Structure s(signature, 1);
  for (std::size_t r = 0; r < signature.size(); ++r) {
    s.add_tuple(r, Tuple(static_cast<std::size_t>(signature[r].arity), 0));
  }
  return s;
}

Signature ternary_signature() { return Signature({{"R", 3, false}}); }

Structure one_in_three() {
  Structure s(ternary_signature(), 2);
  s.add_tuple(0, {1, 0, 0});
  s.add_tuple(0, {0, 1, 0});
  s.add_tuple(0, {0, 0, 1});
  return s;
}

Structure not_all_equal() {
  Structure s(ternary_signature(), 2);
  for (Vertex a = 0; a < 2; ++a) {
    for (Vertex b = 0; b < 2; ++b) {
      for (Vertex c = 0; c < 2; ++c) {
        if (!(a == b && b == c)) s.add_tuple(0, {a, b, c});
      }
    }
  }
  return s;
}

}  // namespace gmsnp::catalog
