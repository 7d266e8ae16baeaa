#include "gmsnp/trees.hpp"

#include <algorithm>
#include <limits>

#include "gmsnp/errors.hpp"

namespace gmsnp {

namespace {

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

struct TreeIndex {
  std::vector<Occurrence> occ;
  std::vector<std::vector<std::size_t>> incident;  // vertex -> occurrence ids
  const Signature* sig;

  explicit TreeIndex(const Structure& s) : occ(occurrences(s)), incident(s.size()), sig(&s.signature()) {
    for (std::size_t i = 0; i < occ.size(); ++i) {
      for (auto v : occ[i].tuple) incident[v].push_back(i);
    }
  }

  std::string vertex_code(Vertex v, std::size_t parent) const {
    std::vector<std::string> branches;
    for (auto i : incident[v]) {
      if (i == parent) continue;
      branches.push_back(branch_code(v, i));
    }
    std::sort(branches.begin(), branches.end());
    std::string out = "(";
    for (const auto& b : branches) out += b;
    out += ')';
    return out;
  }

  std::string branch_code(Vertex from, std::size_t i) const {
    const auto& o = occ[i];
    std::size_t pos = std::find(o.tuple.begin(), o.tuple.end(), from) - o.tuple.begin();
    std::string out = "s" + std::to_string(o.symbol);
    out += (*sig)[o.symbol].symmetric ? std::string("~") : "." + std::to_string(pos);
    out += '[';
    bool first = true;
    for (std::size_t p = 0; p < o.tuple.size(); ++p) {
      if (p == pos) continue;
      if (!first) out += ',';
      first = false;
      out += vertex_code(o.tuple[p], i);
    }
    out += ']';
    return out;
  }
};

}  // namespace

std::string rooted_code(const Structure& tree, Vertex root) {
  if (!is_tree(tree)) throw DataError("rooted_code: structure is not a tree");
  if (root >= tree.size()) throw DataError("rooted_code: root is not a vertex");
  return TreeIndex(tree).vertex_code(root, kNoParent);
}

std::string tree_code(const Structure& tree) {
  if (!is_tree(tree)) throw DataError("tree_code: structure is not a tree");
  TreeIndex index(tree);
  std::string best;
  for (Vertex v = 0; v < tree.size(); ++v) {
    auto c = index.vertex_code(v, kNoParent);
    if (v == 0 || c < best) best = std::move(c);
  }
  return best;
}

}  // namespace gmsnp
