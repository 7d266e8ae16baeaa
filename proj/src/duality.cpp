#include "gmsnp/duality.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>

#include "gmsnp/errors.hpp"
#include "gmsnp/trees.hpp"

namespace gmsnp {

namespace {

using Id = std::uint32_t;

/// One tuple hanging off a root: its symbol, the root's position (-1 for
/// symmetric symbols) and the subtrees at the other positions in order.
struct Branch {
  Id symbol;
  int pos;
  std::vector<Id> children;

  auto operator<=>(const Branch&) const = default;
};

/// Hash-consed rooted trees. A node is the sorted list of its root's branches.
class Forest {
 public:
  explicit Forest(const Signature& sigma, std::size_t cap) : sigma_(sigma), cap_(cap) {}

  Id branch(Branch b) {
    auto [it, inserted] = branch_ids_.try_emplace(b, static_cast<Id>(branches_.size()));
    if (inserted) branches_.push_back(std::move(b));
    return it->second;
  }

  Id node(std::vector<Id> branch_list) {
    normalize(branch_list);
    auto [it, inserted] = node_ids_.try_emplace(branch_list, static_cast<Id>(nodes_.size()));
    if (inserted) {
      if (nodes_.size() >= cap_) {
        throw SizeGuardExceeded("rooted universe exceeds " + std::to_string(cap_) + " trees");
      }
      nodes_.push_back(std::move(branch_list));
    }
    return it->second;
  }

  std::optional<Id> find_node(std::vector<Id> branch_list) const {
    normalize(branch_list);
    auto it = node_ids_.find(branch_list);
    if (it == node_ids_.end()) return std::nullopt;
    return it->second;
  }

  /// Glue of two rooted trees at their roots.
  std::optional<Id> find_glue(Id x, Id y) const {
    std::vector<Id> merged = nodes_[x];
    merged.insert(merged.end(), nodes_[y].begin(), nodes_[y].end());
    return find_node(std::move(merged));
  }

  Id rooting(const Structure& tree, Vertex root) {
    TreeWalk walk{tree, occurrences(tree), std::vector<std::vector<std::size_t>>(tree.size())};
    for (std::size_t i = 0; i < walk.occ.size(); ++i) {
      for (auto v : walk.occ[i].tuple) walk.incident[v].push_back(i);
    }
    return build(walk, root, walk.occ.size());
  }

  /// The rootings at `root` of every subset of its incident tuples, each
  /// taken together with everything beyond it.
  void pieces(const Structure& tree, Vertex root) {
    TreeWalk walk{tree, occurrences(tree), std::vector<std::vector<std::size_t>>(tree.size())};
    for (std::size_t i = 0; i < walk.occ.size(); ++i) {
      for (auto v : walk.occ[i].tuple) walk.incident[v].push_back(i);
    }
    const auto& inc = walk.incident[root];
    if (inc.size() >= 20) throw SizeGuardExceeded("rooted universe: vertex degree too large");
    for (std::size_t mask = 0; mask < (std::size_t{1} << inc.size()); ++mask) {
      std::vector<Id> list;
      for (std::size_t k = 0; k < inc.size(); ++k) {
        if (mask >> k & 1) list.push_back(build_branch(walk, root, inc[k]));
      }
      node(std::move(list));
    }
  }

  /// Every rooted substructure of node x containing the root (x included).
  const std::vector<Id>& subs(Id x) {
    if (subs_.size() <= x) subs_.resize(nodes_.size());
    if (!subs_[x].empty()) return subs_[x];
    std::vector<std::vector<Id>> options;
    auto own = nodes_[x];
    for (auto b : own) {
      std::vector<Id> opts{kOmit};
      auto variants = branch_variants(b);
      opts.insert(opts.end(), variants.begin(), variants.end());
      options.push_back(std::move(opts));
    }
    std::vector<Id> out;
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
      std::vector<Id> list;
      for (std::size_t i = 0; i < pick.size(); ++i) {
        if (options[i][pick[i]] != kOmit) list.push_back(options[i][pick[i]]);
      }
      out.push_back(node(std::move(list)));
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (subs_.size() <= x) subs_.resize(nodes_.size());
    subs_[x] = std::move(out);
    return subs_[x];
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Id>& branches_of(Id x) const { return nodes_[x]; }
  const Branch& branch_at(Id b) const { return branches_[b]; }

  std::string code(Id x) {
    if (codes_.size() < nodes_.size()) codes_.resize(nodes_.size());
    if (!codes_[x].empty()) return codes_[x];
    std::vector<std::string> parts;
    for (auto b : nodes_[x]) {
      const auto& br = branches_[b];
      std::string s = "s" + std::to_string(br.symbol);
      s += br.pos < 0 ? std::string("~") : "." + std::to_string(br.pos);
      s += '[';
      for (std::size_t i = 0; i < br.children.size(); ++i) {
        if (i) s += ',';
        s += code(br.children[i]);
      }
      s += ']';
      parts.push_back(std::move(s));
    }
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (const auto& p : parts) out += p;
    out += ')';
    codes_[x] = out;
    return out;
  }

  RootedTree materialize(Id x) {
    Structure s(sigma_);
    auto rec = [&](auto&& self, Id n) -> Vertex {
      auto v = s.add_vertex(std::to_string(s.size()));
      for (auto b : nodes_[n]) {
        const auto& br = branches_[b];
        auto arity = static_cast<std::size_t>(sigma_[br.symbol].arity);
        Tuple t(arity, v);
        std::size_t c = 0;
        for (std::size_t p = 0; p < arity; ++p) {
          if (static_cast<int>(p) == br.pos || (br.pos < 0 && p == 0)) continue;
          t[p] = self(self, br.children[c++]);
        }
        s.add_tuple(br.symbol, t);
      }
      return v;
    };
    rec(rec, x);
    return {std::move(s), 0, code(x)};
  }

 private:
  static constexpr Id kOmit = static_cast<Id>(-1);

  struct TreeWalk {
    const Structure& tree;
    std::vector<Occurrence> occ;
    std::vector<std::vector<std::size_t>> incident;
  };

  Id build(const TreeWalk& w, Vertex v, std::size_t parent) {
    std::vector<Id> list;
    for (auto i : w.incident[v]) {
      if (i != parent) list.push_back(build_branch(w, v, i));
    }
    return node(std::move(list));
  }

  Id build_branch(const TreeWalk& w, Vertex v, std::size_t i) {
    const auto& o = w.occ[i];
    Branch b{static_cast<Id>(o.symbol), 0, {}};
    auto pos = static_cast<std::size_t>(std::find(o.tuple.begin(), o.tuple.end(), v) - o.tuple.begin());
    b.pos = sigma_[o.symbol].symmetric ? -1 : static_cast<int>(pos);
    for (std::size_t p = 0; p < o.tuple.size(); ++p) {
      if (p != pos) b.children.push_back(build(w, o.tuple[p], i));
    }
    return branch(std::move(b));
  }

  std::vector<Id> branch_variants(Id b) {
    Branch base = branches_[b];
    std::vector<std::vector<Id>> child_subs;
    for (auto c : base.children) child_subs.push_back(subs(c));
    std::vector<Id> out;
    std::vector<std::size_t> pick(child_subs.size(), 0);
    while (true) {
      Branch v{base.symbol, base.pos, {}};
      for (std::size_t i = 0; i < pick.size(); ++i) v.children.push_back(child_subs[i][pick[i]]);
      out.push_back(branch(std::move(v)));
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == child_subs[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
    return out;
  }

  /// Sorted; a childless branch (a unary tuple on the root) kept once.
  void normalize(std::vector<Id>& list) const {
    std::sort(list.begin(), list.end());
    std::vector<Id> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0 && list[i] == list[i - 1] && branches_[list[i]].children.empty()) continue;
      out.push_back(list[i]);
    }
    list = std::move(out);
  }

  const Signature& sigma_;
  std::size_t cap_;
  std::map<Branch, Id> branch_ids_;
  std::vector<Branch> branches_;
  std::map<std::vector<Id>, Id> node_ids_;
  std::vector<std::vector<Id>> nodes_;
  std::vector<std::vector<Id>> subs_;
  std::vector<std::string> codes_;
};

void check_trees(const Signature& sigma, const std::vector<Structure>& trees) {
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (!(trees[i].signature() == sigma)) throw SignatureMismatch("tree " + std::to_string(i) + " is over another signature");
    if (trees[i].size() == 0) throw DataError("tree " + std::to_string(i) + " is empty");
    if (!is_tree(trees[i])) throw DataError("member " + std::to_string(i) + " is not a tree");
  }
}

/// The members of the universe in code order, with the data the closure and
/// the relations need. Positions index `ids`.
struct Universe {
  std::vector<Id> ids;
  std::vector<std::int64_t> position;  // forest id -> position, or -1
  std::vector<char> full;              // rooting of a whole tree
  std::vector<std::vector<std::size_t>> subs;
  std::size_t point = 0;

  std::optional<std::size_t> at(std::optional<Id> x) const {
    if (!x || *x >= position.size() || position[*x] < 0) return std::nullopt;
    return static_cast<std::size_t>(position[*x]);
  }
};

Universe build_universe(Forest& forest, const std::vector<Structure>& trees, UniverseKind kind) {
  std::vector<Id> full;
  for (const auto& t : trees) {
    for (Vertex v = 0; v < t.size(); ++v) full.push_back(forest.rooting(t, v));
  }
  if (kind == UniverseKind::WholeBranches) {
    for (const auto& t : trees) {
      for (Vertex v = 0; v < t.size(); ++v) forest.pieces(t, v);
    }
  } else {
    // subs() may intern nodes whose own subs are not cached yet
    for (Id x = 0; x < forest.size(); ++x) forest.subs(x);
  }
  std::vector<Id> members;
  for (Id x = 0; x < forest.size(); ++x) members.push_back(x);
  for (auto x : members) forest.subs(x);

  std::vector<std::string> codes;
  for (auto x : members) codes.push_back(forest.code(x));
  std::sort(members.begin(), members.end(), [&](Id a, Id b) { return codes[a] < codes[b]; });
  Universe u;
  u.ids = members;
  u.position.assign(forest.size(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) u.position[members[i]] = static_cast<std::int64_t>(i);
  u.full.assign(members.size(), 0);
  for (auto f : full) u.full[*u.at(f)] = 1;
  u.point = *u.at(forest.find_node({}));
  for (auto x : members) {
    std::vector<std::size_t> inside;
    for (auto y : forest.subs(x)) {
      if (auto p = u.at(y)) inside.push_back(*p);
    }
    u.subs.push_back(std::move(inside));
  }
  return u;
}

class ClosedSets {
 public:
  ClosedSets(const Forest& forest, const Universe& u) : forest_(forest), u_(u), n_(u.ids.size()) {
    if (n_ <= kGlueTableLimit) glue_.assign(n_ * n_, kUnknown);
  }

  struct Set {
    std::vector<char> in;
    std::vector<std::size_t> members;
  };

  /// Closure of `base` plus `extra`, where `base` is already closed. Gives nullopt once a whole
  /// tree enters, or when an element below `floor` outside `base` enters.
  std::optional<Set> extend(const Set& base, std::optional<std::size_t> extra, std::size_t floor) const {
    Set s = base;
    std::deque<std::size_t> queue;
    bool broken = false;
    auto add = [&](std::size_t x) {
      if (s.in[x]) return;
      if (u_.full[x] || x < floor) broken = true;
      s.in[x] = 1;
      s.members.push_back(x);
      queue.push_back(x);
    };
    if (extra) add(*extra);
    while (!queue.empty() && !broken) {
      auto x = queue.front();
      queue.pop_front();
      for (auto y : u_.subs[x]) add(y);
      for (std::size_t i = 0; i < s.members.size() && !broken; ++i) {
        if (auto g = glue(x, s.members[i])) add(*g);
      }
    }
    if (broken) return std::nullopt;
    return s;
  }

  /// Close-by-One over the universe positions.
  std::vector<std::vector<char>> enumerate(std::size_t cap) const {
    std::vector<std::vector<char>> out;
    Set empty{std::vector<char>(n_, 0), {}};
    auto bottom = extend(empty, u_.point, 0);
    if (!bottom) return out;
    auto rec = [&](auto&& self, const Set& a, std::size_t from) -> void {
      for (std::size_t i = from; i < n_; ++i) {
        if (a.in[i]) continue;
        auto b = extend(a, i, i);
        if (!b) continue;
        if (out.size() >= cap) {
          throw SizeGuardExceeded("dual domain exceeds " + std::to_string(cap) + " elements");
        }
        out.push_back(b->in);
        self(self, *b, i + 1);
      }
    };
    out.push_back(bottom->in);
    rec(rec, *bottom, 0);
    return out;
  }

 private:
  static constexpr std::size_t kGlueTableLimit = 2048;
  static constexpr std::int32_t kUnknown = -2;
  static constexpr std::int32_t kNone = -1;

  std::optional<std::size_t> glue(std::size_t x, std::size_t y) const {
    if (glue_.empty()) return u_.at(forest_.find_glue(u_.ids[x], u_.ids[y]));
    auto& slot = glue_[x * n_ + y];
    if (slot == kUnknown) {
      auto g = u_.at(forest_.find_glue(u_.ids[x], u_.ids[y]));
      slot = g ? static_cast<std::int32_t>(*g) : kNone;
      glue_[y * n_ + x] = slot;
    }
    if (slot == kNone) return std::nullopt;
    return static_cast<std::size_t>(slot);
  }

  const Forest& forest_;
  const Universe& u_;
  std::size_t n_;
  mutable std::vector<std::int32_t> glue_;
};

struct Rule {
  std::vector<std::size_t> antecedent;  // one universe position per tuple position
  std::size_t position;
  std::size_t consequent;
};

std::vector<std::vector<Rule>> propagation_rules(const Forest& forest, const Universe& u,
                                                 const Signature& sigma) {
  std::vector<std::vector<Rule>> rules(sigma.size());
  for (std::size_t s = 0; s < u.ids.size(); ++s) {
    const auto& list = forest.branches_of(u.ids[s]);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0 && list[i] == list[i - 1]) continue;
      const auto& br = forest.branch_at(list[i]);
      std::vector<Id> rest = list;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      auto f = u.at(forest.find_node(rest));
      std::vector<std::size_t> children;
      for (auto c : br.children) children.push_back(*u.at(c));
      if (!f) throw std::logic_error("dual: universe is not closed under branch removal");
      auto arity = static_cast<std::size_t>(sigma[br.symbol].arity);
      std::vector<std::size_t> root_positions;
      if (br.pos < 0) {
        root_positions = {0, 1};
      } else {
        root_positions = {static_cast<std::size_t>(br.pos)};
      }
      for (auto j : root_positions) {
        Rule r{std::vector<std::size_t>(arity), j, s};
        std::size_t c = 0;
        for (std::size_t p = 0; p < arity; ++p) r.antecedent[p] = p == j ? *f : children[c++];
        rules[br.symbol].push_back(std::move(r));
      }
    }
  }
  return rules;
}

void add_relation(Structure& d, std::size_t symbol, const std::vector<Rule>& rules,
                  const std::vector<std::vector<char>>& elements) {
  auto arity = static_cast<std::size_t>(d.signature()[symbol].arity);
  auto m = static_cast<Vertex>(elements.size());
  Tuple t(arity);
  std::vector<std::vector<const Rule*>> live(arity + 1);
  for (const auto& r : rules) live[0].push_back(&r);
  auto rec = [&](auto&& self, std::size_t p) -> void {
    if (p == arity) {
      for (const auto* r : live[p]) {
        if (!elements[t[r->position]][r->consequent]) return;
      }
      d.add_tuple(symbol, t);
      return;
    }
    for (Vertex u = 0; u < m; ++u) {
      t[p] = u;
      live[p + 1].clear();
      for (const auto* r : live[p]) {
        if (elements[u][r->antecedent[p]]) live[p + 1].push_back(r);
      }
      self(self, p + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace

std::vector<RootedTree> rooted_universe(const Signature& sigma, const std::vector<Structure>& trees,
                                        const DualOptions& options) {
  check_trees(sigma, trees);
  Forest forest(sigma, options.universe_cap);
  auto u = build_universe(forest, trees, options.universe);
  std::vector<RootedTree> out;
  for (auto x : u.ids) out.push_back(forest.materialize(x));
  return out;
}

Dual dual_of_trees(const Signature& sigma, const std::vector<Structure>& trees, const DualOptions& options) {
  check_trees(sigma, trees);
  Dual dual;
  if (trees.empty()) {
    dual.structure = Structure(sigma, std::vector<std::string>{"d0"});
    for (std::size_t r = 0; r < sigma.size(); ++r) {
      dual.structure.add_tuple(r, Tuple(static_cast<std::size_t>(sigma[r].arity), 0));
    }
    dual.members.emplace_back();
    return dual;
  }
  Forest forest(sigma, options.universe_cap);
  auto u = build_universe(forest, trees, options.universe);
  for (auto x : u.ids) dual.universe.push_back(forest.materialize(x));

  auto elements = ClosedSets(forest, u).enumerate(options.domain_cap);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    names.push_back("d" + std::to_string(i));
    std::vector<std::size_t> members;
    for (std::size_t x = 0; x < u.ids.size(); ++x) {
      if (elements[i][x]) members.push_back(x);
    }
    dual.members.push_back(std::move(members));
  }
  dual.structure = Structure(sigma, std::move(names));
  auto rules = propagation_rules(forest, u, sigma);
  for (std::size_t r = 0; r < sigma.size(); ++r) add_relation(dual.structure, r, rules[r], elements);
  return dual;
}

Reduct forget_colors(const Structure& d, const Palette& palette) {
  Reduct out;
  const auto& tau = palette.tau();
  out.tuple_color.resize(tau.size());
  if (d.signature() == tau) {
    out.factor = d;
    for (Vertex v = 0; v < d.size(); ++v) out.origin.push_back(v);
    return out;
  }
  if (!(d.signature() == palette.sigma())) {
    throw SignatureMismatch("forget_colors: structure is not over the palette");
  }
  auto least = [](const std::vector<std::string>& names, const std::vector<std::size_t>& held) {
    return *std::min_element(held.begin(), held.end(),
                             [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
  };
  std::vector<std::vector<std::size_t>> held(d.size());
  for (std::size_t c = 0; c < palette.vertex_colors().size(); ++c) {
    for (const auto& t : d.relation(palette.vertex_symbol(c))) held[t[0]].push_back(c);
  }
  std::vector<std::optional<Vertex>> image(d.size());
  std::vector<std::string> names;
  for (Vertex v = 0; v < d.size(); ++v) {
    if (held[v].empty()) continue;
    image[v] = static_cast<Vertex>(out.origin.size());
    out.origin.push_back(v);
    names.push_back(d.name(v));
    out.vertex_color.push_back(least(palette.vertex_colors(), held[v]));
  }
  out.factor = Structure(tau, std::move(names));
  for (std::size_t r = 0; r < tau.size(); ++r) {
    std::map<Tuple, std::vector<std::size_t>> colors;
    for (std::size_t c = 0; c < palette.tuple_colors(r).size(); ++c) {
      for (const auto& t : d.relation(palette.tuple_symbol(r, c))) {
        Tuple mapped;
        for (auto v : t) {
          if (!image[v]) break;
          mapped.push_back(*image[v]);
        }
        if (mapped.size() == t.size()) colors[mapped].push_back(c);
      }
    }
    for (const auto& [t, held_colors] : colors) {
      out.factor.add_tuple(r, t);
      out.tuple_color[r][t] = least(palette.tuple_colors(r), held_colors);
    }
  }
  return out;
}

Structure pull_back(const Reduct& reduct, const Palette& palette, const Structure& a,
                    const HomWitness& a_to_factor) {
  if (!verify_hom(a, reduct.factor, a_to_factor)) throw DataError("pull_back: not a homomorphism to the factor");
  std::vector<std::size_t> vc(a.size());
  for (Vertex v = 0; v < a.size(); ++v) vc[v] = reduct.vertex_color[a_to_factor[v]];
  return make_coloring(palette, a, vc, [&](std::size_t r, const Tuple& t) {
    Tuple image;
    for (auto v : t) image.push_back(a_to_factor[v]);
    return reduct.tuple_color[r].at(image);
  });
}

FactorReport minimal_finite_factor(const PatternSet& f, const FactorOptions& options) {
  f.validate();
  FactorReport report;
  report.patterns = f;
  report.threshold = f.max_pattern_size();
  report.trees = tree_images(f, options.quotient_bound);
  auto build = [&](UniverseKind kind) {
    auto o = options.dual;
    o.universe = kind;
    report.universe = kind;
    return dual_of_trees(f.palette.sigma(), report.trees, o);
  };
  Dual dual;
  try {
    dual = build(options.dual.universe);
  } catch (const SizeGuardExceeded&) {
    if (options.strict_universe || options.dual.universe == UniverseKind::WholeBranches) throw;
    dual = build(UniverseKind::WholeBranches);
  }
  report.universe_size = dual.universe.size();
  report.dual = std::move(dual.structure);
  report.factor = forget_colors(report.dual, f.palette).factor;
  if (options.core) report.factor = core(report.factor, options.hom);
  return report;
}

}  // namespace gmsnp
