#include "gmsnp/homomorphism.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <set>

#include "gmsnp/errors.hpp"

namespace gmsnp {

namespace {

using Word = std::uint64_t;

struct Constraint {
  std::size_t symbol;
  std::vector<Vertex> scope;
  // first[i] = smallest j with scope[j] == scope[i]
  std::vector<std::size_t> first;
};

class Solver {
 public:
  Solver(const Structure& from, const Structure& to, const HomOptions& options)
      : n_(from.size()), m_(to.size()), words_((m_ + 63) / 64), budget_(options.node_budget) {
    const auto& sig = from.signature();
    for (std::size_t r = 0; r < sig.size(); ++r) targets_.push_back(&to.relation(r));
    watch_.resize(n_);
    for (std::size_t r = 0; r < sig.size(); ++r) {
      for (const auto& t : from.relation(r)) {
        // the reversed orientation of a symmetric tuple adds nothing
        if (sig[r].symmetric && t[0] > t[1]) continue;
        Constraint c{r, t, std::vector<std::size_t>(t.size())};
        for (std::size_t i = 0; i < t.size(); ++i) {
          c.first[i] = i;
          for (std::size_t j = 0; j < i; ++j) {
            if (t[j] == t[i]) {
              c.first[i] = j;
              break;
            }
          }
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (c.first[i] == i) watch_[t[i]].push_back(constraints_.size());
        }
        constraints_.push_back(std::move(c));
      }
    }
  }

  HomSearch run() {
    weight_.assign(constraints_.size(), 1);
    HomSearch result;
    if (n_ == 0) {
      result.witness = HomWitness{};
      return result;
    }
    if (m_ == 0) return result;
    std::vector<Word> domains(n_ * words_, ~Word{0});
    if (m_ % 64) {
      Word mask = (Word{1} << (m_ % 64)) - 1;
      for (std::size_t v = 0; v < n_; ++v) domains[v * words_ + words_ - 1] = mask;
    }
    std::vector<std::size_t> all(constraints_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (propagate(domains, all) && search_components(domains)) {
      HomWitness w(n_);
      for (std::size_t v = 0; v < n_; ++v) w[v] = first_value(domains, v);
      result.witness = std::move(w);
    }
    result.nodes = nodes_;
    return result;
  }

 private:
  Word* dom(std::vector<Word>& d, std::size_t v) { return d.data() + v * words_; }

  static bool test(const Word* bits, Vertex x) { return (bits[x / 64] >> (x % 64)) & 1; }

  std::size_t count(const std::vector<Word>& d, std::size_t v) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += std::popcount(d[v * words_ + w]);
    return c;
  }

  Vertex first_value(const std::vector<Word>& d, std::size_t v) const {
    for (std::size_t w = 0; w < words_; ++w) {
      if (auto x = d[v * words_ + w]) return static_cast<Vertex>(w * 64 + std::countr_zero(x));
    }
    return 0;
  }

  enum class Mode { Scan, Enumerate, Seek };

  /// Cheapest way to compute supports: scan the target relation, test every
  /// candidate tuple, or look for one support per value. Lookups cost about
  /// log |R| steps; seeking expects |all tuples| / |R| lookups per value.
  Mode revise_mode(const std::vector<Word>& d, const Constraint& c, std::size_t relation_size) const {
    const double r = static_cast<double>(relation_size);
    const double lookup = std::log2(r + 2);
    double product = 1, values = 0, space = 1;
    for (std::size_t i = 0; i < c.scope.size(); ++i) {
      if (c.first[i] != i) continue;
      auto k = static_cast<double>(count(d, c.scope[i]));
      product *= k;
      values += k;
      space *= static_cast<double>(m_);
    }
    double scan = r;
    double enumerate = product * lookup;
    double seek = r > 0 ? std::min(values * space / r, values * product) * lookup : scan + 1;
    if (scan <= enumerate && scan <= seek) return Mode::Scan;
    return enumerate <= seek ? Mode::Enumerate : Mode::Seek;
  }

  /// Visits candidate tuples of c, with position `fixed` (if any) held at
  /// `value`, until visit returns true.
  template <class Visit>
  void for_each_combination(const std::vector<Word>& d, const Constraint& c, std::size_t fixed, Vertex value,
                            Visit visit) const {
    const auto arity = c.scope.size();
    std::vector<std::vector<Vertex>> values(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      if (c.first[i] != i) continue;
      if (i == fixed) {
        values[i] = {value};
        continue;
      }
      for (std::size_t w = 0; w < words_; ++w) {
        for (Word bits = d[c.scope[i] * words_ + w]; bits; bits &= bits - 1) {
          values[i].push_back(static_cast<Vertex>(w * 64 + std::countr_zero(bits)));
        }
      }
      if (values[i].empty()) return;
    }
    std::vector<std::size_t> at(arity, 0);
    Tuple t(arity);
    while (true) {
      for (std::size_t i = 0; i < arity; ++i) t[i] = values[c.first[i]][at[c.first[i]]];
      if (visit(t)) return;
      bool advanced = false;
      for (std::size_t i = arity; i-- > 0 && !advanced;) {
        if (c.first[i] != i) continue;
        advanced = ++at[i] < values[i].size();
        if (!advanced) at[i] = 0;
      }
      if (!advanced) return;
    }
  }

  bool propagate(std::vector<Word>& d, const std::vector<std::size_t>& seed) {
    std::deque<std::size_t> queue(seed.begin(), seed.end());
    std::vector<char> queued(constraints_.size(), 0);
    for (auto c : seed) queued[c] = 1;
    std::vector<Word> support;
    while (!queue.empty()) {
      auto ci = queue.front();
      queue.pop_front();
      queued[ci] = 0;
      const auto& c = constraints_[ci];
      const auto arity = c.scope.size();
      support.assign(arity * words_, 0);
      auto mark = [&](const Tuple& t) {
        for (std::size_t i = 0; i < arity; ++i) support[i * words_ + t[i] / 64] |= Word{1} << (t[i] % 64);
      };
      const auto& target = *targets_[c.symbol];
      auto mode = revise_mode(d, c, target.size());
      if (mode == Mode::Enumerate) {
        for_each_combination(d, c, arity, 0, [&](const Tuple& t) {
          if (target.contains(t)) mark(t);
          return false;
        });
      } else if (mode == Mode::Seek) {
        // dense: one support per value, found by lookups
        for (std::size_t i = 0; i < arity; ++i) {
          if (c.first[i] != i) continue;
          for (std::size_t w = 0; w < words_; ++w) {
            Word open = dom(d, c.scope[i])[w] & ~support[i * words_ + w];
            for (; open; open &= open - 1) {
              auto x = static_cast<Vertex>(w * 64 + std::countr_zero(open));
              if (test(support.data() + i * words_, x)) continue;
              for_each_combination(d, c, i, x, [&](const Tuple& t) {
                if (!target.contains(t)) return false;
                mark(t);
                return true;
              });
            }
          }
        }
      } else {
        for (const auto& t : target) {
          bool ok = true;
          for (std::size_t i = 0; i < arity && ok; ++i) {
            ok = t[i] == t[c.first[i]] && test(dom(d, c.scope[i]), t[i]);
          }
          if (ok) mark(t);
        }
      }
      for (std::size_t i = 0; i < arity; ++i) {
        if (c.first[i] != i) continue;
        auto* bits = dom(d, c.scope[i]);
        bool changed = false, empty = true;
        for (std::size_t w = 0; w < words_; ++w) {
          Word nb = bits[w] & support[i * words_ + w];
          changed |= nb != bits[w];
          empty &= nb == 0;
          bits[w] = nb;
        }
        if (empty) {
          ++weight_[ci];
          return false;
        }
        if (!changed) continue;
        for (auto other : watch_[c.scope[i]]) {
          if (other != ci && !queued[other]) {
            queued[other] = 1;
            queue.push_back(other);
          }
        }
      }
    }
    return true;
  }

  // Constraints never cross components, so each one is searched on its own.
  bool search_components(std::vector<Word>& d) {
    std::vector<std::size_t> parent(n_);
    for (std::size_t v = 0; v < n_; ++v) parent[v] = v;
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const auto& c : constraints_) {
      for (auto v : c.scope) parent[find(v)] = find(c.scope[0]);
    }
    std::vector<std::vector<std::size_t>> groups(n_);
    for (std::size_t v = 0; v < n_; ++v) groups[find(v)].push_back(v);
    for (const auto& g : groups) {
      if (!g.empty() && !search(d, g)) return false;
    }
    return true;
  }

  bool search(std::vector<Word>& d, const std::vector<std::size_t>& vars) {
    // smallest candidate count per accumulated conflict weight
    std::size_t var = n_, best = 0;
    std::uint64_t best_weight = 0;
    for (auto v : vars) {
      auto c = count(d, v);
      if (c < 2) continue;
      std::uint64_t w = 0;
      for (auto ci : watch_[v]) w += weight_[ci];
      if (var == n_ || c * best_weight < best * w) {
        var = v;
        best = c;
        best_weight = w;
      }
    }
    if (var == n_) return true;
    std::vector<Word> saved = d;
    for (std::size_t w = 0; w < words_; ++w) {
      Word bits = saved[var * words_ + w];
      while (bits) {
        auto x = static_cast<Vertex>(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
        if (++nodes_ > budget_) {
          throw BudgetExhausted("homomorphism search exceeded " + std::to_string(budget_) +
                                " nodes");
        }
        auto* target = dom(d, var);
        std::fill(target, target + words_, Word{0});
        target[x / 64] = Word{1} << (x % 64);
        if (propagate(d, watch_[var]) && search(d, vars)) return true;
        d = saved;
      }
    }
    return false;
  }

  std::size_t n_, m_, words_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<const std::set<Tuple>*> targets_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::size_t>> watch_;
  std::vector<std::uint64_t> weight_;
};

void check_signatures(const Structure& a, const Structure& b) {
  if (!(a.signature() == b.signature())) {
    throw SignatureMismatch("homomorphism between structures over different signatures");
  }
}

}  // namespace

HomSearch search_hom(const Structure& from, const Structure& to, const HomOptions& options) {
  check_signatures(from, to);
  return Solver(from, to, options).run();
}

std::optional<HomWitness> find_hom(const Structure& from, const Structure& to,
                                   const HomOptions& options) {
  return search_hom(from, to, options).witness;
}

bool verify_hom(const Structure& from, const Structure& to, const HomWitness& map) {
  if (!(from.signature() == to.signature()) || map.size() != from.size()) return false;
  for (auto v : map) {
    if (v >= to.size()) return false;
  }
  for (std::size_t r = 0; r < from.signature().size(); ++r) {
    for (const auto& t : from.relation(r)) {
      Tuple image(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = map[t[i]];
      if (!to.has_tuple(r, image)) return false;
    }
  }
  return true;
}

bool hom_equivalent(const Structure& a, const Structure& b, const HomOptions& options) {
  return maps_to(a, b, options) && maps_to(b, a, options);
}

Structure core(const Structure& a, const HomOptions& options) {
  Structure current = a;
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (Vertex v = 0; v < current.size(); ++v) {
      std::vector<Vertex> rest;
      for (Vertex u = 0; u < current.size(); ++u) {
        if (u != v) rest.push_back(u);
      }
      auto smaller = induced_substructure(current, rest);
      auto h = find_hom(current, smaller, options);
      if (!h) continue;
      std::vector<Vertex> image;
      for (auto x : *h) image.push_back(rest[x]);
      std::sort(image.begin(), image.end());
      image.erase(std::unique(image.begin(), image.end()), image.end());
      current = induced_substructure(current, image);
      shrunk = true;
      break;
    }
  }
  return current;
}

}  // namespace gmsnp
