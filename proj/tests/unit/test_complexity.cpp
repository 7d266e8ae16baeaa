#include <doctest.h>

#include <random>

#include "gmsnp/catalog.hpp"
#include "gmsnp/census.hpp"
#include "gmsnp/complexity.hpp"
#include "gmsnp/errors.hpp"
#include "oracles.hpp"

using namespace gmsnp;

namespace {

// Independent check of the Siggers identity and of polymorphism on every 4-tuple of tuples.
bool table_ok(const Structure& c, const OperationTable& t) {
  const std::size_t n = c.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t e = 0; e < n; ++e)
        if (t(a, r, e, a) != t(r, a, r, e)) return false;
  for (std::size_t s = 0; s < c.signature().size(); ++s) {
    std::vector<Tuple> rel(c.relation(s).begin(), c.relation(s).end());
    for (const auto& t1 : rel)
      for (const auto& t2 : rel)
        for (const auto& t3 : rel)
          for (const auto& t4 : rel) {
            Tuple img;
            for (std::size_t k = 0; k < t1.size(); ++k) img.push_back(t(t1[k], t2[k], t3[k], t4[k]));
            if (!c.relation(s).contains(img)) return false;
          }
  }
  return true;
}

bool has_loop(const Structure& g) {
  for (const auto& t : g.relation(0)) {
    if (t[0] == t[1]) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("siggers_search examples") {
  auto loop = catalog::loop(catalog::graph_signature());
  auto l = siggers_search(loop);
  REQUIRE(l.table);
  CHECK(table_ok(loop, *l.table));

  auto t2 = catalog::transitive_tournament(2);
  auto s = siggers_search(t2);
  REQUIRE(s.table);
  CHECK(table_ok(t2, *s.table));
  OperationTable min{2, std::vector<Vertex>(16)};
  for (std::size_t i = 0; i < 16; ++i) {
    std::size_t a = i >> 3 & 1, b = i >> 2 & 1, c = i >> 1 & 1, d = i & 1;
    min.table[i] = static_cast<Vertex>(std::min({a, b, c, d}));
  }
  CHECK(table_ok(t2, min));
  CHECK(siggers_violation(t2, min).empty());

  CHECK_FALSE(siggers_search(catalog::complete_graph(3)).table);
  CHECK_THROWS_AS(siggers_search(catalog::complete_graph(5)), DataError);
}

TEST_CASE("siggers_violation finds bad tables") {
  auto k2 = catalog::complete_graph(2);
  OperationTable first{2, std::vector<Vertex>(16)};
  for (std::size_t i = 0; i < 16; ++i) first.table[i] = static_cast<Vertex>(i >> 3 & 1);
  CHECK_FALSE(siggers_violation(k2, first).empty());
}

TEST_CASE("classify examples") {
  auto k3 = classify(catalog::complete_graph(3));
  CHECK(k3.tag == Verdict::Tag::NPComplete);
  for (const auto& c : {catalog::transitive_tournament(3), catalog::complete_graph(2)}) {
    auto v = classify(c);
    REQUIRE(v.tag == Verdict::Tag::P);
    REQUIRE(v.table);
    REQUIRE(v.core);
    CHECK(table_ok(*v.core, *v.table));
  }
  CHECK(classify(catalog::loop(catalog::graph_signature())).tag == Verdict::Tag::P);
  CHECK(classify(catalog::not_all_equal()).tag == Verdict::Tag::NPComplete);
  CHECK(classify(catalog::one_in_three()).tag == Verdict::Tag::NPComplete);
  CHECK(classify(catalog::complete_graph(5)).tag == Verdict::Tag::Unknown);
  CHECK(classify(catalog::complete_graph(4), {4, {5}}).tag == Verdict::Tag::Unknown);
}

TEST_CASE("property: classification matches the graph rule and is core invariant") {
  for_each_structure(catalog::graph_signature(), {4, 10, std::nullopt}, [&](const Structure& g) {
    auto v = classify(g);
    auto expected = (has_loop(g) || is_bipartite(g)) ? Verdict::Tag::P : Verdict::Tag::NPComplete;
    REQUIRE(v.tag == expected);
    if (v.table) REQUIRE(table_ok(*v.core, *v.table));
  });
  std::mt19937_64 rng(71);
  for (int i = 0; i < 60; ++i) {
    auto d = oracle::random_structure(catalog::digraph_signature(), 2 + rng() % 4, 0.35, rng);
    auto c = core(d);
    if (c.size() > kDefaultSiggersDomain) continue;
    CHECK(classify(d).tag == classify(c).tag);
  }
}

TEST_CASE("is_bipartite and cycle_over") {
  CHECK(is_bipartite(catalog::cycle_graph(4)));
  CHECK_FALSE(is_bipartite(catalog::cycle_graph(5)));
  CHECK_FALSE(is_bipartite(catalog::loop(catalog::graph_signature())));
  CHECK(is_bipartite(Structure(catalog::graph_signature(), 3)));
  auto c7 = cycle_over(catalog::graph_signature(), 7);
  CHECK(c7.size() == 7);
  CHECK(girth(c7) == Girth::finite(7));
}

TEST_CASE("graph_factor_report examples") {
  auto mono = minimal_finite_factor(oracle::mono_triangle());
  auto vm = graph_factor_report(mono);
  CHECK(vm.tag == Verdict::Tag::P);

  auto c5f = csp_patterns(catalog::cycle_graph(5));
  auto c5 = minimal_finite_factor(c5f);
  CHECK(hom_equivalent(c5.factor, catalog::cycle_graph(5)));
  auto v5 = graph_factor_report(c5);
  REQUIRE(v5.tag == Verdict::Tag::NPComplete);
  REQUIRE(v5.odd_cycle);
  auto k = *v5.odd_cycle;
  CHECK(k % 2 == 1);
  CHECK(k > 2 * c5.threshold);
  CHECK(fpp_decide(c5f, cycle_over(catalog::graph_signature(), k)));

  auto k2 = minimal_finite_factor(csp_patterns(catalog::complete_graph(2)));
  CHECK(graph_factor_report(k2).tag == Verdict::Tag::P);

  auto t3 = minimal_finite_factor(csp_patterns(catalog::transitive_tournament(3)));
  CHECK_THROWS_AS(graph_factor_report(t3), SignatureMismatch);
}

TEST_CASE("property: odd-cycle witnesses on the K3 encoding") {
  auto f = csp_patterns(catalog::complete_graph(3));
  auto r = minimal_finite_factor(f);
  auto v = graph_factor_report(r);
  REQUIRE(v.tag == Verdict::Tag::NPComplete);
  REQUIRE(v.odd_cycle);
  CHECK(*v.odd_cycle % 2 == 1);
  CHECK(*v.odd_cycle > 2 * r.threshold);
  CHECK(oracle::brute_fpp(f, cycle_over(catalog::graph_signature(), *v.odd_cycle)));
}
