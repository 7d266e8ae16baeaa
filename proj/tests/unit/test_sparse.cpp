#include <doctest.h>

#include <random>

#include "gmsnp/catalog.hpp"
#include "gmsnp/census.hpp"
#include "gmsnp/errors.hpp"
#include "gmsnp/io.hpp"
#include "gmsnp/sparse.hpp"
#include "oracles.hpp"

using namespace gmsnp;

namespace {

void check_lift(const Structure& a, const LiftParams& p, const Lift& l) {
  CHECK(oracle::girth_exceeds(l.structure, p.l));
  CHECK(oracle::is_hom(l.structure, a, l.projection));
  for (const auto& c : p.protect) CHECK(oracle::brute_hom(a, c) == maps_to(l.structure, c));
}

}  // namespace

TEST_CASE("girth_lift examples") {
  SUBCASE("K3 above girth 4") {
    LiftParams p;
    p.l = 4;
    p.seed = 1;
    p.protect = {catalog::complete_graph(2), catalog::complete_graph(3)};
    auto a = catalog::complete_graph(3);
    auto l = girth_lift(a, p);
    check_lift(a, p, l);
    CHECK_FALSE(maps_to(l.structure, catalog::complete_graph(2)));
    CHECK(maps_to(l.structure, catalog::complete_graph(3)));
    CHECK(l.attempts >= 1);
  }
  SUBCASE("acyclic input is returned unchanged") {
    LiftParams p;
    p.l = 7;
    auto a = catalog::directed_path(5);
    auto l = girth_lift(a, p);
    CHECK(l.structure == a);
    CHECK(l.attempts == 0);
  }
  SUBCASE("loop above girth 5") {
    auto sig = catalog::digraph_signature();
    LiftParams p;
    p.l = 5;
    p.seed = 9;
    p.protect = {catalog::loop(sig), catalog::transitive_tournament(2)};
    auto a = catalog::loop(sig);
    auto l = girth_lift(a, p);
    check_lift(a, p, l);
    CHECK(maps_to(l.structure, catalog::loop(sig)));
    CHECK_FALSE(maps_to(l.structure, catalog::transitive_tournament(2)));
  }
}

TEST_CASE("looped inputs need many copies to keep a non-homomorphism to K3") {
  LiftParams p;
  p.l = 4;
  p.seed = 1098;
  p.density = 2.0;
  p.max_retries = 7;
  p.protect = {catalog::complete_graph(3)};
  Structure a(catalog::graph_signature(), 4);
  a.add_tuple(0, {0, 0});
  a.add_tuple(0, {0, 1});
  a.add_tuple(0, {0, 2});
  a.add_tuple(0, {1, 3});
  a.add_tuple(0, {2, 3});
  CHECK_THROWS_AS(girth_lift(a, p), RetriesExhausted);
}

TEST_CASE("girth_lift gives up with RetriesExhausted") {
  LiftParams p;
  p.l = 6;
  p.blowup = 1;
  p.max_retries = 1;
  p.protect = {catalog::complete_graph(3)};
  CHECK_THROWS_AS(girth_lift(catalog::complete_graph(4), p), RetriesExhausted);
}

TEST_CASE("property: lifts are reproducible and verified") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 12; ++i) {
    auto a = oracle::random_graph(4 + rng() % 3, 0.6, rng);
    LiftParams p;
    p.l = 2 + static_cast<int>(rng() % 3);
    p.seed = rng();
    p.density = 2.0;
    p.max_retries = 8;
    p.protect = {catalog::complete_graph(2), catalog::complete_graph(3)};
    auto l1 = girth_lift(a, p);
    auto l2 = girth_lift(a, p);
    check_lift(a, p, l1);
    CHECK(io::to_json(l1.structure).dump() == io::to_json(l2.structure).dump());
  }
}

TEST_CASE("csp_to_fpp_reduce examples") {
  auto f = csp_patterns(catalog::complete_graph(3));
  auto r = minimal_finite_factor(f);
  LiftParams p;
  p.seed = 3;
  auto k4 = csp_to_fpp_reduce(catalog::complete_graph(4), r, p);
  CHECK_FALSE(fpp_decide(f, k4.structure));
  auto c5 = csp_to_fpp_reduce(catalog::cycle_graph(5), r, p);
  CHECK(fpp_decide(f, c5.structure));
  auto c7 = catalog::cycle_graph(7);
  auto same = csp_to_fpp_reduce(c7, r, p);
  CHECK(same.structure == c7);
  CHECK(fpp_decide(f, same.structure));
}

TEST_CASE("equivalence_probe examples") {
  auto mono = oracle::mono_triangle();
  auto rm = minimal_finite_factor(mono);
  ProbeOptions o;
  o.bound = 5;
  o.max_tuples = 6;
  auto pm = equivalence_probe(mono, rm, o);
  CHECK(pm.ok());
  CHECK(pm.agreements == pm.checked());
  CHECK(pm.accepted == pm.checked());

  auto k3 = csp_patterns(catalog::complete_graph(3));
  auto pk = equivalence_probe(k3, minimal_finite_factor(k3), o);
  CHECK(pk.ok());
  CHECK(pk.census_checked > 0);

  ProbeOptions none;
  none.bound = 0;
  none.samples = 0;
  auto vacuous = equivalence_probe(mono, rm, none);
  CHECK(vacuous.ok());
  CHECK(vacuous.checked() <= 1);
}

TEST_CASE("property: lifts preserve answers to protected templates") {
  std::mt19937_64 rng(67);
  std::vector<Structure> templates{catalog::complete_graph(2), catalog::complete_graph(3), catalog::cycle_graph(5)};
  for (const auto& c : templates) {
    for (int i = 0; i < 6; ++i) {
      auto x = oracle::random_graph(4 + rng() % 2, 0.6, rng);
      LiftParams p;
      p.l = 3;
      p.seed = rng();
      p.density = 2.0;
      p.max_retries = 8;
      p.protect = {c};
      auto l = girth_lift(x, p);
      CHECK(maps_to(x, c) == maps_to(l.structure, c));
    }
  }
}
