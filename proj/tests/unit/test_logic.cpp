#include <doctest.h>

#include <random>

#include "gmsnp/catalog.hpp"
#include "gmsnp/errors.hpp"
#include "gmsnp/logic.hpp"
#include "oracles.hpp"

using namespace gmsnp;

namespace {

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  for (const auto& d : ds) {
    if (d.code == code) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("parse examples") {
  auto s = parse_sentence(oracle::mono_triangle_text());
  CHECK(s.existentials.size() == 1);
  CHECK(s.existentials[0] == Existential{"M", 1, "vertex"});
  CHECK(s.clauses.size() == 2);
  CHECK(s.clauses[1].atoms.back().negated);
  CHECK(s.tau.size() == 1);

  CHECK_THROWS_AS(parse_sentence("exists M/1 on vertex forall x,y : !(~M(x))"), ParseError);

  auto loopless = parse_sentence("forall x : !(E(x,x))");
  CHECK(loopless.existentials.empty());
  CHECK(loopless.clauses.size() == 1);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_sentence("forall x :\n  !(E(x,y))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_sentence("forall x : !(~E(x,x))"), ParseError);
  CHECK_THROWS_AS(parse_sentence("forall x : !(E(x))  & !(E(x,x))"), ParseError);
  CHECK_THROWS_AS(parse_sentence("forall x : !(F(x,x))", catalog::graph_signature()), ParseError);
  CHECK_THROWS_AS(parse_sentence("forall x, x : !(E(x,x))"), ParseError);
  CHECK_THROWS_AS(parse_sentence("forall x : E(x,x)"), ParseError);
  CHECK_THROWS_AS(parse_sentence("exists M/1 on vertex, M/1 on vertex forall x : !(E(x,x))"), ParseError);
}

TEST_CASE("validate_fragment examples") {
  CHECK(validate_fragment(parse_sentence(oracle::mono_triangle_text())).empty());
  CHECK(has_code(validate_fragment(parse_sentence("forall x,y,z,w : !(E(x,y) & E(z,w))")), "disconnected clause"));
  CHECK(has_code(validate_fragment(parse_sentence("exists N/1 on E forall x,y : !(E(x,y) & N(x))")),
                 "annotation/arity mismatch"));
  CHECK(has_code(validate_fragment(parse_sentence("exists N/2 on E forall x,y,z : !(E(x,y) & E(y,z) & N(x,z))")),
                 "uncarried existential atom"));
  Sentence bare = parse_sentence("forall x : !(E(x,x))");
  bare.existentials.push_back({"M", 1, ""});
  CHECK(has_code(validate_fragment(bare), "unannotated"));
}

TEST_CASE("compile examples") {
  auto mono = oracle::mono_triangle();
  CHECK(mono.palette.vertex_colors() == std::vector<std::string>{"{}", "{M}"});
  REQUIRE(mono.patterns.size() == 2);
  for (const auto& p : mono.patterns) {
    CHECK(p.size() == 3);
    // all three vertices share one colour
    std::size_t m = 0;
    for (Vertex v = 0; v < 3; ++v) m += p.has_tuple(1, {v});
    CHECK((m == 0 || m == 3));
  }
  auto k4 = catalog::complete_graph(4);
  auto k5 = catalog::complete_graph(5);
  CHECK(fpp_decide(mono, k4).has_value() == oracle::brute_fpp(mono, k4));
  CHECK(fpp_decide(mono, k5).has_value() == oracle::brute_fpp(mono, k5));
  CHECK_FALSE(fpp_decide(mono, k5));

  auto arcless = compile_to_patterns(parse_sentence("forall x,y : !(E(x,y))"));
  CHECK(arcless.patterns.size() == 1);
  CHECK(arcless.palette.vertex_colors().size() == 1);
  CHECK(fpp_decide(arcless, Structure(catalog::digraph_signature(), 3)));
  CHECK_FALSE(fpp_decide(arcless, catalog::directed_path(2)));

  auto one = compile_to_patterns(parse_sentence("exists M/1 on vertex forall x,y : !(E(x,y) & M(x) & M(y))"));
  auto free_y = compile_to_patterns(parse_sentence("exists M/1 on vertex forall x,y : !(E(x,y) & M(x))"));
  CHECK(one.patterns.size() == 1);
  CHECK(free_y.patterns.size() == 2);

  CHECK_THROWS_AS(compile_to_patterns(parse_sentence("forall x,y,z,w : !(E(x,y) & E(z,w))")), DataError);
  CHECK_THROWS_AS(compile_to_patterns(parse_sentence("exists M/1 on vertex forall x,y : !(E(x,y) & M(x))"), 1),
                  SizeGuardExceeded);
}

TEST_CASE("property: print and parse round-trip") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    auto s = oracle::random_sentence(rng);
    CHECK(parse_sentence(print_sentence(s), s.tau) == s);
  }
  auto mono = parse_sentence(oracle::mono_triangle_text());
  CHECK(parse_sentence(print_sentence(mono)) == mono);
}

TEST_CASE("property: compiled patterns are connected proper colourings") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    auto f = compile_to_patterns(oracle::random_sentence(rng));
    CHECK_NOTHROW(f.validate());
    for (const auto& p : f.patterns) {
      CHECK(is_connected(base_of(f.palette, p)));
      CHECK(is_proper_coloring(f.palette, p));
    }
  }
}

TEST_CASE("property: model checking agrees with FPP membership on random structures") {
  std::mt19937_64 rng(31);
  auto sig = catalog::digraph_signature();
  for (int i = 0; i < 60; ++i) {
    auto s = oracle::random_sentence(rng);
    auto f = compile_to_patterns(s);
    for (int j = 0; j < 15; ++j) {
      auto a = oracle::random_structure(sig, 1 + rng() % 5, 0.2, rng);
      CHECK(oracle::models(s, a) == fpp_decide(f, a).has_value());
    }
  }
}

TEST_CASE("symmetric τ-symbols use orbit interpretations") {
  auto s = parse_sentence("exists N/2 on E forall x,y,z : !(E(x,y) & E(y,z) & N(x,y) & N(y,z)) & "
                          "!(E(x,y) & E(y,z) & ~N(x,y) & ~N(y,z))",
                          catalog::graph_signature());
  auto f = compile_to_patterns(s);
  for (std::size_t n : {3, 4, 5, 6}) {
    auto c = catalog::cycle_graph(n);
    CHECK(oracle::models(s, c) == fpp_decide(f, c).has_value());
  }
  // x = z makes both clauses apply to a single edge
  CHECK_FALSE(fpp_decide(f, catalog::complete_graph(2)));
  CHECK(fpp_decide(f, Structure(catalog::graph_signature(), 2)));
}
