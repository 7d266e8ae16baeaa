#include <doctest.h>

#include <random>

#include "gmsnp/catalog.hpp"
#include "gmsnp/complexity.hpp"
#include "gmsnp/errors.hpp"
#include "gmsnp/pcsp.hpp"
#include "oracles.hpp"

using namespace gmsnp;

namespace {

SandwichSpec sandwich(const Structure& a, const Structure& b, const PatternSet& f) {
  return {a, b, f, minimal_finite_factor(f)};
}

}  // namespace

TEST_CASE("sandwich_check examples") {
  auto f3 = csp_patterns(catalog::complete_graph(3));
  auto k3k3 = sandwich_check(sandwich(catalog::complete_graph(3), catalog::complete_graph(3), f3));
  CHECK(k3k3.a_in_s);
  CHECK(k3k3.s_to_b);
  auto k3k2 = sandwich_check(sandwich(catalog::complete_graph(3), catalog::complete_graph(2), f3));
  CHECK(k3k2.a_in_s);
  CHECK_FALSE(k3k2.s_to_b);
  CHECK_FALSE(k3k2.valid());

  auto nae = csp_patterns(catalog::not_all_equal());
  auto spec = sandwich(catalog::one_in_three(), catalog::not_all_equal(), nae);
  auto check = sandwich_check(spec);
  CHECK(check.valid());
  CHECK(classify(spec.report.factor).tag == Verdict::Tag::NPComplete);

  CHECK_THROWS_AS(sandwich_check(sandwich(catalog::transitive_tournament(3), catalog::complete_graph(3), f3)),
                  SignatureMismatch);
}

TEST_CASE("pcsp_solve examples") {
  auto spec = sandwich(catalog::complete_graph(3), catalog::complete_graph(3), csp_patterns(catalog::complete_graph(3)));
  LiftParams p;
  p.seed = 5;
  CHECK(pcsp_solve(spec, catalog::cycle_graph(5), p));
  CHECK_FALSE(pcsp_solve(spec, catalog::complete_graph(4), p));
  CHECK(pcsp_solve(spec, Structure(catalog::graph_signature(), 1), p));
}

TEST_CASE("property: promise soundness and reproducibility on samples") {
  std::mt19937_64 rng(73);
  auto spec = sandwich(catalog::complete_graph(3), catalog::complete_graph(3), csp_patterns(catalog::complete_graph(3)));
  int yes = 0, no = 0;
  while (yes < 8 || no < 8) {
    auto x = oracle::random_structure(catalog::graph_signature(), 4 + rng() % 3, 0.45, rng);
    LiftParams p;
    p.seed = rng();
    bool to_a = oracle::brute_hom(x, spec.a);
    if (to_a && yes < 8) {
      ++yes;
      CHECK(pcsp_solve(spec, x, p));
      CHECK(pcsp_solve(spec, x, p));
    } else if (!oracle::brute_hom(x, spec.b) && no < 8) {
      ++no;
      CHECK_FALSE(pcsp_solve(spec, x, p));
    }
  }
}
