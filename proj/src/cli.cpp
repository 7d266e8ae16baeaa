#include "gmsnp/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <functional>
#include <sstream>

#include "gmsnp/catalog.hpp"
#include "gmsnp/census.hpp"
#include "gmsnp/complexity.hpp"
#include "gmsnp/duality.hpp"
#include "gmsnp/errors.hpp"
#include "gmsnp/io.hpp"
#include "gmsnp/logic.hpp"
#include "gmsnp/pcsp.hpp"
#include "gmsnp/sparse.hpp"
#include "gmsnp/trees.hpp"

namespace gmsnp {

namespace {

using io::json;

const char* kFormats = R"txt(Sentence grammar:
  sentence := ["exists" decl {"," decl}] "forall" IDENT {"," IDENT} ":" clause {"&" clause}
  decl     := IDENT "/" INT "on" ("vertex" | IDENT)
  clause   := "!(" atom {"&" atom} ")"
  atom     := ["~"] IDENT "(" IDENT {"," IDENT} ")"
  Whitespace-insensitive; "~" only on existential symbols.

Structure file:
  {"signature":[{"name":"E","arity":2,"symmetric":true}], "vertices":["a","b"],
   "relations":{"E":[["a","b"]]}}
  Symmetric relations may list one orientation. Unknown fields are rejected.

Pattern file:
  {"signature":[...], "palette":{"vertex":["r","b"],"E":["u"]},
   "patterns":[{"signature":[...], "vertices":[...], "relations":{...},
                "vertex_colors":{"x":"r"}, "tuple_colors":{"E":[[["x","y"],"u"]]}}]}
  Colour maps may be omitted for a scope with a single colour.

Exit codes: 0 yes/success, 1 no, 2 usage or data error, 3 budget/unknown.)txt";

struct Config {
  std::uint64_t node_budget = kDefaultNodeBudget;
  std::size_t domain_cap = kDefaultDomainCap;
  std::size_t pattern_cap = kDefaultPatternCap;
  std::uint64_t seed = 1;

  HomOptions hom() const { return {node_budget}; }
  FppOptions fpp() const { return {node_budget, hom()}; }
};

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Structure load_structure(const std::string& path) { return io::structure_from_json(io::read_json_file(path)); }
PatternSet load_patterns(const std::string& path) { return io::pattern_set_from_json(io::read_json_file(path)); }

void maybe_write(const std::string& path, const json& j) {
  if (!path.empty()) io::write_json_file(path, j);
}

std::string describe(const Structure& s) {
  return std::to_string(s.size()) + " vertices, " + std::to_string(occurrences(s).size()) + " tuples";
}

UniverseKind universe_kind(const std::string& name) {
  if (name == "substructures") return UniverseKind::Substructures;
  if (name == "whole-branches") return UniverseKind::WholeBranches;
  throw DataError("unknown universe " + name);
}

int verdict_exit(const Verdict& v) { return v.tag == Verdict::Tag::Unknown ? kExitUnknown : kExitYes; }

/// Census duality check used by selftest.
bool duality_holds(const Dual& dual, const std::vector<Structure>& trees, const CensusOptions& c) {
  bool ok = true;
  for_each_structure(dual.structure.signature(), c, [&](const Structure& a) {
    bool free = std::none_of(trees.begin(), trees.end(), [&](const Structure& t) { return maps_to(t, a); });
    ok = ok && free == maps_to(a, dual.structure);
  });
  return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Forbidden-pattern compiler and solver: sentences and pattern sets to finite factors, "
               "complexity verdicts and girth-based reductions."};
  app.name("gmsnp");
  app.footer(kFormats);
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option defaults");
  Config cfg;
  app.add_option("--budget", cfg.node_budget, "Search node budget")->check(CLI::PositiveNumber);
  app.add_option("--domain-cap", cfg.domain_cap, "Dual domain size cap")->check(CLI::PositiveNumber);
  app.add_option("--pattern-cap", cfg.pattern_cap, "Compiled pattern count cap")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Default seed");

  std::function<int()> action;
  std::string out_path;

  // compile
  auto* compile = app.add_subcommand("compile", "Compile a sentence to a pattern file");
  std::string sentence_path, signature_path, symmetric;
  compile->add_option("--sentence", sentence_path, "Sentence file")->required();
  compile->add_option("--signature", signature_path, "Structure or signature JSON fixing τ");
  compile->add_option("--symmetric", symmetric, "Comma-separated τ-symbols to treat as symmetric");
  compile->add_option("--out", out_path, "Pattern file to write");
  compile->callback([&] {
    action = [&] {
      auto text = io::read_text_file(sentence_path);
      std::optional<Signature> tau;
      if (!signature_path.empty()) {
        auto j = io::read_json_file(signature_path);
        tau = io::signature_from_json(j.is_object() ? j.at("signature") : j);
      }
      auto s = parse_sentence(text, tau);
      if (!symmetric.empty()) {
        Signature sig;
        auto names = split(symmetric);
        for (const auto& name : names) s.tau.index_of(name);
        for (auto sym : s.tau.symbols()) {
          if (std::find(names.begin(), names.end(), sym.name) != names.end()) sym.symmetric = true;
          sig.add(sym);
        }
        s = parse_sentence(text, sig);
      }
      if (auto diags = validate_fragment(s); !diags.empty()) {
        for (const auto& d : diags) err << d.code << ": " << d.message << '\n';
        return static_cast<int>(kExitError);
      }
      auto f = compile_to_patterns(s, cfg.pattern_cap);
      out << "compiled " << f.patterns.size() << " patterns, " << f.palette.vertex_colors().size()
          << " vertex colours, threshold " << f.max_pattern_size() << '\n';
      maybe_write(out_path, io::to_json(f));
      return static_cast<int>(kExitYes);
    };
  });

  // factor
  auto* factor = app.add_subcommand("factor", "Minimal finite factor of a pattern set");
  std::string patterns_path, universe = "substructures";
  bool core_flag = false, strict_universe = false;
  factor->add_option("--patterns", patterns_path, "Pattern file")->required();
  factor->add_flag("--core", core_flag, "Reduce the factor to its core");
  factor->add_option("--universe", universe, "substructures | whole-branches");
  factor->add_flag("--strict-universe", strict_universe, "Do not fall back to whole branches at the domain cap");
  factor->add_option("--out", out_path, "Report file to write");
  factor->callback([&] {
    action = [&] {
      FactorOptions o;
      o.core = core_flag;
      o.strict_universe = strict_universe;
      o.dual.universe = universe_kind(universe);
      o.dual.domain_cap = cfg.domain_cap;
      o.hom = cfg.hom();
      auto r = minimal_finite_factor(load_patterns(patterns_path), o);
      out << "trees " << r.trees.size() << ", universe " << r.universe_size << ", dual " << r.dual.size()
          << " elements, factor " << describe(r.factor) << ", threshold " << r.threshold << '\n';
      maybe_write(out_path, io::to_json(r));
      return static_cast<int>(kExitYes);
    };
  });

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "P / NP-complete verdict for a finite template");
  std::string structure_path;
  std::size_t max_domain = kDefaultSiggersDomain;
  classify_cmd->add_option("--structure", structure_path, "Template structure")->required();
  classify_cmd->add_option("--max-domain", max_domain, "Largest core searched for a Siggers operation");
  classify_cmd->add_option("--out", out_path, "Verdict file to write");
  classify_cmd->callback([&] {
    action = [&] {
      auto v = classify(load_structure(structure_path), {max_domain, cfg.hom()});
      out << to_string(v.tag) << ": " << v.note << '\n';
      maybe_write(out_path, io::to_json(v));
      return verdict_exit(v);
    };
  });

  // graph-verdict
  auto* graph_verdict = app.add_subcommand("graph-verdict", "Graph dichotomy verdict for a factor report");
  std::string report_path;
  graph_verdict->add_option("--report", report_path, "Factor report")->required();
  graph_verdict->add_option("--out", out_path, "Verdict file to write");
  graph_verdict->callback([&] {
    action = [&] {
      auto r = io::report_from_json(io::read_json_file(report_path));
      auto v = graph_factor_report(r, cfg.fpp());
      out << to_string(v.tag) << ": " << v.note;
      if (v.odd_cycle) out << " (odd cycle C" << *v.odd_cycle << ")";
      out << '\n';
      maybe_write(out_path, io::to_json(v));
      return verdict_exit(v);
    };
  });

  // solve-fpp
  auto* solve = app.add_subcommand("solve-fpp", "Decide membership in FPP(patterns)");
  std::string instance_path;
  solve->add_option("--patterns", patterns_path, "Pattern file")->required();
  solve->add_option("--instance", instance_path, "Instance structure")->required();
  solve->add_option("--out", out_path, "Colouring file to write (σ-structure)");
  solve->callback([&] {
    action = [&] {
      auto f = load_patterns(patterns_path);
      auto coloring = fpp_decide(f, load_structure(instance_path), cfg.fpp());
      if (!coloring) {
        out << "no: every colouring contains a pattern\n";
        return static_cast<int>(kExitNo);
      }
      out << "yes: pattern-free colouring found\n";
      maybe_write(out_path, io::to_json(*coloring));
      return static_cast<int>(kExitYes);
    };
  });

  // hom
  auto* hom = app.add_subcommand("hom", "Find a homomorphism");
  std::string from_path, to_path;
  hom->add_option("--from", from_path, "Source structure")->required();
  hom->add_option("--to", to_path, "Target structure")->required();
  hom->add_option("--out", out_path, "Witness file to write");
  hom->callback([&] {
    action = [&] {
      auto a = load_structure(from_path);
      auto b = load_structure(to_path);
      auto w = find_hom(a, b, cfg.hom());
      if (!w) {
        out << "no homomorphism\n";
        return static_cast<int>(kExitNo);
      }
      out << "homomorphism found\n";
      maybe_write(out_path, io::witness_to_json(a, b, *w));
      return static_cast<int>(kExitYes);
    };
  });

  // dual
  auto* dual_cmd = app.add_subcommand("dual", "Finite dual of a tree set");
  std::string trees_list;
  dual_cmd->add_option("--patterns", patterns_path, "Use the tree images of these patterns");
  dual_cmd->add_option("--trees", trees_list, "Comma-separated tree structure files");
  dual_cmd->add_option("--universe", universe, "substructures | whole-branches");
  dual_cmd->add_option("--out", out_path, "Dual file to write");
  dual_cmd->callback([&] {
    action = [&] {
      if (patterns_path.empty() == trees_list.empty()) throw DataError("dual: give exactly one of --patterns and --trees");
      std::vector<Structure> trees;
      Signature sigma;
      if (!patterns_path.empty()) {
        auto f = load_patterns(patterns_path);
        trees = tree_images(f);
        sigma = f.palette.sigma();
      } else {
        for (const auto& p : split(trees_list)) trees.push_back(load_structure(p));
        sigma = trees.front().signature();
      }
      DualOptions o;
      o.universe = universe_kind(universe);
      o.domain_cap = cfg.domain_cap;
      auto d = dual_of_trees(sigma, trees, o);
      out << "universe " << d.universe.size() << ", dual " << describe(d.structure) << '\n';
      json members = json::array();
      for (const auto& m : d.members) {
        json codes = json::array();
        for (auto i : m) codes.push_back(d.universe[i].code);
        members.push_back(codes);
      }
      maybe_write(out_path, {{"dual", io::to_json(d.structure)}, {"members", members}});
      return static_cast<int>(kExitYes);
    };
  });

  // lift
  auto* lift_cmd = app.add_subcommand("lift", "High-girth cover preserving homomorphisms to protected structures");
  LiftParams lift_params;
  std::string protect_list;
  std::optional<std::uint64_t> lift_seed;
  lift_cmd->add_option("--instance", instance_path, "Input structure")->required();
  lift_cmd->add_option("--girth", lift_params.l, "Girth bound l (output girth > l)")->required()->check(CLI::PositiveNumber);
  lift_cmd->add_option("--protect", protect_list, "Comma-separated protected structure files");
  lift_cmd->add_option("--seed", lift_seed, "Seed");
  lift_cmd->add_option("--blowup", lift_params.blowup, "Initial copies per vertex")->check(CLI::PositiveNumber);
  lift_cmd->add_option("--retries", lift_params.max_retries, "Attempts")->check(CLI::PositiveNumber);
  lift_cmd->add_option("--density", lift_params.density, "Random copies per tuple, relative")->check(CLI::PositiveNumber);
  lift_cmd->add_option("--out", out_path, "Lifted structure file to write");
  lift_cmd->callback([&] {
    action = [&] {
      auto a = load_structure(instance_path);
      for (const auto& p : split(protect_list)) lift_params.protect.push_back(load_structure(p));
      lift_params.seed = lift_seed.value_or(cfg.seed);
      lift_params.hom = cfg.hom();
      auto l = girth_lift(a, lift_params);
      out << "lift: " << describe(l.structure) << ", girth " << girth(l.structure).to_string() << ", attempts "
          << l.attempts << '\n';
      maybe_write(out_path, io::to_json(l.structure));
      return static_cast<int>(kExitYes);
    };
  });

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Reduce CSP(factor) to FPP(patterns) by a girth lift");
  std::optional<std::uint64_t> reduce_seed;
  reduce->add_option("--instance", instance_path, "Instance structure")->required();
  reduce->add_option("--report", report_path, "Factor report")->required();
  reduce->add_option("--seed", reduce_seed, "Seed");
  reduce->add_option("--out", out_path, "Reduced instance file to write");
  reduce->callback([&] {
    action = [&] {
      auto r = io::report_from_json(io::read_json_file(report_path));
      LiftParams p;
      p.seed = reduce_seed.value_or(cfg.seed);
      p.hom = cfg.hom();
      auto l = csp_to_fpp_reduce(load_structure(instance_path), r, p);
      out << "reduced instance: " << describe(l.structure) << ", girth " << girth(l.structure).to_string() << '\n';
      maybe_write(out_path, io::to_json(l.structure));
      return static_cast<int>(kExitYes);
    };
  });

  // pcsp
  auto* pcsp = app.add_subcommand("pcsp", "Solve PCSP(A, B) through a pattern sandwich");
  std::string a_path, b_path;
  std::optional<std::uint64_t> pcsp_seed;
  pcsp->add_option("--a", a_path, "Template A")->required();
  pcsp->add_option("--b", b_path, "Template B")->required();
  pcsp->add_option("--patterns", patterns_path, "Sandwich pattern file")->required();
  pcsp->add_option("--report", report_path, "Factor report of the patterns (computed when absent)");
  pcsp->add_option("--instance", instance_path, "Instance structure")->required();
  pcsp->add_option("--seed", pcsp_seed, "Seed");
  pcsp->callback([&] {
    action = [&] {
      SandwichSpec spec;
      spec.a = load_structure(a_path);
      spec.b = load_structure(b_path);
      spec.patterns = load_patterns(patterns_path);
      if (!report_path.empty()) {
        spec.report = io::report_from_json(io::read_json_file(report_path));
      } else {
        FactorOptions o;
        o.dual.domain_cap = cfg.domain_cap;
        o.hom = cfg.hom();
        spec.report = minimal_finite_factor(spec.patterns, o);
      }
      auto check = sandwich_check(spec, cfg.fpp());
      if (!check.valid()) {
        err << "not a sandwich: A -> S " << (check.a_in_s ? "holds" : "fails") << ", S -> B "
            << (check.s_to_b ? "holds" : "fails") << '\n';
        return static_cast<int>(kExitError);
      }
      LiftParams p;
      p.seed = pcsp_seed.value_or(cfg.seed);
      p.hom = cfg.hom();
      bool yes = pcsp_solve(spec, load_structure(instance_path), p, cfg.fpp());
      out << (yes ? "yes" : "no") << '\n';
      return static_cast<int>(yes ? kExitYes : kExitNo);
    };
  });

  // probe-equivalence
  auto* probe = app.add_subcommand("probe-equivalence", "Compare FPP membership with the factor on high-girth instances");
  ProbeOptions probe_options;
  std::optional<std::uint64_t> probe_seed;
  probe->add_option("--patterns", patterns_path, "Pattern file")->required();
  probe->add_option("--report", report_path, "Factor report (computed when absent)");
  probe->add_option("--bound", probe_options.bound, "Census vertex bound");
  probe->add_option("--max-tuples", probe_options.max_tuples, "Census tuple bound");
  probe->add_option("--samples", probe_options.samples, "Random high-girth samples");
  probe->add_option("--sample-vertices", probe_options.sample_vertices, "Largest random sample");
  probe->add_option("--seed", probe_seed, "Seed");
  probe->add_option("--out", out_path, "Probe report file to write");
  probe->callback([&] {
    action = [&] {
      auto f = load_patterns(patterns_path);
      FactorReport r;
      if (!report_path.empty()) {
        r = io::report_from_json(io::read_json_file(report_path));
      } else {
        FactorOptions o;
        o.dual.domain_cap = cfg.domain_cap;
        o.hom = cfg.hom();
        r = minimal_finite_factor(f, o);
      }
      probe_options.seed = probe_seed.value_or(cfg.seed);
      probe_options.fpp = cfg.fpp();
      auto rep = equivalence_probe(f, r, probe_options);
      out << rep.agreements << "/" << rep.checked() << " instances agree (" << rep.census_checked << " census, "
          << rep.samples_checked << " sampled)\n";
      json bad = json::array();
      for (const auto& s : rep.counterexamples) bad.push_back(io::to_json(s));
      maybe_write(out_path, {{"census_checked", rep.census_checked},
                             {"samples_checked", rep.samples_checked},
                             {"agreements", rep.agreements},
                             {"accepted", rep.accepted},
                             {"counterexamples", bad}});
      return static_cast<int>(rep.ok() ? kExitYes : kExitNo);
    };
  });

  // selftest
  auto* selftest = app.add_subcommand("selftest", "Run the duality and equivalence oracles on built-in inputs");
  selftest->callback([&] {
    action = [&] {
      bool all = true;
      auto report = [&](const std::string& name, bool ok) {
        out << (ok ? "pass " : "FAIL ") << name << '\n';
        all = all && ok;
      };
      auto digraph = catalog::digraph_signature();
      for (std::size_t n : {2, 3}) {
        std::vector<Structure> trees{catalog::directed_path(n + 1)};
        auto d = dual_of_trees(digraph, trees);
        report("dual of P" + std::to_string(n + 1) + " is equivalent to T" + std::to_string(n),
               hom_equivalent(d.structure, catalog::transitive_tournament(n)));
        report("dual of P" + std::to_string(n + 1) + " is a dual on digraphs with <= 3 vertices",
               duality_holds(d, trees, {3, 4, std::nullopt}));
      }
      auto mono = compile_to_patterns(parse_sentence(
          "exists M/1 on vertex forall x,y,z : !(E(x,y) & E(y,z) & E(z,x) & M(x) & M(y) & M(z)) & "
          "!(E(x,y) & E(y,z) & E(z,x) & ~M(x) & ~M(y) & ~M(z))",
          catalog::graph_signature()));
      std::vector<std::pair<std::string, PatternSet>> sets{{"monochromatic triangles", mono},
                                                           {"3-colouring", csp_patterns(catalog::complete_graph(3))}};
      for (const auto& [name, f] : sets) {
        auto r = minimal_finite_factor(f);
        ProbeOptions o;
        o.bound = 4;
        o.samples = 50;
        o.seed = cfg.seed;
        report("high-girth equivalence for " + name, equivalence_probe(f, r, o).ok());
      }
      return static_cast<int>(all ? kExitYes : kExitNo);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }
  try {
    return action();
  } catch (const BudgetExhausted& e) {
    err << "unknown: " << e.what() << '\n';
    return kExitUnknown;
  } catch (const RetriesExhausted& e) {
    err << "unknown: " << e.what() << '\n';
    return kExitUnknown;
  } catch (const SizeGuardExceeded& e) {
    err << "size guard: " << e.what() << '\n';
    return kExitUnknown;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace gmsnp
