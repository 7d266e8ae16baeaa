#include "gmsnp/io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "gmsnp/errors.hpp"

namespace gmsnp::io {

namespace {

void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw DataError(where + ": expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw DataError(where + ": unknown field \"" + k + "\"");
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(where + ": missing field \"" + key + "\"");
  return *it;
}

template <typename F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DataError(where + ": " + e.what());
  }
}

Tuple tuple_from_json(const Structure& s, const json& j, const std::string& where) {
  Tuple t;
  for (const auto& name : j) {
    auto v = s.find_vertex(name.get<std::string>());
    if (!v) throw DataError(where + ": unknown vertex " + name.get<std::string>());
    t.push_back(*v);
  }
  return t;
}

json tuple_to_json(const Structure& s, const Tuple& t) {
  json out = json::array();
  for (auto v : t) out.push_back(s.name(v));
  return out;
}

}  // namespace

json to_json(const Signature& signature) {
  json out = json::array();
  for (const auto& sym : signature.symbols()) {
    out.push_back({{"name", sym.name}, {"arity", sym.arity}, {"symmetric", sym.symmetric}});
  }
  return out;
}

Signature signature_from_json(const json& j) {
  return guarded("signature", [&] {
    if (!j.is_array()) throw DataError("signature: expected an array");
    Signature sig;
    for (const auto& sym : j) {
      allow_keys(sym, {"name", "arity", "symmetric"}, "signature symbol");
      sig.add({field(sym, "name", "signature symbol").get<std::string>(),
               field(sym, "arity", "signature symbol").get<int>(), sym.value("symmetric", false)});
    }
    return sig;
  });
}

json to_json(const Structure& s) {
  json relations = json::object();
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    json tuples = json::array();
    for (const auto& o : s.relation(r)) {
      if (s.signature()[r].symmetric && o[0] > o[1]) continue;
      tuples.push_back(tuple_to_json(s, o));
    }
    relations[s.signature()[r].name] = std::move(tuples);
  }
  return {{"signature", to_json(s.signature())}, {"vertices", s.names()}, {"relations", relations}};
}

namespace {

Structure structure_body(const json& j, const std::string& where) {
  Structure s(signature_from_json(field(j, "signature", where)), field(j, "vertices", where).get<std::vector<std::string>>());
  if (auto it = j.find("relations"); it != j.end()) {
    for (const auto& [name, tuples] : it->items()) {
      auto r = s.signature().find(name);
      if (!r) throw DataError(where + ": relation of unknown symbol " + name);
      for (const auto& t : tuples) s.add_tuple(*r, tuple_from_json(s, t, where));
    }
  }
  return s;
}

}  // namespace

Structure structure_from_json(const json& j) {
  return guarded("structure", [&] {
    allow_keys(j, {"signature", "vertices", "relations"}, "structure");
    return structure_body(j, "structure");
  });
}

json to_json(const PatternSet& f) {
  const auto& pal = f.palette;
  const auto& tau = pal.tau();
  json palette = {{"vertex", pal.vertex_colors()}};
  for (std::size_t r = 0; r < tau.size(); ++r) palette[tau[r].name] = pal.tuple_colors(r);
  json patterns = json::array();
  for (const auto& p : f.patterns) {
    auto base = base_of(pal, p);
    json out = to_json(base);
    json vc = json::object();
    for (std::size_t c = 0; c < pal.vertex_colors().size(); ++c) {
      for (const auto& t : p.relation(pal.vertex_symbol(c))) vc[p.name(t[0])] = pal.vertex_colors()[c];
    }
    json tc = json::object();
    for (std::size_t r = 0; r < tau.size(); ++r) {
      json list = json::array();
      for (std::size_t c = 0; c < pal.tuple_colors(r).size(); ++c) {
        for (const auto& t : p.relation(pal.tuple_symbol(r, c))) {
          if (tau[r].symmetric && t[0] > t[1]) continue;
          list.push_back({tuple_to_json(p, t), pal.tuple_colors(r)[c]});
        }
      }
      tc[tau[r].name] = std::move(list);
    }
    out["vertex_colors"] = std::move(vc);
    out["tuple_colors"] = std::move(tc);
    patterns.push_back(std::move(out));
  }
  return {{"signature", to_json(tau)}, {"palette", palette}, {"patterns", patterns}};
}

namespace {

std::size_t color_index(const std::vector<std::string>& colors, const std::string& name, const std::string& where) {
  auto it = std::find(colors.begin(), colors.end(), name);
  if (it == colors.end()) throw DataError(where + ": unknown colour " + name);
  return static_cast<std::size_t>(it - colors.begin());
}

Structure pattern_from_json(const Palette& pal, const json& j, const std::string& where) {
  allow_keys(j, {"signature", "vertices", "relations", "vertex_colors", "tuple_colors"}, where);
  auto base = structure_body(j, where);
  if (!(base.signature() == pal.tau())) throw SignatureMismatch(where + ": signature differs from the palette's");
  const auto& tau = pal.tau();
  std::vector<std::optional<std::size_t>> vc(base.size());
  if (auto it = j.find("vertex_colors"); it != j.end()) {
    for (const auto& [name, color] : it->items()) {
      auto v = base.find_vertex(name);
      if (!v) throw DataError(where + ": colour for unknown vertex " + name);
      vc[*v] = color_index(pal.vertex_colors(), color.get<std::string>(), where);
    }
  }
  std::vector<std::map<Tuple, std::size_t>> tc(tau.size());
  if (auto it = j.find("tuple_colors"); it != j.end()) {
    for (const auto& [name, list] : it->items()) {
      auto r = tau.find(name);
      if (!r) throw DataError(where + ": tuple colours for unknown symbol " + name);
      for (const auto& entry : list) {
        auto t = tuple_from_json(base, entry.at(0), where);
        if (!base.has_tuple(*r, t)) throw DataError(where + ": coloured tuple is not in the structure");
        auto c = color_index(pal.tuple_colors(*r), entry.at(1).get<std::string>(), where);
        if (tau[*r].symmetric && t[0] > t[1]) std::swap(t[0], t[1]);
        if (!tc[*r].emplace(t, c).second) throw DataError(where + ": tuple coloured twice");
      }
    }
  }
  std::vector<std::size_t> colors(base.size());
  for (Vertex v = 0; v < base.size(); ++v) {
    if (vc[v]) {
      colors[v] = *vc[v];
    } else if (pal.vertex_colors().size() == 1) {
      colors[v] = 0;
    } else {
      throw DataError(where + ": vertex " + base.name(v) + " has no colour");
    }
  }
  return make_coloring(pal, base, colors, [&](std::size_t r, const Tuple& t) -> std::size_t {
    if (auto it = tc[r].find(t); it != tc[r].end()) return it->second;
    if (pal.tuple_colors(r).size() == 1) return 0;
    throw DataError(where + ": a " + tau[r].name + "-tuple has no colour");
  });
}

}  // namespace

PatternSet pattern_set_from_json(const json& j) {
  return guarded("pattern file", [&] {
    allow_keys(j, {"signature", "palette", "patterns"}, "pattern file");
    const auto& patterns = field(j, "patterns", "pattern file");
    Signature tau;
    if (auto it = j.find("signature"); it != j.end()) {
      tau = signature_from_json(*it);
    } else if (!patterns.empty()) {
      tau = signature_from_json(field(patterns.at(0), "signature", "pattern 0"));
    } else {
      throw DataError("pattern file: no signature");
    }
    const auto& palette = field(j, "palette", "pattern file");
    if (!palette.is_object()) throw DataError("pattern file: palette must be an object");
    for (const auto& [k, v] : palette.items()) {
      if (k != "vertex" && !tau.find(k)) throw DataError("pattern file: palette entry for unknown symbol " + k);
    }
    std::vector<std::vector<std::string>> tuple_colors;
    for (const auto& sym : tau.symbols()) {
      auto it = palette.find(sym.name);
      if (it == palette.end()) throw DataError("pattern file: no colours for symbol " + sym.name);
      tuple_colors.push_back(it->get<std::vector<std::string>>());
    }
    PatternSet f{Palette(tau, field(palette, "vertex", "palette").get<std::vector<std::string>>(), std::move(tuple_colors)),
                 {}};
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      f.patterns.push_back(pattern_from_json(f.palette, patterns[i], "pattern " + std::to_string(i)));
    }
    f.validate();
    return f;
  });
}

json to_json(const Verdict& v) {
  json out = {{"verdict", to_string(v.tag)}, {"note", v.note}, {"search_nodes", v.search_nodes}};
  if (v.core) out["core"] = to_json(*v.core);
  if (v.table) {
    out["table"] = {{"domain_size", v.table->domain_size}, {"values", v.table->table}};
  }
  if (v.odd_cycle) out["odd_cycle"] = *v.odd_cycle;
  return out;
}

Verdict verdict_from_json(const json& j) {
  return guarded("verdict", [&] {
    allow_keys(j, {"verdict", "note", "search_nodes", "core", "table", "odd_cycle"}, "verdict");
    Verdict v;
    auto tag = field(j, "verdict", "verdict").get<std::string>();
    if (tag == "P") {
      v.tag = Verdict::Tag::P;
    } else if (tag == "NP-complete") {
      v.tag = Verdict::Tag::NPComplete;
    } else if (tag != "unknown") {
      throw DataError("verdict: unknown tag " + tag);
    }
    v.note = j.value("note", std::string());
    v.search_nodes = j.value("search_nodes", std::uint64_t{0});
    if (auto it = j.find("core"); it != j.end()) v.core = structure_from_json(*it);
    if (auto it = j.find("table"); it != j.end()) {
      allow_keys(*it, {"domain_size", "values"}, "table");
      v.table = OperationTable{field(*it, "domain_size", "table").get<std::size_t>(),
                               field(*it, "values", "table").get<std::vector<Vertex>>()};
    }
    if (auto it = j.find("odd_cycle"); it != j.end()) v.odd_cycle = it->get<std::size_t>();
    return v;
  });
}

json to_json(const FactorReport& r) {
  json trees = json::array();
  for (const auto& t : r.trees) trees.push_back(to_json(t));
  json out = {{"patterns", to_json(r.patterns)},
              {"threshold", r.threshold},
              {"trees", trees},
              {"universe", r.universe == UniverseKind::Substructures ? "substructures" : "whole-branches"},
              {"universe_size", r.universe_size},
              {"dual", to_json(r.dual)},
              {"factor", to_json(r.factor)}};
  if (r.verdict) out["verdict"] = to_json(*r.verdict);
  return out;
}

FactorReport report_from_json(const json& j) {
  return guarded("report", [&] {
    allow_keys(j, {"patterns", "threshold", "trees", "universe", "universe_size", "dual", "factor",
                   "verdict"},
               "report");
    FactorReport r;
    r.patterns = pattern_set_from_json(field(j, "patterns", "report"));
    r.threshold = field(j, "threshold", "report").get<std::size_t>();
    if (r.threshold < 1) throw DataError("report: threshold must be positive");
    r.factor = structure_from_json(field(j, "factor", "report"));
    if (!(r.factor.signature() == r.patterns.palette.tau())) throw SignatureMismatch("report: factor is not over τ");
    if (auto it = j.find("trees"); it != j.end()) {
      for (const auto& t : *it) r.trees.push_back(structure_from_json(t));
    }
    r.universe = j.value("universe", std::string("substructures")) == "whole-branches" ? UniverseKind::WholeBranches
                                                                                        : UniverseKind::Substructures;
    r.universe_size = j.value("universe_size", std::size_t{0});
    if (auto it = j.find("dual"); it != j.end()) r.dual = structure_from_json(*it);
    if (auto it = j.find("verdict"); it != j.end()) r.verdict = verdict_from_json(*it);
    return r;
  });
}

json witness_to_json(const Structure& from, const Structure& to, const HomWitness& map) {
  json out = json::object();
  for (Vertex v = 0; v < from.size(); ++v) out[from.name(v)] = to.name(map[v]);
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gmsnp::io
