#include "gmsnp/logic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "gmsnp/errors.hpp"

namespace gmsnp {

const Existential* Sentence::existential(std::string_view name) const {
  for (const auto& e : existentials) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

namespace {

struct Token {
  enum Kind { Ident, Int, Punct, End } kind;
  std::string text;
  std::size_t line, column;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, column = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    std::size_t start_line = line, start_column = column;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Token::Ident, std::string(text.substr(i, j - i)), start_line, start_column});
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Token::Int, std::string(text.substr(i, j - i)), start_line, start_column});
      advance(j - i);
    } else if (std::string_view("/,:&!()~").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Token::Punct, std::string(1, static_cast<char>(c)), start_line, start_column});
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", line, column);
    }
  }
  out.push_back({Token::End, "", line, column});
  return out;
}

struct PositionedAtom {
  Atom atom;
  const Token* at;
};

class Parser {
 public:
  Parser(std::string_view text, const std::optional<Signature>& tau)
      : tokens_(tokenize(text)), declared_tau_(tau) {}

  Sentence parse() {
    Sentence s;
    if (is_ident("exists")) {
      next();
      do {
        parse_decl(s);
      } while (accept(","));
    }
    expect_keyword("forall");
    do {
      const auto& t = expect_ident("variable");
      if (std::find(s.variables.begin(), s.variables.end(), t.text) != s.variables.end()) {
        throw error("duplicate variable " + t.text, t);
      }
      s.variables.push_back(t.text);
    } while (accept(","));
    expect(":");
    std::vector<std::vector<PositionedAtom>> clauses;
    do {
      clauses.push_back(parse_clause());
    } while (accept("&"));
    if (peek().kind != Token::End) throw error("expected '&' or end of input", peek());
    resolve(s, clauses);
    return s;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool is_ident(std::string_view word) const {
    return peek().kind == Token::Ident && peek().text == word;
  }
  bool accept(std::string_view punct) {
    if (peek().kind == Token::Punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }
  static ParseError error(const std::string& what, const Token& at) {
    return ParseError(what, at.line, at.column);
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) throw error("expected '" + std::string(punct) + "'", peek());
  }
  void expect_keyword(std::string_view word) {
    if (!is_ident(word)) throw error("expected '" + std::string(word) + "'", peek());
    next();
  }
  const Token& expect_ident(const std::string& what) {
    if (peek().kind != Token::Ident) throw error("expected " + what, peek());
    return next();
  }

  void parse_decl(Sentence& s) {
    const auto& name = expect_ident("relation name");
    if (s.existential(name.text)) throw error("duplicate existential " + name.text, name);
    expect("/");
    if (peek().kind != Token::Int) throw error("expected arity", peek());
    const auto& arity_token = next();
    int arity = std::stoi(arity_token.text);
    if (arity <= 0) throw error("arity must be positive", arity_token);
    expect_keyword("on");
    const auto& target = expect_ident("'vertex' or a symbol");
    s.existentials.push_back({name.text, arity, target.text});
    targets_.push_back(&target);
  }

  std::vector<PositionedAtom> parse_clause() {
    expect("!");
    expect("(");
    std::vector<PositionedAtom> atoms;
    do {
      const Token* start = &peek();
      Atom a;
      a.negated = accept("~");
      a.symbol = expect_ident("relation symbol").text;
      expect("(");
      do {
        a.args.push_back(expect_ident("variable").text);
      } while (accept(","));
      expect(")");
      atoms.push_back({std::move(a), start});
    } while (accept("&"));
    expect(")");
    return atoms;
  }

  void resolve(Sentence& s, const std::vector<std::vector<PositionedAtom>>& clauses) {
    if (declared_tau_) {
      s.tau = *declared_tau_;
      for (const auto& e : s.existentials) {
        if (s.tau.find(e.name)) throw error("existential " + e.name + " shadows a τ-symbol", *targets_.front());
      }
    }
    for (const auto& clause : clauses) {
      Clause c;
      for (const auto& [atom, at] : clause) {
        for (const auto& v : atom.args) {
          if (std::find(s.variables.begin(), s.variables.end(), v) == s.variables.end()) {
            throw error("unknown variable " + v, *at);
          }
        }
        auto arity = static_cast<int>(atom.args.size());
        if (const auto* e = s.existential(atom.symbol)) {
          if (e->arity != arity) throw error("arity mismatch for " + atom.symbol, *at);
        } else {
          if (atom.negated) throw error("negated τ-atom " + atom.symbol + " is not allowed", *at);
          auto r = s.tau.find(atom.symbol);
          if (!r) {
            if (declared_tau_) throw error("unknown symbol " + atom.symbol, *at);
            r = s.tau.add({atom.symbol, arity, false});
          }
          if (s.tau[*r].arity != arity) throw error("arity mismatch for " + atom.symbol, *at);
        }
        c.atoms.push_back(atom);
      }
      for (const auto& [atom, at] : clause) {
        if (!atom.negated) continue;
        bool guarded = std::any_of(clause.begin(), clause.end(), [&](const PositionedAtom& g) {
          if (g.atom.negated) return false;
          return std::all_of(atom.args.begin(), atom.args.end(), [&](const std::string& v) {
            return std::find(g.atom.args.begin(), g.atom.args.end(), v) != g.atom.args.end();
          });
        });
        if (!guarded) {
          throw error("negated atom ~" + atom.symbol + "(" + join(atom.args) +
                          ") has no guarding positive atom",
                      *at);
        }
      }
      s.clauses.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < s.existentials.size(); ++i) {
      const auto& e = s.existentials[i];
      if (!e.on_vertex() && !s.tau.find(e.target)) {
        throw error("unknown symbol " + e.target + " in annotation of " + e.name, *targets_[i]);
      }
    }
  }

  static std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
    return out;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::optional<Signature> declared_tau_;
  std::vector<const Token*> targets_;
};

}  // namespace

Sentence parse_sentence(std::string_view text, const std::optional<Signature>& tau) {
  return Parser(text, tau).parse();
}

std::string print_sentence(const Sentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.existentials.size(); ++i) {
    const auto& e = s.existentials[i];
    if (e.target.empty()) throw DataError("cannot print unannotated existential " + e.name);
    out += i ? ", " : "exists ";
    out += e.name + "/" + std::to_string(e.arity) + " on " + e.target;
  }
  if (!out.empty()) out += ' ';
  out += "forall ";
  for (std::size_t i = 0; i < s.variables.size(); ++i) out += (i ? "," : "") + s.variables[i];
  out += " :";
  for (std::size_t c = 0; c < s.clauses.size(); ++c) {
    out += c ? " & !(" : " !(";
    const auto& atoms = s.clauses[c].atoms;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (a) out += " & ";
      if (atoms[a].negated) out += '~';
      out += atoms[a].symbol + "(";
      for (std::size_t k = 0; k < atoms[a].args.size(); ++k) {
        out += (k ? "," : "") + atoms[a].args[k];
      }
      out += ')';
    }
    out += ')';
  }
  return out;
}

Structure clause_structure(const Sentence& s, const Clause& c) {
  Structure st(s.tau);
  for (const auto& a : c.atoms) {
    for (const auto& v : a.args) {
      if (!st.find_vertex(v)) st.add_vertex(v);
    }
  }
  for (const auto& a : c.atoms) {
    if (s.existential(a.symbol)) continue;
    st.add_tuple(a.symbol, a.args);
  }
  return st;
}

namespace {

bool carried_by(const Sentence& s, const Clause& c, const Atom& atom, const std::string& target) {
  auto r = s.tau.find(target);
  if (!r) return false;
  bool symmetric = s.tau[*r].symmetric;
  return std::any_of(c.atoms.begin(), c.atoms.end(), [&](const Atom& t) {
    if (t.symbol != target) return false;
    if (t.args == atom.args) return true;
    return symmetric && t.args.size() == 2 && atom.args.size() == 2 && t.args[0] == atom.args[1] &&
           t.args[1] == atom.args[0];
  });
}

}  // namespace

std::vector<Diagnostic> validate_fragment(const Sentence& s) {
  std::vector<Diagnostic> out;
  std::set<std::string> broken;
  for (const auto& e : s.existentials) {
    if (e.target.empty()) {
      out.push_back({"unannotated", "existential " + e.name + " has no colour annotation"});
      broken.insert(e.name);
      continue;
    }
    int expected = 1;
    if (!e.on_vertex()) {
      auto r = s.tau.find(e.target);
      if (!r) {
        out.push_back({"unknown annotation target", "existential " + e.name + " is annotated on unknown symbol " + e.target});
        broken.insert(e.name);
        continue;
      }
      expected = s.tau[*r].arity;
    }
    if (e.arity != expected) {
      out.push_back({"annotation/arity mismatch", "existential " + e.name + " has arity " +
                                                      std::to_string(e.arity) + " but its annotation " +
                                                      e.target + " needs arity " + std::to_string(expected)});
      broken.insert(e.name);
    }
  }
  for (std::size_t ci = 0; ci < s.clauses.size(); ++ci) {
    const auto& c = s.clauses[ci];
    for (const auto& a : c.atoms) {
      const auto* e = s.existential(a.symbol);
      if (!e || broken.count(e->name) || e->on_vertex()) continue;
      if (!carried_by(s, c, a, e->target)) {
        out.push_back({"uncarried existential atom", "clause " + std::to_string(ci + 1) + ": atom " + a.symbol +
                                                         " does not repeat the variables of a " + e->target +
                                                         "-atom"});
      }
    }
    if (!is_connected(clause_structure(s, c))) {
      out.push_back({"disconnected clause", "clause " + std::to_string(ci + 1) + " is disconnected"});
    }
  }
  return out;
}

std::string subset_color(const std::vector<std::string>& members) {
  std::string out = "{";
  for (std::size_t i = 0; i < members.size(); ++i) out += (i ? "," : "") + members[i];
  return out + "}";
}

namespace {

std::vector<std::string> subset_names(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << names.size()); ++mask) {
    std::vector<std::string> members;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (mask >> i & 1) members.push_back(names[i]);
    }
    out.push_back(subset_color(members));
  }
  return out;
}

struct Requirement {
  std::size_t required = 0, forbidden = 0;

  std::vector<std::size_t> masks(std::size_t bits) const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < (std::size_t{1} << bits); ++m) {
      if ((m & required) == required && (m & forbidden) == 0) out.push_back(m);
    }
    return out;
  }
};

}  // namespace

PatternSet compile_to_patterns(const Sentence& s, std::size_t pattern_cap) {
  if (auto diags = validate_fragment(s); !diags.empty()) {
    std::string msg = "sentence is outside the compilable fragment:";
    for (const auto& d : diags) msg += " [" + d.code + "] " + d.message + ";";
    throw DataError(msg);
  }
  std::vector<std::string> vertex_names;
  std::vector<std::vector<std::string>> tuple_names(s.tau.size());
  // bit position of each existential within its colour scope
  std::map<std::string, std::size_t> bit;
  for (const auto& e : s.existentials) {
    auto& scope = e.on_vertex() ? vertex_names : tuple_names[s.tau.index_of(e.target)];
    bit[e.name] = scope.size();
    scope.push_back(e.name);
  }
  std::vector<std::vector<std::string>> tuple_colors;
  for (const auto& names : tuple_names) tuple_colors.push_back(subset_names(names));
  PatternSet f{Palette(s.tau, subset_names(vertex_names), std::move(tuple_colors)), {}};

  for (const auto& c : s.clauses) {
    auto base = clause_structure(s, c);
    auto occ = occurrences(base);
    std::vector<Requirement> vreq(base.size()), treq(occ.size());
    for (const auto& a : c.atoms) {
      const auto* e = s.existential(a.symbol);
      if (!e) continue;
      auto flag = std::size_t{1} << bit[e->name];
      auto apply = [&](Requirement& r) { (a.negated ? r.forbidden : r.required) |= flag; };
      if (e->on_vertex()) {
        apply(vreq[base.vertex(a.args[0])]);
        continue;
      }
      auto r = s.tau.index_of(e->target);
      Tuple t;
      for (const auto& v : a.args) t.push_back(base.vertex(v));
      for (std::size_t i = 0; i < occ.size(); ++i) {
        if (occ[i].symbol != r) continue;
        bool same = occ[i].tuple == t ||
                    (s.tau[r].symmetric && occ[i].tuple == Tuple{t[1], t[0]});
        if (same) apply(treq[i]);
      }
    }
    std::vector<std::vector<std::size_t>> choices;
    for (const auto& r : vreq) choices.push_back(r.masks(vertex_names.size()));
    for (std::size_t i = 0; i < occ.size(); ++i) {
      choices.push_back(treq[i].masks(tuple_names[occ[i].symbol].size()));
    }
    if (std::any_of(choices.begin(), choices.end(), [](const auto& ch) { return ch.empty(); })) continue;
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
      std::vector<std::size_t> vc(base.size());
      for (std::size_t v = 0; v < base.size(); ++v) vc[v] = choices[v][pick[v]];
      std::map<Tuple, std::size_t> tc;
      for (std::size_t i = 0; i < occ.size(); ++i) tc[occ[i].tuple] = choices[base.size() + i][pick[base.size() + i]];
      auto pattern = make_coloring(f.palette, base, vc, [&](std::size_t, const Tuple& t) { return tc.at(t); });
      if (std::find(f.patterns.begin(), f.patterns.end(), pattern) == f.patterns.end()) {
        if (f.patterns.size() >= pattern_cap) {
          throw SizeGuardExceeded("compilation produced more than " + std::to_string(pattern_cap) +
                                  " patterns");
        }
        f.patterns.push_back(std::move(pattern));
      }
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  return f;
}

}  // namespace gmsnp
