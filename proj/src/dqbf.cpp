#include "qsg/dqbf.hpp"

#include "qsg/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace qsg {

Prop Prop::constant(bool v) {
  Prop p;
  p.kind = Kind::Const;
  p.value = v;
  return p;
}

Prop Prop::variable(std::size_t v) {
  Prop p;
  p.kind = Kind::Var;
  p.var = v;
  return p;
}

Prop Prop::negation(Prop c) {
  Prop p;
  p.kind = Kind::Not;
  p.children.push_back(std::move(c));
  return p;
}

Prop Prop::conj(std::vector<Prop> cs) {
  Prop p;
  p.kind = Kind::And;
  p.children = std::move(cs);
  return p;
}

Prop Prop::disj(std::vector<Prop> cs) {
  Prop p;
  p.kind = Kind::Or;
  p.children = std::move(cs);
  return p;
}

const std::string& DqbfFormula::var_name(std::size_t v) const {
  return v < n() ? universals[v] : existentials.at(v - n());
}

namespace {

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

class PropParser {
 public:
  PropParser(std::string_view text, const DqbfFormula& f, std::size_t line) : text_(text), f_(f), line_(line) {}

  Prop parse() {
    Prop p = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "' in matrix");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Prop parse_or() {
    std::vector<Prop> ps{parse_and()};
    while (accept('|')) ps.push_back(parse_and());
    return ps.size() == 1 ? std::move(ps[0]) : Prop::disj(std::move(ps));
  }
  Prop parse_and() {
    std::vector<Prop> ps{parse_unary()};
    while (accept('&')) ps.push_back(parse_unary());
    return ps.size() == 1 ? std::move(ps[0]) : Prop::conj(std::move(ps));
  }
  Prop parse_unary() {
    if (accept('!')) return Prop::negation(parse_unary());
    if (accept('(')) {
      Prop p = parse_or();
      if (!accept(')')) fail("unbalanced parentheses in matrix");
      return p;
    }
    skip_ws();
    auto start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail(pos_ == text_.size() ? "unexpected end of matrix" : "expected variable in matrix");
    std::string id(text_.substr(start, pos_ - start));
    if (id == "true") return Prop::constant(true);
    if (id == "false") return Prop::constant(false);
    for (std::size_t v = 0; v < f_.n() + f_.m(); ++v) {
      if (f_.var_name(v) == id) return Prop::variable(v);
    }
    fail("unknown variable '" + id + "' in matrix");
  }

  std::string_view text_;
  const DqbfFormula& f_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_names(std::string_view s) {
  std::string t(s);
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

DqbfFormula parse_dqbf(std::string_view text) {
  // Split into statements, remembering line numbers.
  std::vector<std::pair<std::size_t, std::string>> stmts;
  {
    std::size_t line = 1;
    std::string cur;
    auto flush = [&] {
      if (auto h = cur.find('#'); h != std::string::npos) cur.resize(h);
      auto t = trim(cur);
      if (!t.empty()) stmts.emplace_back(line, t);
      cur.clear();
    };
    for (char c : text) {
      if (c == ';' || c == '\n') {
        flush();
        if (c == '\n') ++line;
      } else {
        cur += c;
      }
    }
    flush();
  }

  DqbfFormula f;
  std::vector<std::pair<std::size_t, std::string>> matrix_text;
  auto taken = [&](const std::string& name) {
    return std::find(f.universals.begin(), f.universals.end(), name) != f.universals.end() ||
           std::find(f.existentials.begin(), f.existentials.end(), name) != f.existentials.end();
  };
  for (const auto& [line, s] : stmts) {
    auto sp = s.find_first_of(" \t");
    std::string kw = s.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(s.substr(sp));
    if (kw == "forall") {
      for (auto& x : split_names(rest)) {
        if (!valid_name(x)) throw ParseError("invalid variable name '" + x + "'", line);
        if (taken(x)) throw ParseError("duplicate variable '" + x + "'", line);
        f.universals.push_back(x);
      }
    } else if (kw == "exists") {
      auto deps_pos = rest.find("deps");
      std::string name = trim(rest.substr(0, deps_pos));
      if (!valid_name(name)) throw ParseError("invalid variable name '" + name + "'", line);
      if (taken(name)) throw ParseError("duplicate variable '" + name + "'", line);
      std::vector<std::size_t> deps;
      if (deps_pos != std::string::npos) {
        std::string d = trim(rest.substr(deps_pos + 4));
        if (d.size() < 2 || d.front() != '{' || d.back() != '}') {
          throw ParseError("expected 'deps {<ids>}'", line);
        }
        for (auto& x : split_names(d.substr(1, d.size() - 2))) {
          auto it = std::find(f.universals.begin(), f.universals.end(), x);
          if (it == f.universals.end()) throw ParseError("dependency on unknown universal '" + x + "'", line);
          deps.push_back(static_cast<std::size_t>(it - f.universals.begin()));
        }
        std::sort(deps.begin(), deps.end());
        deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
      }
      f.existentials.push_back(name);
      f.deps.push_back(std::move(deps));
    } else if (kw == "matrix") {
      matrix_text.emplace_back(line, rest);
    } else {
      throw ParseError("unknown DQBF directive '" + kw + "'", line);
    }
  }
  if (matrix_text.size() != 1) throw ParseError(matrix_text.empty() ? "missing matrix" : "duplicate matrix");
  if (f.n() + f.m() > 64) throw ResourceError("DQBF limited to 64 variables");
  f.matrix = PropParser(matrix_text[0].second, f, matrix_text[0].first).parse();
  return f;
}

std::string format_prop(const Prop& p, const DqbfFormula& f) {
  switch (p.kind) {
    case Prop::Kind::Const: return p.value ? "true" : "false";
    case Prop::Kind::Var: return f.var_name(p.var);
    case Prop::Kind::Not: return "!" + format_prop(p.children[0], f);
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      if (p.children.empty()) return p.kind == Prop::Kind::And ? "true" : "false";
      std::string out = "(";
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (i) out += p.kind == Prop::Kind::And ? " & " : " | ";
        out += format_prop(p.children[i], f);
      }
      return out + ")";
    }
  }
  return "";
}

std::string format_dqbf(const DqbfFormula& f) {
  std::string out = "forall";
  for (const auto& x : f.universals) out += " " + x;
  out += "\n";
  for (std::size_t j = 0; j < f.m(); ++j) {
    out += "exists " + f.existentials[j] + " deps {";
    for (std::size_t i = 0; i < f.deps[j].size(); ++i) {
      if (i) out += ",";
      out += f.universals[f.deps[j][i]];
    }
    out += "}\n";
  }
  return out + "matrix " + format_prop(f.matrix, f) + "\n";
}

bool eval_prop(const Prop& p, std::uint64_t a) {
  switch (p.kind) {
    case Prop::Kind::Const: return p.value;
    case Prop::Kind::Var: return (a >> p.var) & 1u;
    case Prop::Kind::Not: return !eval_prop(p.children[0], a);
    case Prop::Kind::And:
      return std::all_of(p.children.begin(), p.children.end(), [a](const Prop& c) { return eval_prop(c, a); });
    case Prop::Kind::Or:
      return std::any_of(p.children.begin(), p.children.end(), [a](const Prop& c) { return eval_prop(c, a); });
  }
  return false;
}

namespace {
Prop nnf(const Prop& p, bool neg) {
  switch (p.kind) {
    case Prop::Kind::Const: return Prop::constant(p.value != neg);
    case Prop::Kind::Var: return neg ? Prop::negation(p) : p;
    case Prop::Kind::Not: return nnf(p.children[0], !neg);
    case Prop::Kind::And:
    case Prop::Kind::Or: {
      std::vector<Prop> cs;
      for (const auto& c : p.children) cs.push_back(nnf(c, neg));
      bool is_and = (p.kind == Prop::Kind::And) != neg;
      return is_and ? Prop::conj(std::move(cs)) : Prop::disj(std::move(cs));
    }
  }
  return p;
}
}  // namespace

Prop to_nnf(const Prop& p) { return nnf(p, false); }

bool dqbf_brute_sat(const DqbfFormula& f, const DqbfLimits& limits) {
  const auto n = f.n();
  const auto m = f.m();
  if (n > limits.max_universals || m > limits.max_existentials) {
    throw ResourceError("DQBF brute force limited to " + std::to_string(limits.max_universals) +
                        " universals and " + std::to_string(limits.max_existentials) + " existentials");
  }
  std::vector<std::size_t> offset(m);
  std::size_t bits = 0;
  for (std::size_t j = 0; j < m; ++j) {
    offset[j] = bits;
    bits += std::size_t{1} << f.deps[j].size();
  }
  if (bits > limits.max_table_bits) {
    throw ResourceError("Skolem tables need " + std::to_string(bits) + " bits, cap is " +
                        std::to_string(limits.max_table_bits));
  }
  for (std::uint64_t table = 0; table < (std::uint64_t{1} << bits); ++table) {
    bool ok = true;
    for (std::uint64_t x = 0; ok && x < (std::uint64_t{1} << n); ++x) {
      std::uint64_t a = x;
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < f.deps[j].size(); ++k) {
          if ((x >> f.deps[j][k]) & 1u) idx |= std::size_t{1} << k;
        }
        if ((table >> (offset[j] + idx)) & 1u) a |= std::uint64_t{1} << (n + j);
      }
      ok = eval_prop(f.matrix, a);
    }
    if (ok) return true;
  }
  return false;
}

DqbfReduction reduce_to_game(const DqbfFormula& f) {
  const auto n = f.n();
  const auto m = f.m();
  if (m == 0) throw ParseError("reduction needs at least one existential variable");
  const auto vars = n + m;

  DqbfReduction r;
  GameBuilder b("dqbf");
  const StateId root = b.add_state("root", Owner::Chance);
  // top[v], bot[v]: the true/false states of variable v in every branch.
  std::vector<std::vector<StateId>> top(vars), bot(vars);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::size_t> order;
    for (auto x : f.deps[j]) order.push_back(x);
    order.push_back(n + j);
    for (std::size_t x = 0; x < n; ++x) {
      if (std::find(f.deps[j].begin(), f.deps[j].end(), x) == f.deps[j].end()) order.push_back(x);
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i != j) order.push_back(n + i);
    }
    const std::string prefix = "b" + std::to_string(j + 1) + "_";
    std::vector<std::string> names;
    std::vector<StateId> choosers, tops, bots;
    for (auto v : order) {
      names.push_back(f.var_name(v));
      const Owner o = v < n ? Owner::P2 : Owner::P1;
      choosers.push_back(b.add_state(prefix + f.var_name(v), o));
      tops.push_back(b.add_state(prefix + f.var_name(v) + "_T", Owner::Chance));
      bots.push_back(b.add_state(prefix + f.var_name(v) + "_F", Owner::Chance));
      top[v].push_back(tops.back());
      bot[v].push_back(bots.back());
    }
    const StateId end = b.add_state(prefix + "end", Owner::Chance);
    b.add_probability(root, choosers.front(), Rational(1, static_cast<long>(m)));
    for (std::size_t k = 0; k < order.size(); ++k) {
      b.add_edge(choosers[k], tops[k]);
      b.add_edge(choosers[k], bots[k]);
      const StateId next = k + 1 < order.size() ? choosers[k + 1] : end;
      b.add_probability(tops[k], next, 1);
      b.add_probability(bots[k], next, 1);
    }
    r.branch_order.push_back(std::move(names));
  }
  b.set_initial(root);
  r.game = b.build();
  const auto size = r.game.size();

  auto set_of = [&](const std::vector<StateId>& ids) {
    StateSet s(size);
    for (auto id : ids) s.insert(id);
    return s;
  };
  auto as_reach = [&](const std::vector<StateId>& ids) { return Query::leaf(Mode::AS, Shape::Reach, set_of(ids)); };
  auto nz_reach = [&](const std::vector<StateId>& ids) { return Query::leaf(Mode::NZ, Shape::Reach, set_of(ids)); };

  std::function<Query(const Prop&)> subst = [&](const Prop& p) -> Query {
    switch (p.kind) {
      case Prop::Kind::Const: return p.value ? Query::conj({}) : Query::disj({});
      case Prop::Kind::Var: return as_reach(top[p.var]);
      case Prop::Kind::Not: return as_reach(bot[p.children[0].var]);
      case Prop::Kind::And:
      case Prop::Kind::Or: {
        std::vector<Query> cs;
        for (const auto& c : p.children) cs.push_back(subst(c));
        return p.kind == Prop::Kind::And ? Query::conj(std::move(cs)) : Query::disj(std::move(cs));
      }
    }
    return Query::conj({});
  };
  Query phi = subst(to_nnf(f.matrix));

  std::vector<Query> psi1;
  for (std::size_t j = 0; j < m; ++j) psi1.push_back(Query::disj({as_reach(top[n + j]), as_reach(bot[n + j])}));
  std::vector<Query> psi2;
  for (std::size_t x = 0; x < n; ++x) psi2.push_back(Query::conj({nz_reach(top[x]), nz_reach(bot[x])}));

  r.psi = Query::disj({Query::conj({std::move(phi), Query::conj(std::move(psi1))}), Query::disj(std::move(psi2))});
  return r;
}

}  // namespace qsg
