#include "qsg/query.hpp"

#include "qsg/errors.hpp"

#include <algorithm>
#include <cctype>

namespace qsg {

Atom negate(const Atom& a) {
  Atom r;
  r.mode = a.mode == Mode::AS ? Mode::NZ : Mode::AS;
  r.shape = a.shape == Shape::Reach ? Shape::Safe : Shape::Reach;
  r.target = a.target.complement();
  return r;
}

Query Query::leaf(qsg::Atom a) {
  Query q;
  q.kind = Kind::Atom;
  q.atom = std::move(a);
  return q;
}

Query Query::leaf(Mode m, Shape s, StateSet target) { return leaf(qsg::Atom{m, s, std::move(target)}); }

Query Query::conj(std::vector<Query> cs) {
  Query q;
  q.kind = Kind::And;
  q.children = std::move(cs);
  return q;
}

Query Query::disj(std::vector<Query> cs) {
  Query q;
  q.kind = Kind::Or;
  q.children = std::move(cs);
  return q;
}

Query Query::negation(Query c) {
  Query q;
  q.kind = Kind::Not;
  q.children.push_back(std::move(c));
  return q;
}

std::string_view to_string(FragmentClass f) {
  switch (f) {
    case FragmentClass::SingleObjective: return "SingleObjective";
    case FragmentClass::ConjunctionASNZ: return "ConjunctionASNZ";
    case FragmentClass::DisjunctionASNZ: return "DisjunctionASNZ";
    case FragmentClass::PositiveAS: return "PositiveAS";
    case FragmentClass::PositiveNZ: return "PositiveNZ";
    case FragmentClass::GeneralNoNZSafe: return "GeneralNoNZSafe";
    case FragmentClass::General: return "General";
  }
  return "?";
}

bool is_determined(FragmentClass f) {
  return f != FragmentClass::GeneralNoNZSafe && f != FragmentClass::General;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class QueryParser {
 public:
  QueryParser(std::string_view text, const StochasticGame& g) : text_(text), g_(g) {}

  Query parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty formula");
    Query q = parse_or();
    skip_ws();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') fail("unbalanced parentheses");
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("query: " + msg + " at offset " + std::to_string(pos_));
  }

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

  static bool id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' ||
           c == '-';
  }

  std::string identifier() {
    skip_ws();
    auto start = pos_;
    while (pos_ < text_.size() && id_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(pos_ == text_.size() ? "unexpected end of formula" : "expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  Query parse_or() {
    std::vector<Query> parts{parse_and()};
    while (accept('|')) parts.push_back(parse_and());
    return parts.size() == 1 ? std::move(parts[0]) : Query::disj(std::move(parts));
  }

  Query parse_and() {
    std::vector<Query> parts{parse_unary()};
    while (accept('&')) parts.push_back(parse_unary());
    return parts.size() == 1 ? std::move(parts[0]) : Query::conj(std::move(parts));
  }

  Query parse_unary() {
    if (accept('!')) return Query::negation(parse_unary());
    if (accept('(')) {
      Query q = parse_or();
      if (!accept(')')) fail("unbalanced parentheses");
      return q;
    }
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ')') fail("unbalanced parentheses");
    return parse_atom();
  }

  Query parse_atom() {
    auto m = identifier();
    Mode mode;
    if (m == "AS") mode = Mode::AS;
    else if (m == "NZ") mode = Mode::NZ;
    else fail("expected AS or NZ, got '" + m + "'");
    auto s = identifier();
    Shape shape;
    if (s == "F") shape = Shape::Reach;
    else if (s == "G") shape = Shape::Safe;
    else fail("expected F or G, got '" + s + "'");
    return Query::leaf(mode, shape, parse_set());
  }

  StateSet parse_set() {
    bool complement = accept('~');
    if (!accept('{')) fail("expected '{'");
    StateSet set(g_.size());
    if (!accept('}')) {
      do {
        auto id = identifier();
        auto s = g_.find(id);
        if (!s) fail("unknown state '" + id + "'");
        set.insert(*s);
      } while (accept(','));
      if (!accept('}')) fail("expected '}'");
    }
    return complement ? set.complement() : set;
  }

  std::string_view text_;
  const StochasticGame& g_;
  std::size_t pos_ = 0;
};

}  // namespace

Query parse_query(std::string_view text, const StochasticGame& g) { return QueryParser(text, g).parse(); }

// ---------------------------------------------------------------------------
// Printing

std::string format_atom(const Atom& a, const StochasticGame& g) {
  std::string out = a.mode == Mode::AS ? "AS " : "NZ ";
  out += a.shape == Shape::Reach ? "F " : "G ";
  auto comp = a.target.complement();
  if (comp.count() < a.target.count()) return out + "~" + g.format_set(comp);
  return out + g.format_set(a.target);
}

namespace {

// Binding strength: Or 0, And 1, Not/Atom 2.
void print(const Query& q, const StochasticGame& g, int context, std::string& out) {
  switch (q.kind) {
    case Query::Kind::Atom:
      out += format_atom(q.atom, g);
      return;
    case Query::Kind::Not:
      out += '!';
      print(q.children[0], g, 2, out);
      return;
    case Query::Kind::And:
    case Query::Kind::Or: {
      const bool is_and = q.kind == Query::Kind::And;
      if (q.children.empty()) {
        out += is_and ? "AS G ~{}" : "NZ F {}";
        return;
      }
      if (q.children.size() == 1) {
        print(q.children[0], g, context, out);
        return;
      }
      const int own = is_and ? 1 : 0;
      if (context > own) out += '(';
      for (std::size_t i = 0; i < q.children.size(); ++i) {
        if (i) out += is_and ? " & " : " | ";
        print(q.children[i], g, own + 1, out);
      }
      if (context > own) out += ')';
      return;
    }
  }
}

}  // namespace

std::string format_query(const Query& q, const StochasticGame& g) {
  std::string out;
  print(q, g, 0, out);
  return out;
}

// ---------------------------------------------------------------------------

bool is_positive(const Query& q) {
  if (q.kind == Query::Kind::Not) return false;
  return std::all_of(q.children.begin(), q.children.end(), is_positive);
}

namespace {
void collect(const Query& q, std::vector<Atom>& out) {
  if (q.is_atom()) {
    out.push_back(q.atom);
    return;
  }
  for (const auto& c : q.children) collect(c, out);
}
}  // namespace

std::vector<Atom> atoms(const Query& q) {
  std::vector<Atom> out;
  collect(q, out);
  return out;
}

bool contains_nz_safe(const Query& q) {
  auto as = atoms(q);
  return std::any_of(as.begin(), as.end(),
                     [](const Atom& a) { return a.mode == Mode::NZ && a.shape == Shape::Safe; });
}

namespace {
Query normalize(const Query& q, bool negated) {
  switch (q.kind) {
    case Query::Kind::Atom:
      return negated ? Query::leaf(negate(q.atom)) : q;
    case Query::Kind::Not:
      return normalize(q.children[0], !negated);
    case Query::Kind::And:
    case Query::Kind::Or: {
      std::vector<Query> cs;
      cs.reserve(q.children.size());
      for (const auto& c : q.children) cs.push_back(normalize(c, negated));
      const bool is_and = (q.kind == Query::Kind::And) != negated;
      return is_and ? Query::conj(std::move(cs)) : Query::disj(std::move(cs));
    }
  }
  return q;
}

bool only_kind(const Query& q, Query::Kind k) {
  if (q.is_atom()) return true;
  if (q.kind != k) return false;
  return std::all_of(q.children.begin(), q.children.end(),
                     [k](const Query& c) { return only_kind(c, k); });
}
}  // namespace

Query negate_normalize(const Query& q) { return normalize(q, false); }

Query dual(const Query& q) { return normalize(q, true); }

FragmentClass classify(const Query& query) {
  const Query q = is_positive(query) ? query : negate_normalize(query);
  if (q.is_atom()) return FragmentClass::SingleObjective;
  if (only_kind(q, Query::Kind::And)) return FragmentClass::ConjunctionASNZ;
  if (only_kind(q, Query::Kind::Or)) return FragmentClass::DisjunctionASNZ;
  auto as = atoms(q);
  auto all = [&](Mode m) {
    return std::all_of(as.begin(), as.end(), [m](const Atom& a) { return a.mode == m; });
  };
  if (all(Mode::AS)) return FragmentClass::PositiveAS;
  if (all(Mode::NZ)) return FragmentClass::PositiveNZ;
  return contains_nz_safe(q) ? FragmentClass::General : FragmentClass::GeneralNoNZSafe;
}

// ---------------------------------------------------------------------------
// DNF

namespace {

void add_term(Dnf& out, std::vector<Atom> term, std::size_t max_terms) {
  std::vector<Atom> dedup;
  for (auto& a : term) {
    if (std::find(dedup.begin(), dedup.end(), a) == dedup.end()) dedup.push_back(std::move(a));
  }
  if (std::find(out.begin(), out.end(), dedup) != out.end()) return;
  if (out.size() >= max_terms) {
    throw ResourceError("DNF exceeds " + std::to_string(max_terms) + " terms (raise --max-dnf-terms)");
  }
  out.push_back(std::move(dedup));
}

Dnf dnf(const Query& q, std::size_t max_terms) {
  switch (q.kind) {
    case Query::Kind::Atom:
      return {{q.atom}};
    case Query::Kind::Not:
      throw std::invalid_argument("to_dnf expects a positive-form query");
    case Query::Kind::Or: {
      Dnf out;
      for (const auto& c : q.children) {
        for (auto& t : dnf(c, max_terms)) add_term(out, std::move(t), max_terms);
      }
      return out;
    }
    case Query::Kind::And: {
      Dnf acc{{}};
      for (const auto& c : q.children) {
        Dnf rhs = dnf(c, max_terms);
        Dnf next;
        for (const auto& l : acc) {
          for (const auto& r : rhs) {
            auto t = l;
            t.insert(t.end(), r.begin(), r.end());
            add_term(next, std::move(t), max_terms);
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

Dnf to_dnf_terms(const Query& q, std::size_t max_terms) { return dnf(q, max_terms); }

Query to_dnf(const Query& q, std::size_t max_terms) {
  auto terms = dnf(q, max_terms);
  std::vector<Query> disjuncts;
  for (auto& t : terms) {
    if (t.size() == 1) {
      disjuncts.push_back(Query::leaf(std::move(t[0])));
      continue;
    }
    std::vector<Query> cs;
    for (auto& a : t) cs.push_back(Query::leaf(std::move(a)));
    disjuncts.push_back(Query::conj(std::move(cs)));
  }
  if (disjuncts.size() == 1) return std::move(disjuncts[0]);
  return Query::disj(std::move(disjuncts));
}

Query simplify(const Query& q) {
  if (q.kind == Query::Kind::Atom) return q;
  if (q.kind == Query::Kind::Not) return Query::negation(simplify(q.children[0]));
  const auto k = q.kind;
  const auto absorbing = k == Query::Kind::And ? Query::Kind::Or : Query::Kind::And;
  std::vector<Query> cs;
  for (const auto& c0 : q.children) {
    Query c = simplify(c0);
    if (c.kind == k) {
      for (auto& gc : c.children) cs.push_back(std::move(gc));
    } else if (c.kind == absorbing && c.children.empty()) {
      return c;
    } else {
      cs.push_back(std::move(c));
    }
  }
  if (cs.size() == 1) return std::move(cs[0]);
  Query out;
  out.kind = k;
  out.children = std::move(cs);
  return out;
}

}  // namespace qsg
