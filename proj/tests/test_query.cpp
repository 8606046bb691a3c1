#include "qsg/errors.hpp"
#include "qsg/fixtures.hpp"
#include "qsg/query.hpp"

#include <doctest.h>

using namespace qsg;

namespace {

Atom atom(Mode m, Shape s, StateSet t) { return Atom{m, s, std::move(t)}; }

}  // namespace

TEST_SUITE("query_lang") {

TEST_CASE("fig1 phi parses with & binding tighter than |") {
  auto g = fixture("fig1").game();
  auto q = parse_query("AS F {s3} | (NZ F {s2} & NZ F {s4})", g);
  auto expect = Query::disj({Query::leaf(Mode::AS, Shape::Reach, g.set_of({"s3"})),
                             Query::conj({Query::leaf(Mode::NZ, Shape::Reach, g.set_of({"s2"})),
                                          Query::leaf(Mode::NZ, Shape::Reach, g.set_of({"s4"}))})});
  CHECK(q == expect);
  CHECK(parse_query("AS F {s3} | NZ F {s2} & NZ F {s4}", g) == expect);
  CHECK(format_query(q, g) == "AS F {s3} | NZ F {s2} & NZ F {s4}");
}

TEST_CASE("complement and negation syntax") {
  auto g = fixture("fig3").game();
  auto q = parse_query("AS G ~{D}", g);
  REQUIRE(q.is_atom());
  CHECK(q.atom == atom(Mode::AS, Shape::Safe, g.all_states() - g.set_of({"D"})));
  CHECK(format_query(q, g) == "AS G ~{D}");
  auto n = parse_query("!(NZ F {A})", g);
  REQUIRE(n.kind == Query::Kind::Not);
  CHECK(n.children.front() == Query::leaf(Mode::NZ, Shape::Reach, g.set_of({"A"})));
  CHECK(parse_query("NZ F {}", g).atom.target.empty());
  CHECK(parse_query("!!AS F {A}", g).children.front().kind == Query::Kind::Not);
}

TEST_CASE("query parse errors") {
  auto g = fixture("fig1").game();
  CHECK_THROWS_WITH_AS(parse_query("AS F {zz}", g), doctest::Contains("unknown state"), ParseError);
  CHECK_THROWS_WITH_AS(parse_query("", g), doctest::Contains("empty formula"), ParseError);
  CHECK_THROWS_WITH_AS(parse_query("(AS F {s2}", g), doctest::Contains("unbalanced"), ParseError);
  CHECK_THROWS_AS(parse_query("AS F {s2})", g), ParseError);
  CHECK_THROWS_AS(parse_query("XX F {s2}", g), ParseError);
  CHECK_THROWS_AS(parse_query("AS Q {s2}", g), ParseError);
  CHECK_THROWS_AS(parse_query("AS F {s2} &", g), ParseError);
}

TEST_CASE("negation dualities") {
  auto g = fixture("fig1").game();
  auto q = negate_normalize(parse_query("!AS F {s3}", g));
  REQUIRE(q.is_atom());
  CHECK(q.atom == atom(Mode::NZ, Shape::Safe, g.set_of({"s0", "s1", "s2", "s4"})));
  auto T = g.set_of({"s2"});
  CHECK(negate(atom(Mode::AS, Shape::Safe, T)) == atom(Mode::NZ, Shape::Reach, T.complement()));
  CHECK(negate(atom(Mode::NZ, Shape::Reach, T)) == atom(Mode::AS, Shape::Safe, T.complement()));
  CHECK(negate(atom(Mode::NZ, Shape::Safe, T)) == atom(Mode::AS, Shape::Reach, T.complement()));
}

TEST_CASE("positive queries are unchanged by normalization") {
  auto g = fixture("fig3").game();
  auto q = parse_query(fixture("fig3").query("phi"), g);
  CHECK(negate_normalize(q) == q);
}

TEST_CASE("De Morgan over a conjunction") {
  auto g = parse_game("state A p1\nstate B p2\nstate C chance\ninit A\n");
  auto q = negate_normalize(parse_query("!(AS F {A} & NZ F {B})", g));
  auto expect = Query::disj({Query::leaf(Mode::NZ, Shape::Safe, g.set_of({"B", "C"})),
                             Query::leaf(Mode::AS, Shape::Safe, g.set_of({"A", "C"}))});
  CHECK(q == expect);
}

TEST_CASE("double negation normalizes to the same query") {
  auto g = fixture("fig3").game();
  for (const auto& [label, text] : fixture("fig3").queries) {
    auto q = parse_query(text, g);
    CHECK(negate_normalize(Query::negation(Query::negation(q))) == negate_normalize(q));
    CHECK(dual(dual(q)) == negate_normalize(q));
  }
}

TEST_CASE("classification") {
  auto g = fixture("fig1").game();
  auto cls = [&](const char* text) { return classify(parse_query(text, g)); };
  CHECK(cls("NZ F {s2}") == FragmentClass::SingleObjective);
  CHECK(cls("NZ F {s2} & NZ F {s4}") == FragmentClass::ConjunctionASNZ);
  CHECK(cls("NZ F {s2} | AS G {s4}") == FragmentClass::DisjunctionASNZ);
  CHECK(cls("AS F {s2} | (AS G {s4} & AS F {s3})") == FragmentClass::PositiveAS);
  CHECK(cls("NZ F {s2} & (NZ G {s4} | NZ F {s3})") == FragmentClass::PositiveNZ);
  CHECK(cls("AS F {s3} | (NZ F {s2} & NZ F {s4})") == FragmentClass::GeneralNoNZSafe);
  CHECK(cls("AS F {s3} | (NZ G {s2} & NZ F {s4})") == FragmentClass::General);
  // A two-atom disjunction of AS atoms is already a pure disjunction.
  CHECK(cls("AS F {s2} | AS G {s3}") == FragmentClass::DisjunctionASNZ);
  auto f3 = fixture("fig3").game();
  CHECK(classify(parse_query(fixture("fig3").query("phi"), f3)) == FragmentClass::General);
  CHECK(classify(Query::conj({})) == FragmentClass::ConjunctionASNZ);
}

TEST_CASE("dual swaps the determined classes") {
  auto g = fixture("fig1").game();
  auto dual_cls = [&](const char* text) { return classify(dual(parse_query(text, g))); };
  CHECK(dual_cls("NZ F {s2} & AS G {s4}") == FragmentClass::DisjunctionASNZ);
  CHECK(dual_cls("NZ F {s2} | AS G {s4}") == FragmentClass::ConjunctionASNZ);
  CHECK(dual_cls("AS F {s2} | (AS G {s4} & AS F {s3})") == FragmentClass::PositiveNZ);
  CHECK(dual_cls("NZ F {s2} & (NZ G {s4} | NZ F {s3})") == FragmentClass::PositiveAS);
  CHECK(is_determined(FragmentClass::PositiveNZ));
  CHECK_FALSE(is_determined(FragmentClass::GeneralNoNZSafe));
}

TEST_CASE("DNF") {
  auto g = fixture("fig3").game();
  auto a = Query::leaf(Mode::AS, Shape::Reach, g.set_of({"A"}));
  auto b = Query::leaf(Mode::AS, Shape::Reach, g.set_of({"B"}));
  auto c = Query::leaf(Mode::AS, Shape::Reach, g.set_of({"C"}));
  auto d = to_dnf(Query::conj({Query::disj({a, b}), c}));
  CHECK(d == Query::disj({Query::conj({a, c}), Query::conj({b, c})}));
  CHECK(to_dnf_terms(a) == Dnf{{a.atom}});
  auto phi4 = to_dnf(parse_query(fixture("fig3").query("phi4"), g));
  CHECK(format_query(phi4, g) == "AS F {F} & AS G ~{A} | AS F {F} & AS G ~{B}");
  CHECK(to_dnf_terms(Query::conj({a, a, b})) == Dnf{{a.atom, b.atom}});
  CHECK(to_dnf_terms(Query::disj({a, a})) == Dnf{{a.atom}});
  CHECK(to_dnf_terms(Query::disj({})).empty());
  CHECK(to_dnf_terms(Query::conj({})) == Dnf{{}});
}

TEST_CASE("DNF keeps the all-AS attribute and respects the term cap") {
  auto g = fixture("fig3").game();
  auto q = parse_query("(AS F {A} | AS F {B}) & (AS F {C} | AS F {D}) & (AS G ~{E} | AS F {F})", g);
  auto d = to_dnf(q);
  CHECK(classify(d) == FragmentClass::PositiveAS);
  CHECK(to_dnf_terms(q).size() == 8);
  CHECK_THROWS_AS(to_dnf_terms(q, 4), ResourceError);
}

TEST_CASE("simplify flattens and drops neutral constants") {
  auto g = fixture("fig1").game();
  auto a = Query::leaf(Mode::NZ, Shape::Reach, g.set_of({"s2"}));
  auto b = Query::leaf(Mode::NZ, Shape::Reach, g.set_of({"s4"}));
  CHECK(simplify(Query::conj({Query::conj({a}), Query::conj({}), b})) == Query::conj({a, b}));
  CHECK(format_query(Query::conj({}), g) == "AS G ~{}");
  CHECK(format_query(Query::disj({}), g) == "NZ F {}");
}

}  // TEST_SUITE
