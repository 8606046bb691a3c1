#include "qsg/fixtures.hpp"

#include <stdexcept>

namespace qsg {

namespace {

// Player 1 picks s1 or s2; player 2 at s1 picks s3 or s4.
const char* kFig1 = R"(game fig1
state s0 p1
state s1 p2
state s2 chance
state s3 chance
state s4 chance
init s0
edge s0 s1
edge s0 s2
edge s1 s3
edge s1 s4
)";

// Player 2 picks s1 or s2; each reaches the player-1 state s3 with probability 1/2.
const char* kFig2 = R"(game fig2
state s0 p2
state s1 chance
state s2 chance
state s3 p1
state A chance
state B chance
state C chance
state D chance
init s0
edge s0 s1
edge s0 s2
prob s1 A 1/2
prob s1 s3 1/2
prob s2 B 1/2
prob s2 s3 1/2
edge s3 C
edge s3 D
)";

// Plays C after s1 was visited and D after s2 was visited.
const char* kFig2Strategy = R"(strategy p1
memory none s1 s2
initmem none
update none s1 s1
update none s2 s2
out s1 s3 C 1/1
out s2 s3 D 1/1
)";

// Player 2 picks A or B, player 1 at s1 ends in C or D or loops back through E.
const char* kFig3 = R"(game fig3
state s0 p2
state A chance
state B chance
state s1 p1
state C chance
state D chance
state E chance
state F chance
init s0
edge s0 A
edge s0 B
prob A s1 1/1
prob B s1 1/1
edge s1 C
edge s1 D
edge s1 E
prob E F 1/2
prob E s0 1/2
)";

// Loops through E until both A and B were seen, then C if A came first, else D.
const char* kFig3Strategy = R"(strategy p1
memory none A B AB BA
initmem none
update none A A
update none B B
update A B AB
update B A BA
out A s1 E 1/1
out B s1 E 1/1
out AB s1 C 1/1
out BA s1 D 1/1
)";

const char* kStay = R"(game stay
state s0 p1
state s1 chance
init s0
edge s0 s0
edge s0 s1
)";

std::vector<Fixture> build() {
  std::vector<Fixture> out;
  out.push_back({"fig1", kFig1,
                 {{"phi", "AS F {s3} | (NZ F {s2} & NZ F {s4})"},
                  {"phi_prime", "AS F {s3} | (!AS F {s3,s4} & NZ F {s4})"},
                  {"phi_dprime", "!NZ F {s2,s4} | (NZ F {s2} & NZ F {s4})"},
                  {"conj_nz", "NZ F {s2} & NZ F {s4}"},
                  {"disj_nz", "NZ F {s2} | NZ F {s4}"}},
                 ""});
  out.push_back({"fig2", kFig2,
                 {{"phi", "(NZ F {A} & NZ F {B}) | (AS F {B,D} & NZ F {D}) | (AS F {A,C} & NZ F {C})"},
                  {"phi_literal",
                   "(NZ F {A} & NZ F {B}) | (AS F {A,B,D} & NZ F {D}) | (AS F {A,B,C} & NZ F {C})"}},
                 kFig2Strategy});
  out.push_back({"fig3", kFig3,
                 {{"phi",
                   "(AS F {A} & NZ F {B} & NZ F {C} & AS G ~{D}) | "
                   "(NZ F {A} & AS F {B} & AS G ~{C} & NZ F {D}) | "
                   "(NZ G ~{A} & NZ G ~{B}) | "
                   "(AS F {F} & (AS G ~{A} | AS G ~{B}))"},
                  {"phi1", "AS F {A} & NZ F {B} & NZ F {C} & AS G ~{D}"},
                  {"phi2", "NZ F {A} & AS F {B} & AS G ~{C} & NZ F {D}"},
                  {"phi3", "NZ G ~{A} & NZ G ~{B}"},
                  {"phi4", "AS F {F} & (AS G ~{A} | AS G ~{B})"}},
                 kFig3Strategy});
  out.push_back({"stay", kStay, {{"phi", "NZ G {s0}"}}, ""});
  return out;
}

const std::vector<Fixture>& all() {
  static const std::vector<Fixture> fixtures = build();
  return fixtures;
}

}  // namespace

const std::string& Fixture::query(std::string_view label) const {
  for (const auto& [l, q] : queries) {
    if (l == label) return q;
  }
  throw std::out_of_range("fixture " + name + " has no query '" + std::string(label) + "'");
}

const Fixture& fixture(std::string_view name) {
  for (const auto& f : all()) {
    if (f.name == name) return f;
  }
  throw std::out_of_range("unknown fixture '" + std::string(name) + "' (fig1|fig2|fig3|stay)");
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& f : all()) out.push_back(f.name);
  return out;
}

StrategyAutomaton stay_counter_strategy(const StochasticGame& stay, unsigned k) {
  const StateId s0 = stay.at("s0");
  const StateId s1 = stay.at("s1");
  StrategyAutomaton s;
  s.player = Player::P1;
  s.memory.clear();
  for (unsigned i = 0; i <= k; ++i) s.memory.push_back("c" + std::to_string(i));
  for (std::uint32_t i = 0; i < k; ++i) {
    s.update[{i, s0}] = i + 1;
    s.output[{i, s0}] = {{s0, Rational(1, 2)}, {s1, Rational(1, 2)}};
  }
  s.output[{k, s0}] = {{s0, Rational(1)}};
  return s;
}

}  // namespace qsg
