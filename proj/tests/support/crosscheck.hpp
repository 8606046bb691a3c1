#pragma once

#include "qsg/multiobj.hpp"
#include "qsg/oracle.hpp"

#include "support/generators.hpp"

namespace qsg::testing {

/// Oracle answer in the randomized visited-set class for both players.
inline Winner oracle_winner(const StochasticGame& g, const Query& q, const OracleOptions& opts = {}) {
  auto cls = StrategyClass::visited_set();
  auto v = brute_force_winner(g, q, cls, cls, opts);
  switch (v.outcome) {
    case OracleOutcome::Player1WinsInClass: return Winner::Player1;
    case OracleOutcome::Player2WinsInClass: return Winner::Player2;
    default: return Winner::Unknown;
  }
}

inline Winner flip(Winner w) {
  return w == Winner::Player1 ? Winner::Player2 : w == Winner::Player2 ? Winner::Player1 : w;
}

/// Seeded instance of the determined-fragment corpus; the family cycles with the seed.
struct Instance {
  StochasticGame game;
  Family family;
  Query query;
};

inline Instance corpus_instance(unsigned seed) {
  std::mt19937 rng(seed);
  auto g = random_game(rng);
  auto f = static_cast<Family>(seed % 4);
  auto q = random_query(rng, g, f);
  return {std::move(g), f, std::move(q)};
}

}  // namespace qsg::testing
