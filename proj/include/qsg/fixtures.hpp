#pragma once

#include "qsg/game.hpp"
#include "qsg/strategy.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qsg {

/// Built-in example games with their queries and reference strategies.
struct Fixture {
  std::string name;
  std::string game_text;
  /// (label, query in DSL syntax), the main query first.
  std::vector<std::pair<std::string, std::string>> queries;
  /// Reference player-1 strategy in the strategy file format, if any.
  std::string strategy_text;

  StochasticGame game() const { return parse_game(game_text); }
  const std::string& query(std::string_view label) const;
};

/// fig1, fig2, fig3 and stay (the two-state stay-or-exit game).
const Fixture& fixture(std::string_view name);
std::vector<std::string> fixture_names();

/// In the stay game: randomize between staying and exiting for k steps, then stay forever.
StrategyAutomaton stay_counter_strategy(const StochasticGame& stay, unsigned k);

}  // namespace qsg
