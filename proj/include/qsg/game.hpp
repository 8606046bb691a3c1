#pragma once

#include "qsg/state_set.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsg {

using Rational = boost::multiprecision::cpp_rational;

enum class Owner : std::uint8_t { P1, P2, Chance };
enum class Player : std::uint8_t { P1, P2 };

inline Player opponent(Player p) { return p == Player::P1 ? Player::P2 : Player::P1; }
inline bool owned_by(Owner o, Player p) {
  return (o == Owner::P1 && p == Player::P1) || (o == Owner::P2 && p == Player::P2);
}

std::string_view to_string(Owner o);
std::string_view to_string(Player p);
std::string to_string(const Rational& r);

/// Turn-based stochastic game with player-1, player-2 and chance states.
///
/// Immutable once built. Successor lists are sorted by canonical state order
/// (declaration order); for chance states the parallel probability list holds
/// exact rationals summing to one.
class StochasticGame {
 public:
  std::size_t size() const { return names_.size(); }
  const std::string& title() const { return title_; }
  const std::string& name(StateId s) const { return names_[s]; }
  Owner owner(StateId s) const { return owners_[s]; }
  StateId initial() const { return init_; }

  std::span<const StateId> successors(StateId s) const { return succ_[s]; }
  /// Probabilities parallel to successors(s); empty for player states.
  std::span<const Rational> probabilities(StateId s) const { return prob_[s]; }

  std::optional<StateId> find(std::string_view name) const;
  StateId at(std::string_view name) const;

  StateSet empty_set() const { return StateSet(size()); }
  StateSet all_states() const { return StateSet::full(size()); }
  StateSet set_of(std::initializer_list<std::string_view> names) const;

  bool is_terminal(StateId s) const { return succ_[s].size() == 1 && succ_[s][0] == s; }

  /// Diagnostics recorded while building (e.g. auto-completed self-loops).
  const std::vector<std::string>& notes() const { return notes_; }

  std::string format_set(const StateSet& set) const;

  friend bool operator==(const StochasticGame&, const StochasticGame&);
  friend StochasticGame with_initial(const StochasticGame& g, StateId s);

 private:
  friend class GameBuilder;
  std::string title_;
  std::vector<std::string> names_;
  std::vector<Owner> owners_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<std::vector<Rational>> prob_;
  std::vector<std::string> notes_;
  StateId init_ = 0;
};

/// Incremental construction with validation in build().
class GameBuilder {
 public:
  explicit GameBuilder(std::string title = "game") : title_(std::move(title)) {}

  StateId add_state(std::string name, Owner owner);
  void add_edge(StateId from, StateId to);
  void add_probability(StateId from, StateId to, Rational p);
  void set_initial(StateId s) { init_ = s; }
  std::optional<StateId> find(std::string_view name) const;
  std::size_t size() const { return names_.size(); }

  /// Validates and freezes the game. States without outgoing transitions get a
  /// self-loop (a note is recorded for each).
  StochasticGame build();

 private:
  std::string title_;
  std::vector<std::string> names_;
  std::vector<Owner> owners_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<std::vector<std::pair<StateId, Rational>>> prob_;
  std::optional<StateId> init_;
};

/// Parses the line-based game format (game/state/init/edge/prob directives,
/// one per line or separated by ";").
StochasticGame parse_game(std::string_view text);
StochasticGame parse_game(std::istream& in);

/// Copy of g that starts in s.
StochasticGame with_initial(const StochasticGame& g, StateId s);

/// Writes a game in the format accepted by parse_game; self-loops are explicit.
void write_game(std::ostream& out, const StochasticGame& g);
std::string format_game(const StochasticGame& g);

/// Result of restricting a game to a subset of its states.
struct RestrictedGame {
  StochasticGame game;
  std::vector<std::optional<StateId>> embed;  ///< original id -> restricted id
  StateId sink = 0;

  /// Maps a set of original states into the restricted game (T intersected with U).
  StateSet map_set(const StateSet& original) const;
};

/// Restriction G|U: states of U plus a fresh terminal sink absorbing every
/// transition that leaves U.
RestrictedGame restrict(const StochasticGame& g, const StateSet& keep);

}  // namespace qsg
