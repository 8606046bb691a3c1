#pragma once

#include "qsg/game.hpp"
#include "qsg/query.hpp"

namespace qsg {

/// Which owners pick a successor (existential) in an attractor computation.
/// States of the other owners must have all successors in the attractor.
struct Sides {
  bool p1 = true;
  bool p2 = false;
  bool chance = true;

  bool existential(Owner o) const {
    return o == Owner::P1 ? p1 : o == Owner::P2 ? p2 : chance;
  }
};

/// Least fixpoint from `target` inside `within`: a state of `within` joins if it is
/// existential and has a successor in the set, or universal and all its
/// successors are in the set. Successors outside `within` never count.
StateSet attractor(const StochasticGame& g, const StateSet& target, const StateSet& within,
                   Sides sides);
StateSet attractor(const StochasticGame& g, const StateSet& target, Sides sides);

/// States from which `player` wins the atom (Mode, Shape, T).
StateSet single_region(const StochasticGame& g, Mode mode, Shape shape, const StateSet& target,
                       Player player = Player::P1);
inline StateSet single_region(const StochasticGame& g, const Atom& a, Player player = Player::P1) {
  return single_region(g, a.mode, a.shape, a.target, player);
}

StateSet nz_reach_region(const StochasticGame& g, const StateSet& target, Player player = Player::P1);
StateSet as_safe_region(const StochasticGame& g, const StateSet& target, Player player = Player::P1);
StateSet as_reach_region(const StochasticGame& g, const StateSet& target, Player player = Player::P1);
StateSet nz_safe_region(const StochasticGame& g, const StateSet& target, Player player = Player::P1);

/// Exchanges P1 and P2 ownership; chance states are untouched.
StochasticGame swap_players(const StochasticGame& g);

}  // namespace qsg
