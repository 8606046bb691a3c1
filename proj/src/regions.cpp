#include "qsg/regions.hpp"

#include <deque>

namespace qsg {

StateSet attractor(const StochasticGame& g, const StateSet& target, const StateSet& within,
                   Sides sides) {
  const auto n = g.size();
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s) {
    for (StateId t : g.successors(s)) pred[t].push_back(s);
  }
  // For universal states: number of successors not yet known to be in the attractor.
  std::vector<std::size_t> missing(n);
  for (StateId s = 0; s < n; ++s) missing[s] = g.successors(s).size();

  StateSet attr(n);
  std::deque<StateId> work;
  target.for_each([&](StateId s) {
    if (within.contains(s)) {
      attr.insert(s);
      work.push_back(s);
    }
  });
  while (!work.empty()) {
    StateId t = work.front();
    work.pop_front();
    for (StateId s : pred[t]) {
      if (attr.contains(s) || !within.contains(s)) continue;
      bool joins = sides.existential(g.owner(s)) || --missing[s] == 0;
      if (joins) {
        attr.insert(s);
        work.push_back(s);
      }
    }
  }
  return attr;
}

StateSet attractor(const StochasticGame& g, const StateSet& target, Sides sides) {
  return attractor(g, target, g.all_states(), sides);
}

namespace {
Sides player_side(Player p) { return {p == Player::P1, p == Player::P2, true}; }
}  // namespace

StateSet nz_reach_region(const StochasticGame& g, const StateSet& target, Player player) {
  return attractor(g, target, player_side(player));
}

StateSet as_safe_region(const StochasticGame& g, const StateSet& target, Player player) {
  return attractor(g, target.complement(), player_side(opponent(player))).complement();
}

StateSet as_reach_region(const StochasticGame& g, const StateSet& target, Player player) {
  const auto all = g.all_states();
  StateSet w = all;
  for (std::size_t round = 0; round <= g.size(); ++round) {
    StateSet reach = attractor(g, target & w, w, player_side(player));
    if (reach == w) return w;
    StateSet bad = (all - w) | (w - reach);
    // Plays that reached the target are won, so the opponent cannot pull target states out.
    w = attractor(g, bad, all - target, player_side(opponent(player))).complement();
  }
  return w;
}

StateSet nz_safe_region(const StochasticGame& g, const StateSet& target, Player player) {
  return as_reach_region(g, target.complement(), opponent(player)).complement();
}

StateSet single_region(const StochasticGame& g, Mode mode, Shape shape, const StateSet& target,
                       Player player) {
  if (mode == Mode::NZ) {
    return shape == Shape::Reach ? nz_reach_region(g, target, player)
                                 : nz_safe_region(g, target, player);
  }
  return shape == Shape::Reach ? as_reach_region(g, target, player) : as_safe_region(g, target, player);
}

StochasticGame swap_players(const StochasticGame& g) {
  GameBuilder b(g.title());
  for (StateId s = 0; s < g.size(); ++s) {
    Owner o = g.owner(s);
    if (o == Owner::P1) o = Owner::P2;
    else if (o == Owner::P2) o = Owner::P1;
    b.add_state(g.name(s), o);
  }
  for (StateId s = 0; s < g.size(); ++s) {
    auto succ = g.successors(s);
    if (g.owner(s) == Owner::Chance) {
      auto prob = g.probabilities(s);
      for (std::size_t i = 0; i < succ.size(); ++i) b.add_probability(s, succ[i], prob[i]);
    } else {
      for (StateId t : succ) b.add_edge(s, t);
    }
  }
  b.set_initial(g.initial());
  return b.build();
}

}  // namespace qsg
