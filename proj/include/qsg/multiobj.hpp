#pragma once

#include "qsg/game.hpp"
#include "qsg/query.hpp"
#include "qsg/unfold.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qsg {

enum class Winner : std::uint8_t { Player1, Player2, Unknown };
std::string_view to_string(Winner w);

/// Leaf test of the product search. NzGoal: the NZ bit is set (inside the
/// almost-sure region). AllBits: every tracked bit is set.
enum class LeafRule : std::uint8_t { NzGoal, AllBits };

struct SolverOptions {
  std::size_t max_targets = 16;       ///< AS reachability targets per conjunction
  std::size_t max_product = Unfolding::kDefaultMaxNodes;
  std::size_t max_dnf_terms = 4096;
  LeafRule leaf_rule = LeafRule::NzGoal;
  /// Also decide each product reachability game by attractor and fail on disagreement.
  bool cross_check = false;
};

using Evidence = std::vector<std::pair<std::string, std::string>>;

struct SolveResult {
  Winner winner = Winner::Unknown;
  FragmentClass fragment = FragmentClass::General;
  Evidence evidence;
};

/// Conjunction of NZ atoms: won iff every atom is won on its own.
SolveResult solve_conj_nz(const StochasticGame& g, const std::vector<Atom>& atoms);

/// Target T' whose almost-sure reachability is equivalent to reaching every T_i almost surely.
StateSet conj_as_reach_target(const StochasticGame& g, const std::vector<StateSet>& targets,
                              const SolverOptions& opts = {});
/// Winning region of the conjunction of AS F T_i.
StateSet conj_as_reach_region(const StochasticGame& g, const std::vector<StateSet>& targets,
                              const SolverOptions& opts = {});
SolveResult solve_conj_as_reach(const StochasticGame& g, const std::vector<StateSet>& targets,
                                const SolverOptions& opts = {});

/// NZ F nz_target together with AS F of every as_target.
SolveResult solve_conj_as_one_nz_reach(const StochasticGame& g, const StateSet& nz_target,
                                       const std::vector<StateSet>& as_targets,
                                       const SolverOptions& opts = {});

/// Product nodes from which NZ G (bit 0 clear) is won and all bits in as_mask are set.
/// `product` must be unfolding.to_game().
StateSet nz_safe_to_reach(const StochasticGame& product, const Unfolding& unfolding,
                          std::uint64_t as_mask);

/// NZ G safe_target together with AS F of every as_target.
SolveResult solve_conj_as_one_nz_safe(const StochasticGame& g, const StateSet& safe_target,
                                      const std::vector<StateSet>& as_targets,
                                      const SolverOptions& opts = {});

/// Pure conjunction of atoms of any kind.
SolveResult solve_conjunction(const StochasticGame& g, const std::vector<Atom>& atoms,
                              const SolverOptions& opts = {});

/// Positive Boolean combination of AS atoms, decided term by term on its DNF.
SolveResult solve_positive_as(const StochasticGame& g, const Query& q, const SolverOptions& opts = {});

/// Entry point: normalizes, classifies and dispatches. Unknown for the
/// undetermined fragments.
SolveResult solve(const StochasticGame& g, const Query& q, const SolverOptions& opts = {});

}  // namespace qsg
