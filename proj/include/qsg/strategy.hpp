#pragma once

#include "qsg/game.hpp"
#include "qsg/query.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qsg {

using Distribution = std::vector<std::pair<StateId, Rational>>;

/// Finite-memory strategy with deterministic memory update.
///
/// Convention: the decision at state s uses the memory reached after the
/// history strictly before s; update(m, s) is applied when the play leaves s.
/// Missing update entries keep the memory unchanged. Missing output entries
/// mean the uniform distribution over all successors.
struct StrategyAutomaton {
  Player player = Player::P1;
  std::vector<std::string> memory{"m0"};
  std::uint32_t initial_memory = 0;
  std::map<std::pair<std::uint32_t, StateId>, std::uint32_t> update;
  std::map<std::pair<std::uint32_t, StateId>, Distribution> output;

  std::uint32_t next_memory(std::uint32_t m, StateId s) const;
  Distribution decide(const StochasticGame& g, std::uint32_t m, StateId s) const;
  std::uint32_t memory_index(std::string_view label) const;

  /// Memoryless strategy playing the given successor sets uniformly; states not listed are uniform.
  static StrategyAutomaton uniform_memoryless(const StochasticGame& g, Player p,
                                              const std::map<StateId, StateSet>& supports);
};

Distribution uniform(const std::vector<StateId>& support);

/// Throws ParseError when the automaton does not fit the game (support outside
/// the successor set, mass not one, unknown memory, distribution on a foreign state).
void validate_strategy(const StochasticGame& g, const StrategyAutomaton& s);

/// Line-based format: strategy/memory/initmem/update/out directives,
/// separated by newlines or ';'.
StrategyAutomaton parse_strategy(std::string_view text, const StochasticGame& g);
std::string format_strategy(const StrategyAutomaton& s, const StochasticGame& g);

struct ChainNode {
  StateId state = 0;
  std::uint32_t m1 = 0;
  std::uint32_t m2 = 0;
  friend bool operator==(const ChainNode&, const ChainNode&) = default;
};

/// Finite Markov chain induced by two finite-memory strategies (reachable part only).
struct InducedChain {
  std::vector<ChainNode> nodes;
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> edges;
  std::uint32_t initial = 0;
};

InducedChain induced_chain(const StochasticGame& g, const StrategyAutomaton& sigma,
                           const StrategyAutomaton& tau, std::size_t max_nodes = 1u << 20);

/// Support graph of a Markov chain labelled with base states; enough for qualitative questions.
struct SupportChain {
  std::vector<StateId> state;
  std::vector<std::vector<std::uint32_t>> succ;
  std::uint32_t initial = 0;
};

SupportChain support_of(const InducedChain& c);

bool eval_qualitative(const SupportChain& c, const Atom& a);
/// Evaluates any query (negations included) atom by atom.
bool eval_qualitative(const SupportChain& c, const Query& q);
bool eval_qualitative(const InducedChain& c, const Query& q);
bool eval_qualitative(const InducedChain& c, const Atom& a);

/// Exact probability of eventually visiting a node whose base state is in `target`.
Rational reach_probability(const InducedChain& c, const StateSet& target);

/// resp_sigma(s, M) for every pair reachable under sigma (M = states visited
/// strictly before s), for states owned by sigma's player. Up to 64 states.
class RespTable {
 public:
  RespTable(const StochasticGame& g, const StrategyAutomaton& sigma, std::size_t max_nodes = 1u << 20);

  /// Empty when (s, M) is not reachable under sigma.
  StateSet resp(StateId s, std::uint64_t visited) const;
  StateSet resp(StateId s, const StateSet& visited) const;
  std::size_t size() const { return table_.size(); }

 private:
  const StochasticGame* g_;
  std::map<std::pair<StateId, std::uint64_t>, StateSet> table_;
};

StateSet resp_set(const StochasticGame& g, const StrategyAutomaton& sigma, StateId s,
                  const StateSet& visited);

/// Strategy whose memory is the set of previously visited states and which
/// plays uniformly over resp_sigma. Throws InvariantError if resp is empty at a
/// reachable history and ResourceError past `max_memory` visited sets.
StrategyAutomaton derive_sigma_bar(const StochasticGame& g, const StrategyAutomaton& sigma,
                                   std::size_t max_memory = 1u << 16);

std::uint64_t to_mask(const StateSet& s);
StateSet from_mask(std::uint64_t mask, std::size_t universe);

}  // namespace qsg
