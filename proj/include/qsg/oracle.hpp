#pragma once

#include "qsg/game.hpp"
#include "qsg/query.hpp"
#include "qsg/strategy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qsg {

enum class MemoryKind : std::uint8_t { Memoryless, TargetSet, VisitedSet, Explicit };

/// A finite family of strategies for one player.
///
/// Memory is the empty token (Memoryless), the set of target sets visited
/// before the current state (TargetSet), the set of states visited before the
/// current state (VisitedSet), or k freely updated tokens (Explicit). Outputs
/// are single successors, or, when `randomized`, uniform distributions over
/// any nonempty successor subset (all that matters qualitatively).
struct StrategyClass {
  MemoryKind kind = MemoryKind::Memoryless;
  std::vector<StateSet> targets;  ///< TargetSet only
  std::uint32_t k = 1;            ///< Explicit only
  bool randomized = true;

  static StrategyClass memoryless(bool randomized = true) { return {MemoryKind::Memoryless, {}, 1, randomized}; }
  static StrategyClass target_set(std::vector<StateSet> t, bool randomized = true) {
    return {MemoryKind::TargetSet, std::move(t), 1, randomized};
  }
  static StrategyClass visited_set(bool randomized = true) { return {MemoryKind::VisitedSet, {}, 1, randomized}; }
  static StrategyClass explicit_memory(std::uint32_t k, bool randomized = true) {
    return {MemoryKind::Explicit, {}, k, randomized};
  }

  std::string describe() const;
};

/// "memoryless", "targets", "visited" or "explicit:K". TargetSet takes `targets`.
StrategyClass parse_strategy_class(std::string_view text, bool randomized,
                                   const std::vector<StateSet>& targets);

/// Distinct target sets of the atoms of q, in order of first occurrence.
std::vector<StateSet> query_targets(const Query& q);

struct OracleOptions {
  std::size_t max_states = 6;
  std::size_t max_strategies = 200000;  ///< per enumeration
  std::size_t max_memory_sets = 64;     ///< distinct memory values per player
  std::size_t max_matrix = 64;          ///< strategies per side for the full table
  bool check_player2 = true;
};

/// Strategies of `player` in the class, in canonical order. Only decisions at
/// (memory, state) pairs reachable under the strategy itself are enumerated,
/// so behaviourally identical strategies are not repeated.
std::vector<StrategyAutomaton> enumerate_strategies(const StochasticGame& g, Player player,
                                                    const StrategyClass& cls,
                                                    const OracleOptions& opts = {});
std::size_t count_strategies(const StochasticGame& g, Player player, const StrategyClass& cls,
                             const OracleOptions& opts = {});

enum class OracleOutcome : std::uint8_t { Player1WinsInClass, Player2WinsInClass, NoWinnerInClass };
std::string_view to_string(OracleOutcome o);

struct OracleVerdict {
  OracleOutcome outcome = OracleOutcome::NoWinnerInClass;
  std::optional<StrategyAutomaton> witness;  ///< winning strategy, if any
  std::size_t sigma_count = 0;  ///< partial player-1 strategies examined by the search
  std::size_t tau_count = 0;    ///< partial player-2 strategies examined by the search
  bool player2_checked = false;
  /// Full satisfaction table (rows: player 1, columns: player 2) when both
  /// classes are small and nobody wins.
  std::vector<StrategyAutomaton> sigmas;
  std::vector<StrategyAutomaton> taus;
  std::vector<std::vector<bool>> matrix;
};

/// Does some strategy of class c1 satisfy q against every strategy of class c2
/// (and symmetrically for player 2 with the negation)?
OracleVerdict brute_force_winner(const StochasticGame& g, const Query& q, const StrategyClass& c1,
                                 const StrategyClass& c2, const OracleOptions& opts = {});

struct EvidenceEntry {
  std::string cls;
  OracleVerdict verdict;
};

/// Runs the oracle with memoryless, target-set and visited-set classes for both players.
std::vector<EvidenceEntry> nondeterminacy_evidence(const StochasticGame& g, const Query& q,
                                                   const OracleOptions& opts = {});

struct VerifyResult {
  bool holds = false;
  /// True when a positive answer is only evidence against the enumerated
  /// adversaries (q contains NZ G atoms, or the class is narrower than
  /// randomized visited-set memory).
  bool evidence_only = false;
  std::size_t adversaries = 0;
  std::optional<StrategyAutomaton> counterexample;
};

/// Checks sigma against every adversary strategy of the class.
VerifyResult verify_strategy(const StochasticGame& g, const StrategyAutomaton& sigma, const Query& q,
                             const StrategyClass& adversary, const OracleOptions& opts = {});

/// Satisfaction of q by a pair of automata (qualitative chain evaluation).
bool satisfies(const StochasticGame& g, const StrategyAutomaton& sigma, const StrategyAutomaton& tau,
               const Query& q);

/// Short human-readable listing of a strategy's decisions.
std::string describe_strategy(const StrategyAutomaton& s, const StochasticGame& g);

}  // namespace qsg
