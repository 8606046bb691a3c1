#pragma once

#include "qsg/game.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace qsg {

/// Node of the goal unfolding: a base state and one bit per tracked target set.
struct UnfoldedState {
  StateId base = 0;
  std::uint64_t bits = 0;

  bool bit(std::size_t i) const { return (bits >> i) & 1u; }
  friend bool operator==(const UnfoldedState&, const UnfoldedState&) = default;
};

/// Lazily materialized goal unfolding of a game over up to 64 target sets.
///
/// Bit i is set on every successor of a node whose base state lies in target i,
/// so a node records the targets visited strictly before it. Node ids are
/// assigned in discovery order; the initial node (s0, 0...0) has id 0.
class Unfolding {
 public:
  static constexpr std::size_t kDefaultMaxNodes = 1u << 20;

  Unfolding(const StochasticGame& g, std::vector<StateSet> targets,
            std::size_t max_nodes = kDefaultMaxNodes);

  const StochasticGame& base() const { return *g_; }
  std::size_t target_count() const { return targets_.size(); }
  const StateSet& target(std::size_t i) const { return targets_[i]; }

  std::uint32_t initial() const { return 0; }
  const UnfoldedState& node(std::uint32_t id) const { return nodes_[id]; }
  std::size_t materialized() const { return nodes_.size(); }

  /// Successor node of `u` when the play moves to base state `next`.
  UnfoldedState step(const UnfoldedState& u, StateId next) const;
  /// Successor ids of a node, materializing them on first request.
  const std::vector<std::uint32_t>& successors(std::uint32_t id);

  /// Materializes every node reachable from the initial node.
  void expand_all();

  /// The reachable product as an ordinary game (ids coincide with node ids).
  /// Names are `<state>@<bits>` with bit i as the i-th character.
  StochasticGame to_game();

  std::string node_name(std::uint32_t id) const;
  /// Nodes whose bit set includes `mask` (all materialized nodes).
  StateSet nodes_with_bits(std::uint64_t mask) const;
  StateSet nodes_without_bits(std::uint64_t mask) const;

 private:
  std::uint32_t intern(const UnfoldedState& u);

  struct Hash {
    std::size_t operator()(const UnfoldedState& u) const {
      return std::hash<std::uint64_t>{}(u.bits * 0x9e3779b97f4a7c15ull ^ u.base);
    }
  };

  const StochasticGame* g_;
  std::vector<StateSet> targets_;
  std::vector<std::uint64_t> leave_mask_;  // I_s as a bit mask, per base state
  std::size_t max_nodes_;
  std::vector<UnfoldedState> nodes_;
  std::vector<std::vector<std::uint32_t>> succ_;
  std::vector<bool> expanded_;
  std::unordered_map<UnfoldedState, std::uint32_t, Hash> index_;
};

/// Nonstochastic two-player reachability game: P1-owned nodes are existential,
/// P2-owned nodes universal. `sink` absorbs every move that left the kept set.
struct ReachabilityGame {
  StochasticGame game;
  StateSet target;
  StateId sink = 0;
  std::vector<std::optional<StateId>> embed;
};

/// Restricts `product` to `keep`, hands chance nodes to the existential player
/// and makes the sink a losing universal self-loop. target = goal restricted to keep.
ReachabilityGame to_reachability_game(const StochasticGame& product, const StateSet& keep,
                                      const StateSet& goal);

/// Existential attractor of the target.
StateSet existential_region(const ReachabilityGame& rg);

struct SearchStats {
  std::size_t calls = 0;
  std::size_t cache_hits = 0;
};

/// Depth-first search win(node, history): true at leaf nodes, false on revisits
/// (history cutoff), some successor for existential nodes, all successors for
/// universal ones. Results are memoized; a negative result is cached only when
/// no cutoff influenced it. Decides whether the initial node is in the
/// existential attractor of `leaf`.
bool search_win(const ReachabilityGame& rg, const StateSet& leaf, SearchStats* stats = nullptr);

}  // namespace qsg
