#include "qsg/unfold.hpp"

#include "qsg/errors.hpp"
#include "qsg/regions.hpp"

#include <deque>
#include <stdexcept>

namespace qsg {

Unfolding::Unfolding(const StochasticGame& g, std::vector<StateSet> targets, std::size_t max_nodes)
    : g_(&g), targets_(std::move(targets)), max_nodes_(max_nodes) {
  if (targets_.empty()) throw std::invalid_argument("goal unfolding needs at least one target set");
  if (targets_.size() > 64) throw ResourceError("goal unfolding supports at most 64 target sets");
  leave_mask_.assign(g.size(), 0);
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    targets_[i].for_each([&](StateId s) {
      if (s < g.size()) leave_mask_[s] |= std::uint64_t{1} << i;
    });
  }
  intern({g.initial(), 0});
}

UnfoldedState Unfolding::step(const UnfoldedState& u, StateId next) const {
  return {next, u.bits | leave_mask_[u.base]};
}

std::uint32_t Unfolding::intern(const UnfoldedState& u) {
  auto [it, fresh] = index_.try_emplace(u, static_cast<std::uint32_t>(nodes_.size()));
  if (fresh) {
    if (nodes_.size() >= max_nodes_) {
      index_.erase(it);
      throw ResourceError("goal unfolding exceeds " + std::to_string(max_nodes_) +
                          " nodes (raise --max-product)");
    }
    nodes_.push_back(u);
    succ_.emplace_back();
    expanded_.push_back(false);
  }
  return it->second;
}

const std::vector<std::uint32_t>& Unfolding::successors(std::uint32_t id) {
  if (!expanded_[id]) {
    std::vector<std::uint32_t> out;
    const UnfoldedState u = nodes_[id];
    for (StateId t : g_->successors(u.base)) out.push_back(intern(step(u, t)));
    succ_[id] = std::move(out);
    expanded_[id] = true;
  }
  return succ_[id];
}

void Unfolding::expand_all() {
  std::deque<std::uint32_t> work{initial()};
  std::vector<bool> seen(nodes_.size(), false);
  seen[initial()] = true;
  while (!work.empty()) {
    auto id = work.front();
    work.pop_front();
    for (auto t : successors(id)) {
      if (t >= seen.size()) seen.resize(nodes_.size(), false);
      if (!seen[t]) {
        seen[t] = true;
        work.push_back(t);
      }
    }
  }
}

std::string Unfolding::node_name(std::uint32_t id) const {
  const auto& u = nodes_[id];
  std::string out = g_->name(u.base) + "@";
  for (std::size_t i = 0; i < targets_.size(); ++i) out += u.bit(i) ? '1' : '0';
  return out;
}

StochasticGame Unfolding::to_game() {
  expand_all();
  GameBuilder b(g_->title() + "-unfolded");
  for (std::uint32_t id = 0; id < nodes_.size(); ++id) b.add_state(node_name(id), g_->owner(nodes_[id].base));
  for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
    const auto base = nodes_[id].base;
    const auto& succ = successors(id);
    if (g_->owner(base) == Owner::Chance) {
      auto prob = g_->probabilities(base);
      for (std::size_t i = 0; i < succ.size(); ++i) b.add_probability(id, succ[i], prob[i]);
    } else {
      for (auto t : succ) b.add_edge(id, t);
    }
  }
  b.set_initial(initial());
  return b.build();
}

StateSet Unfolding::nodes_with_bits(std::uint64_t mask) const {
  StateSet out(nodes_.size());
  for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
    if ((nodes_[id].bits & mask) == mask) out.insert(id);
  }
  return out;
}

StateSet Unfolding::nodes_without_bits(std::uint64_t mask) const {
  StateSet out(nodes_.size());
  for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
    if ((nodes_[id].bits & mask) == 0) out.insert(id);
  }
  return out;
}

// ---------------------------------------------------------------------------

ReachabilityGame to_reachability_game(const StochasticGame& product, const StateSet& keep,
                                      const StateSet& goal) {
  RestrictedGame r = restrict(product, keep);
  const auto& g = r.game;
  GameBuilder b(g.title() + "-reach");
  for (StateId s = 0; s < g.size(); ++s) {
    Owner o = g.owner(s);
    if (s == r.sink) o = Owner::P2;
    else if (o == Owner::Chance) o = Owner::P1;
    b.add_state(g.name(s), o);
  }
  for (StateId s = 0; s < g.size(); ++s) {
    for (StateId t : g.successors(s)) b.add_edge(s, t);
  }
  b.set_initial(g.initial());
  ReachabilityGame out{b.build(), StateSet(), r.sink, std::move(r.embed)};
  out.target = StateSet(out.game.size());
  (goal & keep).for_each([&](StateId s) {
    if (s < out.embed.size() && out.embed[s]) out.target.insert(*out.embed[s]);
  });
  return out;
}

StateSet existential_region(const ReachabilityGame& rg) {
  return attractor(rg.game, rg.target, Sides{true, false, false});
}

namespace {

class Search {
 public:
  Search(const ReachabilityGame& rg, const StateSet& leaf, SearchStats* stats)
      : g_(rg.game), leaf_(leaf), stats_(stats), known_(g_.size(), 0), on_path_(g_.size(), false) {}

  // Returns {result, cutoff_hit}.
  std::pair<bool, bool> win(StateId s) {
    if (stats_) ++stats_->calls;
    if (known_[s] != 0) {
      if (stats_) ++stats_->cache_hits;
      return {known_[s] > 0, false};
    }
    if (leaf_.contains(s)) {
      known_[s] = 1;
      return {true, false};
    }
    if (on_path_[s]) return {false, true};
    on_path_[s] = true;
    const bool existential = g_.owner(s) != Owner::P2;
    bool result = !existential;
    bool cutoff = false;
    for (StateId t : g_.successors(s)) {
      auto [r, c] = win(t);
      if (existential && r) {
        result = true;
        cutoff = false;
        break;
      }
      cutoff = cutoff || c;
      if (!existential && !r) {
        result = false;
        break;
      }
    }
    on_path_[s] = false;
    if (result) known_[s] = 1;
    else if (!cutoff) known_[s] = -1;
    return {result, cutoff && !result};
  }

 private:
  const StochasticGame& g_;
  const StateSet& leaf_;
  SearchStats* stats_;
  std::vector<int> known_;
  std::vector<bool> on_path_;
};

}  // namespace

bool search_win(const ReachabilityGame& rg, const StateSet& leaf, SearchStats* stats) {
  return Search(rg, leaf, stats).win(rg.game.initial()).first;
}

}  // namespace qsg
