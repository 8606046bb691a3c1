#include "qsg/oracle.hpp"

#include "qsg/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace qsg {

std::string StrategyClass::describe() const {
  std::string out;
  switch (kind) {
    case MemoryKind::Memoryless: out = "memoryless"; break;
    case MemoryKind::TargetSet: out = "target-set"; break;
    case MemoryKind::VisitedSet: out = "visited-set"; break;
    case MemoryKind::Explicit: out = "explicit:" + std::to_string(k); break;
  }
  return out + (randomized ? " randomized" : " deterministic");
}

StrategyClass parse_strategy_class(std::string_view text, bool randomized,
                                   const std::vector<StateSet>& targets) {
  if (text == "memoryless") return StrategyClass::memoryless(randomized);
  if (text == "targets" || text == "target-set") return StrategyClass::target_set(targets, randomized);
  if (text == "visited" || text == "visited-set") return StrategyClass::visited_set(randomized);
  if (text.starts_with("explicit:")) {
    auto num = std::string(text.substr(9));
    if (num.empty() || !std::all_of(num.begin(), num.end(), ::isdigit) || std::stoul(num) == 0) {
      throw ParseError("bad memory bound in '" + std::string(text) + "'");
    }
    return StrategyClass::explicit_memory(static_cast<std::uint32_t>(std::stoul(num)), randomized);
  }
  throw ParseError("unknown memory kind '" + std::string(text) +
                   "' (memoryless|targets|visited|explicit:K)");
}

std::vector<StateSet> query_targets(const Query& q) {
  std::vector<StateSet> out;
  for (const auto& a : atoms(q)) {
    if (std::find(out.begin(), out.end(), a.target) == out.end()) out.push_back(a.target);
  }
  return out;
}

std::string_view to_string(OracleOutcome o) {
  switch (o) {
    case OracleOutcome::Player1WinsInClass: return "Player1WinsInClass";
    case OracleOutcome::Player2WinsInClass: return "Player2WinsInClass";
    case OracleOutcome::NoWinnerInClass: return "NoWinnerInClass";
  }
  return "?";
}

namespace {

using Mem = std::uint64_t;

struct Key {
  Mem m;
  StateId s;
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return std::hash<std::uint64_t>{}(k.m * 0x9e3779b97f4a7c15ull + k.s);
  }
};

/// Behaviour of one player inside a product exploration. A partial side may
/// report a decision as undefined; exploration then stops at that point.
class Side {
 public:
  virtual ~Side() = default;
  virtual Mem init() const = 0;
  virtual bool next(Mem m, StateId s, Mem& out) const = 0;
  virtual bool support(Mem m, StateId s, std::vector<StateId>& out) const = 0;
};

/// Opponent that may move anywhere; used to collect every decision point a strategy can face.
class ArbitrarySide final : public Side {
 public:
  explicit ArbitrarySide(const StochasticGame& g) : g_(g) {}
  Mem init() const override { return 0; }
  bool next(Mem, StateId, Mem& out) const override {
    out = 0;
    return true;
  }
  bool support(Mem, StateId s, std::vector<StateId>& out) const override {
    auto succ = g_.successors(s);
    out.assign(succ.begin(), succ.end());
    return true;
  }

 private:
  const StochasticGame& g_;
};

class AutomatonSide final : public Side {
 public:
  AutomatonSide(const StochasticGame& g, const StrategyAutomaton& a) : g_(g), a_(a) {}
  Mem init() const override { return a_.initial_memory; }
  bool next(Mem m, StateId s, Mem& out) const override {
    out = a_.next_memory(static_cast<std::uint32_t>(m), s);
    return true;
  }
  bool support(Mem m, StateId s, std::vector<StateId>& out) const override {
    out.clear();
    for (const auto& [t, p] : a_.decide(g_, static_cast<std::uint32_t>(m), s)) {
      if (p > 0) out.push_back(t);
    }
    return true;
  }

 private:
  const StochasticGame& g_;
  const StrategyAutomaton& a_;
};

struct Policy {
  std::unordered_map<Key, std::uint32_t, KeyHash> choice;  // successor-index bit mask
  std::unordered_map<Key, Mem, KeyHash> update;            // Explicit only
};

class PolicySide final : public Side {
 public:
  PolicySide(const StochasticGame& g, const StrategyClass& cls, const Policy& p)
      : g_(g), cls_(cls), p_(p), leave_(g.size(), 0) {
    if (cls.kind == MemoryKind::TargetSet) {
      for (std::size_t i = 0; i < cls.targets.size(); ++i) {
        cls.targets[i].for_each([&](StateId s) {
          if (s < g.size()) leave_[s] |= Mem{1} << i;
        });
      }
    }
  }

  Mem init() const override { return 0; }

  bool next(Mem m, StateId s, Mem& out) const override {
    switch (cls_.kind) {
      case MemoryKind::Memoryless: out = 0; return true;
      case MemoryKind::TargetSet: out = m | leave_[s]; return true;
      case MemoryKind::VisitedSet: out = m | (Mem{1} << s); return true;
      case MemoryKind::Explicit: {
        auto it = p_.update.find({m, s});
        if (it == p_.update.end()) return false;
        out = it->second;
        return true;
      }
    }
    return false;
  }

  bool support(Mem m, StateId s, std::vector<StateId>& out) const override {
    auto it = p_.choice.find({m, s});
    if (it == p_.choice.end()) return false;
    out.clear();
    auto succ = g_.successors(s);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      if ((it->second >> i) & 1u) out.push_back(succ[i]);
    }
    return true;
  }

 private:
  const StochasticGame& g_;
  const StrategyClass& cls_;
  const Policy& p_;
  std::vector<Mem> leave_;
};

struct Frontier {
  Player player;
  Key key;
  bool need_update;  // otherwise a choice is missing
};

/// Support chain of two partial sides. Nodes at undefined decisions are left
/// unexpanded (no successors) and listed as frontiers in discovery order.
struct Exploration {
  SupportChain chain;
  std::vector<Frontier> frontiers;

  const Frontier* first_of(Player p) const {
    for (const auto& f : frontiers) {
      if (f.player == p) return &f;
    }
    return nullptr;
  }
};

struct Node {
  StateId s;
  Mem m1, m2;
  friend bool operator==(const Node&, const Node&) = default;
};
struct NodeHash {
  std::size_t operator()(const Node& n) const {
    return std::hash<std::uint64_t>{}((n.m1 * 0x9e3779b97f4a7c15ull) ^ (n.m2 * 0xc2b2ae3d27d4eb4full) ^ n.s);
  }
};

/// Builds the support chain of the two sides as far as their decisions are defined.
Exploration explore(const StochasticGame& g, const Side& p1, const Side& p2) {
  Exploration ex;
  std::unordered_map<Node, std::uint32_t, NodeHash> index;
  std::vector<Node> nodes;
  auto intern = [&](Node n) {
    auto [it, fresh] = index.try_emplace(n, static_cast<std::uint32_t>(nodes.size()));
    if (fresh) {
      nodes.push_back(n);
      ex.chain.state.push_back(n.s);
      ex.chain.succ.emplace_back();
    }
    return it->second;
  };
  ex.chain.initial = intern({g.initial(), p1.init(), p2.init()});
  std::vector<StateId> buf;
  for (std::uint32_t v = 0; v < nodes.size(); ++v) {
    const Node n = nodes[v];
    Mem n1, n2;
    if (!p1.next(n.m1, n.s, n1)) {
      ex.frontiers.push_back({Player::P1, {n.m1, n.s}, true});
      continue;
    }
    if (!p2.next(n.m2, n.s, n2)) {
      ex.frontiers.push_back({Player::P2, {n.m2, n.s}, true});
      continue;
    }
    switch (g.owner(n.s)) {
      case Owner::P1:
        if (!p1.support(n.m1, n.s, buf)) {
          ex.frontiers.push_back({Player::P1, {n.m1, n.s}, false});
          continue;
        }
        break;
      case Owner::P2:
        if (!p2.support(n.m2, n.s, buf)) {
          ex.frontiers.push_back({Player::P2, {n.m2, n.s}, false});
          continue;
        }
        break;
      case Owner::Chance: {
        auto succ = g.successors(n.s);
        buf.assign(succ.begin(), succ.end());
        break;
      }
    }
    std::vector<std::uint32_t> out;
    out.reserve(buf.size());
    for (StateId t : buf) out.push_back(intern({t, n1, n2}));
    ex.chain.succ[v] = std::move(out);
  }
  return ex;
}

std::vector<std::uint32_t> choice_options(std::size_t degree, bool randomized) {
  std::vector<std::uint32_t> out;
  if (randomized) {
    for (std::uint32_t m = 1; m < (1u << degree); ++m) out.push_back(m);
  } else {
    for (std::size_t i = 0; i < degree; ++i) out.push_back(1u << i);
  }
  return out;
}

/// Lazily enumerates the strategies of `player` (class `cls`) against a fixed
/// opponent side. The callback receives each completed exploration and returns
/// true to stop; enumerate returns true if stopped.
class Enumerator {
 public:
  using Callback = std::function<bool(const Policy&, const Exploration&)>;
  enum class Cut { Continue, Skip, Stop };
  /// Consulted before branching on an own undefined decision.
  using Prune = std::function<Cut(const Exploration&)>;

  /// With `partial_opponent`, explorations stopped by an undefined opponent
  /// decision are handed to the callback instead of raising.
  Enumerator(const StochasticGame& g, Player player, const StrategyClass& cls, const Side& opponent,
             std::size_t cap, bool partial_opponent = false)
      : g_(g), player_(player), cls_(cls), opponent_(opponent), cap_(cap), partial_(partial_opponent),
        side_(g, cls, policy_) {
    if (g.size() > 64) throw ResourceError("strategy enumeration supports at most 64 states");
    if (cls.kind == MemoryKind::TargetSet && cls.targets.size() > 64) {
      throw ResourceError("target-set memory supports at most 64 targets");
    }
  }

  bool run(const Callback& cb) {
    count_ = 0;
    return rec(cb);
  }
  std::size_t count() const { return count_; }
  void set_prune(Prune p) { prune_ = std::move(p); }

 private:
  bool rec(const Callback& cb) {
    Exploration ex = player_ == Player::P1 ? explore(g_, side_, opponent_) : explore(g_, opponent_, side_);
    if (ex.frontiers.empty()) {
      if (++count_ > cap_) {
        throw ResourceError("strategy enumeration exceeds " + std::to_string(cap_) +
                            " strategies (raise --max-strategies)");
      }
      return cb(policy_, ex);
    }
    const Frontier* own = ex.first_of(player_);
    if (!own) {
      if (!partial_) throw InvariantError("opponent side left a decision undefined");
      return cb(policy_, ex);
    }
    const Frontier f = *own;
    if (prune_) {
      switch (prune_(ex)) {
        case Cut::Skip: return false;
        case Cut::Stop: return true;
        case Cut::Continue: break;
      }
    }
    if (f.need_update) {
      for (Mem u = 0; u < cls_.k; ++u) {
        policy_.update[f.key] = u;
        if (rec(cb)) {
          policy_.update.erase(f.key);
          return true;
        }
      }
      policy_.update.erase(f.key);
      return false;
    }
    for (auto c : choice_options(g_.successors(f.key.s).size(), cls_.randomized)) {
      policy_.choice[f.key] = c;
      if (rec(cb)) {
        policy_.choice.erase(f.key);
        return true;
      }
    }
    policy_.choice.erase(f.key);
    return false;
  }

  const StochasticGame& g_;
  Player player_;
  const StrategyClass& cls_;
  const Side& opponent_;
  std::size_t cap_;
  bool partial_;
  Prune prune_;
  Policy policy_;
  PolicySide side_;
  std::size_t count_ = 0;
};

/// Value of NZ F t or AS F t on a partially explored chain, if no completion
/// can change it. Unexpanded nodes have no successors. Only the part before
/// the first visit to t matters; once it is fully expanded the value is exact.
std::optional<bool> settle_reach(const SupportChain& c, const StateSet& t, Mode mode) {
  const std::size_t n = c.state.size();
  auto unexpanded = [&](std::uint32_t v) { return c.succ[v].empty(); };
  if (mode == Mode::NZ) {
    for (StateId s : c.state) {
      if (t.contains(s)) return true;
    }
  } else if (t.contains(c.state[c.initial])) {
    return true;
  }
  // Nodes reachable from the initial node without passing through t.
  std::vector<char> in_r(n, 0);
  std::vector<std::uint32_t> order{c.initial};
  in_r[c.initial] = 1;
  bool open = false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto v = order[i];
    if (t.contains(c.state[v])) continue;
    if (unexpanded(v)) {
      open = true;
      continue;
    }
    for (auto w : c.succ[v]) {
      if (!in_r[w]) {
        in_r[w] = 1;
        order.push_back(w);
      }
    }
  }
  if (mode == Mode::NZ) {
    if (open) return std::nullopt;
    return false;
  }
  // Backward closure from t (and from unexpanded nodes, which may still lead there).
  std::vector<std::vector<std::uint32_t>> pred(n);
  for (auto v : order) {
    if (t.contains(c.state[v]) || unexpanded(v)) continue;
    for (auto w : c.succ[v]) pred[w].push_back(v);
  }
  std::vector<char> can(n, 0);
  std::vector<std::uint32_t> work;
  for (auto v : order) {
    if (t.contains(c.state[v]) || unexpanded(v)) {
      can[v] = 1;
      work.push_back(v);
    }
  }
  while (!work.empty()) {
    const auto w = work.back();
    work.pop_back();
    for (auto v : pred[w]) {
      if (!can[v]) {
        can[v] = 1;
        work.push_back(v);
      }
    }
  }
  for (auto v : order) {
    if (!can[v]) return false;
  }
  if (open) return std::nullopt;
  return true;
}

/// Kleene evaluation on a partially explored chain. Every interned node is
/// reached with positive probability whatever the undefined decisions are, so
/// some atoms are settled early.
std::optional<bool> eval_partial(const SupportChain& c, const Query& q) {
  switch (q.kind) {
    case Query::Kind::Atom: {
      const Atom& a = q.atom;
      if (a.shape == Shape::Reach) return settle_reach(c, a.target, a.mode);
      // AS G T = !NZ F ~T and NZ G T = !AS F ~T.
      auto v = settle_reach(c, a.target.complement(), a.mode == Mode::AS ? Mode::NZ : Mode::AS);
      if (v) return !*v;
      return std::nullopt;
    }
    case Query::Kind::Not: {
      auto v = eval_partial(c, q.children.front());
      if (v) return !*v;
      return std::nullopt;
    }
    case Query::Kind::And:
    case Query::Kind::Or: {
      const bool absorbing = q.kind == Query::Kind::Or;
      bool unknown = false;
      for (const auto& ch : q.children) {
        auto v = eval_partial(c, ch);
        if (!v) {
          unknown = true;
        } else if (*v == absorbing) {
          return absorbing;
        }
      }
      if (unknown) return std::nullopt;
      return !absorbing;
    }
  }
  return std::nullopt;
}

/// Strategy of `player` in class `own` whose every play against class `opp`
/// satisfies `wins`. Decisions are fixed only where some opponent reaches an
/// undefined one; a partial strategy is dropped as soon as an opponent yields a
/// complete chain that loses, since no completion can change that chain.
class WinnerSearch {
 public:
  /// Player 1 wants q, player 2 wants its negation.
  WinnerSearch(const StochasticGame& g, Player player, const StrategyClass& own, const StrategyClass& opp,
               const Query& q, std::size_t cap)
      : g_(g), player_(player), own_(own), opp_(opp), q_(q), cap_(cap), side_(g, own, policy_) {}

  std::optional<Policy> run() {
    examined_ = 0;
    if (rec()) return policy_;
    return std::nullopt;
  }
  std::size_t examined() const { return examined_; }

 private:
  bool rec() {
    if (++examined_ > cap_) {
      throw ResourceError("strategy search exceeds " + std::to_string(cap_) +
                          " candidates (raise --max-strategies)");
    }
    Enumerator opps(g_, opponent(player_), opp_, side_, cap_, true);
    bool lost = false;
    std::optional<Frontier> need;
    const bool want = player_ == Player::P1;
    // Opponent prefixes that already settle the query need no completion.
    opps.set_prune([&](const Exploration& ex) {
      auto v = eval_partial(ex.chain, q_);
      if (!v) return Enumerator::Cut::Continue;
      if (*v == want) return Enumerator::Cut::Skip;
      lost = true;
      return Enumerator::Cut::Stop;
    });
    opps.run([&](const Policy&, const Exploration& ex) {
      if (!ex.frontiers.empty()) {
        auto v = eval_partial(ex.chain, q_);
        if (v) {
          lost = *v != want;
          return lost;
        }
        if (!need) need = ex.frontiers.front();
        return false;
      }
      lost = eval_qualitative(ex.chain, q_) != want;
      return lost;
    });
    if (lost) return false;
    if (!need) return true;
    const Frontier f = *need;
    if (f.need_update) {
      for (Mem u = 0; u < own_.k; ++u) {
        policy_.update[f.key] = u;
        if (rec()) return true;
      }
      policy_.update.erase(f.key);
      return false;
    }
    for (auto c : choice_options(g_.successors(f.key.s).size(), own_.randomized)) {
      policy_.choice[f.key] = c;
      if (rec()) return true;
    }
    policy_.choice.erase(f.key);
    return false;
  }

  const StochasticGame& g_;
  Player player_;
  const StrategyClass& own_;
  const StrategyClass& opp_;
  const Query& q_;
  std::size_t cap_;
  Policy policy_;
  PolicySide side_;
  std::size_t examined_ = 0;
};

std::string memory_label(const StochasticGame& g, const StrategyClass& cls, Mem m) {
  switch (cls.kind) {
    case MemoryKind::Memoryless: return "m0";
    case MemoryKind::VisitedSet: return g.format_set(from_mask(m, g.size()));
    case MemoryKind::TargetSet: {
      std::string out = "T{";
      bool first = true;
      for (std::size_t i = 0; i < 64; ++i) {
        if ((m >> i) & 1u) {
          if (!first) out += ',';
          out += std::to_string(i);
          first = false;
        }
      }
      return out + "}";
    }
    case MemoryKind::Explicit: return "m" + std::to_string(m);
  }
  return "?";
}

/// Converts a (complete on its reachable part) policy to an automaton.
StrategyAutomaton to_automaton(const StochasticGame& g, Player player, const StrategyClass& cls,
                               const Policy& policy) {
  PolicySide side(g, cls, policy);
  StrategyAutomaton a;
  a.player = player;
  a.memory.clear();
  std::map<Mem, std::uint32_t> index;
  auto mem = [&](Mem m) {
    auto [it, fresh] = index.try_emplace(m, static_cast<std::uint32_t>(a.memory.size()));
    if (fresh) a.memory.push_back(memory_label(g, cls, m));
    return it->second;
  };
  a.initial_memory = mem(side.init());
  std::map<std::pair<StateId, Mem>, bool> seen;
  std::deque<std::pair<StateId, Mem>> work;
  auto push = [&](StateId s, Mem m) {
    if (seen.emplace(std::make_pair(s, m), true).second) work.emplace_back(s, m);
  };
  push(g.initial(), side.init());
  std::vector<StateId> buf;
  while (!work.empty()) {
    auto [s, m] = work.front();
    work.pop_front();
    // Decisions the search never fixed lie beyond settled prefixes; any
    // completion inside the class keeps the verdict.
    Mem n;
    if (!side.next(m, s, n)) n = m;
    const auto mi = mem(m);
    const auto ni = mem(n);
    if (ni != mi) a.update[{mi, s}] = ni;
    if (owned_by(g.owner(s), player)) {
      if (!side.support(m, s, buf)) {
        auto succ = g.successors(s);
        buf.assign(succ.begin(), cls.randomized ? succ.end() : succ.begin() + 1);
      }
      a.output[{mi, s}] = uniform(buf);
    } else {
      auto succ = g.successors(s);
      buf.assign(succ.begin(), succ.end());
    }
    for (StateId t : buf) push(t, n);
  }
  return a;
}

void check_game(const StochasticGame& g, const OracleOptions& opts, const StrategyClass& c1,
                const StrategyClass& c2) {
  if (g.size() > opts.max_states) {
    throw ResourceError("oracle limited to " + std::to_string(opts.max_states) + " states, game has " +
                        std::to_string(g.size()) + " (raise --max-states)");
  }
  for (const auto* c : {&c1, &c2}) {
    if (c->kind == MemoryKind::Explicit && c->k > opts.max_memory_sets) {
      throw ResourceError("explicit memory bound exceeds --max-memory");
    }
  }
}

}  // namespace

std::vector<StrategyAutomaton> enumerate_strategies(const StochasticGame& g, Player player,
                                                    const StrategyClass& cls, const OracleOptions& opts) {
  ArbitrarySide arb(g);
  Enumerator e(g, player, cls, arb, opts.max_strategies);
  std::vector<StrategyAutomaton> out;
  e.run([&](const Policy& p, const Exploration&) {
    out.push_back(to_automaton(g, player, cls, p));
    return false;
  });
  return out;
}

std::size_t count_strategies(const StochasticGame& g, Player player, const StrategyClass& cls,
                             const OracleOptions& opts) {
  ArbitrarySide arb(g);
  Enumerator e(g, player, cls, arb, opts.max_strategies);
  e.run([](const Policy&, const Exploration&) { return false; });
  return e.count();
}

OracleVerdict brute_force_winner(const StochasticGame& g, const Query& q, const StrategyClass& c1,
                                 const StrategyClass& c2, const OracleOptions& opts) {
  check_game(g, opts, c1, c2);
  OracleVerdict v;
  ArbitrarySide arb(g);

  // Player 1: some sigma such that no tau violates q.
  {
    WinnerSearch search(g, Player::P1, c1, c2, q, opts.max_strategies);
    auto found = search.run();
    v.sigma_count = search.examined();
    if (found) {
      v.outcome = OracleOutcome::Player1WinsInClass;
      v.witness = to_automaton(g, Player::P1, c1, *found);
      return v;
    }
  }

  // Player 2: some tau such that no sigma satisfies q.
  if (opts.check_player2) {
    v.player2_checked = true;
    WinnerSearch search(g, Player::P2, c2, c1, q, opts.max_strategies);
    auto found = search.run();
    v.tau_count = search.examined();
    if (found) {
      v.outcome = OracleOutcome::Player2WinsInClass;
      v.witness = to_automaton(g, Player::P2, c2, *found);
      return v;
    }
  }

  v.outcome = OracleOutcome::NoWinnerInClass;
  // Full table when both classes are small.
  std::vector<Policy> ps1, ps2;
  try {
    OracleOptions small = opts;
    small.max_strategies = opts.max_matrix;
    Enumerator e1(g, Player::P1, c1, arb, small.max_strategies);
    e1.run([&](const Policy& p, const Exploration&) {
      ps1.push_back(p);
      return false;
    });
    Enumerator e2(g, Player::P2, c2, arb, small.max_strategies);
    e2.run([&](const Policy& p, const Exploration&) {
      ps2.push_back(p);
      return false;
    });
  } catch (const ResourceError&) {
    return v;
  }
  for (const auto& p : ps1) v.sigmas.push_back(to_automaton(g, Player::P1, c1, p));
  for (const auto& p : ps2) v.taus.push_back(to_automaton(g, Player::P2, c2, p));
  for (const auto& p1 : ps1) {
    PolicySide s1(g, c1, p1);
    std::vector<bool> row;
    for (const auto& p2 : ps2) {
      PolicySide s2(g, c2, p2);
      Exploration ex = explore(g, s1, s2);
      if (!ex.frontiers.empty()) throw InvariantError("complete strategies left a decision undefined");
      row.push_back(eval_qualitative(ex.chain, q));
    }
    v.matrix.push_back(std::move(row));
  }
  return v;
}

std::vector<EvidenceEntry> nondeterminacy_evidence(const StochasticGame& g, const Query& q,
                                                   const OracleOptions& opts) {
  const auto targets = query_targets(q);
  std::vector<StrategyClass> classes{StrategyClass::memoryless(), StrategyClass::target_set(targets),
                                     StrategyClass::visited_set()};
  std::vector<EvidenceEntry> out;
  for (const auto& c : classes) out.push_back({c.describe(), brute_force_winner(g, q, c, c, opts)});
  return out;
}

VerifyResult verify_strategy(const StochasticGame& g, const StrategyAutomaton& sigma, const Query& q,
                             const StrategyClass& adversary, const OracleOptions& opts) {
  if (sigma.player != Player::P1) throw std::invalid_argument("verify_strategy expects a player-1 strategy");
  validate_strategy(g, sigma);
  check_game(g, opts, adversary, adversary);
  VerifyResult r;
  r.evidence_only = contains_nz_safe(negate_normalize(q)) || adversary.kind != MemoryKind::VisitedSet ||
                    !adversary.randomized;
  AutomatonSide fixed(g, sigma);
  Enumerator taus(g, Player::P2, adversary, fixed, opts.max_strategies);
  bool spoiled = taus.run([&](const Policy& tau, const Exploration& ex) {
    if (eval_qualitative(ex.chain, q)) return false;
    r.counterexample = to_automaton(g, Player::P2, adversary, tau);
    return true;
  });
  r.adversaries = taus.count();
  r.holds = !spoiled;
  return r;
}

bool satisfies(const StochasticGame& g, const StrategyAutomaton& sigma, const StrategyAutomaton& tau,
               const Query& q) {
  return eval_qualitative(induced_chain(g, sigma, tau), q);
}

std::string describe_strategy(const StrategyAutomaton& s, const StochasticGame& g) {
  std::string out;
  for (const auto& [key, d] : s.output) {
    if (!out.empty()) out += "; ";
    if (s.memory.size() > 1) out += s.memory[key.first] + " ";
    out += g.name(key.second) + "->{";
    bool first = true;
    for (const auto& [t, p] : d) {
      if (p == 0) continue;
      if (!first) out += ',';
      out += g.name(t);
      first = false;
    }
    out += "}";
  }
  return out.empty() ? "(no decisions)" : out;
}

}  // namespace qsg
