#include "qsg/strategy.hpp"

#include "qsg/errors.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace qsg {

std::uint64_t to_mask(const StateSet& s) {
  if (s.universe() > 64) throw ResourceError("visited-set memory supports at most 64 states");
  std::uint64_t m = 0;
  s.for_each([&](StateId i) { m |= std::uint64_t{1} << i; });
  return m;
}

StateSet from_mask(std::uint64_t mask, std::size_t universe) {
  StateSet s(universe);
  for (StateId i = 0; i < universe && i < 64; ++i) {
    if ((mask >> i) & 1u) s.insert(i);
  }
  return s;
}

Distribution uniform(const std::vector<StateId>& support) {
  Distribution d;
  for (StateId t : support) d.emplace_back(t, Rational(1, static_cast<long>(support.size())));
  return d;
}

std::uint32_t StrategyAutomaton::next_memory(std::uint32_t m, StateId s) const {
  auto it = update.find({m, s});
  return it == update.end() ? m : it->second;
}

Distribution StrategyAutomaton::decide(const StochasticGame& g, std::uint32_t m, StateId s) const {
  auto it = output.find({m, s});
  if (it != output.end()) return it->second;
  auto succ = g.successors(s);
  return uniform(std::vector<StateId>(succ.begin(), succ.end()));
}

std::uint32_t StrategyAutomaton::memory_index(std::string_view label) const {
  auto it = std::find(memory.begin(), memory.end(), label);
  if (it == memory.end()) throw ParseError("unknown memory element '" + std::string(label) + "'");
  return static_cast<std::uint32_t>(it - memory.begin());
}

StrategyAutomaton StrategyAutomaton::uniform_memoryless(const StochasticGame& g, Player p,
                                                        const std::map<StateId, StateSet>& supports) {
  StrategyAutomaton s;
  s.player = p;
  for (const auto& [state, support] : supports) {
    if (!owned_by(g.owner(state), p)) throw std::invalid_argument("support given for a foreign state");
    s.output[{0, state}] = uniform(support.members());
  }
  return s;
}

void validate_strategy(const StochasticGame& g, const StrategyAutomaton& s) {
  const auto k = s.memory.size();
  if (k == 0) throw ParseError("strategy has no memory elements");
  if (s.initial_memory >= k) throw ParseError("initial memory out of range");
  for (const auto& [key, m2] : s.update) {
    if (key.first >= k || m2 >= k) throw ParseError("update refers to unknown memory");
    if (key.second >= g.size()) throw ParseError("update refers to unknown state");
  }
  for (const auto& [key, dist] : s.output) {
    const auto [m, st] = key;
    if (m >= k) throw ParseError("output refers to unknown memory");
    if (st >= g.size()) throw ParseError("output refers to unknown state");
    if (!owned_by(g.owner(st), s.player)) {
      throw ParseError("output for state '" + g.name(st) + "' not owned by " +
                       std::string(to_string(s.player)));
    }
    Rational mass = 0;
    auto succ = g.successors(st);
    for (const auto& [t, p] : dist) {
      if (p <= 0) throw ParseError("non-positive probability at '" + g.name(st) + "'");
      if (std::find(succ.begin(), succ.end(), t) == succ.end()) {
        throw ParseError("'" + g.name(t) + "' is not a successor of '" + g.name(st) + "'");
      }
      mass += p;
    }
    if (mass != 1) {
      throw ParseError("strategy mass " + to_string(mass) + " != 1 at (" + s.memory[m] + ", " +
                       g.name(st) + ")");
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<std::size_t, std::vector<std::string>>> statements(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::size_t line = 1;
  std::string current;
  auto flush = [&] {
    if (auto hash = current.find('#'); hash != std::string::npos) current.resize(hash);
    std::istringstream is(current);
    std::vector<std::string> toks;
    for (std::string t; is >> t;) toks.push_back(t);
    if (!toks.empty()) out.emplace_back(line, std::move(toks));
    current.clear();
  };
  for (char c : text) {
    if (c == '\n' || c == ';') {
      flush();
      if (c == '\n') ++line;
    } else {
      current += c;
    }
  }
  flush();
  return out;
}

Rational parse_prob(const std::string& text, std::size_t line) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
    boost::multiprecision::cpp_int num(text.substr(0, slash));
    boost::multiprecision::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator", line);
    return Rational(num, den);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("malformed probability '" + text + "'", line);
  }
}

}  // namespace

StrategyAutomaton parse_strategy(std::string_view text, const StochasticGame& g) {
  StrategyAutomaton s;
  bool have_memory = false;
  auto state = [&](const std::string& id, std::size_t line) {
    auto st = g.find(id);
    if (!st) throw ParseError("unknown state '" + id + "'", line);
    return *st;
  };
  auto stmts = statements(text);
  // Memory declarations first so that update/out lines may appear in any order.
  for (const auto& [line, t] : stmts) {
    if (t[0] != "memory") continue;
    if (have_memory) throw ParseError("duplicate memory declaration", line);
    if (t.size() < 2) throw ParseError("expected 'memory <id>...'", line);
    s.memory.assign(t.begin() + 1, t.end());
    for (std::size_t i = 0; i < s.memory.size(); ++i) {
      if (std::find(s.memory.begin(), s.memory.begin() + i, s.memory[i]) != s.memory.begin() + i) {
        throw ParseError("duplicate memory element '" + s.memory[i] + "'", line);
      }
    }
    have_memory = true;
  }
  auto mem = [&](const std::string& id, std::size_t line) {
    try {
      return s.memory_index(id);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
  };
  bool have_player = false;
  for (const auto& [line, t] : stmts) {
    const auto& kw = t[0];
    if (kw == "memory") continue;
    if (kw == "strategy") {
      if (t.size() != 2 || (t[1] != "p1" && t[1] != "p2")) throw ParseError("expected 'strategy p1|p2'", line);
      s.player = t[1] == "p1" ? Player::P1 : Player::P2;
      have_player = true;
    } else if (kw == "initmem") {
      if (t.size() != 2) throw ParseError("expected 'initmem <id>'", line);
      s.initial_memory = mem(t[1], line);
    } else if (kw == "update") {
      if (t.size() != 4) throw ParseError("expected 'update <mem> <state> <mem>'", line);
      s.update[{mem(t[1], line), state(t[2], line)}] = mem(t[3], line);
    } else if (kw == "out") {
      if (t.size() != 5) throw ParseError("expected 'out <mem> <state> <succ> <num>/<den>'", line);
      auto& d = s.output[{mem(t[1], line), state(t[2], line)}];
      d.emplace_back(state(t[3], line), parse_prob(t[4], line));
    } else {
      throw ParseError("unknown strategy directive '" + kw + "'", line);
    }
  }
  if (!have_player) throw ParseError("missing 'strategy p1|p2'");
  for (auto& [key, d] : s.output) {
    std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  validate_strategy(g, s);
  return s;
}

std::string format_strategy(const StrategyAutomaton& s, const StochasticGame& g) {
  std::ostringstream os;
  os << "strategy " << to_string(s.player) << '\n';
  os << "memory";
  for (const auto& m : s.memory) os << ' ' << m;
  os << '\n' << "initmem " << s.memory[s.initial_memory] << '\n';
  for (const auto& [key, m2] : s.update) {
    os << "update " << s.memory[key.first] << ' ' << g.name(key.second) << ' ' << s.memory[m2] << '\n';
  }
  for (const auto& [key, d] : s.output) {
    for (const auto& [t, p] : d) {
      os << "out " << s.memory[key.first] << ' ' << g.name(key.second) << ' ' << g.name(t) << ' '
         << to_string(p) << '\n';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {
struct NodeHash {
  std::size_t operator()(const ChainNode& n) const {
    return (std::size_t{n.state} * 1000003u + n.m1) * 1000003u + n.m2;
  }
};
}  // namespace

InducedChain induced_chain(const StochasticGame& g, const StrategyAutomaton& sigma,
                           const StrategyAutomaton& tau, std::size_t max_nodes) {
  if (sigma.player != Player::P1 || tau.player != Player::P2) {
    throw std::invalid_argument("induced_chain expects a player-1 and a player-2 strategy");
  }
  InducedChain c;
  std::unordered_map<ChainNode, std::uint32_t, NodeHash> index;
  auto intern = [&](ChainNode n) {
    auto [it, fresh] = index.try_emplace(n, static_cast<std::uint32_t>(c.nodes.size()));
    if (fresh) {
      if (c.nodes.size() >= max_nodes) throw ResourceError("induced chain exceeds node cap");
      c.nodes.push_back(n);
      c.edges.emplace_back();
    }
    return it->second;
  };
  c.initial = intern({g.initial(), sigma.initial_memory, tau.initial_memory});
  for (std::uint32_t v = 0; v < c.nodes.size(); ++v) {
    const ChainNode n = c.nodes[v];
    Distribution d;
    switch (g.owner(n.state)) {
      case Owner::P1: d = sigma.decide(g, n.m1, n.state); break;
      case Owner::P2: d = tau.decide(g, n.m2, n.state); break;
      case Owner::Chance: {
        auto succ = g.successors(n.state);
        auto prob = g.probabilities(n.state);
        for (std::size_t i = 0; i < succ.size(); ++i) d.emplace_back(succ[i], prob[i]);
        break;
      }
    }
    const auto m1 = sigma.next_memory(n.m1, n.state);
    const auto m2 = tau.next_memory(n.m2, n.state);
    std::vector<std::pair<std::uint32_t, Rational>> out;
    for (const auto& [t, p] : d) {
      if (p == 0) continue;
      out.emplace_back(intern({t, m1, m2}), p);
    }
    c.edges[v] = std::move(out);
  }
  return c;
}

SupportChain support_of(const InducedChain& c) {
  SupportChain s;
  s.initial = c.initial;
  s.state.reserve(c.nodes.size());
  for (const auto& n : c.nodes) s.state.push_back(n.state);
  s.succ.resize(c.nodes.size());
  for (std::size_t v = 0; v < c.nodes.size(); ++v) {
    for (const auto& [w, p] : c.edges[v]) s.succ[v].push_back(w);
  }
  return s;
}

namespace {

std::vector<bool> can_reach(const SupportChain& c, const StateSet& target) {
  const auto n = c.state.size();
  std::vector<std::vector<std::uint32_t>> pred(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (auto w : c.succ[v]) pred[w].push_back(v);
  }
  std::vector<bool> mark(n, false);
  std::deque<std::uint32_t> work;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (target.contains(c.state[v])) {
      mark[v] = true;
      work.push_back(v);
    }
  }
  while (!work.empty()) {
    auto w = work.front();
    work.pop_front();
    for (auto v : pred[w]) {
      if (!mark[v]) {
        mark[v] = true;
        work.push_back(v);
      }
    }
  }
  return mark;
}

bool nz_reach(const SupportChain& c, const StateSet& target) {
  std::vector<bool> seen(c.state.size(), false);
  std::deque<std::uint32_t> work{c.initial};
  seen[c.initial] = true;
  while (!work.empty()) {
    auto v = work.front();
    work.pop_front();
    if (target.contains(c.state[v])) return true;
    for (auto w : c.succ[v]) {
      if (!seen[w]) {
        seen[w] = true;
        work.push_back(w);
      }
    }
  }
  return false;
}

// Almost-sure reachability: every node reachable while avoiding the target can still reach it.
bool as_reach(const SupportChain& c, const StateSet& target) {
  auto reach = can_reach(c, target);
  std::vector<bool> seen(c.state.size(), false);
  std::deque<std::uint32_t> work{c.initial};
  seen[c.initial] = true;
  while (!work.empty()) {
    auto v = work.front();
    work.pop_front();
    if (target.contains(c.state[v])) continue;
    if (!reach[v]) return false;
    for (auto w : c.succ[v]) {
      if (!seen[w]) {
        seen[w] = true;
        work.push_back(w);
      }
    }
  }
  return true;
}

}  // namespace

bool eval_qualitative(const SupportChain& c, const Atom& a) {
  if (a.shape == Shape::Reach) {
    return a.mode == Mode::NZ ? nz_reach(c, a.target) : as_reach(c, a.target);
  }
  const StateSet bad = a.target.complement();
  return a.mode == Mode::AS ? !nz_reach(c, bad) : !as_reach(c, bad);
}

bool eval_qualitative(const SupportChain& c, const Query& q) {
  switch (q.kind) {
    case Query::Kind::Atom: return eval_qualitative(c, q.atom);
    case Query::Kind::Not: return !eval_qualitative(c, q.children[0]);
    case Query::Kind::And:
      return std::all_of(q.children.begin(), q.children.end(),
                         [&](const Query& x) { return eval_qualitative(c, x); });
    case Query::Kind::Or:
      return std::any_of(q.children.begin(), q.children.end(),
                         [&](const Query& x) { return eval_qualitative(c, x); });
  }
  return false;
}

bool eval_qualitative(const InducedChain& c, const Query& q) { return eval_qualitative(support_of(c), q); }
bool eval_qualitative(const InducedChain& c, const Atom& a) { return eval_qualitative(support_of(c), a); }

Rational reach_probability(const InducedChain& c, const StateSet& target) {
  const SupportChain s = support_of(c);
  const auto reach = can_reach(s, target);
  const auto n = c.nodes.size();
  // Unknowns: nodes outside the target that can reach it.
  std::vector<int> col(n, -1);
  std::vector<std::uint32_t> vars;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (reach[v] && !target.contains(s.state[v])) {
      col[v] = static_cast<int>(vars.size());
      vars.push_back(v);
    }
  }
  if (target.contains(s.state[c.initial])) return 1;
  if (!reach[c.initial]) return 0;
  const auto k = vars.size();
  // Row i: x_i - sum_j p_ij x_j = sum_{w in T} p_iw.
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1, Rational(0)));
  for (std::size_t i = 0; i < k; ++i) {
    a[i][i] = 1;
    for (const auto& [w, p] : c.edges[vars[i]]) {
      if (target.contains(s.state[w])) a[i][k] += p;
      else if (col[w] >= 0) a[i][col[w]] -= p;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t piv = i;
    while (piv < k && a[piv][i] == 0) ++piv;
    if (piv == k) throw InvariantError("singular absorption system");
    std::swap(a[i], a[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == i || a[r][i] == 0) continue;
      const Rational f = a[r][i] / a[i][i];
      for (std::size_t j = i; j <= k; ++j) a[r][j] -= f * a[i][j];
    }
  }
  const auto ci = static_cast<std::size_t>(col[c.initial]);
  return a[ci][k] / a[ci][ci];
}

// ---------------------------------------------------------------------------

RespTable::RespTable(const StochasticGame& g, const StrategyAutomaton& sigma, std::size_t max_nodes)
    : g_(&g) {
  if (g.size() > 64) throw ResourceError("resp computation supports at most 64 states");
  struct Key {
    StateId s;
    std::uint32_t m;
    std::uint64_t visited;
    bool operator<(const Key& o) const {
      return std::tie(s, m, visited) < std::tie(o.s, o.m, o.visited);
    }
  };
  std::map<Key, bool> seen;
  std::deque<Key> work;
  auto push = [&](Key k) {
    if (seen.emplace(k, true).second) {
      if (seen.size() > max_nodes) throw ResourceError("resp product exceeds node cap");
      work.push_back(k);
    }
  };
  push({g.initial(), sigma.initial_memory, 0});
  while (!work.empty()) {
    Key k = work.front();
    work.pop_front();
    const auto m2 = sigma.next_memory(k.m, k.s);
    const auto v2 = k.visited | (std::uint64_t{1} << k.s);
    if (owned_by(g.owner(k.s), sigma.player)) {
      auto& entry = table_.try_emplace({k.s, k.visited}, g.size()).first->second;
      for (const auto& [t, p] : sigma.decide(g, k.m, k.s)) {
        if (p == 0) continue;
        entry.insert(t);
        push({t, m2, v2});
      }
    } else {
      for (StateId t : g.successors(k.s)) push({t, m2, v2});
    }
  }
}

StateSet RespTable::resp(StateId s, std::uint64_t visited) const {
  auto it = table_.find({s, visited});
  return it == table_.end() ? StateSet(g_->size()) : it->second;
}

StateSet RespTable::resp(StateId s, const StateSet& visited) const { return resp(s, to_mask(visited)); }

StateSet resp_set(const StochasticGame& g, const StrategyAutomaton& sigma, StateId s,
                  const StateSet& visited) {
  return RespTable(g, sigma).resp(s, visited);
}

StrategyAutomaton derive_sigma_bar(const StochasticGame& g, const StrategyAutomaton& sigma,
                                   std::size_t max_memory) {
  RespTable table(g, sigma);
  StrategyAutomaton bar;
  bar.player = sigma.player;
  bar.memory.clear();
  std::map<std::uint64_t, std::uint32_t> index;
  auto mem = [&](std::uint64_t v) {
    auto [it, fresh] = index.try_emplace(v, static_cast<std::uint32_t>(bar.memory.size()));
    if (fresh) {
      if (bar.memory.size() >= max_memory) throw ResourceError("sigma-bar exceeds the visited-set cap");
      bar.memory.push_back(g.format_set(from_mask(v, g.size())));
    }
    return it->second;
  };
  bar.initial_memory = mem(0);
  std::map<std::pair<StateId, std::uint64_t>, bool> seen;
  std::deque<std::pair<StateId, std::uint64_t>> work;
  auto push = [&](StateId s, std::uint64_t v) {
    if (seen.emplace(std::make_pair(s, v), true).second) work.emplace_back(s, v);
  };
  push(g.initial(), 0);
  while (!work.empty()) {
    auto [s, v] = work.front();
    work.pop_front();
    const auto m = mem(v);
    const auto v2 = v | (std::uint64_t{1} << s);
    const auto m2 = mem(v2);
    if (m2 != m) bar.update[{m, s}] = m2;
    if (owned_by(g.owner(s), sigma.player)) {
      StateSet r = table.resp(s, v);
      if (r.empty()) {
        throw InvariantError("resp is empty at reachable history (" + g.name(s) + ", " +
                             g.format_set(from_mask(v, g.size())) + ")");
      }
      bar.output[{m, s}] = uniform(r.members());
      r.for_each([&](StateId t) { push(t, v2); });
    } else {
      for (StateId t : g.successors(s)) push(t, v2);
    }
  }
  return bar;
}

}  // namespace qsg
