#include "qsg/multiobj.hpp"

#include "qsg/errors.hpp"
#include "qsg/regions.hpp"

#include <map>

namespace qsg {

std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::Player1: return "Player1";
    case Winner::Player2: return "Player2";
    case Winner::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

Winner winner_if(bool p1_wins) { return p1_wins ? Winner::Player1 : Winner::Player2; }

Winner invert(Winner w) {
  if (w == Winner::Player1) return Winner::Player2;
  if (w == Winner::Player2) return Winner::Player1;
  return w;
}

void check_target_count(std::size_t n, const SolverOptions& opts) {
  if (n > opts.max_targets) {
    throw ResourceError("conjunction has " + std::to_string(n) + " almost-sure targets, cap is " +
                        std::to_string(opts.max_targets) + " (raise --max-targets)");
  }
}

class ConjAsReach {
 public:
  ConjAsReach(const StochasticGame& g, const std::vector<StateSet>& targets) : g_(g), t_(targets) {}

  StateSet target(std::uint32_t mask) {
    StateSet out = g_.empty_set();
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const std::uint32_t bit = 1u << i;
      if (mask & bit) out |= t_[i] & region(mask & ~bit);
    }
    return out;
  }

  StateSet region(std::uint32_t mask) {
    if (mask == 0) return g_.all_states();
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    StateSet r = as_reach_region(g_, target(mask));
    memo_.emplace(mask, r);
    return r;
  }

 private:
  const StochasticGame& g_;
  const std::vector<StateSet>& t_;
  std::map<std::uint32_t, StateSet> memo_;
};

std::uint32_t full_mask(std::size_t n) { return n == 0 ? 0u : ((1u << n) - 1u); }

struct ProductCheck {
  bool init_in_region = false;
  bool won = false;
  std::size_t nodes = 0;
  std::size_t region_nodes = 0;
  std::size_t leaf_nodes = 0;
};

// Shared tail of the NZ subproblems: given the product and the leaf set,
// restrict to the almost-sure region of "all AS bits set" and search.
ProductCheck decide_on_product(const StochasticGame& product, Unfolding& u, std::uint64_t as_mask,
                               const StateSet& leaf_candidates, const SolverOptions& opts) {
  ProductCheck pc;
  pc.nodes = product.size();
  StateSet m = as_reach_region(product, u.nodes_with_bits(as_mask));
  pc.region_nodes = m.count();
  StateSet leaf = leaf_candidates & m;
  pc.leaf_nodes = leaf.count();
  pc.init_in_region = m.contains(product.initial());
  if (!pc.init_in_region) return pc;
  ReachabilityGame rg = to_reachability_game(product, m, leaf);
  pc.won = search_win(rg, rg.target);
  if (opts.cross_check) {
    bool by_attractor = existential_region(rg).contains(rg.game.initial());
    if (by_attractor != pc.won) {
      throw InvariantError("product search and attractor disagree on the initial node");
    }
  }
  return pc;
}

void add_product_evidence(Evidence& ev, const std::string& prefix, const ProductCheck& pc) {
  ev.emplace_back(prefix + "product_nodes", std::to_string(pc.nodes));
  ev.emplace_back(prefix + "as_region_nodes", std::to_string(pc.region_nodes));
  ev.emplace_back(prefix + "goal_nodes", std::to_string(pc.leaf_nodes));
  ev.emplace_back(prefix + "init_in_as_region", pc.init_in_region ? "yes" : "no");
}

std::vector<StateSet> with_front(StateSet front, const std::vector<StateSet>& rest) {
  std::vector<StateSet> out{std::move(front)};
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::uint64_t as_bits(std::size_t n) {
  std::uint64_t mask = 0;
  for (std::size_t i = 1; i <= n; ++i) mask |= std::uint64_t{1} << i;
  return mask;
}

}  // namespace

SolveResult solve_conj_nz(const StochasticGame& g, const std::vector<Atom>& atoms) {
  SolveResult r;
  r.fragment = atoms.size() == 1 ? FragmentClass::SingleObjective : FragmentClass::ConjunctionASNZ;
  bool all = true;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].mode != Mode::NZ) throw std::invalid_argument("solve_conj_nz expects NZ atoms only");
    bool won = single_region(g, atoms[i]).contains(g.initial());
    r.evidence.emplace_back("atom[" + std::to_string(i) + "]",
                            format_atom(atoms[i], g) + (won ? " won" : " lost"));
    all = all && won;
  }
  r.winner = winner_if(all);
  return r;
}

StateSet conj_as_reach_target(const StochasticGame& g, const std::vector<StateSet>& targets,
                              const SolverOptions& opts) {
  check_target_count(targets.size(), opts);
  if (targets.empty()) return g.all_states();
  ConjAsReach c(g, targets);
  return c.target(full_mask(targets.size()));
}

StateSet conj_as_reach_region(const StochasticGame& g, const std::vector<StateSet>& targets,
                              const SolverOptions& opts) {
  check_target_count(targets.size(), opts);
  ConjAsReach c(g, targets);
  return c.region(full_mask(targets.size()));
}

SolveResult solve_conj_as_reach(const StochasticGame& g, const std::vector<StateSet>& targets,
                                const SolverOptions& opts) {
  SolveResult r;
  r.fragment = targets.size() == 1 ? FragmentClass::SingleObjective : FragmentClass::ConjunctionASNZ;
  StateSet t = conj_as_reach_target(g, targets, opts);
  StateSet region = as_reach_region(g, t);
  r.evidence.emplace_back("combined_target", g.format_set(t));
  r.evidence.emplace_back("region", g.format_set(region));
  r.winner = winner_if(region.contains(g.initial()));
  return r;
}

SolveResult solve_conj_as_one_nz_reach(const StochasticGame& g, const StateSet& nz_target,
                                       const std::vector<StateSet>& as_targets,
                                       const SolverOptions& opts) {
  check_target_count(as_targets.size(), opts);
  Unfolding u(g, with_front(nz_target, as_targets), opts.max_product);
  StochasticGame product = u.to_game();
  const std::uint64_t as_mask = as_bits(as_targets.size());
  const std::uint64_t leaf_mask = opts.leaf_rule == LeafRule::AllBits ? (as_mask | 1u) : 1u;
  ProductCheck pc = decide_on_product(product, u, as_mask, u.nodes_with_bits(leaf_mask), opts);
  SolveResult r;
  r.fragment = FragmentClass::ConjunctionASNZ;
  add_product_evidence(r.evidence, "", pc);
  r.winner = winner_if(pc.init_in_region && pc.won);
  return r;
}

StateSet nz_safe_to_reach(const StochasticGame& product, const Unfolding& unfolding,
                          std::uint64_t as_mask) {
  StateSet safe = nz_safe_region(product, unfolding.nodes_without_bits(1u));
  return safe & unfolding.nodes_with_bits(as_mask);
}

SolveResult solve_conj_as_one_nz_safe(const StochasticGame& g, const StateSet& safe_target,
                                      const std::vector<StateSet>& as_targets,
                                      const SolverOptions& opts) {
  check_target_count(as_targets.size(), opts);
  Unfolding u(g, with_front(safe_target.complement(), as_targets), opts.max_product);
  StochasticGame product = u.to_game();
  const std::uint64_t as_mask = as_bits(as_targets.size());
  StateSet converted = nz_safe_to_reach(product, u, as_mask);
  ProductCheck pc = decide_on_product(product, u, as_mask, converted, opts);
  SolveResult r;
  r.fragment = FragmentClass::ConjunctionASNZ;
  r.evidence.emplace_back("converted_target_nodes", std::to_string(converted.count()));
  add_product_evidence(r.evidence, "", pc);
  r.winner = winner_if(pc.init_in_region && pc.won);
  return r;
}

SolveResult solve_conjunction(const StochasticGame& g, const std::vector<Atom>& atoms,
                              const SolverOptions& opts) {
  SolveResult r;
  r.fragment = atoms.size() == 1 ? FragmentClass::SingleObjective : FragmentClass::ConjunctionASNZ;

  StateSet safe = g.all_states();
  bool has_safe = false;
  for (const auto& a : atoms) {
    if (a.mode == Mode::AS && a.shape == Shape::Safe) {
      safe &= a.target;
      has_safe = true;
    }
  }
  const StochasticGame* work = &g;
  RestrictedGame restricted;
  auto map = [&](const StateSet& s) { return has_safe ? restricted.map_set(s) : s; };
  if (has_safe) {
    StateSet w = as_safe_region(g, safe);
    r.evidence.emplace_back("as_safe_target", g.format_set(safe));
    r.evidence.emplace_back("as_safe_region", g.format_set(w));
    if (!w.contains(g.initial())) {
      r.winner = Winner::Player2;
      return r;
    }
    restricted = restrict(g, w);
    work = &restricted.game;
  }

  std::vector<StateSet> as_targets;
  std::vector<Atom> nz;
  for (const auto& a : atoms) {
    if (a.mode == Mode::AS && a.shape == Shape::Reach) as_targets.push_back(map(a.target));
    if (a.mode == Mode::NZ) nz.push_back(Atom{a.mode, a.shape, map(a.target)});
  }

  if (nz.empty()) {
    if (as_targets.empty()) {
      r.winner = Winner::Player1;
      return r;
    }
    auto sub = solve_conj_as_reach(*work, as_targets, opts);
    for (auto& e : sub.evidence) r.evidence.push_back(std::move(e));
    r.winner = sub.winner;
    return r;
  }

  bool all = true;
  for (std::size_t i = 0; i < nz.size(); ++i) {
    const auto& a = nz[i];
    auto sub = a.shape == Shape::Reach ? solve_conj_as_one_nz_reach(*work, a.target, as_targets, opts)
                                       : solve_conj_as_one_nz_safe(*work, a.target, as_targets, opts);
    const std::string prefix = "nz[" + std::to_string(i) + "].";
    r.evidence.emplace_back(prefix + "atom", format_atom(a, *work));
    for (auto& [k, v] : sub.evidence) r.evidence.emplace_back(prefix + k, v);
    r.evidence.emplace_back(prefix + "verdict", std::string(to_string(sub.winner)));
    all = all && sub.winner == Winner::Player1;
  }
  r.winner = winner_if(all);
  return r;
}

SolveResult solve_positive_as(const StochasticGame& g, const Query& q, const SolverOptions& opts) {
  SolveResult r;
  r.fragment = FragmentClass::PositiveAS;
  const Query p = is_positive(q) ? q : negate_normalize(q);
  for (const auto& a : atoms(p)) {
    if (a.mode != Mode::AS) throw std::invalid_argument("solve_positive_as expects AS atoms only");
  }
  auto terms = to_dnf_terms(p, opts.max_dnf_terms);
  r.evidence.emplace_back("dnf_terms", std::to_string(terms.size()));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto sub = solve_conjunction(g, terms[i], opts);
    if (sub.winner == Winner::Player1) {
      std::vector<Query> leaves;
      for (const auto& a : terms[i]) leaves.push_back(Query::leaf(a));
      r.evidence.emplace_back("satisfied_term", format_query(Query::conj(std::move(leaves)), g));
      r.winner = Winner::Player1;
      return r;
    }
  }
  r.winner = Winner::Player2;
  return r;
}

SolveResult solve(const StochasticGame& g, const Query& q, const SolverOptions& opts) {
  const Query p = negate_normalize(q);
  const FragmentClass f = classify(p);
  SolveResult r;
  switch (f) {
    case FragmentClass::SingleObjective: {
      StateSet region = single_region(g, p.atom);
      r.evidence.emplace_back("region", g.format_set(region));
      r.winner = winner_if(region.contains(g.initial()));
      break;
    }
    case FragmentClass::ConjunctionASNZ:
      r = solve_conjunction(g, atoms(p), opts);
      break;
    case FragmentClass::PositiveAS:
      r = solve_positive_as(g, p, opts);
      break;
    case FragmentClass::DisjunctionASNZ:
    case FragmentClass::PositiveNZ: {
      const Query d = dual(p);
      SolveResult sub = solve(swap_players(g), d, opts);
      r.winner = invert(sub.winner);
      r.evidence.emplace_back("dual_query", format_query(d, g));
      r.evidence.emplace_back("dual_winner", std::string(to_string(sub.winner)));
      for (auto& [k, v] : sub.evidence) r.evidence.emplace_back("dual." + k, v);
      break;
    }
    case FragmentClass::GeneralNoNZSafe:
    case FragmentClass::General:
      r.winner = Winner::Unknown;
      r.evidence.emplace_back("hint", "fragment is not determined; run the oracle for bounded-memory evidence");
      break;
  }
  r.fragment = f;
  return r;
}

}  // namespace qsg
