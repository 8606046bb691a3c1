// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

#include "qsg/dqbf.hpp"
#include "qsg/fixtures.hpp"
#include "qsg/multiobj.hpp"
#include "qsg/oracle.hpp"
#include "qsg/regions.hpp"

#include "support/crosscheck.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace qsg;
using namespace qsg::testing;

namespace {

struct Result {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void fail(std::string why) {
    pass = false;
    if (failures.size() < 5) failures.push_back(std::move(why));
  }
};

constexpr unsigned kCorpusSeeds = 1000;

// Corpus checks need more than the interactive default on NZ G conjunctions.
OracleOptions corpus_options() {
  OracleOptions o;
  o.max_strategies = 10000000;
  return o;
}

OracleOptions figure_options() {
  OracleOptions o;
  o.max_states = 8;
  return o;
}

Query fixture_query(const std::string& fix, const std::string& label) {
  auto g = fixture(fix).game();
  return parse_query(fixture(fix).query(label), g);
}

StateSet support_at(const StrategyAutomaton& a, const StochasticGame& g, const std::vector<StateId>& before,
                    StateId s) {
  auto m = a.initial_memory;
  for (StateId b : before) m = a.next_memory(m, b);
  StateSet out(g.size());
  for (const auto& [t, p] : a.decide(g, m, s)) {
    if (p > 0) out.insert(t);
  }
  return out;
}

std::size_t find_support(const std::vector<StrategyAutomaton>& v, const StochasticGame& g,
                         const std::vector<StateId>& before, StateId s, const StateSet& support) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (support_at(v[i], g, before, s) == support) return i;
  }
  return v.size();
}

// 1. fig1: no winner at three memory classes, and the four representative cells.
void criterion1(Result& r) {
  auto g = fixture("fig1").game();
  const StateId s0 = g.at("s0"), s1 = g.at("s1");
  for (const char* label : {"phi", "phi_prime", "phi_dprime"}) {
    auto q = fixture_query("fig1", label);
    for (auto cls : {StrategyClass::memoryless(), StrategyClass::target_set(query_targets(q)),
                     StrategyClass::visited_set()}) {
      auto v = brute_force_winner(g, q, cls, cls);
      const std::string where = std::string(label) + " " + cls.describe();
      if (v.outcome != OracleOutcome::NoWinnerInClass) {
        r.fail(where + ": " + std::string(to_string(v.outcome)));
        continue;
      }
      const auto a = find_support(v.sigmas, g, {}, s0, g.set_of({"s1"}));
      const auto b = find_support(v.sigmas, g, {}, s0, g.set_of({"s1", "s2"}));
      const auto c = find_support(v.taus, g, {s0}, s1, g.set_of({"s3"}));
      const auto d = find_support(v.taus, g, {s0}, s1, g.set_of({"s3", "s4"}));
      if (a >= v.sigmas.size() || b >= v.sigmas.size() || c >= v.taus.size() || d >= v.taus.size()) {
        r.fail(where + ": representative strategies missing from the matrix");
        continue;
      }
      const bool ok = v.matrix[a][c] && v.matrix[b][d] && !v.matrix[a][d] && !v.matrix[b][c];
      if (!ok) r.fail(where + ": matrix cells differ");
    }
  }
  r.detail << "phi, phi', phi'' x 3 classes, cells s1/s3=1 mix/mix=1 s1/mix=0 mix/s3=0";
}

// 2. fig2: memory hierarchy and the reference strategy.
void criterion2(Result& r) {
  auto g = fixture("fig2").game();
  auto q = fixture_query("fig2", "phi");
  auto o = figure_options();
  auto ml = brute_force_winner(g, q, StrategyClass::memoryless(), StrategyClass::memoryless(), o);
  if (ml.outcome == OracleOutcome::Player1WinsInClass) r.fail("memoryless player-1 winner found");
  auto ts = StrategyClass::target_set(query_targets(q));
  auto tv = brute_force_winner(g, q, ts, ts, o);
  if (tv.outcome == OracleOutcome::Player1WinsInClass) r.fail("target-set player-1 winner found");
  auto vs = brute_force_winner(g, q, StrategyClass::visited_set(), StrategyClass::visited_set(), o);
  if (vs.outcome != OracleOutcome::Player1WinsInClass) r.fail("no visited-set winner");
  auto ref = verify_strategy(g, parse_strategy(fixture("fig2").strategy_text, g), q, StrategyClass::visited_set(), o);
  if (!ref.holds) r.fail("reference strategy refuted");
  if (ref.evidence_only) r.fail("reference strategy only bounded evidence");
  r.detail << "memoryless " << to_string(ml.outcome) << ", target-set " << to_string(tv.outcome) << ", visited-set "
           << to_string(vs.outcome) << ", reference strategy holds vs " << ref.adversaries << " adversaries";
}

// 3. fig3: no visited-set winner; the order-aware strategy survives bounded adversaries.
void criterion3(Result& r) {
  auto g = fixture("fig3").game();
  auto q = fixture_query("fig3", "phi");
  auto o = figure_options();
  auto v = brute_force_winner(g, q, StrategyClass::visited_set(), StrategyClass::visited_set(), o);
  if (v.outcome == OracleOutcome::Player1WinsInClass) r.fail("visited-set player-1 winner found");
  auto res = verify_strategy(g, parse_strategy(fixture("fig3").strategy_text, g), q, StrategyClass::visited_set(), o);
  if (!res.holds) r.fail("order-aware strategy refuted");
  if (!res.evidence_only) r.fail("result not labeled as evidence");
  r.detail << "visited-set " << to_string(v.outcome) << " (" << v.sigma_count << " partial strategies), "
           << "order-aware strategy holds vs " << res.adversaries << " adversaries, labeled evidence";
}

// 4. solve() against the oracle on the random corpus.
void criterion4(Result& r) {
  std::array<std::size_t, 4> per{};
  for (unsigned seed = 0; seed < kCorpusSeeds; ++seed) {
    auto inst = corpus_instance(seed);
    auto s = solve(inst.game, inst.query);
    auto o = oracle_winner(inst.game, inst.query, corpus_options());
    if (s.winner == Winner::Unknown || s.winner != o) {
      r.fail("seed " + std::to_string(seed) + " " + format_query(inst.query, inst.game) + ": solve " +
             std::string(to_string(s.winner)) + ", oracle " + std::string(to_string(o)));
    }
    ++per[static_cast<std::size_t>(inst.family)];
  }
  r.detail << kCorpusSeeds << " instances (conj " << per[0] << ", disj " << per[1] << ", positive-as " << per[2]
           << ", positive-nz " << per[3] << ")";
}

// 5. NZ conjunctions, AS disjunctions and AS reachability conjunctions against the oracle on the corpus games and target pools.
void criterion5(Result& r) {
  std::size_t l1 = 0, c1 = 0, l2 = 0;
  for (unsigned seed = 0; seed < kCorpusSeeds; ++seed) {
    auto inst = corpus_instance(seed);
    const auto& g = inst.game;
    auto leaves = atoms(inst.query);
    std::vector<Query> nz, as;
    std::vector<StateSet> reach;
    bool all_nz = true, any_as = false;
    for (const auto& a : leaves) {
      nz.push_back(Query::leaf(Mode::NZ, a.shape, a.target));
      as.push_back(Query::leaf(Mode::AS, a.shape, a.target));
      all_nz = all_nz && single_region(g, Mode::NZ, a.shape, a.target).contains(g.initial());
      any_as = any_as || single_region(g, Mode::AS, a.shape, a.target).contains(g.initial());
      reach.push_back(a.target);
    }
    const auto tag = "seed " + std::to_string(seed) + " ";
    const auto o = corpus_options();
    if ((oracle_winner(g, Query::conj(nz), o) == Winner::Player1) != all_nz) r.fail(tag + "NZ conjunction");
    if ((oracle_winner(g, Query::disj(as), o) == Winner::Player1) != any_as) r.fail(tag + "AS disjunction");
    l1 += 1;
    c1 += 1;
    std::vector<Query> reach_atoms;
    StateSet uni = g.empty_set();
    for (const auto& t : reach) {
      reach_atoms.push_back(Query::leaf(Mode::AS, Shape::Reach, t));
      uni |= t;
    }
    auto t_prime = conj_as_reach_target(g, reach);
    if (!t_prime.is_subset_of(uni)) r.fail(tag + "T' not inside the union");
    const bool single = as_reach_region(g, t_prime).contains(g.initial());
    if ((oracle_winner(g, Query::conj(reach_atoms), o) == Winner::Player1) != single) r.fail(tag + "AS reach conjunction");
    if ((solve_conj_as_reach(g, reach).winner == Winner::Player1) != single) r.fail(tag + "AS reach conjunction solver");
    l2 += 1;
  }
  r.detail << "NZ conj: " << l1 << ", AS disj: " << c1 << ", AS reach conj: " << l2 << " instances vs oracle";
}

// 6. sigma-bar of oracle winners on games of at most four states; the two-state counterexample.
void criterion6(Result& r) {
  std::size_t winners = 0, tried = 0;
  const GenParams small{2, 4, 2, 3};
  for (unsigned seed = 0; seed < 1500; ++seed) {
    std::mt19937 rng(100000 + seed);
    auto g = random_game(rng, small);
    auto q = random_query(rng, g, static_cast<Family>(seed % 5), small);
    if (contains_nz_safe(q)) continue;
    ++tried;
    auto cls = StrategyClass::visited_set();
    auto o = corpus_options();
    o.check_player2 = false;
    auto v = brute_force_winner(g, q, cls, cls, o);
    if (v.outcome != OracleOutcome::Player1WinsInClass || !v.witness) continue;
    ++winners;
    auto bar = derive_sigma_bar(g, *v.witness);
    auto res = verify_strategy(g, bar, q, StrategyClass::visited_set(), o);
    if (!res.holds) r.fail("seed " + std::to_string(seed) + " " + format_query(q, g));
  }
  if (winners < 100) r.fail("too few winners: " + std::to_string(winners));
  // Two-state example: sigma_k wins NZ G {s0}, its sigma-bar leaves s0 with probability one.
  auto stay = fixture("stay").game();
  auto q = fixture_query("stay", "phi");
  StrategyAutomaton tau;
  tau.player = Player::P2;
  for (unsigned k : {2u, 3u, 4u}) {
    auto sigma = stay_counter_strategy(stay, k);
    auto chain = induced_chain(stay, sigma, tau);
    if (!eval_qualitative(chain, q)) r.fail("sigma_" + std::to_string(k) + " loses");
    auto bar_chain = induced_chain(stay, derive_sigma_bar(stay, sigma), tau);
    const Rational pr = reach_probability(bar_chain, stay.set_of({"s1"}));
    if (pr != 1) r.fail("sigma-bar Pr(F s1) = " + to_string(pr));
    if (eval_qualitative(bar_chain, q)) r.fail("sigma-bar still wins NZ G {s0}");
  }
  r.detail << winners << " winners of " << tried << " queries verified; stay: Pr(F s1) = 1 for k = 2..4";
}

std::string dqbf_text(std::size_t n, std::size_t m, unsigned dep_mask, const std::string& matrix) {
  std::string t = "forall";
  for (std::size_t i = 1; i <= n; ++i) t += " x" + std::to_string(i);
  t += "\n";
  for (std::size_t j = 0; j < m; ++j) {
    t += "exists y" + std::to_string(j + 1) + " deps {";
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
      if ((dep_mask >> (j * n + i)) & 1u) {
        t += (first ? "x" : ",x") + std::to_string(i + 1);
        first = false;
      }
    }
    t += "}\n";
  }
  return t + "matrix " + matrix + "\n";
}

// 7. DQBF satisfiability against the oracle on the reduced games.
void criterion7(Result& r) {
  OracleOptions o;
  o.max_states = 64;
  o.max_strategies = 10000000;
  std::size_t total = 0, sat = 0;
  for (std::size_t n = 0; n <= 2; ++n) {
    for (std::size_t m = 1; m <= 2; ++m) {
      for (unsigned dm = 0; dm < (1u << (n * m)); ++dm) {
        for (const auto& mat : dqbf_matrices()) {
          bool fits = true;
          for (std::size_t i = n + 1; i <= 2; ++i) fits = fits && mat.find("x" + std::to_string(i)) == std::string::npos;
          for (std::size_t i = m + 1; i <= 2; ++i) fits = fits && mat.find("y" + std::to_string(i)) == std::string::npos;
          if (!fits) continue;
          auto f = parse_dqbf(dqbf_text(n, m, dm, mat));
          const bool b = dqbf_brute_sat(f);
          auto red = reduce_to_game(f);
          auto v = brute_force_winner(red.game, red.psi, StrategyClass::visited_set(), StrategyClass::visited_set(), o);
          ++total;
          sat += b;
          if (b != (v.outcome == OracleOutcome::Player1WinsInClass)) {
            r.fail("mismatch on " + format_dqbf(f) + " (sat " + std::to_string(b) + ", " +
                   std::string(to_string(v.outcome)) + ")");
          }
        }
      }
    }
  }
  r.detail << total << " formulas (" << sat << " SAT), n <= 2, m <= 2, all dependency sets";
}

// 8. All games with up to four states (up to relabelling) against memoryless brute force.
struct TinyGame {
  std::size_t n = 0;
  std::array<int, 4> owner{};         // 0 p1, 1 p2, 2 chance
  std::array<unsigned, 4> succ{};     // successor masks
};

// Reflexive-transitive closure of a successor relation on at most four nodes.
std::array<unsigned, 4> closure(const std::array<unsigned, 4>& e, std::size_t n) {
  std::array<unsigned, 4> r{};
  for (std::size_t v = 0; v < n; ++v) r[v] = e[v] | (1u << v);
  for (std::size_t round = 0; round < n; ++round) {
    for (std::size_t v = 0; v < n; ++v) {
      unsigned acc = r[v];
      for (std::size_t u = 0; u < n; ++u) {
        if ((r[v] >> u) & 1u) acc |= r[u];
      }
      r[v] = acc;
    }
  }
  return r;
}

// Per start state: the chain given by successor masks e satisfies NZ F T / AS F T.
unsigned nz_reach(const std::array<unsigned, 4>& rc, std::size_t n, unsigned t) {
  unsigned out = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (rc[v] & t) out |= 1u << v;
  }
  return out;
}

unsigned as_reach(const std::array<unsigned, 4>& e, std::size_t n, unsigned t) {
  std::array<unsigned, 4> cut = e;
  for (std::size_t v = 0; v < n; ++v) {
    if ((t >> v) & 1u) cut[v] = 1u << v;
  }
  auto rc = closure(cut, n);
  unsigned can = nz_reach(rc, n, t);
  unsigned out = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if ((rc[v] & ~can & ((1u << n) - 1)) == 0) out |= 1u << v;
  }
  return out;
}

bool canonical(const TinyGame& g) {
  std::array<std::size_t, 4> perm{0, 1, 2, 3};
  auto code = [&](const std::array<std::size_t, 4>& p) {
    // p maps old index to new index.
    std::array<unsigned, 4> slot{};
    for (std::size_t v = 0; v < g.n; ++v) {
      unsigned m = 0;
      for (std::size_t u = 0; u < g.n; ++u) {
        if ((g.succ[v] >> u) & 1u) m |= 1u << p[u];
      }
      slot[p[v]] = static_cast<unsigned>(g.owner[v]) * 16 + m;
    }
    std::uint64_t c = 0;
    for (std::size_t v = 0; v < g.n; ++v) c = c * 64 + slot[v];
    return c;
  };
  const auto mine = code(perm);
  while (std::next_permutation(perm.begin(), perm.begin() + static_cast<long>(g.n))) {
    if (code(perm) < mine) return false;
  }
  return true;
}

StochasticGame to_game(const TinyGame& t) {
  GameBuilder b("tiny");
  for (std::size_t v = 0; v < t.n; ++v) {
    b.add_state("s" + std::to_string(v), static_cast<Owner>(t.owner[v]));
  }
  for (StateId v = 0; v < t.n; ++v) {
    const unsigned k = static_cast<unsigned>(__builtin_popcount(t.succ[v]));
    for (StateId u = 0; u < t.n; ++u) {
      if (!((t.succ[v] >> u) & 1u)) continue;
      if (t.owner[v] == 2) {
        b.add_probability(v, u, Rational(1, k));
      } else {
        b.add_edge(v, u);
      }
    }
  }
  b.set_initial(0);
  return b.build();
}

void criterion8(Result& r) {
  std::size_t games = 0, checks = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const unsigned full = (1u << n) - 1;
    std::size_t owner_codes = 1, succ_codes = 1;
    for (std::size_t i = 0; i < n; ++i) {
      owner_codes *= 3;
      succ_codes *= full;
    }
    for (std::size_t oc = 0; oc < owner_codes; ++oc) {
      for (std::size_t sc = 0; sc < succ_codes; ++sc) {
        TinyGame t;
        t.n = n;
        std::size_t a = oc, b = sc;
        for (std::size_t v = 0; v < n; ++v) {
          t.owner[v] = static_cast<int>(a % 3);
          a /= 3;
          t.succ[v] = static_cast<unsigned>(b % full) + 1;
          b /= full;
        }
        if (!canonical(t)) continue;
        ++games;
        // Strategy profiles: one successor per player state; sigma index over p1 states, tau over p2.
        std::vector<std::vector<unsigned>> choices(n);
        for (std::size_t v = 0; v < n; ++v) {
          if (t.owner[v] == 2) {
            choices[v] = {t.succ[v]};
          } else {
            for (std::size_t u = 0; u < n; ++u) {
              if ((t.succ[v] >> u) & 1u) choices[v].push_back(1u << u);
            }
          }
        }
        std::size_t n_sigma = 1, n_tau = 1;
        for (std::size_t v = 0; v < n; ++v) (t.owner[v] == 0 ? n_sigma : n_tau) *= choices[v].size();
        // win[target][atom] accumulated as OR over sigma of AND over tau.
        std::vector<std::array<unsigned, 4>> win(full + 1, std::array<unsigned, 4>{});
        for (std::size_t si = 0; si < n_sigma; ++si) {
          std::vector<std::array<unsigned, 4>> all(full + 1, std::array<unsigned, 4>{full, full, full, full});
          for (std::size_t ti = 0; ti < n_tau; ++ti) {
            std::array<unsigned, 4> e{};
            std::size_t a1 = si, a2 = ti;
            for (std::size_t v = 0; v < n; ++v) {
              if (t.owner[v] == 0) {
                e[v] = choices[v][a1 % choices[v].size()];
                a1 /= choices[v].size();
              } else if (t.owner[v] == 1) {
                e[v] = choices[v][a2 % choices[v].size()];
                a2 /= choices[v].size();
              } else {
                e[v] = t.succ[v];
              }
            }
            auto rc = closure(e, n);
            for (unsigned tm = 1; tm < full; ++tm) {
              const unsigned nf = nz_reach(rc, n, tm);
              const unsigned af = as_reach(e, n, tm);
              const unsigned nf_out = nz_reach(rc, n, full & ~tm);
              const unsigned af_out = as_reach(e, n, full & ~tm);
              all[tm][0] &= af;                    // AS F T
              all[tm][1] &= nf;                    // NZ F T
              all[tm][2] &= full & ~nf_out;        // AS G T
              all[tm][3] &= full & ~af_out;        // NZ G T
            }
          }
          for (unsigned tm = 1; tm < full; ++tm) {
            for (int k = 0; k < 4; ++k) win[tm][k] |= all[tm][k];
          }
        }
        auto g = to_game(t);
        for (unsigned tm = 1; tm < full; ++tm) {
          auto target = from_mask(tm, n);
          const std::array<std::pair<Mode, Shape>, 4> kinds{{{Mode::AS, Shape::Reach},
                                                             {Mode::NZ, Shape::Reach},
                                                             {Mode::AS, Shape::Safe},
                                                             {Mode::NZ, Shape::Safe}}};
          for (int k = 0; k < 4; ++k) {
            const auto region = to_mask(single_region(g, kinds[k].first, kinds[k].second, target));
            ++checks;
            if (region != win[tm][k]) {
              r.fail(format_game(g) + format_atom({kinds[k].first, kinds[k].second, target}, g));
            }
          }
        }
      }
    }
  }
  r.detail << games << " games up to relabelling, " << checks << " regions (all targets, all four atoms)";
}

// 9. Duality on the corpus; qualitative evaluation against exact probabilities.
void criterion9(Result& r) {
  for (unsigned seed = 0; seed < kCorpusSeeds; ++seed) {
    auto inst = corpus_instance(seed);
    auto a = solve(inst.game, inst.query).winner;
    auto b = solve(swap_players(inst.game), dual(inst.query)).winner;
    if (a == Winner::Unknown || b != flip(a)) r.fail("duality seed " + std::to_string(seed));
  }
  std::size_t chains = 0, atoms_checked = 0;
  for (unsigned seed = 0; chains < 2000 && seed < 20000; ++seed) {
    std::mt19937 rng(500000 + seed);
    auto g = random_game(rng, {2, 5, 3, 3});
    auto sigma = random_automaton(rng, g, Player::P1, static_cast<std::uint32_t>(pick(rng, 1, 3)));
    auto tau = random_automaton(rng, g, Player::P2, static_cast<std::uint32_t>(pick(rng, 1, 3)));
    auto c = induced_chain(g, sigma, tau);
    if (c.nodes.size() > 20) continue;
    ++chains;
    for (std::uint64_t tm = 1; tm + 1 < (1ull << g.size()); ++tm) {
      auto t = from_mask(tm, g.size());
      const Rational in = reach_probability(c, t);
      const Rational out = reach_probability(c, t.complement());
      const bool ok = eval_qualitative(c, Atom{Mode::AS, Shape::Reach, t}) == (in == 1) &&
                      eval_qualitative(c, Atom{Mode::NZ, Shape::Reach, t}) == (in > 0) &&
                      eval_qualitative(c, Atom{Mode::AS, Shape::Safe, t}) == (out == 0) &&
                      eval_qualitative(c, Atom{Mode::NZ, Shape::Safe, t}) == (out < 1);
      atoms_checked += 4;
      if (!ok) r.fail("chain seed " + std::to_string(seed) + " target " + g.format_set(t));
    }
  }
  if (chains < 2000) r.fail("only " + std::to_string(chains) + " chains");
  r.detail << kCorpusSeeds << " dual pairs; " << chains << " chains (<= 20 nodes), " << atoms_checked
           << " atom evaluations vs exact probabilities";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;  // 0 = no runtime bound
    std::function<void(Result&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "fig1 nondeterminacy", 1, criterion1},
      {2, "fig2 memory hierarchy", 5, criterion2},
      {3, "fig3 visited-set insufficiency", 60, criterion3},
      {4, "determined fragments vs oracle", 600, criterion4},
      {5, "conjunction and disjunction shapes", 0, criterion5},
      {6, "sigma-bar construction", 0, criterion6},
      {7, "DQBF reduction equivalence", 600, criterion7},
      {8, "single-objective regions vs brute force", 0, criterion8},
      {9, "duality and exact probabilities", 0, criterion9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(r);
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && dt > c.budget_s) r.fail("runtime over budget");
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s", dt);
    std::cout << "criterion " << c.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << c.title << " ("
              << r.detail.str() << "; " << timing << ")\n";
    for (const auto& f : r.failures) std::cout << "    " << f << "\n";
    failed += !r.pass;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
