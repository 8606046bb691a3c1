#include "qsg/cli.hpp"

#include "qsg/dqbf.hpp"
#include "qsg/errors.hpp"
#include "qsg/fixtures.hpp"
#include "qsg/multiobj.hpp"
#include "qsg/oracle.hpp"
#include "qsg/regions.hpp"
#include "qsg/strategy.hpp"
#include "qsg/unfold.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace qsg {

std::uint64_t fnv1a(std::string_view data, std::uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

using Json = nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Key-value report; every input text feeds the digest.
struct Report {
  std::string command;
  std::uint64_t digest = fnv1a("");
  Json result = Json::object();
  std::vector<std::string> notes;

  void input(std::string_view text) {
    digest = fnv1a(text, digest);
    digest = fnv1a(std::string_view("\0", 1), digest);
  }
  Json& operator[](const std::string& key) { return result[key]; }
};

void flatten(std::ostream& out, const std::string& key, const Json& v) {
  if (v.is_object()) {
    for (const auto& [k, sub] : v.items()) flatten(out, key + "." + k, sub);
  } else if (v.is_array()) {
    for (const auto& item : v) flatten(out, key, item);
  } else if (v.is_string()) {
    out << key << ": " << v.get<std::string>() << "\n";
  } else {
    out << key << ": " << v.dump() << "\n";
  }
}

void emit(const Report& r, bool json, std::ostream& out, std::ostream& err) {
  for (const auto& n : r.notes) err << "note: " << n << "\n";
  if (json) {
    Json j = Json::object();
    j["command"] = r.command;
    j["digest"] = "fnv1a:" + hex64(r.digest);
    j["result"] = r.result;
    j["notes"] = r.notes;
    out << j.dump(2) << "\n";
    return;
  }
  out << "command: " << r.command << "\n";
  out << "digest: fnv1a:" << hex64(r.digest) << "\n";
  for (const auto& [k, v] : r.result.items()) flatten(out, k, v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

// A game argument is a file path or builtin:<fixture>.
StochasticGame load_game(const std::string& arg, Report& r) {
  std::string text;
  if (arg.starts_with("builtin:")) {
    try {
      text = fixture(arg.substr(8)).game_text;
    } catch (const std::out_of_range& e) {
      throw ParseError(e.what());
    }
  } else {
    text = read_file(arg);
  }
  r.input(text);
  auto g = parse_game(text);
  for (const auto& n : g.notes()) r.notes.push_back(n);
  return g;
}

Query load_query(const std::string& text, const StochasticGame& g, Report& r) {
  r.input(text);
  return parse_query(text, g);
}

// For classify without a game: one placeholder state per name used in a set literal.
StochasticGame names_game(std::string_view q) {
  std::set<std::string> seen;
  std::vector<std::string> names;
  bool in_set = false;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && seen.insert(cur).second) names.push_back(cur);
    cur.clear();
  };
  for (char c : q) {
    if (c == '{') {
      in_set = true;
    } else if (c == '}') {
      flush();
      in_set = false;
    } else if (in_set) {
      if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
        flush();
      } else {
        cur += c;
      }
    }
  }
  GameBuilder b("query");
  if (names.empty()) names.push_back("_");
  for (auto& n : names) b.add_state(n, Owner::P1);
  b.set_initial(0);
  return b.build();
}

Json strategy_json(const StrategyAutomaton& s, const StochasticGame& g) {
  return describe_strategy(s, g);
}

Json verdict_json(const OracleVerdict& v, const StochasticGame& g) {
  Json j = Json::object();
  j["outcome"] = std::string(to_string(v.outcome));
  j["sigma_count"] = v.sigma_count;
  j["tau_count"] = v.tau_count;
  j["player2_checked"] = v.player2_checked;
  if (v.witness) j["witness"] = strategy_json(*v.witness, g);
  if (!v.matrix.empty()) {
    Json sig = Json::array(), tau = Json::array(), rows = Json::array();
    for (std::size_t i = 0; i < v.sigmas.size(); ++i) {
      sig.push_back("s" + std::to_string(i) + " " + describe_strategy(v.sigmas[i], g));
    }
    for (std::size_t i = 0; i < v.taus.size(); ++i) {
      tau.push_back("t" + std::to_string(i) + " " + describe_strategy(v.taus[i], g));
    }
    for (const auto& row : v.matrix) {
      std::string line;
      for (bool b : row) line += b ? '1' : '0';
      rows.push_back(line);
    }
    j["sigma"] = sig;
    j["tau"] = tau;
    j["matrix"] = rows;
  }
  return j;
}

void add_oracle_caps(CLI::App* sub, OracleOptions& o) {
  sub->add_option("--max-states", o.max_states, "largest game the oracle accepts")->capture_default_str();
  sub->add_option("--max-strategies", o.max_strategies, "strategies per enumeration")->capture_default_str();
  sub->add_option("--max-memory-sets", o.max_memory_sets, "explicit memory bound cap")->capture_default_str();
  sub->add_option("--max-matrix", o.max_matrix, "strategies per side in the printed table")
      ->capture_default_str();
}

void add_solver_caps(CLI::App* sub, SolverOptions& o) {
  sub->add_option("--max-targets", o.max_targets, "AS reachability targets per conjunction")
      ->capture_default_str();
  sub->add_option("--max-product", o.max_product, "goal unfolding node cap")->capture_default_str();
  sub->add_option("--max-dnf-terms", o.max_dnf_terms, "DNF term cap")->capture_default_str();
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

Player parse_player(const std::string& s) {
  if (s == "p1") return Player::P1;
  if (s == "p2") return Player::P2;
  throw ParseError("player must be p1 or p2, got '" + s + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qualitative multi-objective stochastic games", "qsgame"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "structured output");

  std::string game_path, query_text, strategy_path, output, player = "p1";
  std::vector<std::string> atom_parts, target_texts;
  SolverOptions sopts;
  OracleOptions oopts;
  std::string mem1 = "visited", mem2 = "visited", adversary = "visited", leaf_rule = "nz-goal";
  bool deterministic = false, no_p2 = false, escalate = false, sigma_bar = false, list = false;
  std::size_t max_nodes = Unfolding::kDefaultMaxNodes, max_memory = 1u << 16;
  DqbfLimits dlimits;

  auto* validate = app.add_subcommand("validate", "parse and check a game file");
  validate->add_option("game", game_path, "game file or builtin:<name>")->required();

  auto* region = app.add_subcommand("region", "winning region of a single atom");
  region->add_option("game", game_path)->required();
  region->add_option("--atom", atom_parts, "e.g. AS F {s1,s2}")->required()->expected(1, 3);
  region->add_option("--player", player, "p1 or p2")->capture_default_str();

  auto* solve_cmd = app.add_subcommand("solve", "decide the winner of a query");
  solve_cmd->add_option("game", game_path)->required();
  solve_cmd->add_option("--query", query_text)->required();
  solve_cmd->add_option("--leaf-rule", leaf_rule, "nz-goal or all-bits")->capture_default_str();
  solve_cmd->add_flag("--cross-check", sopts.cross_check, "check product searches against attractors");
  add_solver_caps(solve_cmd, sopts);

  auto* classify_cmd = app.add_subcommand("classify", "fragment of a query");
  classify_cmd->add_option("--query", query_text)->required();
  classify_cmd->add_option("--game", game_path, "resolve sets against this game");

  auto* unfold_cmd = app.add_subcommand("unfold", "goal unfolding statistics");
  unfold_cmd->add_option("game", game_path)->required();
  unfold_cmd->add_option("--targets", target_texts, "target sets, e.g. {s1} {s2,s3}")->required();
  unfold_cmd->add_option("--max-nodes", max_nodes)->capture_default_str();
  unfold_cmd->add_option("-o,--output", output, "write the product game");

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force winner within strategy classes");
  oracle_cmd->add_option("game", game_path)->required();
  oracle_cmd->add_option("--query", query_text)->required();
  oracle_cmd->add_option("--mem1", mem1, "memoryless|targets|visited|explicit:K")->capture_default_str();
  oracle_cmd->add_option("--mem2", mem2, "memoryless|targets|visited|explicit:K")->capture_default_str();
  oracle_cmd->add_flag("--deterministic", deterministic, "single-successor outputs only");
  oracle_cmd->add_flag("--no-p2", no_p2, "skip the player-2 search");
  oracle_cmd->add_flag("--escalate", escalate, "memoryless, target-set and visited-set in turn");
  add_oracle_caps(oracle_cmd, oopts);

  auto* verify_cmd = app.add_subcommand("verify", "check a strategy against a class of adversaries");
  verify_cmd->add_option("game", game_path)->required();
  verify_cmd->add_option("--strategy", strategy_path, "strategy file or builtin:<name>")->required();
  verify_cmd->add_option("--query", query_text)->required();
  verify_cmd->add_option("--adversary", adversary, "memoryless|targets|visited|explicit:K")
      ->capture_default_str();
  verify_cmd->add_flag("--deterministic", deterministic, "deterministic adversaries only");
  verify_cmd->add_flag("--sigma-bar", sigma_bar, "verify the visited-set strategy derived from it");
  verify_cmd->add_option("--max-memory", max_memory, "visited sets for --sigma-bar")->capture_default_str();
  add_oracle_caps(verify_cmd, oopts);

  auto* dsat = app.add_subcommand("dqbf-sat", "brute-force DQBF satisfiability");
  dsat->add_option("file", game_path)->required();
  dsat->add_option("--max-universals", dlimits.max_universals)->capture_default_str();
  dsat->add_option("--max-existentials", dlimits.max_existentials)->capture_default_str();
  dsat->add_option("--max-table-bits", dlimits.max_table_bits)->capture_default_str();

  auto* dred = app.add_subcommand("dqbf-reduce", "reduce a DQBF to a game and query");
  dred->add_option("file", game_path)->required();
  dred->add_option("-o,--output", output, "write the game");

  auto* ex = app.add_subcommand("examples", "built-in example games");
  ex->add_option("name", game_path, "fig1|fig2|fig3|stay");
  ex->add_option("-o,--output", output, "directory for <name>.game/.queries/.strategy");
  ex->add_flag("--list", list, "list the built-in examples");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Report r;
  auto* sub = app.get_subcommands().front();
  r.command = sub->get_name();
  try {
    if (sub == validate) {
      auto g = load_game(game_path, r);
      std::size_t p1 = 0, p2 = 0, ch = 0, edges = 0, terminal = 0;
      for (StateId s = 0; s < g.size(); ++s) {
        (g.owner(s) == Owner::P1 ? p1 : g.owner(s) == Owner::P2 ? p2 : ch)++;
        edges += g.successors(s).size();
        terminal += g.is_terminal(s);
      }
      r["title"] = g.title();
      r["states"] = g.size();
      r["p1_states"] = p1;
      r["p2_states"] = p2;
      r["chance_states"] = ch;
      r["transitions"] = edges;
      r["terminal_states"] = terminal;
      r["initial"] = g.name(g.initial());
      r["valid"] = true;
    } else if (sub == region) {
      auto g = load_game(game_path, r);
      auto q = load_query(join(atom_parts), g, r);
      if (!q.is_atom()) throw ParseError("--atom expects a single atom");
      Player p = parse_player(player);
      auto reg = single_region(g, q.atom, p);
      r["atom"] = format_atom(q.atom, g);
      r["player"] = std::string(to_string(p));
      r["region"] = g.format_set(reg);
      r["size"] = reg.count();
      r["initial_wins"] = reg.contains(g.initial());
    } else if (sub == solve_cmd) {
      if (leaf_rule == "nz-goal") {
        sopts.leaf_rule = LeafRule::NzGoal;
      } else if (leaf_rule == "all-bits") {
        sopts.leaf_rule = LeafRule::AllBits;
      } else {
        throw ParseError("--leaf-rule must be nz-goal or all-bits");
      }
      auto g = load_game(game_path, r);
      auto q = load_query(query_text, g, r);
      auto res = solve(g, q, sopts);
      r["query"] = format_query(q, g);
      r["winner"] = std::string(to_string(res.winner));
      r["fragment"] = std::string(to_string(res.fragment));
      Json ev = Json::object();
      for (const auto& [k, v] : res.evidence) ev[k] = v;
      r["evidence"] = ev;
    } else if (sub == classify_cmd) {
      StochasticGame g = game_path.empty() ? names_game(query_text) : load_game(game_path, r);
      auto q = load_query(query_text, g, r);
      auto f = classify(q);
      r["query"] = format_query(q, g);
      r["fragment"] = std::string(to_string(f));
      r["determined"] = is_determined(f);
      r["positive_form"] = format_query(negate_normalize(q), g);
      r["dual"] = format_query(dual(q), g);
      r["contains_nz_safe"] = contains_nz_safe(negate_normalize(q));
    } else if (sub == unfold_cmd) {
      auto g = load_game(game_path, r);
      std::vector<StateSet> targets;
      for (const auto& t : target_texts) {
        r.input(t);
        targets.push_back(parse_query("NZ F " + t, g).atom.target);
      }
      Unfolding u(g, targets, max_nodes);
      auto product = u.to_game();
      std::size_t edges = 0;
      for (StateId s = 0; s < product.size(); ++s) edges += product.successors(s).size();
      r["base_states"] = g.size();
      r["targets"] = targets.size();
      r["nodes"] = u.materialized();
      r["transitions"] = edges;
      Json per_bit = Json::array();
      for (std::size_t i = 0; i < targets.size(); ++i) {
        per_bit.push_back(g.format_set(targets[i]) + " " +
                          std::to_string(u.nodes_with_bits(std::uint64_t{1} << i).count()));
      }
      r["nodes_with_bit"] = per_bit;
      std::uint64_t all = targets.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << targets.size()) - 1;
      r["nodes_all_bits"] = u.nodes_with_bits(all).count();
      if (!output.empty()) {
        write_file(output, format_game(product));
        r["written"] = output;
      }
    } else if (sub == oracle_cmd) {
      auto g = load_game(game_path, r);
      auto q = load_query(query_text, g, r);
      if (!is_positive(q)) q = negate_normalize(q);
      oopts.check_player2 = !no_p2;
      r["query"] = format_query(q, g);
      if (escalate) {
        r["label"] = "evidence within enumerated classes";
        Json entries = Json::object();
        for (const auto& e : nondeterminacy_evidence(g, q, oopts)) entries[e.cls] = verdict_json(e.verdict, g);
        r["class"] = entries;
      } else {
        auto targets = query_targets(q);
        auto c1 = parse_strategy_class(mem1, !deterministic, targets);
        auto c2 = parse_strategy_class(mem2, !deterministic, targets);
        auto v = brute_force_winner(g, q, c1, c2, oopts);
        r["class1"] = c1.describe();
        r["class2"] = c2.describe();
        Json vj = verdict_json(v, g);
        for (const auto& [k, val] : vj.items()) r[k] = val;
      }
    } else if (sub == verify_cmd) {
      auto g = load_game(game_path, r);
      std::string stext;
      if (strategy_path.starts_with("builtin:")) {
        try {
          stext = fixture(strategy_path.substr(8)).strategy_text;
        } catch (const std::out_of_range& e) {
          throw ParseError(e.what());
        }
        if (stext.empty()) throw ParseError("fixture has no strategy");
      } else {
        stext = read_file(strategy_path);
      }
      r.input(stext);
      auto sigma = parse_strategy(stext, g);
      auto q = load_query(query_text, g, r);
      if (!is_positive(q)) q = negate_normalize(q);
      if (sigma_bar) {
        sigma = derive_sigma_bar(g, sigma, max_memory);
        r["sigma_bar_memory"] = sigma.memory.size();
      }
      auto cls = parse_strategy_class(adversary, !deterministic, query_targets(q));
      auto res = verify_strategy(g, sigma, q, cls, oopts);
      r["query"] = format_query(q, g);
      r["adversary"] = cls.describe();
      r["holds"] = res.holds;
      r["label"] = res.holds ? (res.evidence_only ? "bounded-adversary evidence" : "verified") : "refuted";
      r["adversaries"] = res.adversaries;
      if (res.counterexample) r["counterexample"] = strategy_json(*res.counterexample, g);
    } else if (sub == dsat) {
      auto text = read_file(game_path);
      r.input(text);
      auto f = parse_dqbf(text);
      r["universals"] = f.n();
      r["existentials"] = f.m();
      r["result"] = dqbf_brute_sat(f, dlimits) ? "SAT" : "UNSAT";
    } else if (sub == dred) {
      auto text = read_file(game_path);
      r.input(text);
      auto f = parse_dqbf(text);
      auto red = reduce_to_game(f);
      r["states"] = red.game.size();
      r["branches"] = red.branch_order.size();
      Json orders = Json::array();
      for (const auto& b : red.branch_order) orders.push_back(join(b));
      r["branch_order"] = orders;
      r["psi"] = format_query(red.psi, red.game);
      r["fragment"] = std::string(to_string(classify(red.psi)));
      if (!output.empty()) {
        write_file(output, format_game(red.game));
        r["written"] = output;
      }
    } else if (sub == ex) {
      if (list) {
        Json names = Json::array();
        for (const auto& n : fixture_names()) names.push_back(n);
        r["examples"] = names;
      } else {
        if (game_path.empty()) throw ParseError("examples: name required (or --list)");
        const Fixture* fx = nullptr;
        try {
          fx = &fixture(game_path);
        } catch (const std::out_of_range& e) {
          throw ParseError(e.what());
        }
        std::string queries;
        for (const auto& [label, q] : fx->queries) queries += label + ": " + q + "\n";
        if (output.empty()) {
          out << fx->game_text;
          for (const auto& [label, q] : fx->queries) out << "# " << label << ": " << q << "\n";
          return kExitOk;
        }
        std::filesystem::create_directories(output);
        auto base = std::filesystem::path(output) / fx->name;
        Json files = Json::array();
        write_file(base.string() + ".game", fx->game_text);
        files.push_back(base.string() + ".game");
        write_file(base.string() + ".queries", queries);
        files.push_back(base.string() + ".queries");
        if (!fx->strategy_text.empty()) {
          write_file(base.string() + ".strategy", fx->strategy_text);
          files.push_back(base.string() + ".strategy");
        }
        r["example"] = fx->name;
        r["written"] = files;
      }
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  emit(r, json, out, err);
  return kExitOk;
}

}  // namespace qsg
