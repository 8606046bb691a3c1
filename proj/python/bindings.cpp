#include "qsg/cli.hpp"
#include "qsg/dqbf.hpp"
#include "qsg/errors.hpp"
#include "qsg/fixtures.hpp"
#include "qsg/game.hpp"
#include "qsg/multiobj.hpp"
#include "qsg/oracle.hpp"
#include "qsg/query.hpp"
#include "qsg/regions.hpp"
#include "qsg/strategy.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace qsg;

namespace {

std::vector<std::string> names_of(const StochasticGame& g, const StateSet& s) {
  std::vector<std::string> out;
  for (StateId id : s.members()) out.push_back(g.name(id));
  return out;
}

Player player_of(int p) {
  if (p == 1) return Player::P1;
  if (p == 2) return Player::P2;
  throw py::value_error("player must be 1 or 2");
}

py::dict solve_py(const StochasticGame& g, const std::string& query, bool cross_check) {
  SolverOptions opts;
  opts.cross_check = cross_check;
  const Query q = parse_query(query, g);
  const SolveResult r = solve(g, q, opts);
  py::dict d;
  d["winner"] = std::string(to_string(r.winner));
  d["fragment"] = std::string(to_string(r.fragment));
  py::list ev;
  for (const auto& [k, v] : r.evidence) ev.append(py::make_tuple(k, v));
  d["evidence"] = ev;
  return d;
}

std::vector<std::string> region_py(const StochasticGame& g, const std::string& atom, int player) {
  const Query q = parse_query(atom, g);
  if (!q.is_atom()) throw py::value_error("region expects a single atom");
  return names_of(g, single_region(g, q.atom, player_of(player)));
}

py::dict oracle_py(const StochasticGame& g, const std::string& query, const std::string& cls1,
                   const std::string& cls2, bool randomized, std::size_t max_states,
                   std::size_t max_strategies) {
  const Query q = parse_query(query, g);
  const auto targets = query_targets(q);
  OracleOptions opts;
  opts.max_states = max_states;
  opts.max_strategies = max_strategies;
  const OracleVerdict v = brute_force_winner(g, q, parse_strategy_class(cls1, randomized, targets),
                                             parse_strategy_class(cls2, randomized, targets), opts);
  py::dict d;
  d["outcome"] = std::string(to_string(v.outcome));
  d["witness"] = v.witness ? py::cast(format_strategy(*v.witness, g)) : py::none();
  d["sigma_count"] = v.sigma_count;
  d["tau_count"] = v.tau_count;
  return d;
}

py::dict verify_py(const StochasticGame& g, const std::string& strategy, const std::string& query,
                   const std::string& cls, bool randomized, std::size_t max_states) {
  OracleOptions opts;
  opts.max_states = max_states;
  const Query q = parse_query(query, g);
  const StrategyAutomaton sigma = parse_strategy(strategy, g);
  const VerifyResult r =
      verify_strategy(g, sigma, q, parse_strategy_class(cls, randomized, query_targets(q)), opts);
  py::dict d;
  d["holds"] = r.holds;
  d["evidence_only"] = r.evidence_only;
  d["adversaries"] = r.adversaries;
  d["counterexample"] = r.counterexample ? py::cast(format_strategy(*r.counterexample, g)) : py::none();
  return d;
}

py::tuple run_cli_py(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Qualitative multi-objective stochastic games";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_AssertionError);

  py::class_<StochasticGame>(m, "Game")
      .def_property_readonly("title", &StochasticGame::title)
      .def_property_readonly("size", &StochasticGame::size)
      .def_property_readonly("initial", [](const StochasticGame& g) { return g.name(g.initial()); })
      .def_property_readonly("states", [](const StochasticGame& g) { return names_of(g, g.all_states()); })
      .def_property_readonly("notes", &StochasticGame::notes)
      .def("owner", [](const StochasticGame& g, const std::string& s) { return std::string(to_string(g.owner(g.at(s)))); })
      .def("successors",
           [](const StochasticGame& g, const std::string& s) {
             std::vector<std::string> out;
             for (StateId t : g.successors(g.at(s))) out.push_back(g.name(t));
             return out;
           })
      .def("with_initial", [](const StochasticGame& g, const std::string& s) { return with_initial(g, g.at(s)); })
      .def("format", &format_game)
      .def("__len__", &StochasticGame::size)
      .def("__repr__", [](const StochasticGame& g) {
        return "<qsgame.Game '" + g.title() + "' with " + std::to_string(g.size()) + " states>";
      });

  m.def("parse_game", [](const std::string& text) { return parse_game(text); }, py::arg("text"));
  m.def("fixture_names", &fixture_names);
  m.def("fixture", [](const std::string& name) { return fixture(name).game(); }, py::arg("name"));
  m.def(
      "fixture_queries",
      [](const std::string& name) { return fixture(name).queries; }, py::arg("name"));

  m.def(
      "format_query",
      [](const StochasticGame& g, const std::string& q) { return format_query(parse_query(q, g), g); },
      py::arg("game"), py::arg("query"));
  m.def(
      "classify",
      [](const StochasticGame& g, const std::string& q) { return std::string(to_string(classify(parse_query(q, g)))); },
      py::arg("game"), py::arg("query"));
  m.def(
      "negate",
      [](const StochasticGame& g, const std::string& q) { return format_query(negate_normalize(Query::negation(parse_query(q, g))), g); },
      py::arg("game"), py::arg("query"));

  m.def("solve", &solve_py, py::arg("game"), py::arg("query"), py::arg("cross_check") = false);
  m.def("region", &region_py, py::arg("game"), py::arg("atom"), py::arg("player") = 1);
  m.def("oracle", &oracle_py, py::arg("game"), py::arg("query"), py::arg("p1_class") = "visited",
        py::arg("p2_class") = "visited", py::arg("randomized") = true, py::arg("max_states") = 6,
        py::arg("max_strategies") = 200000);
  m.def("verify", &verify_py, py::arg("game"), py::arg("strategy"), py::arg("query"),
        py::arg("adversary_class") = "visited", py::arg("randomized") = true, py::arg("max_states") = 6);

  m.def(
      "dqbf_sat", [](const std::string& text) { return dqbf_brute_sat(parse_dqbf(text)); }, py::arg("text"));
  m.def(
      "dqbf_reduce",
      [](const std::string& text) {
        const DqbfReduction r = reduce_to_game(parse_dqbf(text));
        return py::make_tuple(r.game, format_query(r.psi, r.game));
      },
      py::arg("text"));

  m.def("run_cli", &run_cli_py, py::arg("args"));
}
