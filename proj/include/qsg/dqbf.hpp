#pragma once

#include "qsg/game.hpp"
#include "qsg/query.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qsg {

/// Propositional formula over the variables of a DQBF (universals first, then existentials).
struct Prop {
  enum class Kind : std::uint8_t { Const, Var, Not, And, Or };
  Kind kind = Kind::Const;
  bool value = true;        ///< Const
  std::size_t var = 0;      ///< Var
  std::vector<Prop> children;

  static Prop constant(bool v);
  static Prop variable(std::size_t v);
  static Prop negation(Prop p);
  static Prop conj(std::vector<Prop> cs);
  static Prop disj(std::vector<Prop> cs);
};

/// S-form DQBF: forall X exists y_1(S_1) ... y_m(S_m). matrix
struct DqbfFormula {
  std::vector<std::string> universals;
  std::vector<std::string> existentials;
  std::vector<std::vector<std::size_t>> deps;  ///< per existential, ascending universal indices
  Prop matrix;

  std::size_t n() const { return universals.size(); }
  std::size_t m() const { return existentials.size(); }
  /// Name of variable v in the combined numbering.
  const std::string& var_name(std::size_t v) const;
};

/// Statements separated by ';' or newlines:
/// `forall x1 x2`, `exists y1 deps {x1}`, `matrix <expr>` with & | ! ( ) true false.
DqbfFormula parse_dqbf(std::string_view text);
std::string format_dqbf(const DqbfFormula& f);
std::string format_prop(const Prop& p, const DqbfFormula& f);

/// Evaluates the matrix; `assignment` bit v is the value of variable v.
bool eval_prop(const Prop& p, std::uint64_t assignment);

/// Negation normal form (negations only on variables, constants folded away from Not).
Prop to_nnf(const Prop& p);

struct DqbfLimits {
  std::size_t max_universals = 4;
  std::size_t max_existentials = 4;
  std::size_t max_table_bits = 24;  ///< total Skolem table size, sum of 2^|S_j|
};

/// Exhaustive search over Skolem function tuples.
bool dqbf_brute_sat(const DqbfFormula& f, const DqbfLimits& limits = {});

struct DqbfReduction {
  StochasticGame game;
  Query psi;                                      ///< positive form, unsimplified
  std::vector<std::vector<std::string>> branch_order;  ///< variable names per branch, module order
};

/// Game with a uniform root choice among m branches of n+m variable modules
/// and the query (phi' & psi1) | psi2.
DqbfReduction reduce_to_game(const DqbfFormula& f);

}  // namespace qsg
