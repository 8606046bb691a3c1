#pragma once

#include "qsg/game.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qsg {

enum class Mode : std::uint8_t { AS, NZ };
enum class Shape : std::uint8_t { Reach, Safe };

struct Atom {
  Mode mode = Mode::AS;
  Shape shape = Shape::Reach;
  StateSet target;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// The atom satisfied by exactly the strategy pairs that violate `a`
/// (AS F T <-> NZ G ~T, AS G T <-> NZ F ~T).
Atom negate(const Atom& a);

/// Boolean combination of atoms. And() with no children is true, Or() with none is false.
struct Query {
  enum class Kind : std::uint8_t { Atom, And, Or, Not };

  Kind kind = Kind::Atom;
  qsg::Atom atom;
  std::vector<Query> children;

  static Query leaf(qsg::Atom a);
  static Query leaf(Mode m, Shape s, StateSet target);
  static Query conj(std::vector<Query> cs);
  static Query disj(std::vector<Query> cs);
  static Query negation(Query c);

  bool is_atom() const { return kind == Kind::Atom; }
  friend bool operator==(const Query&, const Query&) = default;
};

enum class FragmentClass : std::uint8_t {
  SingleObjective,
  ConjunctionASNZ,
  DisjunctionASNZ,
  PositiveAS,
  PositiveNZ,
  GeneralNoNZSafe,
  General,
};

std::string_view to_string(FragmentClass f);
bool is_determined(FragmentClass f);

/// Parses the query DSL; set literals are resolved against `g`.
Query parse_query(std::string_view text, const StochasticGame& g);

/// Prints a query in the DSL. Complement notation is used when it is shorter.
std::string format_query(const Query& q, const StochasticGame& g);
std::string format_atom(const Atom& a, const StochasticGame& g);

bool is_positive(const Query& q);
/// All leaves, left to right.
std::vector<Atom> atoms(const Query& q);
bool contains_nz_safe(const Query& q);

/// Pushes negations to the leaves and removes them with the atom dualities.
Query negate_normalize(const Query& q);
/// Positive form of the negation of q.
Query dual(const Query& q);

/// Classification of the positive form (q is normalized first if needed).
FragmentClass classify(const Query& q);

/// Disjunctive normal form as a list of terms (each a list of distinct atoms).
/// An empty term list is false; an empty term is true.
using Dnf = std::vector<std::vector<Atom>>;
Dnf to_dnf_terms(const Query& q, std::size_t max_terms = 4096);
Query to_dnf(const Query& q, std::size_t max_terms = 4096);

/// Drops neutral constants and flattens nested And/Or (used for printing generated queries).
Query simplify(const Query& q);

}  // namespace qsg
