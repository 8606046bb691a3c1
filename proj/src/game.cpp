#include "qsg/game.hpp"

#include "qsg/errors.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qsg {

std::string_view to_string(Owner o) {
  switch (o) {
    case Owner::P1: return "p1";
    case Owner::P2: return "p2";
    case Owner::Chance: return "chance";
  }
  return "?";
}

std::string_view to_string(Player p) { return p == Player::P1 ? "p1" : "p2"; }

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << '/' << denominator(r);
  return os.str();
}

std::optional<StateId> StochasticGame::find(std::string_view name) const {
  for (StateId s = 0; s < names_.size(); ++s) {
    if (names_[s] == name) return s;
  }
  return std::nullopt;
}

StateId StochasticGame::at(std::string_view name) const {
  auto s = find(name);
  if (!s) throw std::out_of_range("unknown state '" + std::string(name) + "'");
  return *s;
}

StateSet StochasticGame::set_of(std::initializer_list<std::string_view> names) const {
  StateSet out(size());
  for (auto n : names) out.insert(at(n));
  return out;
}

std::string StochasticGame::format_set(const StateSet& set) const {
  std::string out = "{";
  bool first = true;
  set.for_each([&](StateId s) {
    if (!first) out += ',';
    out += names_[s];
    first = false;
  });
  return out + "}";
}

bool operator==(const StochasticGame& a, const StochasticGame& b) {
  return a.title_ == b.title_ && a.names_ == b.names_ && a.owners_ == b.owners_ &&
         a.succ_ == b.succ_ && a.prob_ == b.prob_ && a.init_ == b.init_;
}

// ---------------------------------------------------------------------------

StateId GameBuilder::add_state(std::string name, Owner owner) {
  if (find(name)) throw ParseError("duplicate state declaration '" + name + "'");
  names_.push_back(std::move(name));
  owners_.push_back(owner);
  succ_.emplace_back();
  prob_.emplace_back();
  return static_cast<StateId>(names_.size() - 1);
}

std::optional<StateId> GameBuilder::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<StateId>(it - names_.begin());
}

void GameBuilder::add_edge(StateId from, StateId to) {
  if (owners_.at(from) == Owner::Chance) {
    throw ParseError("edge from chance state '" + names_[from] + "' (use prob)");
  }
  succ_[from].push_back(to);
}

void GameBuilder::add_probability(StateId from, StateId to, Rational p) {
  if (owners_.at(from) != Owner::Chance) {
    throw ParseError("prob from non-chance state '" + names_[from] + "' (use edge)");
  }
  if (p <= 0 || p > 1) {
    throw ParseError("probability " + to_string(p) + " outside (0,1] at '" + names_[from] + "'");
  }
  prob_[from].emplace_back(to, std::move(p));
}

StochasticGame GameBuilder::build() {
  if (!init_) throw ParseError("missing init");
  StochasticGame g;
  g.title_ = title_;
  g.names_ = names_;
  g.owners_ = owners_;
  g.init_ = *init_;
  const auto n = names_.size();
  g.succ_.resize(n);
  g.prob_.resize(n);
  for (StateId s = 0; s < n; ++s) {
    if (owners_[s] == Owner::Chance) {
      std::map<StateId, Rational> merged;
      for (const auto& [t, p] : prob_[s]) merged[t] += p;
      if (merged.empty()) {
        merged[s] = 1;
        g.notes_.push_back("auto-completed self-loop on terminal state '" + names_[s] + "'");
      }
      Rational mass = 0;
      for (const auto& [t, p] : merged) {
        mass += p;
        g.succ_[s].push_back(t);
        g.prob_[s].push_back(p);
      }
      if (mass != 1) {
        throw ParseError("chance mass " + to_string(mass) + " != 1 at state '" + names_[s] + "'");
      }
    } else {
      auto succ = succ_[s];
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      if (succ.empty()) {
        succ.push_back(s);
        g.notes_.push_back("auto-completed self-loop on terminal state '" + names_[s] + "'");
      }
      g.succ_[s] = std::move(succ);
    }
    if (g.succ_[s].empty()) throw InvariantError("empty successor set after completion");
  }
  return g;
}

// ---------------------------------------------------------------------------

namespace {

bool valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' ||
           c == '-';
  });
}

Rational parse_rational(const std::string& text, std::size_t line) {
  auto slash = text.find('/');
  auto digits = [&](const std::string& part) {
    if (part.empty() || !std::all_of(part.begin(), part.end(), ::isdigit)) {
      throw ParseError("malformed probability '" + text + "'", line);
    }
    return boost::multiprecision::cpp_int(part);
  };
  if (slash == std::string::npos) return Rational(digits(text));
  auto num = digits(text.substr(0, slash));
  auto den = digits(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + text + "'", line);
  return Rational(num, den);
}

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    // ';' separates statements sharing a line.
    std::size_t p = 0;
    while (p <= raw.size()) {
      auto semi = raw.find(';', p);
      if (semi == std::string_view::npos) semi = raw.size();
      std::istringstream is{std::string(raw.substr(p, semi - p))};
      Line l{number, {std::istream_iterator<std::string>(is), std::istream_iterator<std::string>()}};
      if (!l.tokens.empty()) out.push_back(std::move(l));
      p = semi + 1;
    }
    pos = end + 1;
  }
  return out;
}

}  // namespace

StochasticGame parse_game(std::string_view text) {
  auto lines = tokenize_lines(text);
  std::string title = "game";
  GameBuilder* builder = nullptr;
  GameBuilder storage;

  // Pass 1: title and state declarations, so transitions may reference later states.
  for (const auto& l : lines) {
    if (l.tokens[0] == "game") {
      if (l.tokens.size() != 2) throw ParseError("expected 'game <name>'", l.number);
      title = l.tokens[1];
    }
  }
  storage = GameBuilder(title);
  builder = &storage;
  for (const auto& l : lines) {
    if (l.tokens[0] != "state") continue;
    if (l.tokens.size() != 3) throw ParseError("expected 'state <id> (p1|p2|chance)'", l.number);
    const auto& id = l.tokens[1];
    if (!valid_identifier(id)) throw ParseError("invalid state id '" + id + "'", l.number);
    Owner o;
    if (l.tokens[2] == "p1") o = Owner::P1;
    else if (l.tokens[2] == "p2") o = Owner::P2;
    else if (l.tokens[2] == "chance") o = Owner::Chance;
    else throw ParseError("unknown owner '" + l.tokens[2] + "'", l.number);
    try {
      builder->add_state(id, o);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), l.number);
    }
  }

  auto lookup = [&](const std::string& id, std::size_t line) {
    auto s = builder->find(id);
    if (!s) throw ParseError("unknown state '" + id + "'", line);
    return *s;
  };

  bool have_init = false;
  for (const auto& l : lines) {
    const auto& kw = l.tokens[0];
    try {
      if (kw == "game" || kw == "state") continue;
      if (kw == "init") {
        if (l.tokens.size() != 2) throw ParseError("expected 'init <id>'", l.number);
        if (have_init) throw ParseError("duplicate init", l.number);
        builder->set_initial(lookup(l.tokens[1], l.number));
        have_init = true;
      } else if (kw == "edge") {
        if (l.tokens.size() != 3) throw ParseError("expected 'edge <src> <dst>'", l.number);
        builder->add_edge(lookup(l.tokens[1], l.number), lookup(l.tokens[2], l.number));
      } else if (kw == "prob") {
        if (l.tokens.size() != 4) throw ParseError("expected 'prob <src> <dst> <num>/<den>'", l.number);
        builder->add_probability(lookup(l.tokens[1], l.number), lookup(l.tokens[2], l.number),
                                 parse_rational(l.tokens[3], l.number));
      } else {
        throw ParseError("unknown directive '" + kw + "'", l.number);
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), l.number);
    }
  }
  return builder->build();
}

StochasticGame parse_game(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_game(text);
}

StochasticGame with_initial(const StochasticGame& g, StateId s) {
  if (s >= g.size()) throw std::out_of_range("initial state out of range");
  StochasticGame h = g;
  h.init_ = s;
  return h;
}

void write_game(std::ostream& out, const StochasticGame& g) {
  out << "game " << g.title() << '\n';
  for (StateId s = 0; s < g.size(); ++s) {
    out << "state " << g.name(s) << ' ' << to_string(g.owner(s)) << '\n';
  }
  out << "init " << g.name(g.initial()) << '\n';
  for (StateId s = 0; s < g.size(); ++s) {
    auto succ = g.successors(s);
    if (g.owner(s) == Owner::Chance) {
      auto prob = g.probabilities(s);
      for (std::size_t i = 0; i < succ.size(); ++i) {
        out << "prob " << g.name(s) << ' ' << g.name(succ[i]) << ' ' << to_string(prob[i]) << '\n';
      }
    } else {
      for (StateId t : succ) out << "edge " << g.name(s) << ' ' << g.name(t) << '\n';
    }
  }
}

std::string format_game(const StochasticGame& g) {
  std::ostringstream os;
  write_game(os, g);
  return os.str();
}

// ---------------------------------------------------------------------------

StateSet RestrictedGame::map_set(const StateSet& original) const {
  StateSet out(game.size());
  original.for_each([&](StateId s) {
    if (s < embed.size() && embed[s]) out.insert(*embed[s]);
  });
  return out;
}

RestrictedGame restrict(const StochasticGame& g, const StateSet& keep) {
  RestrictedGame r;
  r.embed.assign(g.size(), std::nullopt);
  std::vector<StateId> kept = keep.members();
  for (std::size_t i = 0; i < kept.size(); ++i) r.embed[kept[i]] = static_cast<StateId>(i);

  std::string sink_name = "bot";
  for (int k = 2; g.find(sink_name); ++k) sink_name = "bot_" + std::to_string(k);

  GameBuilder b(g.title());
  for (StateId s : kept) b.add_state(g.name(s), g.owner(s));
  r.sink = b.add_state(sink_name, Owner::Chance);
  b.add_probability(r.sink, r.sink, 1);
  for (StateId s : kept) {
    const StateId from = *r.embed[s];
    auto succ = g.successors(s);
    if (g.owner(s) == Owner::Chance) {
      auto prob = g.probabilities(s);
      Rational lost = 0;
      for (std::size_t i = 0; i < succ.size(); ++i) {
        if (auto to = r.embed[succ[i]]) b.add_probability(from, *to, prob[i]);
        else lost += prob[i];
      }
      if (lost > 0) b.add_probability(from, r.sink, lost);
    } else {
      bool dropped = false;
      for (StateId t : succ) {
        if (auto to = r.embed[t]) b.add_edge(from, *to);
        else dropped = true;
      }
      if (dropped) b.add_edge(from, r.sink);
    }
  }
  b.set_initial(r.embed[g.initial()] ? *r.embed[g.initial()] : r.sink);
  r.game = b.build();
  return r;
}

}  // namespace qsg
