#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace qsg {

using StateId = std::uint32_t;

/// Set of states of one game, stored as a bitset over the game's canonical state order.
/// The universe size is fixed at construction; complement is taken relative to it.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe) : bits_(universe) {}
  StateSet(std::size_t universe, std::initializer_list<StateId> members) : bits_(universe) {
    for (StateId s : members) bits_.set(s);
  }

  static StateSet full(std::size_t universe) {
    StateSet s(universe);
    s.bits_.set();
    return s;
  }

  std::size_t universe() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains(StateId s) const { return s < bits_.size() && bits_.test(s); }

  void insert(StateId s) { bits_.set(s); }
  void erase(StateId s) { bits_.reset(s); }

  StateSet complement() const {
    StateSet r(*this);
    r.bits_.flip();
    return r;
  }

  bool is_subset_of(const StateSet& other) const { return bits_.is_subset_of(other.bits_); }
  bool intersects(const StateSet& other) const { return bits_.intersects(other.bits_); }

  StateSet& operator|=(const StateSet& o) { bits_ |= o.bits_; return *this; }
  StateSet& operator&=(const StateSet& o) { bits_ &= o.bits_; return *this; }
  StateSet& operator-=(const StateSet& o) { bits_ -= o.bits_; return *this; }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

  friend bool operator==(const StateSet& a, const StateSet& b) { return a.bits_ == b.bits_; }
  friend bool operator<(const StateSet& a, const StateSet& b) { return a.bits_ < b.bits_; }

  /// Members in ascending (canonical) order.
  std::vector<StateId> members() const {
    std::vector<StateId> out;
    out.reserve(count());
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
      out.push_back(static_cast<StateId>(i));
    }
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
      f(static_cast<StateId>(i));
    }
  }

  std::size_t hash() const {
    std::size_t h = bits_.size();
    for_each([&](StateId s) { h = h * 1000003u ^ std::hash<StateId>{}(s); });
    return h;
  }

 private:
  using Bits = boost::dynamic_bitset<std::uint64_t>;
  Bits bits_;
};

}  // namespace qsg
