#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace somas {

/// Index-backed identifier, distinct per tag so agent and state ids never mix.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
  constexpr explicit Id(int v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

struct AgentTag {};
struct StateTag {};
struct PropTag {};
struct ActionTag {};

using AgentId = Id<AgentTag>;
using StateId = Id<StateTag>;
using PropId = Id<PropTag>;
using ActionId = Id<ActionTag>;

inline constexpr std::size_t kMaxAgents = 64;

/// A set of agents, stored as a bitmask. Models are limited to kMaxAgents.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t bits) : bits_(bits) {}

  static Coalition all(std::size_t agent_count) {
    return Coalition(agent_count >= 64 ? ~std::uint64_t{0}
                                       : (std::uint64_t{1} << agent_count) - 1);
  }
  static Coalition of(std::initializer_list<AgentId> agents) {
    Coalition c;
    for (AgentId a : agents) c.insert(a);
    return c;
  }
  static Coalition single(AgentId a) { return Coalition(std::uint64_t{1} << a.value); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

  constexpr bool contains(AgentId a) const { return (bits_ >> a.value) & 1U; }
  constexpr void insert(AgentId a) { bits_ |= std::uint64_t{1} << a.value; }
  constexpr void erase(AgentId a) { bits_ &= ~(std::uint64_t{1} << a.value); }

  constexpr bool subset_of(Coalition other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool proper_subset_of(Coalition other) const {
    return subset_of(other) && bits_ != other.bits_;
  }
  constexpr bool intersects(Coalition other) const { return (bits_ & other.bits_) != 0; }

  friend constexpr Coalition operator|(Coalition a, Coalition b) { return Coalition(a.bits_ | b.bits_); }
  friend constexpr Coalition operator&(Coalition a, Coalition b) { return Coalition(a.bits_ & b.bits_); }
  /// Set difference.
  friend constexpr Coalition operator-(Coalition a, Coalition b) { return Coalition(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;

  std::vector<AgentId> members() const {
    std::vector<AgentId> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.emplace_back(static_cast<std::uint32_t>(std::countr_zero(b)));
    }
    return out;
  }

  /// Calls f(sub) for every subset of *this, including the empty set and *this.
  template <class F>
  void for_each_subset(F&& f) const {
    std::uint64_t sub = bits_;
    while (true) {
      f(Coalition(sub));
      if (sub == 0) break;
      sub = (sub - 1) & bits_;
    }
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Dense set of states of one model.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe) : bits_(universe, false) {}

  std::size_t universe() const { return bits_.size(); }
  bool contains(StateId s) const { return bits_[s.index()]; }
  void insert(StateId s) {
    if (!bits_[s.index()]) {
      bits_[s.index()] = true;
      ++count_;
    }
  }
  void erase(StateId s) {
    if (bits_[s.index()]) {
      bits_[s.index()] = false;
      --count_;
    }
  }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool subset_of(const StateSet& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i] && !other.bits_[i]) return false;
    }
    return true;
  }

  std::vector<StateId> to_vector() const {
    std::vector<StateId> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out.emplace_back(i);
    }
    return out;
  }

  friend bool operator==(const StateSet& a, const StateSet& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

}  // namespace somas

template <class Tag>
struct std::hash<somas::Id<Tag>> {
  std::size_t operator()(somas::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

template <>
struct std::hash<somas::Coalition> {
  std::size_t operator()(somas::Coalition c) const noexcept { return std::hash<std::uint64_t>{}(c.bits()); }
};
