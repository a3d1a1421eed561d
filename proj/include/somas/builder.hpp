#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "somas/guard.hpp"
#include "somas/model.hpp"

namespace somas {

/// Incremental, name-based construction of a Somas. Declaring a name twice
/// returns the existing id.
class ModelBuilder {
 public:
  AgentId agent(const std::string& name);
  StateId state(const std::string& name);
  PropId prop(const std::string& name);
  ActionId action(const std::string& name);

  void label(StateId q, PropId p);
  void allow(AgentId a, StateId q, std::vector<ActionId> actions);
  void transition(StateId from, std::vector<ActionId> moves, StateId to);
  void internal(AgentId a, StateId q, Message m);
  void rule(AgentId a, StateId q, Coalition tau, std::vector<GuardedAction> gamma);

  /// Parses `text` against the names declared so far.
  Guard guard(std::string_view text) const;

  Somas build() const;

 private:
  template <class IdT>
  IdT intern(std::unordered_map<std::string, IdT>& index, std::vector<std::string>& names,
             const std::string& name) {
    auto [it, inserted] = index.emplace(name, IdT(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  }

  Cgs cgs_;
  std::unordered_map<std::string, AgentId> agents_;
  std::unordered_map<std::string, StateId> states_;
  std::unordered_map<std::string, PropId> props_;
  std::unordered_map<std::string, ActionId> actions_;
  std::vector<std::tuple<AgentId, StateId, Message>> internals_;
  std::vector<std::tuple<AgentId, StateId, StateRule>> rules_;
  std::vector<std::tuple<AgentId, StateId, std::vector<ActionId>>> available_;
  std::vector<std::pair<StateId, PropId>> labels_;
};

}  // namespace somas
