#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "somas/guard.hpp"
#include "somas/ids.hpp"

namespace somas {

/// One entry of delta: from `from`, if agent i plays moves[i], go to `to`.
struct Transition {
  StateId from;
  std::vector<ActionId> moves;  // one per agent
  StateId to;
};

/// Finite concurrent game structure. Plain data; `Somas` indexes and checks it.
struct Cgs {
  std::vector<std::string> agents;
  std::vector<std::string> states;
  std::vector<std::string> props;
  std::vector<std::string> actions;
  std::vector<std::vector<PropId>> labeling;                  // [state], sorted
  std::vector<std::vector<std::vector<ActionId>>> available;  // [agent][state]
  std::vector<Transition> transitions;

  std::size_t agent_count() const { return agents.size(); }
  std::size_t state_count() const { return states.size(); }
};

/// m_i(q) for every agent and state; missing entries are validation errors.
struct InternalFunctionTable {
  std::vector<std::vector<std::optional<Message>>> entries;  // [agent][state]
};

struct GuardedAction {
  Guard guard;
  ActionId action;
};

/// <tau_a(q), gamma_a(q)> for a single state: who a listens to, and a
/// first-match-wins table from received messages to a's prescribed action.
struct StateRule {
  Coalition tau;
  std::vector<GuardedAction> gamma;
};

struct LocalRule {
  std::vector<std::optional<StateRule>> per_state;  // [state]
};

/// An ultimately periodic computation: prefix, then cycle repeated forever.
struct Lasso {
  std::vector<StateId> prefix;
  std::vector<StateId> cycle;
};

struct Violation {
  std::string kind;
  std::optional<AgentId> agent;
  std::optional<StateId> state;
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

/// A concurrent game structure with internal functions and local rules.
///
/// Construction never throws on semantic defects; it indexes what it can and
/// leaves the defects for `validate`. Operations that need a missing or
/// incomplete rule throw GuardIncomplete. Instances are immutable and safe to
/// share across threads.
class Somas {
 public:
  Somas(Cgs cgs, InternalFunctionTable internals, std::vector<LocalRule> rules);

  const Cgs& cgs() const { return cgs_; }
  const InternalFunctionTable& internals() const { return internals_; }
  const std::vector<LocalRule>& rules() const { return rules_; }

  std::size_t agent_count() const { return cgs_.agents.size(); }
  std::size_t state_count() const { return cgs_.states.size(); }
  Coalition all_agents() const { return Coalition::all(agent_count()); }

  const std::string& agent_name(AgentId a) const { return cgs_.agents.at(a.index()); }
  const std::string& state_name(StateId s) const { return cgs_.states.at(s.index()); }
  const std::string& prop_name(PropId p) const { return cgs_.props.at(p.index()); }
  const std::string& action_name(ActionId x) const { return cgs_.actions.at(x.index()); }

  std::optional<AgentId> find_agent(std::string_view name) const;
  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<PropId> find_prop(std::string_view name) const;
  std::optional<ActionId> find_action(std::string_view name) const;

  /// Throwing lookups (InputError on unknown names).
  AgentId agent(std::string_view name) const;
  StateId state(std::string_view name) const;
  Coalition coalition(const std::vector<std::string>& names) const;
  std::vector<std::string> names(Coalition c) const;  // sorted lexicographically

  bool labeled(StateId q, PropId p) const;
  const std::vector<ActionId>& available(AgentId a, StateId q) const;

  /// delta(q, moves), or nullopt if the model has no such transition.
  std::optional<StateId> successor(StateId q, const std::vector<ActionId>& moves) const;

  /// tau_a(q); empty when the rule is missing.
  Coalition tau(AgentId a, StateId q) const;

  /// Distinct successors of q, each with the maximal sets of agents that are
  /// simultaneously rule-compliant on some joint move reaching it.
  struct Edge {
    StateId to;
    std::vector<Coalition> compliant;  // antichain
  };
  const std::vector<Edge>& edges(StateId q) const { return edges_.at(q.index()); }

  /// Throws GuardIncomplete for (a, q) if gamma_a(q) prescribes nothing.
  ActionId prescribed(AgentId a, StateId q) const;
  bool has_prescription(AgentId a, StateId q) const;

  /// Raw evaluation of gamma_a(q) against M(q), bypassing the cache.
  std::optional<ActionId> evaluate_rule(AgentId a, StateId q) const;

 private:
  void build_index();

  Cgs cgs_;
  InternalFunctionTable internals_;
  std::vector<LocalRule> rules_;

  std::unordered_map<std::string, AgentId> agent_index_;
  std::unordered_map<std::string, StateId> state_index_;
  std::unordered_map<std::string, PropId> prop_index_;
  std::unordered_map<std::string, ActionId> action_index_;

  // Per state: mixed-radix table over D(q); kMissing where delta is undefined.
  std::vector<std::vector<std::uint32_t>> delta_;
  std::vector<std::vector<std::uint32_t>> radix_;  // [state][agent] stride
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::vector<std::optional<ActionId>>> prescribed_;  // [agent][state]
};

/// Lists every violated structural invariant, with (agent, state) coordinates.
ValidationReport validate(const Somas& somas);

std::string describe(const Somas& somas, const Violation& v);

/// M(q) for agent a: {i -> m_i(q) | i in tau_a(q)}.
MessageMap messages_at(const Somas& somas, AgentId a, StateId q);

/// gamma_a(M(q)).
ActionId prescribed_action(const Somas& somas, AgentId a, StateId q);

/// States reachable from q in one step when every agent in `coalition` plays
/// its prescribed action. Sorted.
std::vector<StateId> restricted_successors(const Somas& somas, Coalition coalition, StateId q);

/// States on any computation of out(q, Gamma_coalition), including q.
StateSet out_reachable(const Somas& somas, Coalition coalition, StateId q);

/// The unique computation from q when all agents follow their rules.
Lasso star_computation(const Somas& somas, StateId q);

}  // namespace somas
