#include "somas/builder.hpp"

namespace somas {

AgentId ModelBuilder::agent(const std::string& name) { return intern(agents_, cgs_.agents, name); }
StateId ModelBuilder::state(const std::string& name) { return intern(states_, cgs_.states, name); }
PropId ModelBuilder::prop(const std::string& name) { return intern(props_, cgs_.props, name); }
ActionId ModelBuilder::action(const std::string& name) { return intern(actions_, cgs_.actions, name); }

void ModelBuilder::label(StateId q, PropId p) { labels_.emplace_back(q, p); }

void ModelBuilder::allow(AgentId a, StateId q, std::vector<ActionId> actions) {
  available_.emplace_back(a, q, std::move(actions));
}

void ModelBuilder::transition(StateId from, std::vector<ActionId> moves, StateId to) {
  cgs_.transitions.push_back({from, std::move(moves), to});
}

void ModelBuilder::internal(AgentId a, StateId q, Message m) { internals_.emplace_back(a, q, std::move(m)); }

void ModelBuilder::rule(AgentId a, StateId q, Coalition tau, std::vector<GuardedAction> gamma) {
  rules_.emplace_back(a, q, StateRule{tau, std::move(gamma)});
}

Guard ModelBuilder::guard(std::string_view text) const {
  auto find = [](const auto& index, std::string_view name) {
    auto it = index.find(std::string(name));
    return it == index.end() ? std::nullopt : std::optional(it->second);
  };
  return parse_guard(
      text, [&](std::string_view n) { return find(agents_, n); }, [&](std::string_view n) { return find(props_, n); });
}

Somas ModelBuilder::build() const {
  const std::size_t k = cgs_.agents.size();
  const std::size_t n = cgs_.states.size();
  Cgs cgs = cgs_;
  cgs.labeling.assign(n, {});
  for (const auto& [q, p] : labels_) cgs.labeling[q.index()].push_back(p);
  cgs.available.assign(k, std::vector<std::vector<ActionId>>(n));
  for (const auto& [a, q, actions] : available_) cgs.available[a.index()][q.index()] = actions;

  InternalFunctionTable internals;
  internals.entries.assign(k, std::vector<std::optional<Message>>(n));
  for (const auto& [a, q, m] : internals_) internals.entries[a.index()][q.index()] = m;

  std::vector<LocalRule> rules(k);
  for (auto& r : rules) r.per_state.resize(n);
  for (const auto& [a, q, r] : rules_) rules[a.index()].per_state[q.index()] = r;
  return Somas(std::move(cgs), std::move(internals), std::move(rules));
}

}  // namespace somas
