#include "somas/model.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "somas/error.hpp"

namespace somas {

namespace {

constexpr std::uint32_t kMissing = ~std::uint32_t{0};
constexpr std::size_t kMaxJointMoves = std::size_t{1} << 24;

template <class IdT>
std::optional<IdT> find_in(const std::unordered_map<std::string, IdT>& index, std::string_view name) {
  auto it = index.find(std::string(name));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> position_of(const std::vector<ActionId>& list, ActionId x) {
  auto it = std::find(list.begin(), list.end(), x);
  if (it == list.end()) return std::nullopt;
  return static_cast<std::size_t>(it - list.begin());
}

}  // namespace

Somas::Somas(Cgs cgs, InternalFunctionTable internals, std::vector<LocalRule> rules)
    : cgs_(std::move(cgs)), internals_(std::move(internals)), rules_(std::move(rules)) {
  if (cgs_.agents.size() > kMaxAgents) {
    throw SizeError("models are limited to " + std::to_string(kMaxAgents) + " agents");
  }
  // Pad the per-agent/per-state tables so lookups stay in range; padding is
  // reported by validate() as missing entries.
  cgs_.labeling.resize(cgs_.states.size());
  cgs_.available.resize(cgs_.agents.size());
  for (auto& row : cgs_.available) row.resize(cgs_.states.size());
  internals_.entries.resize(cgs_.agents.size());
  for (auto& row : internals_.entries) row.resize(cgs_.states.size());
  rules_.resize(cgs_.agents.size());
  for (auto& rule : rules_) rule.per_state.resize(cgs_.states.size());
  for (auto& labels : cgs_.labeling) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  }
  build_index();
}

void Somas::build_index() {
  for (std::size_t i = 0; i < cgs_.agents.size(); ++i) agent_index_.emplace(cgs_.agents[i], AgentId(i));
  for (std::size_t i = 0; i < cgs_.states.size(); ++i) state_index_.emplace(cgs_.states[i], StateId(i));
  for (std::size_t i = 0; i < cgs_.props.size(); ++i) prop_index_.emplace(cgs_.props[i], PropId(i));
  for (std::size_t i = 0; i < cgs_.actions.size(); ++i) action_index_.emplace(cgs_.actions[i], ActionId(i));

  const std::size_t k = agent_count();
  const std::size_t n = state_count();

  radix_.assign(n, std::vector<std::uint32_t>(k, 0));
  delta_.assign(n, {});
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t total = 1;
    for (std::size_t a = 0; a < k; ++a) {
      radix_[q][a] = static_cast<std::uint32_t>(total);
      total *= cgs_.available[a][q].size();
      if (total > kMaxJointMoves) {
        throw SizeError("state '" + cgs_.states[q] + "' has more than 2^24 joint moves");
      }
    }
    if (k == 0) total = 0;
    delta_[q].assign(total, kMissing);
  }
  for (const Transition& t : cgs_.transitions) {
    if (t.from.index() >= n || t.to.index() >= n || t.moves.size() != k) continue;
    std::size_t idx = 0;
    bool ok = true;
    for (std::size_t a = 0; a < k && ok; ++a) {
      auto pos = position_of(cgs_.available[a][t.from.index()], t.moves[a]);
      if (!pos) ok = false;
      else idx += *pos * radix_[t.from.index()][a];
    }
    if (!ok) continue;
    auto& slot = delta_[t.from.index()][idx];
    if (slot == kMissing) slot = t.to.value;
  }

  prescribed_.assign(k, std::vector<std::optional<ActionId>>(n));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t q = 0; q < n; ++q) {
      auto x = evaluate_rule(AgentId(a), StateId(q));
      if (x && position_of(cgs_.available[a][q], *x)) prescribed_[a][q] = x;
    }
  }

  edges_.assign(n, {});
  for (std::size_t q = 0; q < n; ++q) {
    std::map<std::uint32_t, std::vector<Coalition>> by_target;
    const auto& table = delta_[q];
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      if (table[idx] == kMissing) continue;
      Coalition compliant;
      for (std::size_t a = 0; a < k; ++a) {
        const auto& avail = cgs_.available[a][q];
        ActionId move = avail[(idx / radix_[q][a]) % avail.size()];
        if (prescribed_[a][q] && *prescribed_[a][q] == move) compliant.insert(AgentId(a));
      }
      by_target[table[idx]].push_back(compliant);
    }
    for (auto& [to, masks] : by_target) {
      std::sort(masks.begin(), masks.end());
      masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
      std::vector<Coalition> maximal;
      for (Coalition m : masks) {
        bool dominated = std::any_of(masks.begin(), masks.end(),
                                     [&](Coalition o) { return m.proper_subset_of(o); });
        if (!dominated) maximal.push_back(m);
      }
      edges_[q].push_back(Edge{StateId(to), std::move(maximal)});
    }
  }
}

std::optional<AgentId> Somas::find_agent(std::string_view name) const { return find_in(agent_index_, name); }
std::optional<StateId> Somas::find_state(std::string_view name) const { return find_in(state_index_, name); }
std::optional<PropId> Somas::find_prop(std::string_view name) const { return find_in(prop_index_, name); }
std::optional<ActionId> Somas::find_action(std::string_view name) const { return find_in(action_index_, name); }

AgentId Somas::agent(std::string_view name) const {
  if (auto a = find_agent(name)) return *a;
  throw InputError("unknown agent '" + std::string(name) + "'");
}

StateId Somas::state(std::string_view name) const {
  if (auto s = find_state(name)) return *s;
  throw InputError("unknown state '" + std::string(name) + "'");
}

Coalition Somas::coalition(const std::vector<std::string>& names) const {
  Coalition c;
  for (const auto& n : names) c.insert(agent(n));
  return c;
}

std::vector<std::string> Somas::names(Coalition c) const {
  std::vector<std::string> out;
  for (AgentId a : c.members()) out.push_back(agent_name(a));
  std::sort(out.begin(), out.end());
  return out;
}

bool Somas::labeled(StateId q, PropId p) const {
  const auto& labels = cgs_.labeling.at(q.index());
  return std::binary_search(labels.begin(), labels.end(), p);
}

const std::vector<ActionId>& Somas::available(AgentId a, StateId q) const {
  return cgs_.available.at(a.index()).at(q.index());
}

std::optional<StateId> Somas::successor(StateId q, const std::vector<ActionId>& moves) const {
  if (q.index() >= state_count() || moves.size() != agent_count()) return std::nullopt;
  std::size_t idx = 0;
  for (std::size_t a = 0; a < moves.size(); ++a) {
    auto pos = position_of(cgs_.available[a][q.index()], moves[a]);
    if (!pos) return std::nullopt;
    idx += *pos * radix_[q.index()][a];
  }
  std::uint32_t to = delta_[q.index()][idx];
  if (to == kMissing) return std::nullopt;
  return StateId(to);
}

Coalition Somas::tau(AgentId a, StateId q) const {
  const auto& rule = rules_.at(a.index()).per_state.at(q.index());
  return rule ? rule->tau : Coalition{};
}

bool Somas::has_prescription(AgentId a, StateId q) const {
  return prescribed_.at(a.index()).at(q.index()).has_value();
}

ActionId Somas::prescribed(AgentId a, StateId q) const {
  const auto& x = prescribed_.at(a.index()).at(q.index());
  if (!x) throw GuardIncomplete(agent_name(a), state_name(q));
  return *x;
}

std::optional<ActionId> Somas::evaluate_rule(AgentId a, StateId q) const {
  const auto& rule = rules_.at(a.index()).per_state.at(q.index());
  if (!rule) return std::nullopt;
  MessageMap received = messages_at(*this, a, q);
  for (const GuardedAction& row : rule->gamma) {
    try {
      if (row.guard.evaluate(received)) return row.action;
    } catch (const InputError&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

MessageMap messages_at(const Somas& somas, AgentId a, StateId q) {
  if (a.index() >= somas.agent_count()) throw InputError("agent id out of range");
  if (q.index() >= somas.state_count()) throw InputError("state id out of range");
  MessageMap out;
  for (AgentId i : somas.tau(a, q).members()) {
    if (i.index() >= somas.agent_count()) continue;
    const auto& m = somas.internals().entries[i.index()][q.index()];
    if (m) out.emplace(i, *m);
  }
  return out;
}

ActionId prescribed_action(const Somas& somas, AgentId a, StateId q) {
  if (a.index() >= somas.agent_count()) throw InputError("agent id out of range");
  if (q.index() >= somas.state_count()) throw InputError("state id out of range");
  return somas.prescribed(a, q);
}

std::vector<StateId> restricted_successors(const Somas& somas, Coalition coalition, StateId q) {
  for (AgentId a : coalition.members()) somas.prescribed(a, q);
  std::vector<StateId> out;
  for (const auto& e : somas.edges(q)) {
    for (Coalition m : e.compliant) {
      if (coalition.subset_of(m)) {
        out.push_back(e.to);
        break;
      }
    }
  }
  return out;  // edges are grouped by target in increasing order
}

StateSet out_reachable(const Somas& somas, Coalition coalition, StateId q) {
  StateSet seen(somas.state_count());
  std::deque<StateId> frontier{q};
  seen.insert(q);
  while (!frontier.empty()) {
    StateId s = frontier.front();
    frontier.pop_front();
    for (StateId t : restricted_successors(somas, coalition, s)) {
      if (!seen.contains(t)) {
        seen.insert(t);
        frontier.push_back(t);
      }
    }
  }
  return seen;
}

Lasso star_computation(const Somas& somas, StateId q) {
  const Coalition all = somas.all_agents();
  std::vector<StateId> path;
  std::vector<int> position(somas.state_count(), -1);
  StateId s = q;
  while (position[s.index()] < 0) {
    position[s.index()] = static_cast<int>(path.size());
    path.push_back(s);
    auto next = restricted_successors(somas, all, s);
    if (next.size() != 1) {
      throw InputError("state '" + somas.state_name(s) +
                       "' has no transition for the prescribed joint move");
    }
    s = next.front();
  }
  auto split = path.begin() + position[s.index()];
  return Lasso{std::vector<StateId>(path.begin(), split), std::vector<StateId>(split, path.end())};
}

ValidationReport validate(const Somas& somas) {
  ValidationReport report;
  const Cgs& cgs = somas.cgs();
  const std::size_t k = cgs.agent_count();
  const std::size_t n = cgs.state_count();
  auto add = [&](std::string kind, std::optional<AgentId> a, std::optional<StateId> q, std::string detail = {}) {
    report.push_back(Violation{std::move(kind), a, q, std::move(detail)});
  };

  if (k == 0) add("no agents", std::nullopt, std::nullopt);
  if (n == 0) add("no states", std::nullopt, std::nullopt);

  for (std::size_t q = 0; q < n; ++q) {
    for (PropId p : cgs.labeling[q]) {
      if (p.index() >= cgs.props.size()) add("undeclared proposition", std::nullopt, StateId(q));
    }
  }

  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t q = 0; q < n; ++q) {
      const auto& avail = cgs.available[a][q];
      if (avail.empty()) add("empty action set", AgentId(a), StateId(q));
      for (ActionId x : avail) {
        if (x.index() >= cgs.actions.size()) add("undeclared action", AgentId(a), StateId(q));
      }
    }
  }

  // Transitions: each must use available actions; each (q, v) at most one target;
  // every v in D(q) must be covered.
  std::map<std::pair<std::uint32_t, std::vector<ActionId>>, StateId> seen;
  for (const Transition& t : cgs.transitions) {
    if (t.from.index() >= n || t.to.index() >= n) {
      add("transition references unknown state", std::nullopt, std::nullopt);
      continue;
    }
    if (t.moves.size() != k) {
      add("transition has wrong arity", std::nullopt, t.from);
      continue;
    }
    bool ok = true;
    for (std::size_t a = 0; a < k; ++a) {
      const auto& avail = cgs.available[a][t.from.index()];
      if (std::find(avail.begin(), avail.end(), t.moves[a]) == avail.end()) {
        std::string name = t.moves[a].index() < cgs.actions.size() ? cgs.actions[t.moves[a].index()] : "?";
        add("transition uses unavailable action", AgentId(a), t.from, name);
        ok = false;
      }
    }
    if (!ok) continue;
    auto [it, inserted] = seen.emplace(std::make_pair(t.from.value, t.moves), t.to);
    if (!inserted && it->second != t.to) add("nondeterministic transition", std::nullopt, t.from);
  }
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t total = k == 0 ? 0 : 1;
    for (std::size_t a = 0; a < k; ++a) total *= cgs.available[a][q].size();
    std::size_t covered = 0;
    for (const auto& [key, to] : seen) {
      if (key.first == q) ++covered;
    }
    if (covered < total) {
      add("missing transition", std::nullopt, StateId(q),
          std::to_string(total - covered) + " joint move(s) without successor");
    }
  }

  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t q = 0; q < n; ++q) {
      AgentId agent(a);
      StateId state(q);
      const auto& m = somas.internals().entries[a][q];
      if (!m) {
        add("missing internal", agent, state);
      } else if (!m->is_integer()) {
        for (PropId p : m->as_props()) {
          if (!somas.labeled(state, p)) {
            add("message not in labeling", agent, state,
                p.index() < cgs.props.size() ? cgs.props[p.index()] : "?");
          }
        }
      }

      const auto& rule = somas.rules()[a].per_state[q];
      if (!rule) {
        add("missing rule", agent, state);
        continue;
      }
      if (rule->tau.empty()) add("empty tau", agent, state);
      if (!rule->tau.subset_of(Coalition::all(k))) add("tau names unknown agent", agent, state);
      const auto& avail = cgs.available[a][q];
      MessageMap received = messages_at(somas, agent, state);
      for (const GuardedAction& row : rule->gamma) {
        if (std::find(avail.begin(), avail.end(), row.action) == avail.end()) {
          add("action unavailable", agent, state,
              row.action.index() < cgs.actions.size() ? cgs.actions[row.action.index()] : "?");
        }
        if (!row.guard.referenced_agents().subset_of(rule->tau)) {
          add("guard reads outside tau", agent, state);
        }
        if (auto err = row.guard.kind_error(received)) add("guard kind mismatch", agent, state, *err);
      }
      if (!somas.evaluate_rule(agent, state)) add("guard incomplete", agent, state);
    }
  }
  return report;
}

std::string describe(const Somas& somas, const Violation& v) {
  std::ostringstream out;
  out << v.kind;
  if (v.agent && v.agent->index() < somas.agent_count()) out << ": agent " << somas.agent_name(*v.agent);
  if (v.state && v.state->index() < somas.state_count()) {
    out << (v.agent ? ", " : ": ") << "state " << somas.state_name(*v.state);
  }
  if (!v.detail.empty()) out << " (" << v.detail << ")";
  return out.str();
}

}  // namespace somas
