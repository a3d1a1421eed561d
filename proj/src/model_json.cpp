#include "somas/model_json.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "somas/builder.hpp"
#include "somas/error.hpp"

namespace somas {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InputError("unknown key '" + key + "' in " + where);
  }
}

const json& need(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

std::vector<std::string> names_of(const json& value, const std::string& where) {
  if (!value.is_array()) throw InputError(where + " must be an array of names");
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw InputError(where + " must contain only strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON", e.byte > 0 ? e.byte - 1 : 0);
  }
}

// Name tables for one explicit model, so references can be checked before
// they reach the builder (which would otherwise declare them).
class Names {
 public:
  void declare(const std::vector<std::string>& names, const std::string& kind) {
    auto& set = sets_[kind];
    for (const auto& n : names) {
      if (!set.insert(n).second) throw InputError("duplicate " + kind + " '" + n + "'");
    }
  }
  const std::string& check(const std::string& name, const std::string& kind) const {
    const auto& set = sets_.at(kind);
    if (!set.count(name)) throw InputError("unknown " + kind + " '" + name + "'");
    return name;
  }

 private:
  std::unordered_map<std::string, std::set<std::string>> sets_;
};

LoadedModel load_explicit(const json& doc) {
  only_keys(doc, {"agents", "states", "props", "labeling", "actions", "available", "transitions", "internals", "rules"},
            "model");
  ModelBuilder b;
  Names names;
  auto agents = names_of(need(doc, "agents", "model"), "agents");
  auto states = names_of(need(doc, "states", "model"), "states");
  auto props = doc.contains("props") ? names_of(doc["props"], "props") : std::vector<std::string>{};
  auto actions = names_of(need(doc, "actions", "model"), "actions");
  names.declare(agents, "agent");
  names.declare(states, "state");
  names.declare(props, "proposition");
  names.declare(actions, "action");
  if (agents.size() > kMaxAgents) throw SizeError("models are limited to 64 agents");
  for (const auto& n : agents) b.agent(n);
  for (const auto& n : states) b.state(n);
  for (const auto& n : props) b.prop(n);
  for (const auto& n : actions) b.action(n);

  if (doc.contains("labeling")) {
    const json& labeling = doc["labeling"];
    if (!labeling.is_object()) throw InputError("labeling must be an object");
    for (const auto& [state, list] : labeling.items()) {
      StateId q = b.state(names.check(state, "state"));
      for (const auto& p : names_of(list, "labeling of " + state)) b.label(q, b.prop(names.check(p, "proposition")));
    }
  }

  const json& available = need(doc, "available", "model");
  if (!available.is_object()) throw InputError("available must be an object");
  for (const auto& [agent, per_state] : available.items()) {
    AgentId a = b.agent(names.check(agent, "agent"));
    if (!per_state.is_object()) throw InputError("available." + agent + " must be an object");
    for (const auto& [state, list] : per_state.items()) {
      StateId q = b.state(names.check(state, "state"));
      std::vector<ActionId> acts;
      for (const auto& x : names_of(list, "available." + agent + "." + state)) {
        acts.push_back(b.action(names.check(x, "action")));
      }
      b.allow(a, q, std::move(acts));
    }
  }

  const json& transitions = need(doc, "transitions", "model");
  if (!transitions.is_array()) throw InputError("transitions must be an array");
  for (const auto& t : transitions) {
    only_keys(t, {"from", "moves", "to"}, "transition");
    std::string from_name = need(t, "from", "transition").get<std::string>();
    StateId from = b.state(names.check(from_name, "state"));
    StateId to = b.state(names.check(need(t, "to", "transition").get<std::string>(), "state"));
    const json& moves = need(t, "moves", "transition");
    if (!moves.is_object()) throw InputError("transition moves must be an object");
    std::vector<ActionId> v(agents.size());
    for (const auto& [agent, action] : moves.items()) names.check(agent, "agent");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      auto it = moves.find(agents[i]);
      if (it == moves.end()) {
        throw InputError("transition from '" + from_name + "' has no move for agent '" + agents[i] + "'");
      }
      v[i] = b.action(names.check(it->get<std::string>(), "action"));
    }
    b.transition(from, std::move(v), to);
  }

  const json& internals = need(doc, "internals", "model");
  if (!internals.is_object()) throw InputError("internals must be an object");
  for (const auto& [agent, per_state] : internals.items()) {
    AgentId a = b.agent(names.check(agent, "agent"));
    if (!per_state.is_object()) throw InputError("internals." + agent + " must be an object");
    for (const auto& [state, m] : per_state.items()) {
      StateId q = b.state(names.check(state, "state"));
      std::string where = "internals." + agent + "." + state;
      only_keys(m, {"int", "props", "tag"}, where);
      std::string tag = m.contains("tag") ? m["tag"].get<std::string>() : std::string();
      if (m.contains("int") == m.contains("props")) throw InputError(where + " needs exactly one of int, props");
      if (m.contains("int")) {
        if (!m["int"].is_number_integer()) throw InputError(where + ".int must be an integer");
        b.internal(a, q, Message::integer(m["int"].get<std::int64_t>(), tag));
      } else {
        Message::PropSet ps;
        for (const auto& p : names_of(m["props"], where + ".props")) ps.push_back(b.prop(names.check(p, "proposition")));
        b.internal(a, q, Message::props(std::move(ps), tag));
      }
    }
  }

  const json& rules = need(doc, "rules", "model");
  if (!rules.is_object()) throw InputError("rules must be an object");
  for (const auto& [agent, per_state] : rules.items()) {
    AgentId a = b.agent(names.check(agent, "agent"));
    if (!per_state.is_object()) throw InputError("rules." + agent + " must be an object");
    for (const auto& [state, r] : per_state.items()) {
      StateId q = b.state(names.check(state, "state"));
      std::string where = "rules." + agent + "." + state;
      only_keys(r, {"tau", "gamma"}, where);
      Coalition tau;
      for (const auto& n : names_of(need(r, "tau", where), where + ".tau")) tau.insert(b.agent(names.check(n, "agent")));
      const json& gamma = need(r, "gamma", where);
      if (!gamma.is_array()) throw InputError(where + ".gamma must be an array");
      std::vector<GuardedAction> rows;
      for (const auto& g : gamma) {
        only_keys(g, {"guard", "action"}, where + ".gamma");
        std::string text = need(g, "guard", where).get<std::string>();
        ActionId x = b.action(names.check(need(g, "action", where).get<std::string>(), "action"));
        try {
          rows.push_back({b.guard(text), x});
        } catch (const ParseError& e) {
          throw InputError(std::string(e.what()) + " in guard \"" + text + "\" of " + where);
        }
      }
      b.rule(a, q, tau, std::move(rows));
    }
  }
  return LoadedModel{std::make_unique<Somas>(b.build()), std::nullopt};
}

std::int64_t int_or(const json& doc, const char* key, std::int64_t fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer()) throw InputError(std::string(key) + " must be an integer");
  return doc[key].get<std::int64_t>();
}

CommunityConfig community_from_json(const json& doc) {
  CommunityConfig cfg = example_community_config();
  if (doc.contains("users")) cfg.users = names_of(doc["users"], "users");
  if (doc.contains("middles")) cfg.middles = names_of(doc["middles"], "middles");
  if (doc.contains("interests")) {
    if (!doc["interests"].is_object()) throw InputError("interests must be an object");
    cfg.interests.clear();
    for (const auto& [u, list] : doc["interests"].items()) cfg.interests[u] = names_of(list, "interests." + u);
  }
  if (doc.contains("initial")) {
    if (!doc["initial"].is_object()) throw InputError("initial must be an object");
    cfg.initial.clear();
    for (const auto& [u, m] : doc["initial"].items()) {
      if (!m.is_string()) throw InputError("initial." + u + " must be a middle agent name");
      cfg.initial[u] = m.get<std::string>();
    }
  }
  if (doc.contains("schedule")) {
    if (!doc["schedule"].is_array()) throw InputError("schedule must be an array");
    cfg.schedule.clear();
    for (const auto& entry : doc["schedule"]) {
      auto parts = names_of(entry, "schedule entry");
      if (parts.size() < 2 || parts.size() > 3) throw InputError("schedule entries are [requester, target(, mode)]");
      QueryStep step{parts[0], parts[1], false};
      if (parts.size() == 3) {
        if (parts[2] != "direct" && parts[2] != "broadcast") {
          throw InputError("schedule mode must be \"direct\" or \"broadcast\"");
        }
        step.direct = parts[2] == "direct";
      }
      cfg.schedule.push_back(step);
    }
  }
  return cfg;
}

LoadedModel load_scenario(const json& doc) {
  if (!doc["scenario"].is_string()) throw InputError("scenario must be a string");
  std::string name = doc["scenario"].get<std::string>();
  if (name == "two_trains" || name == "two_trains_strict") {
    only_keys(doc, {"scenario", "u1", "u2"}, "scenario " + name);
    std::int64_t u1 = int_or(doc, "u1", 3), u2 = int_or(doc, "u2", 2);
    Somas m = name == "two_trains" ? two_trains(u1, u2) : two_trains_strict(u1, u2);
    return LoadedModel{std::make_unique<Somas>(std::move(m)), std::nullopt};
  }
  if (name == "task_delegation") {
    only_keys(doc, {"scenario"}, "scenario " + name);
    return LoadedModel{std::make_unique<Somas>(task_delegation()), std::nullopt};
  }
  if (name == "community") {
    only_keys(doc, {"scenario", "users", "middles", "interests", "initial", "schedule"}, "scenario " + name);
    CommunityConfig cfg = community_from_json(doc);
    return LoadedModel{std::make_unique<Somas>(community_model(cfg)), cfg};
  }
  throw InputError("unknown scenario '" + name + "'");
}

}  // namespace

ComHook LoadedModel::com_hook() const {
  if (!community) return {};
  return make_com_hook(*somas, *community);
}

LoadedModel load_model_json(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.is_object()) throw InputError("model file must contain a JSON object");
  try {
    if (doc.contains("scenario")) return load_scenario(doc);
    return load_explicit(doc);
  } catch (const json::exception& e) {
    throw InputError(std::string("model file: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

LoadedModel load_model_file(const std::string& path) { return load_model_json(read_file(path)); }

std::string dump_model_json(const Somas& somas, int indent) {
  const Cgs& cgs = somas.cgs();
  ordered_json doc;
  doc["agents"] = cgs.agents;
  doc["states"] = cgs.states;
  doc["props"] = cgs.props;
  ordered_json labeling = ordered_json::object();
  for (std::size_t q = 0; q < cgs.states.size(); ++q) {
    ordered_json list = ordered_json::array();
    for (PropId p : cgs.labeling[q]) list.push_back(cgs.props[p.index()]);
    labeling[cgs.states[q]] = list;
  }
  doc["labeling"] = labeling;
  doc["actions"] = cgs.actions;
  ordered_json available = ordered_json::object();
  for (std::size_t a = 0; a < cgs.agents.size(); ++a) {
    ordered_json per_state = ordered_json::object();
    for (std::size_t q = 0; q < cgs.states.size(); ++q) {
      ordered_json list = ordered_json::array();
      for (ActionId x : cgs.available[a][q]) list.push_back(cgs.actions[x.index()]);
      per_state[cgs.states[q]] = list;
    }
    available[cgs.agents[a]] = per_state;
  }
  doc["available"] = available;
  ordered_json transitions = ordered_json::array();
  for (const Transition& t : cgs.transitions) {
    ordered_json moves = ordered_json::object();
    for (std::size_t a = 0; a < t.moves.size(); ++a) moves[cgs.agents[a]] = cgs.actions[t.moves[a].index()];
    transitions.push_back({{"from", cgs.states[t.from.index()]}, {"moves", moves}, {"to", cgs.states[t.to.index()]}});
  }
  doc["transitions"] = transitions;

  auto agent_name = [&](AgentId a) { return somas.agent_name(a); };
  auto prop_name = [&](PropId p) { return somas.prop_name(p); };
  ordered_json internals = ordered_json::object();
  ordered_json rules = ordered_json::object();
  for (std::size_t a = 0; a < cgs.agents.size(); ++a) {
    ordered_json im = ordered_json::object();
    ordered_json rm = ordered_json::object();
    for (std::size_t q = 0; q < cgs.states.size(); ++q) {
      if (const auto& m = somas.internals().entries[a][q]) {
        ordered_json entry = ordered_json::object();
        if (m->is_integer()) {
          entry["int"] = m->as_integer();
        } else {
          ordered_json ps = ordered_json::array();
          for (PropId p : m->as_props()) ps.push_back(cgs.props[p.index()]);
          entry["props"] = ps;
        }
        if (!m->tag.empty()) entry["tag"] = m->tag;
        im[cgs.states[q]] = entry;
      }
      if (const auto& r = somas.rules()[a].per_state[q]) {
        ordered_json gamma = ordered_json::array();
        for (const GuardedAction& row : r->gamma) {
          gamma.push_back({{"guard", row.guard.render(agent_name, prop_name)}, {"action", cgs.actions[row.action.index()]}});
        }
        ordered_json tau = ordered_json::array();
        for (AgentId i : r->tau.members()) tau.push_back(cgs.agents[i.index()]);
        rm[cgs.states[q]] = {{"tau", tau}, {"gamma", gamma}};
      }
    }
    internals[cgs.agents[a]] = im;
    rules[cgs.agents[a]] = rm;
  }
  doc["internals"] = internals;
  doc["rules"] = rules;
  return doc.dump(indent) + "\n";
}

QueryFile load_query_json(const std::string& text) {
  json doc = parse_json(text);
  try {
    only_keys(doc, {"state", "formulas", "goals", "coalitions"}, "query file");
    QueryFile qf;
    const json& state = need(doc, "state", "query file");
    if (!state.is_string()) throw InputError("query state must be a string");
    qf.state = state.get<std::string>();
    if (doc.contains("formulas")) qf.formulas = names_of(doc["formulas"], "formulas");
    if (doc.contains("goals")) qf.goals = names_of(doc["goals"], "goals");
    if (doc.contains("coalitions")) {
      if (!doc["coalitions"].is_array()) throw InputError("coalitions must be an array of name lists");
      for (const auto& c : doc["coalitions"]) qf.coalitions.push_back(names_of(c, "coalition"));
    }
    return qf;
  } catch (const json::exception& e) {
    throw InputError(std::string("query file: ") + e.what());
  }
}

QueryFile load_query_file(const std::string& path) { return load_query_json(read_file(path)); }

std::string contribution_report_json(const Somas& somas, StateId q, const ContributionSet& set) {
  ordered_json doc;
  doc["state"] = somas.state_name(q);
  ordered_json entries = ordered_json::array();
  for (const auto& e : set.entries) {
    entries.push_back({{"coalition", somas.names(e.coalition)}, {"goal", render_goal(set.goals[e.goal])}});
  }
  doc["entries"] = entries;
  ordered_json rejections = ordered_json::array();
  for (const auto& r : set.rejections) {
    ordered_json item = {{"coalition", somas.names(r.coalition)}, {"reason", to_string(r.reason)}};
    if (r.goal) item["goal"] = render_goal(set.goals[*r.goal]);
    rejections.push_back(item);
  }
  doc["rejections"] = rejections;
  return doc.dump(2) + "\n";
}

std::string verdict_json(const Somas& somas, StateId q, const ContributionVerdict& v) {
  ordered_json doc;
  doc["state"] = somas.state_name(q);
  doc["coalition"] = somas.names(v.coalition);
  doc["goal"] = render_goal(v.goal);
  doc["semantic"] = v.semantic;
  doc["structural"] = v.structural;
  doc["minimal"] = v.minimal;
  doc["full"] = v.full();
  doc["witness"] = v.witness ? ordered_json(somas.names(*v.witness)) : ordered_json(nullptr);
  return doc.dump(2) + "\n";
}

std::string check_json(const std::string& state, const std::string& formula, bool holds) {
  ordered_json doc;
  doc["state"] = state;
  doc["formula"] = formula;
  doc["holds"] = holds;
  return doc.dump(2) + "\n";
}

}  // namespace somas
