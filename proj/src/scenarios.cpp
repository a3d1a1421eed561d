#include "somas/scenarios.hpp"

#include <algorithm>
#include <set>

#include "somas/builder.hpp"
#include "somas/error.hpp"

namespace somas {

namespace {

GuardedAction row(const ModelBuilder& b, std::string_view guard, ActionId action) {
  return GuardedAction{b.guard(guard), action};
}

Somas build_trains(std::int64_t u1, std::int64_t u2, bool strict) {
  ModelBuilder b;
  AgentId a1 = b.agent("a1");
  AgentId a2 = b.agent("a2");
  std::vector<StateId> q;
  for (int i = 0; i < 5; ++i) q.push_back(b.state("q" + std::to_string(i)));
  PropId passed = b.prop("passed");
  PropId crash = b.prop("crash");
  ActionId go = b.action("go");
  ActionId wait = b.action("wait");
  b.label(q[3], passed);
  b.label(q[4], crash);
  if (strict) {
    PropId deadlock = b.prop("deadlock");
    if (u1 == u2) b.label(q[0], deadlock);
  }

  b.allow(a1, q[0], {go, wait});
  b.allow(a2, q[0], {go, wait});
  b.allow(a1, q[1], {go, wait});
  b.allow(a2, q[1], {wait});
  b.allow(a1, q[2], {wait});
  b.allow(a2, q[2], {go, wait});
  for (int i : {3, 4}) {
    b.allow(a1, q[i], {wait});
    b.allow(a2, q[i], {wait});
  }

  b.transition(q[0], {go, go}, q[4]);
  b.transition(q[0], {go, wait}, q[2]);
  b.transition(q[0], {wait, go}, q[1]);
  b.transition(q[0], {wait, wait}, q[0]);
  b.transition(q[1], {go, wait}, q[3]);
  b.transition(q[1], {wait, wait}, q[1]);
  b.transition(q[2], {wait, go}, q[3]);
  b.transition(q[2], {wait, wait}, q[2]);
  b.transition(q[3], {wait, wait}, q[3]);  // absorbing
  b.transition(q[4], {wait, wait}, q[4]);

  for (StateId s : q) {
    b.internal(a1, s, Message::integer(u1, "urgency"));
    b.internal(a2, s, Message::integer(u2, "urgency"));
  }

  Coalition both = Coalition::of({a1, a2});
  b.rule(a1, q[0], both, {row(b, strict ? "msg(a1) > msg(a2)" : "msg(a1) >= msg(a2)", go), row(b, "true", wait)});
  b.rule(a2, q[0], both, {row(b, "msg(a1) < msg(a2)", go), row(b, "true", wait)});
  b.rule(a1, q[1], Coalition::single(a1), {row(b, "true", go)});
  b.rule(a2, q[1], Coalition::single(a2), {row(b, "true", wait)});
  b.rule(a1, q[2], Coalition::single(a1), {row(b, "true", wait)});
  b.rule(a2, q[2], Coalition::single(a2), {row(b, "true", go)});
  for (int i : {3, 4}) {
    b.rule(a1, q[i], Coalition::single(a1), {row(b, "true", wait)});
    b.rule(a2, q[i], Coalition::single(a2), {row(b, "true", wait)});
  }
  return b.build();
}

// Calls f(moves) for every joint move over per-agent action lists.
template <class F>
void for_each_joint_move(const std::vector<std::vector<ActionId>>& options, F&& f) {
  std::vector<std::size_t> digit(options.size(), 0);
  std::vector<ActionId> moves(options.size());
  while (true) {
    for (std::size_t i = 0; i < options.size(); ++i) moves[i] = options[i][digit[i]];
    f(moves);
    std::size_t i = 0;
    while (i < options.size() && ++digit[i] == options[i].size()) digit[i++] = 0;
    if (i == options.size()) return;
  }
}

}  // namespace

Somas two_trains(std::int64_t u1, std::int64_t u2) { return build_trains(u1, u2, false); }

Somas two_trains_strict(std::int64_t u1, std::int64_t u2) { return build_trains(u1, u2, true); }

Somas task_delegation() {
  ModelBuilder b;
  const std::vector<std::string> names = {"a", "b", "c", "d", "e"};
  std::vector<AgentId> ag;
  for (const auto& n : names) ag.push_back(b.agent(n));
  const AgentId a = ag[0], bb = ag[1], c = ag[2], d = ag[3], e = ag[4];
  ActionId work = b.action("work");
  ActionId idle = b.action("idle");
  PropId psi_a = b.prop("psi_a");
  PropId psi_de = b.prop("psi_de");
  PropId psi_abe = b.prop("psi_abe");
  PropId psi = b.prop("psi");

  auto bit = [](AgentId x) { return 1U << x.value; };
  std::vector<StateId> q;
  for (unsigned done = 0; done < 32; ++done) q.push_back(b.state("q" + std::to_string(done)));

  const std::vector<Coalition> tau = {
      Coalition::of({a}),         Coalition::of({a, e, bb}), Coalition::of({bb, d, c}),
      Coalition::of({e, d}),      Coalition::of({e}),
  };
  const std::vector<std::string> ready = {
      "true", "msg(a) == 1 && msg(e) == 1", "msg(b) == 1 && msg(d) == 1", "msg(e) == 1", "true",
  };

  for (unsigned done = 0; done < 32; ++done) {
    StateId s = q[done];
    auto has = [&](std::initializer_list<AgentId> xs) {
      return std::all_of(xs.begin(), xs.end(), [&](AgentId x) { return (done & bit(x)) != 0; });
    };
    if (has({a})) b.label(s, psi_a);
    if (has({d, e})) b.label(s, psi_de);
    if (has({a, bb, e})) b.label(s, psi_abe);
    if (done == 31) b.label(s, psi);

    for (AgentId x : ag) {
      b.allow(x, s, {work, idle});
      b.internal(x, s, Message::integer((done & bit(x)) ? 1 : 0, "done"));
      b.rule(x, s, tau[x.index()], {row(b, ready[x.index()], work), row(b, "true", idle)});
    }
    for_each_joint_move(std::vector<std::vector<ActionId>>(5, {work, idle}), [&](const std::vector<ActionId>& v) {
      unsigned next = done;
      for (AgentId x : ag) {
        if (v[x.index()] == work) next |= bit(x);
      }
      b.transition(s, v, q[next]);
    });
  }
  return b.build();
}

CommunityConfig example_community_config() {
  CommunityConfig cfg;
  cfg.users = {"u1", "u2", "u3", "u4"};
  cfg.middles = {"m1", "m2", "m3"};
  cfg.interests = {{"u1", {"u2"}}, {"u2", {"u1"}}, {"u3", {"u4"}}, {"u4", {"u3"}}};
  cfg.initial = {{"u1", "m1"}, {"u2", "m2"}, {"u3", "m3"}, {"u4", "m1"}};
  cfg.schedule = {{"u1", "u2", true}, {"u2", "u1", false}, {"u3", "u4", false}, {"u4", "u3", false}};
  return cfg;
}

void validate_config(const CommunityConfig& cfg) {
  std::set<std::string> users(cfg.users.begin(), cfg.users.end());
  std::set<std::string> middles(cfg.middles.begin(), cfg.middles.end());
  if (cfg.users.empty()) throw InputError("community needs at least one user");
  if (cfg.middles.empty()) throw InputError("community needs at least one middle agent");
  if (users.size() != cfg.users.size()) throw InputError("duplicate user name");
  if (middles.size() != cfg.middles.size()) throw InputError("duplicate middle agent name");
  for (const auto& m : cfg.middles) {
    if (users.count(m)) throw InputError("'" + m + "' is both a user and a middle agent");
  }
  if (cfg.users.size() + cfg.middles.size() > kMaxAgents) throw SizeError("community has too many agents");
  for (const auto& [u, targets] : cfg.interests) {
    if (!users.count(u)) throw InputError("interests name unknown user '" + u + "'");
    for (const auto& t : targets) {
      if (!users.count(t)) throw InputError("interests of '" + u + "' name unknown user '" + t + "'");
      if (t == u) throw InputError("user '" + u + "' cannot be interested in itself");
    }
  }
  for (const auto& u : cfg.users) {
    auto it = cfg.initial.find(u);
    if (it == cfg.initial.end()) throw InputError("user '" + u + "' has no initial middle agent");
    if (!middles.count(it->second)) throw InputError("user '" + u + "' starts at unknown middle '" + it->second + "'");
  }
  for (const auto& [u, m] : cfg.initial) {
    if (!users.count(u)) throw InputError("initial registration names unknown user '" + u + "'");
  }
  for (const auto& step : cfg.schedule) {
    if (!users.count(step.requester) || !users.count(step.target)) {
      throw InputError("schedule names unknown user in (" + step.requester + ", " + step.target + ")");
    }
    if (step.requester == step.target) throw InputError("user '" + step.requester + "' queries itself");
  }
}

namespace {

// Protocol position: registrations (user -> middle, -1 while in transit),
// next schedule entry, and whether a transfer is in flight.
struct Phase {
  std::vector<int> reg;
  std::size_t pos = 0;
  bool transfer = false;
  int released_from = -1;
};

std::string reg_name(const std::string& u, const std::string& m) { return "reg(" + u + "," + m + ")"; }

}  // namespace

Somas community_model(const CommunityConfig& cfg) {
  validate_config(cfg);
  const std::size_t nu = cfg.users.size();
  const std::size_t nm = cfg.middles.size();
  auto user_index = [&](const std::string& u) {
    return static_cast<std::size_t>(std::find(cfg.users.begin(), cfg.users.end(), u) - cfg.users.begin());
  };
  auto middle_index = [&](const std::string& m) {
    return static_cast<int>(std::find(cfg.middles.begin(), cfg.middles.end(), m) - cfg.middles.begin());
  };

  // Under the rules the protocol is a chain; walk it once.
  std::vector<Phase> chain;
  std::vector<std::string> names;
  Phase p;
  for (const auto& u : cfg.users) p.reg.push_back(middle_index(cfg.initial.at(u)));
  int changes = 0, primes = 0;
  while (true) {
    chain.push_back(p);
    names.push_back("q" + std::to_string(changes) + std::string(primes, '\''));
    if (p.pos == cfg.schedule.size()) break;
    const QueryStep& step = cfg.schedule[p.pos];
    std::size_t r = user_index(step.requester), t = user_index(step.target);
    if (p.transfer) {
      p.reg[t] = p.reg[r];
      p.transfer = false;
      p.released_from = -1;
      ++p.pos;
      ++changes;
      primes = 0;
    } else if (p.reg[r] == p.reg[t]) {
      ++p.pos;
      ++primes;
    } else {
      p.released_from = p.reg[t];
      p.reg[t] = -1;
      p.transfer = true;
      ++changes;
      primes = 0;
    }
  }

  ModelBuilder b;
  std::vector<AgentId> users, middles;
  for (const auto& u : cfg.users) users.push_back(b.agent(u));
  for (const auto& m : cfg.middles) middles.push_back(b.agent(m));
  std::vector<std::vector<PropId>> reg_prop(nu);
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t m = 0; m < nm; ++m) reg_prop[u].push_back(b.prop(reg_name(cfg.users[u], cfg.middles[m])));
  }
  std::vector<StateId> states;
  for (const auto& n : names) states.push_back(b.state(n));
  ActionId ask = b.action("ask");
  ActionId idle = b.action("idle");
  ActionId answer = b.action("answer");
  ActionId noop = b.action("noop");

  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Phase& ph = chain[i];
    StateId s = states[i];
    const std::size_t k = nu + nm;
    std::vector<std::vector<ActionId>> options(k);
    std::vector<std::optional<ActionId>> active(k);  // the move that advances the protocol

    for (std::size_t u = 0; u < nu; ++u) {
      if (ph.reg[u] >= 0) b.label(s, reg_prop[u][ph.reg[u]]);
    }
    for (std::size_t m = 0; m < nm; ++m) {
      Message::PropSet held;
      for (std::size_t u = 0; u < nu; ++u) {
        if (ph.reg[u] == static_cast<int>(m)) held.push_back(reg_prop[u][m]);
      }
      b.internal(middles[m], s, Message::props(held, "registrations"));
    }

    std::optional<std::size_t> requester;
    if (ph.pos < cfg.schedule.size() && !ph.transfer) requester = user_index(cfg.schedule[ph.pos].requester);
    for (std::size_t u = 0; u < nu; ++u) {
      bool asking = requester == u;
      b.internal(users[u], s, Message::integer(asking ? 1 : 0, "pending"));
      if (asking) {
        options[u] = {ask, idle};
        active[u] = ask;
        b.rule(users[u], s, Coalition::single(users[u]),
               {row(b, "msg(" + cfg.users[u] + ") == 1", ask), row(b, "true", idle)});
      } else {
        options[u] = {idle};
        b.rule(users[u], s, Coalition::single(users[u]), {row(b, "true", idle)});
      }
    }

    // At most one middle agent acts per state.
    int acting = -1;
    Coalition acting_tau;
    ActionId act = noop;
    std::string guard;
    if (ph.pos < cfg.schedule.size()) {
      const QueryStep& step = cfg.schedule[ph.pos];
      std::size_t r = user_index(step.requester), t = user_index(step.target);
      const std::string& ru = cfg.users[r];
      const std::string& tu = cfg.users[t];
      if (ph.transfer) {
        acting = ph.reg[r];
        const std::string& from = cfg.middles[ph.released_from];
        acting_tau = Coalition::of({middles[acting], middles[ph.released_from]});
        act = b.action("register(" + tu + ")");
        guard = "!has(msg(" + from + "), " + reg_name(tu, from) + ")";
      } else if (ph.reg[r] == ph.reg[t]) {
        acting = ph.reg[r];
        acting_tau = Coalition::of({middles[acting], users[r]});
        act = answer;
        guard = "msg(" + ru + ") == 1";
      } else {
        acting = ph.reg[t];
        const std::string& mt = cfg.middles[acting];
        acting_tau = Coalition::single(middles[acting]);
        act = b.action("deregister(" + tu + ")");
        guard = "has(msg(" + mt + "), " + reg_name(tu, mt) + ")";
        if (step.direct) {
          acting_tau.insert(users[r]);
          guard += " && msg(" + ru + ") == 1";
        }
      }
    }
    for (std::size_t m = 0; m < nm; ++m) {
      std::size_t idx = nu + m;
      if (static_cast<int>(m) == acting) {
        options[idx] = {act, noop};
        active[idx] = act;
        b.rule(middles[m], s, acting_tau, {row(b, guard, act), row(b, "true", noop)});
      } else {
        options[idx] = {noop};
        b.rule(middles[m], s, Coalition::single(middles[m]), {row(b, "true", noop)});
      }
    }

    for (std::size_t a = 0; a < k; ++a) b.allow(AgentId(a), s, options[a]);
    StateId advance = i + 1 < chain.size() ? states[i + 1] : s;
    for_each_joint_move(options, [&](const std::vector<ActionId>& v) {
      bool fires = true;
      for (std::size_t a = 0; a < k; ++a) fires = fires && (!active[a] || v[a] == *active[a]);
      b.transition(s, v, fires && acting >= 0 ? advance : s);
    });
  }
  return b.build();
}

bool eval_com(const Somas& somas, const CommunityConfig& cfg, StateId q, const ComAtom& atom) {
  auto known = [](const std::vector<std::string>& list, const std::string& n) {
    return std::find(list.begin(), list.end(), n) != list.end();
  };
  for (const auto& u : atom.users) {
    if (!known(cfg.users, u)) throw InputError("com atom names unknown user '" + u + "'");
  }
  for (const auto& m : atom.middles) {
    if (!known(cfg.middles, m)) throw InputError("com atom names unknown middle agent '" + m + "'");
  }
  auto at = [&](const std::string& u, const std::string& m) {
    auto p = somas.find_prop(reg_name(u, m));
    return p && somas.labeled(q, *p);
  };
  for (const auto& u : atom.users) {
    auto it = cfg.interests.find(u);
    if (it == cfg.interests.end()) continue;
    for (const auto& other : it->second) {
      bool shared = std::any_of(atom.middles.begin(), atom.middles.end(),
                                [&](const std::string& m) { return at(u, m) && at(other, m); });
      if (!shared) return false;
    }
  }
  return true;
}

ComHook make_com_hook(const Somas& somas, const CommunityConfig& cfg) {
  return [&somas, &cfg](StateId q, const ComAtom& atom) { return eval_com(somas, cfg, q, atom); };
}

}  // namespace somas
