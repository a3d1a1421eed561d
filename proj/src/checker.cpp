#include "somas/checker.hpp"

#include <algorithm>
#include <deque>

#include "somas/error.hpp"

namespace somas {

namespace {

bool eval_prop(const Somas& somas, StateId q, const std::string& name) {
  auto p = somas.find_prop(name);
  if (!p) throw InputError("unknown proposition '" + name + "'");
  return somas.labeled(q, *p);
}

bool eval_com(const ComHook& com, StateId q, const ComAtom& atom) {
  if (!com) throw InputError("com atom needs a community model");
  return com(q, atom);
}

}  // namespace

Checker::Checker(const Somas& somas, ComHook com) : somas_(somas), com_(std::move(com)) {}

Coalition Checker::bind(const std::vector<std::string>& names) const { return somas_.coalition(names); }

const std::vector<std::vector<StateId>>& Checker::restricted(Coalition coalition) {
  auto it = succ_.find(coalition);
  if (it != succ_.end()) return it->second;
  std::vector<std::vector<StateId>> succ(somas_.state_count());
  for (std::size_t q = 0; q < succ.size(); ++q) succ[q] = restricted_successors(somas_, coalition, StateId(q));
  return succ_.emplace(coalition, std::move(succ)).first->second;
}

const std::vector<std::vector<StateId>>& Checker::predecessors(Coalition coalition) {
  auto it = pred_.find(coalition);
  if (it != pred_.end()) return it->second;
  const auto& succ = restricted(coalition);
  std::vector<std::vector<StateId>> pred(succ.size());
  for (std::size_t q = 0; q < succ.size(); ++q) {
    for (StateId s : succ[q]) pred[s.index()].push_back(StateId(q));
  }
  return pred_.emplace(coalition, std::move(pred)).first->second;
}

const StateSet& Checker::label(const Formula& f) {
  std::string key = render_formula(f);
  auto it = labels_.find(key);
  if (it != labels_.end()) return it->second;
  StateSet result = compute(f);
  return labels_.emplace(std::move(key), std::move(result)).first->second;
}

StateSet Checker::compute(const Formula& f) {
  const std::size_t n = somas_.state_count();
  StateSet out(n);
  switch (f.kind()) {
    case Formula::Kind::kTrue:
      for (std::size_t q = 0; q < n; ++q) out.insert(StateId(q));
      return out;
    case Formula::Kind::kProp:
      for (std::size_t q = 0; q < n; ++q) {
        if (eval_prop(somas_, StateId(q), f.name())) out.insert(StateId(q));
      }
      return out;
    case Formula::Kind::kCom:
      for (std::size_t q = 0; q < n; ++q) {
        if (eval_com(com_, StateId(q), f.com_atom())) out.insert(StateId(q));
      }
      return out;
    case Formula::Kind::kNot: {
      const StateSet& inner = label(f.child());
      for (std::size_t q = 0; q < n; ++q) {
        if (!inner.contains(StateId(q))) out.insert(StateId(q));
      }
      return out;
    }
    case Formula::Kind::kAnd: {
      StateSet a = label(f.lhs());
      const StateSet& b = label(f.rhs());
      for (std::size_t q = 0; q < n; ++q) {
        if (a.contains(StateId(q)) && b.contains(StateId(q))) out.insert(StateId(q));
      }
      return out;
    }
    case Formula::Kind::kNext: {
      Coalition c = bind(f.coalition());
      StateSet inner = label(f.child());
      const auto& succ = restricted(c);
      for (std::size_t q = 0; q < n; ++q) {
        bool all = std::all_of(succ[q].begin(), succ[q].end(), [&](StateId s) { return inner.contains(s); });
        if (all) out.insert(StateId(q));
      }
      return out;
    }
    case Formula::Kind::kGlobally: {
      // Greatest fixpoint: drop states with a successor outside the set.
      Coalition c = bind(f.coalition());
      out = label(f.child());
      const auto& pred = predecessors(c);
      std::deque<StateId> removed;
      for (std::size_t q = 0; q < n; ++q) {
        if (!out.contains(StateId(q))) removed.emplace_back(q);
      }
      while (!removed.empty()) {
        StateId s = removed.front();
        removed.pop_front();
        for (StateId p : pred[s.index()]) {
          if (out.contains(p)) {
            out.erase(p);
            removed.push_back(p);
          }
        }
      }
      return out;
    }
    case Formula::Kind::kUntil: {
      // Least fixpoint: a phi1-state joins once all its successors have.
      Coalition c = bind(f.coalition());
      StateSet lhs = label(f.lhs());
      out = label(f.rhs());
      const auto& succ = restricted(c);
      const auto& pred = predecessors(c);
      std::vector<std::size_t> pending(n);
      std::deque<StateId> added;
      for (std::size_t q = 0; q < n; ++q) {
        pending[q] = succ[q].size();
        if (out.contains(StateId(q))) added.emplace_back(q);
      }
      while (!added.empty()) {
        StateId s = added.front();
        added.pop_front();
        for (StateId p : pred[s.index()]) {
          if (out.contains(p) || !lhs.contains(p)) continue;
          if (--pending[p.index()] == 0) {
            out.insert(p);
            added.push_back(p);
          }
        }
      }
      return out;
    }
  }
  return out;
}

bool check(const Somas& somas, StateId q, const Formula& f, const ComHook& com) {
  if (q.index() >= somas.state_count()) throw InputError("state id out of range");
  return Checker(somas, com).holds(q, f);
}

StateSet label_states(const Somas& somas, const Formula& f, const ComHook& com) {
  return Checker(somas, com).label(f);
}

namespace {

// Reads the raw transition list and evaluates guards afresh, sharing nothing
// with the checker's restricted relation.
class BruteForce {
 public:
  BruteForce(const Somas& somas, const ComHook& com) : somas_(somas), com_(com) {
    by_source_.resize(somas.state_count());
    for (const Transition& t : somas.cgs().transitions) by_source_[t.from.index()].push_back(&t);
  }

  bool eval(StateId q, const Formula& f) {
    auto key = std::make_pair(render_formula(f), q.value);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = eval_uncached(q, f);
    memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  std::vector<StateId> successors(Coalition c, StateId q) {
    std::vector<ActionId> want(somas_.agent_count());
    for (AgentId a : c.members()) {
      auto x = somas_.evaluate_rule(a, q);
      if (!x) throw GuardIncomplete(somas_.agent_name(a), somas_.state_name(q));
      want[a.index()] = *x;
    }
    std::vector<StateId> out;
    for (const Transition* t : by_source_[q.index()]) {
      bool ok = true;
      for (AgentId a : c.members()) ok = ok && t->moves[a.index()] == want[a.index()];
      if (ok && std::find(out.begin(), out.end(), t->to) == out.end()) out.push_back(t->to);
    }
    return out;
  }

  // Every simple path from q stays inside phi (a return to the path closes a
  // lasso whose states were all checked already).
  bool always(Coalition c, StateId q, const Formula& phi, std::vector<bool>& on_path) {
    if (!eval(q, phi)) return false;
    on_path[q.index()] = true;
    bool ok = true;
    for (StateId s : successors(c, q)) {
      if (!on_path[s.index()] && !always(c, s, phi, on_path)) {
        ok = false;
        break;
      }
    }
    on_path[q.index()] = false;
    return ok;
  }

  // Every computation from q reaches psi through phi-states; a lasso that
  // closes before reaching psi is a counterexample.
  bool until(Coalition c, StateId q, const Formula& phi, const Formula& psi, std::vector<bool>& on_path) {
    if (eval(q, psi)) return true;
    if (!eval(q, phi)) return false;
    on_path[q.index()] = true;
    bool ok = true;
    for (StateId s : successors(c, q)) {
      if (on_path[s.index()] || !until(c, s, phi, psi, on_path)) {
        ok = false;
        break;
      }
    }
    on_path[q.index()] = false;
    return ok;
  }

  bool eval_uncached(StateId q, const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::kTrue: return true;
      case Formula::Kind::kProp: return eval_prop(somas_, q, f.name());
      case Formula::Kind::kCom: return eval_com(com_, q, f.com_atom());
      case Formula::Kind::kNot: return !eval(q, f.child());
      case Formula::Kind::kAnd: return eval(q, f.lhs()) && eval(q, f.rhs());
      case Formula::Kind::kNext: {
        Coalition c = somas_.coalition(f.coalition());
        for (StateId s : successors(c, q)) {
          if (!eval(s, f.child())) return false;
        }
        return true;
      }
      case Formula::Kind::kGlobally: {
        std::vector<bool> on_path(somas_.state_count());
        return always(somas_.coalition(f.coalition()), q, f.child(), on_path);
      }
      case Formula::Kind::kUntil: {
        std::vector<bool> on_path(somas_.state_count());
        return until(somas_.coalition(f.coalition()), q, f.lhs(), f.rhs(), on_path);
      }
    }
    return false;
  }

  const Somas& somas_;
  const ComHook& com_;
  std::vector<std::vector<const Transition*>> by_source_;
  std::map<std::pair<std::string, std::uint32_t>, bool> memo_;
};

std::vector<std::vector<const Transition*>> transitions_by_source(const Somas& somas) {
  std::vector<std::vector<const Transition*>> out(somas.state_count());
  for (const Transition& t : somas.cgs().transitions) out[t.from.index()].push_back(&t);
  return out;
}

}  // namespace

bool brute_force_check(const Somas& somas, StateId q, const Formula& f, const ComHook& com) {
  if (somas.state_count() > kBruteForceMaxStates) {
    throw SizeError("brute-force checking is limited to " + std::to_string(kBruteForceMaxStates) + " states");
  }
  if (q.index() >= somas.state_count()) throw InputError("state id out of range");
  return BruteForce(somas, com).eval(q, f);
}

std::optional<std::size_t> ExtendedStructureF::find(std::optional<StateId> prev, StateId curr) const {
  auto it = index_.find({prev ? prev->value + 1 : 0, curr.value});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ExtendedStructureF::labels(const Somas& somas, std::size_t index) const {
  std::vector<std::string> out;
  for (PropId p : base_labels.at(index)) out.push_back(somas.prop_name(p));
  for (AgentId a : followed.at(index).members()) out.push_back("followed_" + somas.agent_name(a));
  std::sort(out.begin(), out.end());
  return out;
}

ExtendedStructureF build_sf(const Somas& somas) {
  ExtendedStructureF sf;
  const std::size_t n = somas.state_count();
  auto by_source = transitions_by_source(somas);

  auto add = [&](std::optional<StateId> prev, StateId curr, Coalition followed) {
    sf.index_.emplace(std::make_pair(prev ? prev->value + 1 : 0, curr.value), sf.states.size());
    sf.states.push_back({prev, curr});
    sf.base_labels.push_back(somas.cgs().labeling[curr.index()]);
    sf.followed.push_back(followed);
  };
  for (std::size_t q = 0; q < n; ++q) add(std::nullopt, StateId(q), Coalition{});
  for (std::size_t q = 0; q < n; ++q) {
    std::map<std::uint32_t, Coalition> followed;
    for (const Transition* t : by_source[q]) {
      Coalition& mask = followed[t->to.value];
      for (std::size_t a = 0; a < somas.agent_count(); ++a) {
        AgentId agent(a);
        if (somas.has_prescription(agent, StateId(q)) && t->moves[a] == somas.prescribed(agent, StateId(q))) {
          mask.insert(agent);
        }
      }
    }
    for (const auto& [to, mask] : followed) add(StateId(q), StateId(to), mask);
  }
  sf.successors.resize(sf.states.size());
  for (std::size_t i = 0; i < sf.states.size(); ++i) {
    StateId q = sf.states[i].curr;
    for (const auto& e : somas.edges(q)) sf.successors[i].push_back(*sf.find(q, e.to));
  }
  return sf;
}

bool path_follows(const Somas& somas, Coalition coalition, const std::vector<StateId>& path) {
  if (path.empty()) throw InputError("empty path");
  auto by_source = transitions_by_source(somas);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    StateId q = path[i];
    bool realized = false;
    bool compliant = false;
    for (const Transition* t : by_source.at(q.index())) {
      if (t->to != path[i + 1]) continue;
      realized = true;
      bool ok = true;
      for (AgentId a : coalition.members()) ok = ok && t->moves[a.index()] == somas.prescribed(a, q);
      if (ok) {
        compliant = true;
        break;
      }
    }
    if (!realized) {
      throw InputError("no transition from '" + somas.state_name(q) + "' to '" + somas.state_name(path[i + 1]) + "'");
    }
    if (!compliant) return false;
  }
  return true;
}

std::vector<std::string> ExtendedStructureE::labels(const Somas& somas, StateId q) const {
  std::vector<std::string> out;
  for (PropId p : somas.cgs().labeling.at(q.index())) out.push_back(somas.prop_name(p));
  for (AgentId a : in_a.at(q.index()).members()) out.push_back("InA_" + somas.agent_name(a));
  std::sort(out.begin(), out.end());
  return out;
}

ExtendedStructureE build_se(const Somas& somas, Coalition coalition) {
  ExtendedStructureE se{coalition, std::vector<Coalition>(somas.state_count())};
  for (std::size_t q = 0; q < somas.state_count(); ++q) {
    for (AgentId a : coalition.members()) {
      if (somas.tau(a, StateId(q)).subset_of(coalition)) se.in_a[q].insert(a);
    }
  }
  return se;
}

bool structurally_independent(const Somas& somas, Coalition coalition, StateId q) {
  StateSet reach = out_reachable(somas, coalition, q);
  for (StateId s : reach.to_vector()) {
    for (AgentId a : coalition.members()) {
      if (!somas.tau(a, s).subset_of(coalition)) return false;
    }
  }
  return true;
}

bool semantically_independent(const Somas& somas, Coalition coalition, StateId q, const TemporalGoal& goal,
                              const ComHook& com) {
  return check(somas, q, goal.bind(somas.names(coalition)), com);
}

bool coalition_less(const Somas& somas, Coalition a, Coalition b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return somas.names(a) < somas.names(b);
}

ContributionVerdict full_contribution(Checker& checker, Coalition coalition, StateId q, const TemporalGoal& goal) {
  const Somas& somas = checker.somas();
  if (coalition.size() > kFullContributionMaxAgents) {
    throw SizeError("full contribution enumerates subsets of at most " +
                    std::to_string(kFullContributionMaxAgents) + " agents");
  }
  ContributionVerdict v{coalition, goal};
  v.semantic = checker.holds(q, goal.bind(somas.names(coalition)));
  v.structural = structurally_independent(somas, coalition, q);

  std::vector<Coalition> subsets;
  coalition.for_each_subset([&](Coalition sub) {
    if (!sub.empty() && sub != coalition) subsets.push_back(sub);
  });
  std::vector<std::pair<std::vector<std::string>, Coalition>> keyed;
  keyed.reserve(subsets.size());
  for (Coalition sub : subsets) keyed.emplace_back(somas.names(sub), sub);
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    return x.first < y.first;
  });
  v.minimal = true;
  for (const auto& [names, sub] : keyed) {
    if (!structurally_independent(somas, sub, q)) continue;
    if (checker.holds(q, goal.bind(names))) {
      v.minimal = false;
      v.witness = sub;
      break;
    }
  }
  return v;
}

ContributionVerdict full_contribution(const Somas& somas, Coalition coalition, StateId q, const TemporalGoal& goal,
                                      const ComHook& com) {
  Checker checker(somas, com);
  return full_contribution(checker, coalition, q, goal);
}

}  // namespace somas
