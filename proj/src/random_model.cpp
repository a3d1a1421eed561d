#include "somas/random_model.hpp"

#include <algorithm>

#include "somas/builder.hpp"

namespace somas {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

Guard random_guard(std::mt19937_64& rng, const std::vector<AgentId>& senders, const std::vector<bool>& integer,
                   std::size_t props, int depth) {
  if (depth > 0 && coin(rng, 0.3)) {
    switch (pick(rng, 0, 2)) {
      case 0: return !random_guard(rng, senders, integer, props, depth - 1);
      case 1:
        return random_guard(rng, senders, integer, props, depth - 1) &&
               random_guard(rng, senders, integer, props, depth - 1);
      default:
        return random_guard(rng, senders, integer, props, depth - 1) ||
               random_guard(rng, senders, integer, props, depth - 1);
    }
  }
  AgentId i = senders[pick(rng, 0, senders.size() - 1)];
  auto op = static_cast<CmpOp>(pick(rng, 0, 4));
  if (!integer[i.index()]) return Guard::has(i, PropId(pick(rng, 0, props - 1)));
  std::vector<AgentId> ints;
  for (AgentId j : senders) {
    if (integer[j.index()]) ints.push_back(j);
  }
  if (coin(rng)) return Guard::compare(i, op, ints[pick(rng, 0, ints.size() - 1)]);
  return Guard::compare(i, op, static_cast<std::int64_t>(pick(rng, 0, 2)));
}

}  // namespace

Somas random_model(std::mt19937_64& rng, const RandomModelOptions& options) {
  ModelBuilder b;
  const std::size_t n = pick(rng, 1, options.max_states);
  const std::size_t k = pick(rng, 1, options.max_agents);
  std::vector<AgentId> agents;
  std::vector<StateId> states;
  std::vector<PropId> props;
  std::vector<ActionId> actions;
  for (std::size_t i = 0; i < k; ++i) agents.push_back(b.agent("a" + std::to_string(i)));
  for (std::size_t i = 0; i < n; ++i) states.push_back(b.state("s" + std::to_string(i)));
  for (std::size_t i = 0; i < options.props; ++i) props.push_back(b.prop("p" + std::to_string(i)));
  for (std::size_t i = 0; i < options.max_actions; ++i) actions.push_back(b.action("x" + std::to_string(i)));

  std::vector<std::vector<bool>> labeled(n, std::vector<bool>(props.size()));
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < props.size(); ++p) {
      if (coin(rng)) {
        labeled[q][p] = true;
        b.label(states[q], props[p]);
      }
    }
  }

  // Payload kind is fixed per agent so guards can be typed once per sender.
  std::vector<bool> integer(k);
  for (std::size_t a = 0; a < k; ++a) integer[a] = options.props == 0 || coin(rng, 0.6);

  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::vector<ActionId>> avail(k);
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<ActionId> pool = actions;
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(pick(rng, 1, pool.size()));
      std::sort(pool.begin(), pool.end());
      avail[a] = pool;
      b.allow(agents[a], states[q], pool);

      if (integer[a]) {
        b.internal(agents[a], states[q], Message::integer(static_cast<std::int64_t>(pick(rng, 0, 2))));
      } else {
        Message::PropSet ps;
        for (std::size_t p = 0; p < props.size(); ++p) {
          if (labeled[q][p] && coin(rng)) ps.push_back(props[p]);
        }
        b.internal(agents[a], states[q], Message::props(ps));
      }
    }

    // Every joint move gets a uniformly random target.
    std::vector<std::size_t> digit(k, 0);
    while (true) {
      std::vector<ActionId> moves(k);
      for (std::size_t a = 0; a < k; ++a) moves[a] = avail[a][digit[a]];
      b.transition(states[q], moves, states[pick(rng, 0, n - 1)]);
      std::size_t a = 0;
      while (a < k && ++digit[a] == avail[a].size()) digit[a++] = 0;
      if (a == k) break;
    }

    for (std::size_t a = 0; a < k; ++a) {
      Coalition tau;
      for (std::size_t i = 0; i < k; ++i) {
        if (coin(rng)) tau.insert(agents[i]);
      }
      if (tau.empty()) tau.insert(agents[pick(rng, 0, k - 1)]);
      std::vector<AgentId> senders = tau.members();
      std::vector<GuardedAction> gamma;
      std::size_t rows = pick(rng, 0, 2);
      for (std::size_t r = 0; r < rows; ++r) {
        gamma.push_back({random_guard(rng, senders, integer, props.size(), 1), avail[a][pick(rng, 0, avail[a].size() - 1)]});
      }
      gamma.push_back({Guard::always(), avail[a][pick(rng, 0, avail[a].size() - 1)]});
      b.rule(agents[a], states[q], tau, std::move(gamma));
    }
  }
  return b.build();
}

namespace {

std::vector<std::string> random_coalition(std::mt19937_64& rng, const Somas& somas) {
  std::vector<std::string> out;
  for (const auto& name : somas.cgs().agents) {
    if (coin(rng)) out.push_back(name);
  }
  return out;
}

Formula random_atom(std::mt19937_64& rng, const Somas& somas) {
  const auto& props = somas.cgs().props;
  std::size_t i = pick(rng, 0, props.size());
  if (i == props.size()) return Formula::truth();
  return Formula::prop(props[i]);
}

}  // namespace

TemporalGoal random_goal(std::mt19937_64& rng, const Somas& somas, int depth) {
  switch (pick(rng, 0, 3)) {
    case 0: return TemporalGoal::next(random_formula(rng, somas, depth));
    case 1: return TemporalGoal::globally(random_formula(rng, somas, depth));
    case 2: return TemporalGoal::eventually(random_formula(rng, somas, depth));
    default: return TemporalGoal::until(random_formula(rng, somas, depth), random_formula(rng, somas, depth));
  }
}

Formula random_formula(std::mt19937_64& rng, const Somas& somas, int depth) {
  if (depth <= 0 || coin(rng, 0.25)) return random_atom(rng, somas);
  switch (pick(rng, 0, 4)) {
    case 0: return Formula::negate(random_formula(rng, somas, depth - 1));
    case 1: return Formula::conj(random_formula(rng, somas, depth - 1), random_formula(rng, somas, depth - 1));
    case 2: return Formula::disj(random_formula(rng, somas, depth - 1), random_formula(rng, somas, depth - 1));
    default: return random_goal(rng, somas, depth - 1).bind(random_coalition(rng, somas));
  }
}

}  // namespace somas
