#pragma once

#include <cstddef>
#include <random>

#include "somas/formula.hpp"
#include "somas/model.hpp"

namespace somas {

struct RandomModelOptions {
  std::size_t max_states = 6;
  std::size_t max_agents = 3;
  std::size_t max_actions = 2;  // per agent per state
  std::size_t props = 2;        // named p0, p1, ...
};

/// A model that passes validate(): total transitions, guards that only read
/// tau and match payload kinds, and a trailing `true` row in every table.
Somas random_model(std::mt19937_64& rng, const RandomModelOptions& options = {});

/// Random state formula over the model's propositions and agents, with at
/// most `depth` nested operators.
Formula random_formula(std::mt19937_64& rng, const Somas& somas, int depth);

/// Random X, G, F or U goal whose operands have depth at most `depth`.
TemporalGoal random_goal(std::mt19937_64& rng, const Somas& somas, int depth);

}  // namespace somas
