#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "somas/checker.hpp"
#include "somas/formula.hpp"
#include "somas/model.hpp"

namespace somas {

/// Two trains at a tunnel entrance. u1, u2 are the trains' urgencies; at q0
/// the more urgent train goes (ties favour a1). q3 = passed, q4 = crash.
Somas two_trains(std::int64_t u1, std::int64_t u2);

/// Same, but a1 goes only when strictly more urgent; on a tie both wait at
/// q0, which is labeled `deadlock`.
Somas two_trains_strict(std::int64_t u1, std::int64_t u2);

/// Five agents a..e each finishing one part of a task; b waits for a and e,
/// d for e, c for b and d. States are the 32 sets of finished parts.
Somas task_delegation();

/// One query: `requester` asks about `target`. When the two sit at different
/// middle agents, the target's middle releases it and the requester's middle
/// registers it. A direct query makes the releasing middle hear the requester
/// itself; otherwise the release is triggered by its own registration list.
struct QueryStep {
  std::string requester;
  std::string target;
  bool direct = false;
};

struct CommunityConfig {
  std::vector<std::string> users;
  std::vector<std::string> middles;
  std::map<std::string, std::vector<std::string>> interests;
  std::map<std::string, std::string> initial;  // user -> middle
  std::vector<QueryStep> schedule;
};

/// The four-user, three-middle instance of the community example.
CommunityConfig example_community_config();

/// Throws InputError describing the first problem found.
void validate_config(const CommunityConfig& cfg);

/// States are q<k> with k the number of registration changes so far, with a
/// prime per query answered without a change. Propositions are reg(u,m).
Somas community_model(const CommunityConfig& cfg);

/// com(U', M') at q: every u in U' and every u' it is interested in share a
/// middle agent from M'. Throws InputError on names outside the config.
bool eval_com(const Somas& somas, const CommunityConfig& cfg, StateId q, const ComAtom& atom);

/// Hook for the checker; holds references to both arguments.
ComHook make_com_hook(const Somas& somas, const CommunityConfig& cfg);

}  // namespace somas
