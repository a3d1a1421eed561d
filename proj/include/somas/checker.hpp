#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "somas/formula.hpp"
#include "somas/ids.hpp"
#include "somas/model.hpp"

namespace somas {

/// Evaluates a com(U', M') atom at a state. Supplied by community models.
using ComHook = std::function<bool(StateId, const ComAtom&)>;

/// Labeling model checker for one model. Restricted transition relations and
/// subformula labels are memoized per instance, so an instance is not safe to
/// share across threads; create one per thread instead.
class Checker {
 public:
  explicit Checker(const Somas& somas, ComHook com = {});

  /// States satisfying f. Throws InputError on unbound names or a com atom
  /// without a hook, GuardIncomplete when a coalition member has no rule.
  const StateSet& label(const Formula& f);
  bool holds(StateId q, const Formula& f) { return label(f).contains(q); }

  /// Successor lists of the transition relation restricted to `coalition`.
  const std::vector<std::vector<StateId>>& restricted(Coalition coalition);

  const Somas& somas() const { return somas_; }

 private:
  StateSet compute(const Formula& f);
  Coalition bind(const std::vector<std::string>& names) const;
  const std::vector<std::vector<StateId>>& predecessors(Coalition coalition);

  const Somas& somas_;
  ComHook com_;
  std::unordered_map<Coalition, std::vector<std::vector<StateId>>> succ_;
  std::unordered_map<Coalition, std::vector<std::vector<StateId>>> pred_;
  std::unordered_map<std::string, StateSet> labels_;
};

bool check(const Somas& somas, StateId q, const Formula& f, const ComHook& com = {});
StateSet label_states(const Somas& somas, const Formula& f, const ComHook& com = {});

/// Reference semantics by explicit enumeration of restricted computations as
/// lassos. Refuses models with more than 12 states (SizeError).
bool brute_force_check(const Somas& somas, StateId q, const Formula& f, const ComHook& com = {});

inline constexpr std::size_t kBruteForceMaxStates = 12;

/// A state of S^F: <bottom, q> when prev is empty, otherwise <prev, q>.
struct ExtendedStateF {
  std::optional<StateId> prev;
  StateId curr;

  friend bool operator==(const ExtendedStateF&, const ExtendedStateF&) = default;
};

/// S^F: states remember their predecessor; followed_a holds at <q', q> when
/// some joint move at q' reaching q has agent a playing its prescribed action.
struct ExtendedStructureF {
  std::vector<ExtendedStateF> states;
  std::vector<std::vector<PropId>> base_labels;  // pi(curr)
  std::vector<Coalition> followed;               // agents a with followed_a
  std::vector<std::vector<std::size_t>> successors;

  std::optional<std::size_t> find(std::optional<StateId> prev, StateId curr) const;
  /// Base propositions plus "followed_<agent>" names, sorted.
  std::vector<std::string> labels(const Somas& somas, std::size_t index) const;

 private:
  friend ExtendedStructureF build_sf(const Somas& somas);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> index_;  // prev+1 (0 = bottom), curr
};

ExtendedStructureF build_sf(const Somas& somas);

/// Whether every step of `path` is realized by some joint move on which all
/// agents of `coalition` play their prescribed actions. Throws InputError if
/// the path is empty or uses a step that no joint move realizes.
bool path_follows(const Somas& somas, Coalition coalition, const std::vector<StateId>& path);

/// S^E for a coalition A: InA_a holds at q when tau_a(q) is inside A.
struct ExtendedStructureE {
  Coalition coalition;
  std::vector<Coalition> in_a;  // per state, the a in A with InA_a

  bool holds(StateId q, AgentId a) const { return in_a.at(q.index()).contains(a); }
  /// Base propositions plus "InA_<agent>" names, sorted.
  std::vector<std::string> labels(const Somas& somas, StateId q) const;
};

ExtendedStructureE build_se(const Somas& somas, Coalition coalition);

bool structurally_independent(const Somas& somas, Coalition coalition, StateId q);

bool semantically_independent(const Somas& somas, Coalition coalition, StateId q, const TemporalGoal& goal,
                              const ComHook& com = {});

struct ContributionVerdict {
  Coalition coalition;
  TemporalGoal goal;
  bool semantic = false;
  bool structural = false;
  bool minimal = false;
  std::optional<Coalition> witness;  // proper subset defeating minimality

  bool full() const { return semantic && structural && minimal; }
};

inline constexpr std::size_t kFullContributionMaxAgents = 20;

/// Full contribution of a coalition to a goal. Minimality ranges over nonempty proper subsets;
/// only structurally independent subsets are checked semantically. The
/// witness is the first defeating subset by (cardinality, sorted names).
ContributionVerdict full_contribution(const Somas& somas, Coalition coalition, StateId q,
                                      const TemporalGoal& goal, const ComHook& com = {});
ContributionVerdict full_contribution(Checker& checker, Coalition coalition, StateId q, const TemporalGoal& goal);

/// Orders coalitions by cardinality, then by their sorted member names.
bool coalition_less(const Somas& somas, Coalition a, Coalition b);

}  // namespace somas
