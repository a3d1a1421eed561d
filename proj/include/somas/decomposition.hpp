#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "somas/checker.hpp"
#include "somas/formula.hpp"
#include "somas/ids.hpp"
#include "somas/model.hpp"

namespace somas {

/// Directed graph over agents (or components). An edge a -> b means b gets
/// input from a. Node ids are indices into `names`.
class DependenceGraph {
 public:
  DependenceGraph() = default;
  explicit DependenceGraph(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(AgentId a) const { return names_.at(a.index()); }

  void add_edge(AgentId from, AgentId to);
  bool has_edge(AgentId from, AgentId to) const { return in_.at(to.index()).contains(from); }
  /// Nodes with an edge into b (b itself included when it has a self-edge).
  Coalition parents(AgentId b) const { return in_.at(b.index()); }
  Coalition nodes() const { return Coalition::all(size()); }

  /// Edges sorted by (from name, to name).
  std::vector<std::pair<AgentId, AgentId>> edges() const;
  std::size_t edge_count() const;

  /// True when no node of `coalition` has a parent outside it.
  bool closed(Coalition coalition) const;

  friend bool operator==(const DependenceGraph&, const DependenceGraph&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Coalition> in_;
};

/// G(q, Gamma_A): nodes are all agents; a -> b when a is in tau_b(s) for some
/// s in out_reachable(A, q).
DependenceGraph dependence_graph(const Somas& somas, Coalition coalition, StateId q);

/// The dependence graph w.r.t. lambda*(q).
DependenceGraph star_dependence_graph(const Somas& somas, StateId q);

struct Condensation {
  DependenceGraph dag;                // one node per component, no self-edges
  std::vector<std::size_t> membership;  // agent index -> component index
  std::vector<Coalition> components;   // component index -> agents
};

/// Strongly connected components, numbered by their smallest member.
Condensation condense(const DependenceGraph& g);

struct Decomposition {
  std::vector<Coalition> layers;  // L_0 ... L_h
  std::vector<std::size_t> rho;   // agent index -> layer

  std::size_t height() const { return layers.empty() ? 0 : layers.size() - 1; }
};

/// Layer of a component: 0 without external parents, else 1 + max parent layer.
Decomposition layers(const DependenceGraph& g);

inline constexpr std::size_t kDefaultCandidateCap = 1000000;

/// All nonempty predecessor-closed node sets, ordered by highest layer, then
/// cardinality, then sorted names (so subsets precede supersets). Throws
/// SizeError once more than `cap` sets would be produced.
std::vector<Coalition> independent_coalitions(const DependenceGraph& g, std::size_t cap = kDefaultCandidateCap);

enum class RejectReason { kNotStructural, kNotSemantic, kNotMinimal };

std::string to_string(RejectReason reason);

struct ContributionEntry {
  Coalition coalition;
  std::size_t goal;  // index into the goal list
};

struct Rejection {
  Coalition coalition;
  RejectReason reason;
  std::optional<std::size_t> goal;  // set for not-semantic and not-minimal
};

/// F(q) together with the reasons candidates were dropped.
struct ContributionSet {
  std::vector<TemporalGoal> goals;
  std::vector<ContributionEntry> entries;
  std::vector<Rejection> rejections;
};

struct FconOptions {
  std::size_t candidate_cap = kDefaultCandidateCap;
  /// Extra coalitions to judge and report even when they are not candidates.
  std::vector<Coalition> probes;
};

/// Candidates are the independent coalitions of the star dependence graph.
/// Each is checked for structural independence against G(q, Gamma_A), then
/// per goal semantically, then for minimality against earlier structurally
/// independent candidates.
ContributionSet fcon_somas(const Somas& somas, StateId q, const std::vector<TemporalGoal>& goals,
                           const FconOptions& options = {}, const ComHook& com = {});

/// DOT text; node ids and edges in lexicographic order.
std::string export_dot(const DependenceGraph& g);
/// As above, with one rank=same cluster per layer.
std::string export_dot(const DependenceGraph& g, const Decomposition& d);

}  // namespace somas
