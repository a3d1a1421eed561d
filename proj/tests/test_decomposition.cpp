#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "somas/decomposition.hpp"
#include "somas/error.hpp"
#include "somas/scenarios.hpp"
#include "test_util.hpp"

namespace somas {
namespace {

using testing::names_to;

using EdgeNames = std::vector<std::pair<std::string, std::string>>;

EdgeNames edge_names(const DependenceGraph& g) {
  EdgeNames out;
  for (const auto& [a, b] : g.edges()) out.emplace_back(g.name(a), g.name(b));
  return out;
}

std::vector<std::string> layer_names(const DependenceGraph& g, Coalition layer) {
  std::vector<std::string> out;
  for (AgentId a : layer.members()) out.push_back(g.name(a));
  std::sort(out.begin(), out.end());
  return out;
}

DependenceGraph graph(std::vector<std::string> names, const EdgeNames& edges) {
  DependenceGraph g(names);
  auto id = [&](const std::string& n) {
    return AgentId(static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin()));
  };
  for (const auto& [a, b] : edges) g.add_edge(id(a), id(b));
  return g;
}

std::vector<std::string> render(const DependenceGraph& g, const std::vector<Coalition>& sets) {
  std::vector<std::string> out;
  for (Coalition c : sets) {
    std::string s;
    for (const auto& n : layer_names(g, c)) s += (s.empty() ? "" : ",") + n;
    out.push_back("{" + s + "}");
  }
  return out;
}

TEST(DependenceGraph, TaskDelegationStarGraph) {
  Somas m = task_delegation();
  DependenceGraph g = star_dependence_graph(m, m.state("q0"));
  EXPECT_EQ(edge_names(g), (EdgeNames{{"a", "a"}, {"a", "b"}, {"b", "b"}, {"b", "c"}, {"c", "c"},
                                      {"d", "c"}, {"d", "d"}, {"e", "b"}, {"e", "d"}, {"e", "e"}}));
  EXPECT_EQ(g.edge_count(), 10u);
  EXPECT_EQ(g.parents(m.agent("b")), names_to(m, {"a", "b", "e"}));
  EXPECT_TRUE(g.closed(names_to(m, {"a", "b", "e"})));
  EXPECT_FALSE(g.closed(names_to(m, {"a", "b"})));
  EXPECT_EQ(dependence_graph(m, m.all_agents(), m.state("q0")), g);
}

TEST(DependenceGraph, TwoTrainsDependsOnRestriction) {
  Somas m = two_trains(3, 2);
  DependenceGraph star = star_dependence_graph(m, m.state("q0"));
  EXPECT_EQ(edge_names(star), (EdgeNames{{"a1", "a1"}, {"a1", "a2"}, {"a2", "a1"}, {"a2", "a2"}}));
  // From q3 nobody hears anybody else.
  DependenceGraph late = dependence_graph(m, Coalition{}, m.state("q3"));
  EXPECT_EQ(edge_names(late), (EdgeNames{{"a1", "a1"}, {"a2", "a2"}}));
}

TEST(Condense, CycleBecomesOneComponent) {
  DependenceGraph g = graph({"c", "a", "b"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "c"}});
  Condensation c = condense(g);
  ASSERT_EQ(c.components.size(), 2u);
  EXPECT_EQ(c.membership[1], c.membership[2]);
  EXPECT_NE(c.membership[0], c.membership[1]);
  EXPECT_EQ(c.dag.edge_count(), 1u);
  EXPECT_TRUE(c.dag.has_edge(AgentId(c.membership[1]), AgentId(c.membership[0])));
  EXPECT_EQ(c.dag.name(AgentId(c.membership[1])), "{a,b}");
}

TEST(Layers, TaskDelegation) {
  Somas m = task_delegation();
  DependenceGraph g = star_dependence_graph(m, m.state("q0"));
  Decomposition d = layers(g);
  ASSERT_EQ(d.height(), 2u);
  EXPECT_EQ(layer_names(g, d.layers[0]), (std::vector<std::string>{"a", "e"}));
  EXPECT_EQ(layer_names(g, d.layers[1]), (std::vector<std::string>{"b", "d"}));
  EXPECT_EQ(layer_names(g, d.layers[2]), (std::vector<std::string>{"c"}));
  EXPECT_EQ(d.rho[m.agent("c").index()], 2u);
}

TEST(Layers, CycleSharesALayer) {
  DependenceGraph g = graph({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}, {"z", "y"}});
  Decomposition d = layers(g);
  EXPECT_EQ(d.rho, (std::vector<std::size_t>{0, 1, 1}));
  EXPECT_EQ(layers(DependenceGraph{}).layers.size(), 0u);
}

TEST(Layers, EveryEdgeGoesUpOrStays) {
  DependenceGraph g = graph({"a", "b", "c", "d", "e", "f"},
                            {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"c", "d"}, {"e", "d"}, {"d", "f"}, {"f", "f"}});
  Decomposition d = layers(g);
  Condensation c = condense(g);
  for (const auto& [a, b] : g.edges()) {
    if (c.membership[a.index()] == c.membership[b.index()]) {
      EXPECT_EQ(d.rho[a.index()], d.rho[b.index()]);
    } else {
      EXPECT_LT(d.rho[a.index()], d.rho[b.index()]);
    }
  }
}

std::set<std::uint64_t> closed_sets_oracle(const DependenceGraph& g) {
  std::set<std::uint64_t> out;
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << g.size()); ++bits) {
    Coalition c(bits);
    bool closed = true;
    for (AgentId b : c.members()) closed = closed && g.parents(b).subset_of(c);
    if (closed) out.insert(bits);
  }
  return out;
}

TEST(IndependentCoalitions, TaskDelegationHasEight) {
  Somas m = task_delegation();
  DependenceGraph g = star_dependence_graph(m, m.state("q0"));
  auto sets = independent_coalitions(g);
  EXPECT_EQ(render(g, sets), (std::vector<std::string>{"{a}", "{e}", "{a,e}", "{d,e}", "{a,b,e}", "{a,d,e}",
                                                       "{a,b,d,e}", "{a,b,c,d,e}"}));
  std::set<std::uint64_t> got;
  for (Coalition c : sets) got.insert(c.bits());
  EXPECT_EQ(got, closed_sets_oracle(g));
  EXPECT_THROW(independent_coalitions(g, 7), SizeError);
  EXPECT_EQ(independent_coalitions(g, 8).size(), 8u);
}

TEST(IndependentCoalitions, ChainAndCycle) {
  DependenceGraph chain = graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(render(chain, independent_coalitions(chain)), (std::vector<std::string>{"{a}", "{a,b}", "{a,b,c}"}));
  DependenceGraph cycle = graph({"a", "b"}, {{"a", "b"}, {"b", "a"}});
  EXPECT_EQ(render(cycle, independent_coalitions(cycle)), (std::vector<std::string>{"{a,b}"}));
  DependenceGraph loose = graph({"a", "b", "c"}, {});
  EXPECT_EQ(independent_coalitions(loose).size(), 7u);
}

TEST(IndependentCoalitions, SubsetsComeFirst) {
  DependenceGraph g = graph({"a", "b", "c", "d", "e", "f", "g"},
                            {{"a", "c"}, {"b", "c"}, {"c", "d"}, {"e", "f"}, {"f", "e"}, {"f", "g"}, {"d", "g"}});
  auto sets = independent_coalitions(g);
  std::set<std::uint64_t> got;
  for (Coalition c : sets) got.insert(c.bits());
  EXPECT_EQ(got, closed_sets_oracle(g));
  EXPECT_EQ(got.size(), sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(sets[i].proper_subset_of(sets[j]));
  }
}

std::vector<std::string> entries(const Somas& m, const ContributionSet& set) {
  std::vector<std::string> out;
  for (const auto& e : set.entries) {
    std::string s;
    for (const auto& n : m.names(e.coalition)) s += (s.empty() ? "" : ",") + n;
    out.push_back("{" + s + "} " + render_goal(set.goals[e.goal]));
  }
  return out;
}

TEST(Fcon, TaskDelegation) {
  Somas m = task_delegation();
  std::vector<TemporalGoal> goals;
  for (const char* g : {"F psi_a", "F psi_de", "F psi_abe", "F psi"}) goals.push_back(parse_goal(g));
  ContributionSet set = fcon_somas(m, m.state("q0"), goals);
  EXPECT_EQ(entries(m, set), (std::vector<std::string>{"{a} F psi_a", "{d,e} F psi_de", "{a,b,e} F psi_abe",
                                                       "{a,b,c,d,e} F psi"}));
  for (const auto& e : set.entries) {
    EXPECT_TRUE(full_contribution(m, e.coalition, m.state("q0"), set.goals[e.goal]).full());
  }
  for (const auto& r : set.rejections) {
    if (r.reason == RejectReason::kNotStructural) {
      EXPECT_FALSE(r.goal.has_value());
    } else {
      EXPECT_TRUE(r.goal.has_value());
    }
  }
  FconOptions tight;
  tight.candidate_cap = 3;
  EXPECT_THROW(fcon_somas(m, m.state("q0"), goals, tight), SizeError);
}

TEST(Fcon, TwoTrainsAndProbe) {
  Somas m = two_trains(3, 2);
  FconOptions options;
  options.probes.push_back(names_to(m, {"a1"}));
  ContributionSet set = fcon_somas(m, m.state("q0"), {parse_goal("F passed")}, options);
  EXPECT_EQ(entries(m, set), std::vector<std::string>{"{a1,a2} F passed"});
  ASSERT_EQ(set.rejections.size(), 1u);
  EXPECT_EQ(set.rejections[0].coalition, names_to(m, {"a1"}));
  EXPECT_EQ(set.rejections[0].reason, RejectReason::kNotStructural);
  EXPECT_EQ(to_string(RejectReason::kNotMinimal), "not-minimal");
}

TEST(Fcon, IndependentPairs) {
  Somas m = testing::two_train_pairs();
  ContributionSet set = fcon_somas(m, m.state("q00"), {parse_goal("F passed_a"), parse_goal("F passed_b")});
  EXPECT_EQ(entries(m, set), (std::vector<std::string>{"{a1,a2} F passed_a", "{b1,b2} F passed_b"}));
  bool whole_not_minimal = false;
  for (const auto& r : set.rejections) {
    whole_not_minimal = whole_not_minimal || (r.coalition == m.all_agents() && r.reason == RejectReason::kNotMinimal);
  }
  EXPECT_TRUE(whole_not_minimal);
}

TEST(ExportDot, PlainAndLayered) {
  DependenceGraph g = graph({"b", "a", "reg(x)"}, {{"a", "b"}, {"b", "b"}, {"a", "reg(x)"}});
  EXPECT_EQ(export_dot(g),
            "digraph dependence {\n"
            "  a;\n"
            "  b;\n"
            "  \"reg(x)\";\n"
            "  a -> b;\n"
            "  a -> \"reg(x)\";\n"
            "  b -> b;\n"
            "}\n");
  EXPECT_EQ(export_dot(g, layers(g)),
            "digraph dependence {\n"
            "  subgraph cluster_L0 {\n"
            "    label=\"L0\";\n"
            "    rank=same;\n"
            "    a;\n"
            "  }\n"
            "  subgraph cluster_L1 {\n"
            "    label=\"L1\";\n"
            "    rank=same;\n"
            "    b;\n"
            "    \"reg(x)\";\n"
            "  }\n"
            "  a -> b;\n"
            "  a -> \"reg(x)\";\n"
            "  b -> b;\n"
            "}\n");
}

}  // namespace
}  // namespace somas
