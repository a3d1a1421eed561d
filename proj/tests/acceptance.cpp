// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "somas/builder.hpp"
#include "somas/checker.hpp"
#include "somas/decomposition.hpp"
#include "somas/scenarios.hpp"
#include "test_util.hpp"

namespace {

using namespace somas;
using Clock = std::chrono::steady_clock;

constexpr double kTwoTrainsBudgetSeconds = 1.0;
constexpr double kCommunityBudgetSeconds = 5.0;
constexpr double kFullContributionBudgetSeconds = 30.0;
constexpr std::size_t kOracleModels = testing::kCorpusSize;  // >= 500
constexpr int kOracleFormulas = 20;
constexpr int kOracleDepth = 2;
constexpr double kScalingSlopeSoftBound = 3.0;  // log-log slope of time vs states
constexpr std::size_t kContributionAgents = 12;
constexpr int kDisjointnessGoals = 10;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects the failed checks of one criterion.
class Criterion {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool passed() const { return failures_.empty(); }
  std::string detail() const {
    std::string out;
    for (std::size_t i = 0; i < failures_.size() && i < 3; ++i) out += (i ? "; " : "") + failures_[i];
    if (failures_.size() > 3) out += "; ...";
    return out;
  }

 private:
  std::vector<std::string> failures_;
};

int failed = 0;

void report(int number, const std::string& name, const Criterion& c, const std::string& info) {
  if (!c.passed()) ++failed;
  std::cout << (c.passed() ? "PASS" : "FAIL") << " criterion " << number << ": " << name;
  if (!info.empty()) std::cout << " [" << info << "]";
  if (!c.passed()) std::cout << " -- " << c.detail();
  std::cout << std::endl;
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string braces(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
  return "{" + out + "}";
}

void criterion_two_trains() {
  Criterion c;
  auto start = Clock::now();
  for (auto [u1, u2] : std::vector<std::pair<int, int>>{{3, 2}, {2, 3}, {2, 2}}) {
    Somas m = two_trains(u1, u2);
    StateId q0 = m.state("q0");
    std::string tag = "(" + std::to_string(u1) + "," + std::to_string(u2) + ") ";
    TemporalGoal passed = parse_goal("F passed");
    c.expect(check(m, q0, parse_formula("<a1,a2> F passed")), tag + "<a1,a2> F passed");
    c.expect(!check(m, q0, parse_formula("<a1> F passed")), tag + "<a1> F passed");
    c.expect(!check(m, q0, parse_formula("<a2> F passed")), tag + "<a2> F passed");
    c.expect(full_contribution(m, m.all_agents(), q0, passed).full(), tag + "{a1,a2} full");
    c.expect(!full_contribution(m, m.coalition({"a1"}), q0, passed).full(), tag + "{a1} full");
    c.expect(!full_contribution(m, m.coalition({"a2"}), q0, passed).full(), tag + "{a2} full");
  }
  double t = seconds_since(start);
  c.expect(t < kTwoTrainsBudgetSeconds, "runtime " + fixed(t) + " s");
  report(1, "two-trains judgments", c, "runtime " + fixed(t, 4) + " s < " + fixed(kTwoTrainsBudgetSeconds, 0) + " s");
}

void criterion_deadlock() {
  Criterion c;
  Somas m = two_trains_strict(2, 2);
  StateId q0 = m.state("q0");
  c.expect(check(m, q0, parse_formula("<a1,a2> F deadlock")), "<a1,a2> F deadlock");
  c.expect(!check(m, q0, parse_formula("<a1,a2> F passed")), "<a1,a2> F passed");
  // passed is reachable: not every computation avoids it.
  c.expect(check(m, q0, parse_formula("!<> G !passed")), "!<> G !passed");
  report(2, "strict-rules deadlock", c, "u1=u2=2");
}

std::vector<std::string> rendered(const Somas& m, const std::vector<Coalition>& sets) {
  std::vector<std::string> out;
  for (Coalition s : sets) out.push_back(braces(m.names(s)));
  return out;
}

void criterion_layering() {
  Criterion c;
  Somas m = task_delegation();
  DependenceGraph g = star_dependence_graph(m, m.state("q0"));
  Decomposition d = layers(g);
  std::vector<Coalition> expected_layers{m.coalition({"a", "e"}), m.coalition({"b", "d"}), m.coalition({"c"})};
  c.expect(d.layers == expected_layers, "layers");
  const std::map<std::string, std::size_t> rho{{"a", 0}, {"b", 1}, {"c", 2}, {"d", 1}, {"e", 0}};
  for (const auto& [agent, layer] : rho) c.expect(d.rho[m.agent(agent).index()] == layer, "rho(" + agent + ")");
  std::set<std::string> got;
  for (const auto& s : rendered(m, independent_coalitions(g))) got.insert(s);
  const std::set<std::string> expected{"{a}",     "{e}",     "{a,e}",     "{d,e}",
                                       "{a,b,e}", "{a,d,e}", "{a,b,d,e}", "{a,b,c,d,e}"};
  c.expect(got == expected, "independent coalitions");
  report(3, "task-delegation layering", c, std::to_string(got.size()) + " independent coalitions");
}

void criterion_fcon_task_delegation() {
  Criterion c;
  Somas m = task_delegation();
  std::vector<TemporalGoal> goals;
  for (const char* g : {"F psi_a", "F psi_de", "F psi_abe", "F psi"}) goals.push_back(parse_goal(g));
  ContributionSet set = fcon_somas(m, m.state("q0"), goals);
  std::set<std::string> got;
  for (const auto& e : set.entries) got.insert(braces(m.names(e.coalition)) + " " + render_goal(goals[e.goal]));
  const std::set<std::string> expected{"{a} F psi_a", "{d,e} F psi_de", "{a,b,e} F psi_abe", "{a,b,c,d,e} F psi"};
  c.expect(got == expected && set.entries.size() == expected.size(), "entries");
  report(4, "F(q) for task delegation", c, std::to_string(set.entries.size()) + " entries");
}

void criterion_community() {
  Criterion c;
  auto start = Clock::now();
  CommunityConfig cfg = example_community_config();
  Somas m = community_model(cfg);
  StateId q0 = m.state("q0");
  ComHook hook = make_com_hook(m, cfg);

  DependenceGraph g = star_dependence_graph(m, q0);
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& [a, b] : g.edges()) {
    if (a != b) edges.emplace(g.name(a), g.name(b));
  }
  const std::set<std::pair<std::string, std::string>> expected_edges{
      {"u1", "m2"}, {"m2", "m1"}, {"u2", "m1"}, {"m1", "m3"}, {"u4", "m3"}};
  c.expect(edges == expected_edges, "dependence edges");
  Decomposition d = layers(g);
  std::vector<Coalition> expected_layers{m.coalition({"u1", "u2", "u3", "u4"}), m.coalition({"m2"}),
                                         m.coalition({"m1"}), m.coalition({"m3"})};
  c.expect(d.layers == expected_layers, "layers");

  Lasso l = star_computation(m, q0);
  std::set<std::string> visited;
  for (StateId s : l.prefix) visited.insert(m.state_name(s));
  for (StateId s : l.cycle) visited.insert(m.state_name(s));
  for (const char* s : {"q0", "q1", "q2", "q3", "q4"}) c.expect(visited.count(s) == 1, std::string("visits ") + s);
  auto registered = [&](const char* state, std::vector<std::pair<const char*, const char*>> regs) {
    auto q = m.find_state(state);
    bool ok = q.has_value();
    for (const auto& [u, mid] : regs) {
      auto p = m.find_prop(std::string("reg(") + u + "," + mid + ")");
      ok = ok && p && m.labeled(*q, *p);
    }
    return ok;
  };
  c.expect(registered("q2", {{"u1", "m1"}, {"u2", "m1"}}), "q2 registrations");
  c.expect(registered("q4", {{"u1", "m1"}, {"u2", "m1"}, {"u3", "m3"}, {"u4", "m3"}}), "q4 registrations");

  std::vector<TemporalGoal> goals{parse_goal("F com({u1,u2},{m1})"), parse_goal("F com({u3,u4},{m3})"),
                                  parse_goal("F (com({u1,u2},{m1}) && com({u3,u4},{m3}))")};
  FconOptions options;
  Coalition probe = m.coalition({"u3", "u4", "m3"});
  options.probes.push_back(probe);
  ContributionSet set = fcon_somas(m, q0, goals, options, hook);
  auto has_entry = [&](Coalition a, std::size_t goal) {
    for (const auto& e : set.entries) {
      if (e.coalition == a && e.goal == goal) return true;
    }
    return false;
  };
  c.expect(has_entry(m.coalition({"u1", "u2", "m1", "m2"}), 0), "({u1,u2,m1,m2}, F com u1,u2)");
  c.expect(has_entry(m.all_agents(), 2), "(Sigma, conjunction)");
  bool rejected = false;
  for (const auto& r : set.rejections) {
    rejected = rejected || (r.coalition == probe && r.reason == RejectReason::kNotStructural);
  }
  c.expect(rejected, "{u3,u4,m3} not-structural");
  double t = seconds_since(start);
  c.expect(t < kCommunityBudgetSeconds, "runtime " + fixed(t) + " s");
  report(5, "community analysis", c, "runtime " + fixed(t, 4) + " s < " + fixed(kCommunityBudgetSeconds, 0) + " s");
}

void criterion_oracle(const std::vector<Somas>& corpus) {
  Criterion c;
  std::mt19937_64 rng(0x0ac1e);
  testing::PropertyResult r;
  for (std::size_t i = 0; i < corpus.size(); ++i) testing::check_oracle(i, corpus[i], rng, r, kOracleFormulas);
  c.expect(corpus.size() >= 500, "corpus size");
  c.expect(r.passed(), std::to_string(r.violations) + " disagreements, first " + r.first);
  report(6, "oracle equivalence", c,
         std::to_string(corpus.size()) + " models x " + std::to_string(kOracleFormulas) + " formulas (depth <= " +
             std::to_string(kOracleDepth) + "), " + std::to_string(r.checks) + " state checks, " +
             std::to_string(r.violations) + " disagreements");
}

void criterion_properties(const std::vector<Somas>& corpus) {
  Criterion c;
  using Run = std::function<void(std::size_t, const Somas&, std::mt19937_64&, testing::PropertyResult&)>;
  const std::vector<std::pair<std::string, Run>> properties = {
      {"monotonicity", [](auto i, auto& m, auto& rng, auto& r) { testing::check_monotonicity(i, m, rng, r); }},
      {"intersection", [](auto i, auto& m, auto&, auto& r) { testing::check_intersection(i, m, r); }},
      {"disjointness", [](auto i, auto& m, auto& rng, auto& r) { testing::check_disjointness(i, m, rng, r, kDisjointnessGoals); }},
      {"layer ordering", [](auto i, auto& m, auto&, auto& r) { testing::check_layer_ordering(i, m, r); }},
      {"pruning soundness", [](auto i, auto& m, auto&, auto& r) { testing::check_pruning(i, m, r); }},
      {"S^F path correspondence",
       [](auto i, auto& m, auto& rng, auto& r) { testing::check_sf_correspondence(i, m, rng, r); }},
  };
  std::vector<std::string> lines;
  std::uint64_t seed = 70;
  for (const auto& [name, run] : properties) {
    std::mt19937_64 rng(seed++);
    testing::PropertyResult r;
    for (std::size_t i = 0; i < corpus.size(); ++i) run(i, corpus[i], rng, r);
    c.expect(r.passed(), name + ": " + std::to_string(r.violations) + " violations, first " + r.first);
    lines.push_back("    " + name + ": " + std::to_string(r.checks) + " checks, " + std::to_string(r.violations) +
                    " violations" + (r.passed() ? "" : " (first: " + r.first + ")"));
  }
  report(7, "property suites", c, std::to_string(corpus.size()) + " models");
  for (const auto& l : lines) std::cout << l << "\n";
  // Outside the corpus, full contributors for one goal can overlap.
  Somas m = testing::overlapping_contributors();
  TemporalGoal goal = parse_goal("F p");
  bool overlap = full_contribution(m, m.coalition({"a1", "a2"}), m.state("q0"), goal).full() &&
                 full_contribution(m, m.coalition({"a1", "a3"}), m.state("q0"), goal).full();
  std::cout << "    note: hand-built model with {a1,a2} and {a1,a3} both full for F p: "
            << (overlap ? "overlap present" : "no overlap") << "\n";
}

// n states, two agents that listen only to themselves and always play x;
// four joint moves per state with seeded random targets.
Somas scaling_model(std::size_t n, std::mt19937_64& rng) {
  ModelBuilder b;
  AgentId a0 = b.agent("a0"), a1 = b.agent("a1");
  ActionId x = b.action("x"), y = b.action("y");
  PropId p0 = b.prop("p0"), p1 = b.prop("p1");
  std::vector<StateId> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back(b.state("s" + std::to_string(i)));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (StateId s : states) {
    if (rng() % 4 != 0) b.label(s, p0);
    if (rng() % 3 != 0) b.label(s, p1);
    for (AgentId a : {a0, a1}) {
      b.allow(a, s, {x, y});
      b.internal(a, s, Message::integer(0));
      b.rule(a, s, Coalition::single(a), {{Guard::always(), x}});
    }
    for (ActionId u : {x, y}) {
      for (ActionId v : {x, y}) b.transition(s, {u, v}, states[pick(rng)]);
    }
  }
  return b.build();
}

// Agent k finishes at state s_k once agent k-1 is done; s_n is labeled done.
Somas relay_model(std::size_t n) {
  ModelBuilder b;
  std::vector<AgentId> agents;
  for (std::size_t k = 0; k < n; ++k) agents.push_back(b.agent("r" + std::to_string(k)));
  ActionId go = b.action("go"), idle = b.action("idle");
  PropId done = b.prop("done");
  std::vector<StateId> states;
  for (std::size_t j = 0; j <= n; ++j) states.push_back(b.state("s" + std::to_string(j)));
  b.label(states[n], done);
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      b.allow(agents[k], states[j], {go, idle});
      b.internal(agents[k], states[j], Message::integer(k < j ? 1 : 0));
      if (k == j && k > 0) {
        b.rule(agents[k], states[j], Coalition::of({agents[k - 1], agents[k]}),
               {{b.guard("msg(r" + std::to_string(k - 1) + ") == 1"), go}, {Guard::always(), idle}});
      } else {
        b.rule(agents[k], states[j], Coalition::single(agents[k]), {{Guard::always(), k == j ? go : idle}});
      }
    }
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      std::vector<ActionId> moves;
      for (std::size_t k = 0; k < n; ++k) moves.push_back((bits >> k) & 1U ? go : idle);
      bool advance = j < n && moves[j] == go;
      b.transition(states[j], moves, states[advance ? j + 1 : j]);
    }
  }
  return b.build();
}

void criterion_scaling() {
  Criterion c;
  std::mt19937_64 rng(8);
  Formula f = parse_formula("<a0> (p0 U <a0,a1> G p1) || <> F !p0 && <a1> X p1");
  std::vector<double> xs, ys;
  std::string timings;
  for (std::size_t n : {100, 316, 1000, 3162, 10000}) {
    Somas m = scaling_model(n, rng);
    std::size_t reps = 0;
    auto start = Clock::now();
    do {
      Checker checker(m);
      checker.label(f);
      ++reps;
    } while (seconds_since(start) < 0.05);
    double per = seconds_since(start) / static_cast<double>(reps);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(per));
    timings += (timings.empty() ? "" : ", ") + std::to_string(n) + ":" + fixed(per * 1e3, 3) + "ms";
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / xs.size(), my += ys[i] / ys.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) num += (xs[i] - mx) * (ys[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
  double slope = num / den;
  std::string soft = slope <= kScalingSlopeSoftBound ? "within" : "EXCEEDS (soft, logged only)";

  Somas relay = relay_model(kContributionAgents);
  auto start = Clock::now();
  ContributionVerdict v = full_contribution(relay, relay.all_agents(), relay.state("s0"), parse_goal("F done"));
  double t = seconds_since(start);
  c.expect(v.full(), "12-agent relay should have full contribution");
  c.expect(t < kFullContributionBudgetSeconds, "full contribution took " + fixed(t) + " s");
  report(8, "scaling sanity", c,
         "check times " + timings + "; log-log slope " + fixed(slope, 2) + " " + soft + " soft bound " +
             fixed(kScalingSlopeSoftBound, 1) + "; |A|=12 full contribution " + fixed(t) + " s < " +
             fixed(kFullContributionBudgetSeconds, 0) + " s");
}

}  // namespace

int main() {
  criterion_two_trains();
  criterion_deadlock();
  criterion_layering();
  criterion_fcon_task_delegation();
  criterion_community();
  std::vector<Somas> corpus = testing::random_corpus(testing::kCorpusSeed, kOracleModels);
  criterion_oracle(corpus);
  criterion_properties(corpus);
  criterion_scaling();
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
