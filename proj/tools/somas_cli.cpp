// somas: command-line front end for loading models, checking formulas,
// computing full contributions and exporting dependence graphs.
//
// Exit codes: 0 holds / success, 1 does not hold / invalid model, 2 usage or
// input error.

#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "somas/checker.hpp"
#include "somas/decomposition.hpp"
#include "somas/error.hpp"
#include "somas/formula.hpp"
#include "somas/model_json.hpp"
#include "somas/random_model.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;

struct Common {
  std::string model;
  std::string state;
  bool json = false;
};

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// Prints violations and returns false when the model is invalid.
bool ensure_valid(const somas::Somas& m, bool quiet = false) {
  auto report = somas::validate(m);
  if (report.empty()) return true;
  if (!quiet) {
    for (const auto& v : report) std::cerr << "invalid model: " << somas::describe(m, v) << "\n";
  }
  return false;
}

std::size_t candidate_cap() {
  const char* env = std::getenv("SOMAS_CANDIDATE_CAP");
  if (!env || !*env) return somas::kDefaultCandidateCap;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) throw somas::InputError("SOMAS_CANDIDATE_CAP must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::string braces(const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out + "}";
}

int cmd_validate(const Common& c) {
  somas::LoadedModel lm = somas::load_model_file(c.model);
  const somas::Somas& m = *lm.somas;
  auto report = somas::validate(m);
  if (c.json) {
    nlohmann::ordered_json doc;
    doc["valid"] = report.empty();
    auto list = nlohmann::ordered_json::array();
    for (const auto& v : report) {
      nlohmann::ordered_json item;
      item["kind"] = v.kind;
      item["agent"] = v.agent ? nlohmann::ordered_json(m.agent_name(*v.agent)) : nlohmann::ordered_json(nullptr);
      item["state"] = v.state ? nlohmann::ordered_json(m.state_name(*v.state)) : nlohmann::ordered_json(nullptr);
      item["detail"] = v.detail;
      list.push_back(item);
    }
    doc["violations"] = list;
    std::cout << doc.dump(2) << "\n";
  } else if (report.empty()) {
    std::cout << "valid\n";
  } else {
    for (const auto& v : report) std::cout << somas::describe(m, v) << "\n";
  }
  return report.empty() ? kOk : kFalse;
}

int cmd_check(const Common& c, std::vector<std::string> formulas, const std::string& query) {
  somas::LoadedModel lm = somas::load_model_file(c.model);
  const somas::Somas& m = *lm.somas;
  std::string state = c.state;
  if (!query.empty()) {
    somas::QueryFile qf = somas::load_query_file(query);
    if (state.empty()) state = qf.state;
    formulas.insert(formulas.end(), qf.formulas.begin(), qf.formulas.end());
  }
  if (state.empty()) throw somas::InputError("--state is required");
  if (formulas.empty()) throw somas::InputError("no formula given");
  somas::StateId q = m.state(state);
  if (!ensure_valid(m)) return kFalse;

  somas::Checker checker(m, lm.com_hook());
  bool all = true;
  for (const auto& text : formulas) {
    somas::Formula f = somas::parse_formula(text);
    bool holds = checker.holds(q, f);
    all = all && holds;
    if (c.json) {
      std::cout << somas::check_json(state, somas::render_formula(f), holds);
    } else if (formulas.size() == 1) {
      std::cout << (holds ? "true" : "false") << "\n";
    } else {
      std::cout << (holds ? "true " : "false ") << somas::render_formula(f) << "\n";
    }
  }
  return all ? kOk : kFalse;
}

int cmd_fullcontrib(const Common& c, std::vector<std::string> goal_texts, const std::string& coalition,
                    const std::vector<std::string>& probes, const std::string& query) {
  somas::LoadedModel lm = somas::load_model_file(c.model);
  const somas::Somas& m = *lm.somas;
  std::string state = c.state;
  if (!query.empty()) {
    somas::QueryFile qf = somas::load_query_file(query);
    if (state.empty()) state = qf.state;
    goal_texts.insert(goal_texts.end(), qf.goals.begin(), qf.goals.end());
  }
  if (state.empty()) throw somas::InputError("--state is required");
  somas::StateId q = m.state(state);
  if (!ensure_valid(m)) return kFalse;
  std::vector<somas::TemporalGoal> goals;
  for (const auto& g : goal_texts) goals.push_back(somas::parse_goal(g));
  somas::ComHook hook = lm.com_hook();

  if (!coalition.empty()) {
    if (goals.size() != 1) throw somas::InputError("--coalition needs exactly one --goal");
    somas::Coalition a = m.coalition(split_names(coalition));
    auto v = somas::full_contribution(m, a, q, goals.front(), hook);
    if (c.json) {
      std::cout << somas::verdict_json(m, q, v);
    } else {
      std::cout << braces(m.names(a)) << " " << somas::render_goal(v.goal) << ": "
                << (v.full() ? "full" : "not full") << " (semantic=" << v.semantic
                << " structural=" << v.structural << " minimal=" << v.minimal << ")";
      if (v.witness) std::cout << " witness " << braces(m.names(*v.witness));
      std::cout << "\n";
    }
    return v.full() ? kOk : kFalse;
  }

  somas::FconOptions options;
  options.candidate_cap = candidate_cap();
  for (const auto& p : probes) options.probes.push_back(m.coalition(split_names(p)));
  somas::ContributionSet set = somas::fcon_somas(m, q, goals, options, hook);
  if (c.json) {
    std::cout << somas::contribution_report_json(m, q, set);
  } else {
    std::cout << "state " << state << "\n";
    for (const auto& e : set.entries) {
      std::cout << "entry " << braces(m.names(e.coalition)) << " " << somas::render_goal(set.goals[e.goal]) << "\n";
    }
    for (const auto& r : set.rejections) {
      std::cout << "reject " << braces(m.names(r.coalition)) << " " << somas::to_string(r.reason);
      if (r.goal) std::cout << " " << somas::render_goal(set.goals[*r.goal]);
      std::cout << "\n";
    }
  }
  return kOk;
}

int cmd_graph(const Common& c, const std::string& coalition, bool with_layers) {
  somas::LoadedModel lm = somas::load_model_file(c.model);
  const somas::Somas& m = *lm.somas;
  if (c.state.empty()) throw somas::InputError("--state is required");
  somas::StateId q = m.state(c.state);
  if (!ensure_valid(m)) return kFalse;
  somas::Coalition a = coalition.empty() ? m.all_agents() : m.coalition(split_names(coalition));
  somas::DependenceGraph g = somas::dependence_graph(m, a, q);
  std::cout << (with_layers ? somas::export_dot(g, somas::layers(g)) : somas::export_dot(g));
  return kOk;
}

int cmd_fuzz(std::uint64_t seed, std::size_t count, std::size_t formulas) {
  std::mt19937_64 rng(seed);
  std::size_t disagreements = 0;
  std::size_t checks = 0;
  for (std::size_t i = 0; i < count; ++i) {
    somas::Somas m = somas::random_model(rng);
    if (!ensure_valid(m)) {
      std::cerr << "generator produced an invalid model at iteration " << i << "\n";
      return kFalse;
    }
    somas::Checker checker(m);
    for (std::size_t j = 0; j < formulas; ++j) {
      somas::Formula f = somas::random_formula(rng, m, 2);
      for (std::size_t s = 0; s < m.state_count(); ++s) {
        somas::StateId q(s);
        bool fast = checker.holds(q, f);
        bool slow = somas::brute_force_check(m, q, f);
        ++checks;
        if (fast != slow) {
          ++disagreements;
          std::cout << "disagreement: model " << i << " state " << m.state_name(q) << " formula "
                    << somas::render_formula(f) << " check=" << fast << " brute=" << slow << "\n";
        }
      }
    }
  }
  std::cout << "models " << count << " checks " << checks << " disagreements " << disagreements << "\n";
  return disagreements == 0 ? kOk : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification of self-organizing multi-agent systems"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool state) {
    sub->add_option("--model,-m", common.model, "Model file (JSON)")->required();
    if (state) sub->add_option("--state,-s", common.state, "State name");
    sub->add_flag("--json", common.json, "Emit JSON");
  };

  auto* validate = app.add_subcommand("validate", "Check model invariants");
  add_common(validate, false);

  std::vector<std::string> formulas;
  std::string query;
  auto* check = app.add_subcommand("check", "Decide an ATL-Gamma formula at a state");
  add_common(check, true);
  check->add_option("--formula,-f,formula", formulas, "Formula text");
  check->add_option("--query", query, "Query file with state and formulas");

  std::vector<std::string> goals;
  std::vector<std::string> probes;
  std::string coalition;
  auto* fullcontrib = app.add_subcommand("fullcontrib", "Full-contribution analysis");
  add_common(fullcontrib, true);
  fullcontrib->add_option("--goal,-g", goals, "Temporal goal, e.g. \"F p\" (repeatable)");
  fullcontrib->add_option("--coalition,-c", coalition, "Judge one coalition (comma-separated agents)");
  fullcontrib->add_option("--probe", probes, "Also judge and report this coalition (repeatable)");
  fullcontrib->add_option("--query", query, "Query file with state and goals");

  bool with_layers = false;
  auto* graph = app.add_subcommand("graph", "Dependence graph as DOT");
  add_common(graph, true);
  graph->add_option("--coalition,-c", coalition, "Restricting coalition (default: all agents)");
  graph->add_flag("--layers", with_layers, "Group nodes by layer");

  std::uint64_t seed = 1;
  std::size_t count = 100;
  std::size_t per_model = 20;
  auto* fuzz = app.add_subcommand("fuzz", "Compare the checker with the brute-force oracle on random models");
  fuzz->add_option("--seed", seed, "Random seed");
  fuzz->add_option("--count", count, "Number of models");
  fuzz->add_option("--formulas", per_model, "Formulas per model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(common);
    if (check->parsed()) return cmd_check(common, formulas, query);
    if (fullcontrib->parsed()) return cmd_fullcontrib(common, goals, coalition, probes, query);
    if (graph->parsed()) return cmd_graph(common, coalition, with_layers);
    if (fuzz->parsed()) return cmd_fuzz(seed, count, per_model);
  } catch (const somas::GuardIncomplete& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFalse;
  } catch (const somas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
