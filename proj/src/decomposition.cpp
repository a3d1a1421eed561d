#include "somas/decomposition.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "somas/error.hpp"

namespace somas {

DependenceGraph::DependenceGraph(std::vector<std::string> names)
    : names_(std::move(names)), in_(names_.size()) {
  if (names_.size() > kMaxAgents) throw SizeError("dependence graphs are limited to 64 nodes");
}

void DependenceGraph::add_edge(AgentId from, AgentId to) {
  if (from.index() >= size() || to.index() >= size()) throw InputError("edge endpoint out of range");
  in_[to.index()].insert(from);
}

std::vector<std::pair<AgentId, AgentId>> DependenceGraph::edges() const {
  std::vector<std::pair<AgentId, AgentId>> out;
  for (std::size_t b = 0; b < size(); ++b) {
    for (AgentId a : in_[b].members()) out.emplace_back(a, AgentId(b));
  }
  std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
    return std::tie(names_[x.first.index()], names_[x.second.index()]) <
           std::tie(names_[y.first.index()], names_[y.second.index()]);
  });
  return out;
}

std::size_t DependenceGraph::edge_count() const {
  std::size_t n = 0;
  for (Coalition c : in_) n += c.size();
  return n;
}

bool DependenceGraph::closed(Coalition coalition) const {
  for (AgentId b : coalition.members()) {
    if (!in_.at(b.index()).subset_of(coalition)) return false;
  }
  return true;
}

DependenceGraph dependence_graph(const Somas& somas, Coalition coalition, StateId q) {
  DependenceGraph g(somas.cgs().agents);
  for (StateId s : out_reachable(somas, coalition, q).to_vector()) {
    for (std::size_t b = 0; b < somas.agent_count(); ++b) {
      for (AgentId a : somas.tau(AgentId(b), s).members()) g.add_edge(a, AgentId(b));
    }
  }
  return g;
}

DependenceGraph star_dependence_graph(const Somas& somas, StateId q) {
  return dependence_graph(somas, somas.all_agents(), q);
}

Condensation condense(const DependenceGraph& g) {
  const std::size_t n = g.size();
  std::vector<Coalition> out(n);
  for (const auto& [a, b] : g.edges()) out[a.index()].insert(b);

  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<Coalition> found;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (AgentId w : out[v].members()) {
      if (index[w.index()] < 0) {
        visit(w.index());
        low[v] = std::min(low[v], low[w.index()]);
      } else if (on_stack[w.index()]) {
        low[v] = std::min(low[v], index[w.index()]);
      }
    }
    if (low[v] == index[v]) {
      Coalition comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.insert(AgentId(w));
      } while (w != v);
      found.push_back(comp);
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  std::sort(found.begin(), found.end(),
            [](Coalition x, Coalition y) { return x.members().front() < y.members().front(); });

  Condensation c;
  c.components = found;
  c.membership.assign(n, 0);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < found.size(); ++i) {
    std::string label;
    for (AgentId a : found[i].members()) {
      c.membership[a.index()] = i;
      label += (label.empty() ? "" : ",") + g.name(a);
    }
    names.push_back("{" + label + "}");
  }
  c.dag = DependenceGraph(std::move(names));
  for (const auto& [a, b] : g.edges()) {
    std::size_t ca = c.membership[a.index()];
    std::size_t cb = c.membership[b.index()];
    if (ca != cb) c.dag.add_edge(AgentId(ca), AgentId(cb));
  }
  return c;
}

namespace {

std::vector<std::size_t> component_layers(const Condensation& c) {
  const std::size_t m = c.components.size();
  std::vector<int> layer(m, -1);
  std::function<int(std::size_t)> compute = [&](std::size_t i) {
    if (layer[i] >= 0) return layer[i];
    int best = 0;
    for (AgentId p : c.dag.parents(AgentId(i)).members()) best = std::max(best, compute(p.index()) + 1);
    return layer[i] = best;
  };
  std::vector<std::size_t> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = static_cast<std::size_t>(compute(i));
  return out;
}

}  // namespace

Decomposition layers(const DependenceGraph& g) {
  Condensation c = condense(g);
  std::vector<std::size_t> comp_layer = component_layers(c);
  Decomposition d;
  d.rho.assign(g.size(), 0);
  for (std::size_t a = 0; a < g.size(); ++a) {
    std::size_t l = comp_layer[c.membership[a]];
    d.rho[a] = l;
    if (d.layers.size() <= l) d.layers.resize(l + 1);
    d.layers[l].insert(AgentId(a));
  }
  return d;
}

std::vector<Coalition> independent_coalitions(const DependenceGraph& g, std::size_t cap) {
  Condensation c = condense(g);
  std::vector<std::size_t> comp_layer = component_layers(c);
  const std::size_t m = c.components.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return comp_layer[x] < comp_layer[y]; });

  // Down-sets of the condensation: parents are decided before children, so
  // every leaf of the recursion is a distinct closed set.
  std::vector<Coalition> out;
  std::function<void(std::size_t, Coalition, Coalition)> walk = [&](std::size_t i, Coalition comps,
                                                                     Coalition agents) {
    if (i == m) {
      if (!agents.empty()) {
        if (out.size() >= cap) {
          throw SizeError("more than " + std::to_string(cap) + " independent coalitions");
        }
        out.push_back(agents);
      }
      return;
    }
    std::size_t k = order[i];
    walk(i + 1, comps, agents);
    if (c.dag.parents(AgentId(k)).subset_of(comps)) {
      walk(i + 1, comps | Coalition::single(AgentId(k)), agents | c.components[k]);
    }
  };
  walk(0, Coalition{}, Coalition{});

  auto key = [&](Coalition a) {
    std::size_t top = 0;
    std::vector<std::string> names;
    for (AgentId x : a.members()) {
      top = std::max(top, comp_layer[c.membership[x.index()]]);
      names.push_back(g.name(x));
    }
    std::sort(names.begin(), names.end());
    return std::make_tuple(top, a.size(), std::move(names));
  };
  std::vector<std::pair<decltype(key(Coalition{})), Coalition>> keyed;
  keyed.reserve(out.size());
  for (Coalition a : out) keyed.emplace_back(key(a), a);
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < keyed.size(); ++i) out[i] = keyed[i].second;
  return out;
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kNotStructural: return "not-structural";
    case RejectReason::kNotSemantic: return "not-semantic";
    case RejectReason::kNotMinimal: return "not-minimal";
  }
  return "?";
}

ContributionSet fcon_somas(const Somas& somas, StateId q, const std::vector<TemporalGoal>& goals,
                           const FconOptions& options, const ComHook& com) {
  ContributionSet result;
  result.goals = goals;
  if (goals.empty()) return result;

  std::vector<Coalition> candidates = independent_coalitions(star_dependence_graph(somas, q), options.candidate_cap);
  for (Coalition probe : options.probes) {
    if (std::find(candidates.begin(), candidates.end(), probe) == candidates.end()) candidates.push_back(probe);
  }

  Checker checker(somas, com);
  // Structurally independent coalitions seen so far, with per-goal verdicts.
  std::vector<std::pair<Coalition, std::vector<bool>>> confirmed;
  for (Coalition a : candidates) {
    DependenceGraph g = dependence_graph(somas, a, q);
    if (!g.closed(a)) {
      result.rejections.push_back({a, RejectReason::kNotStructural, std::nullopt});
      continue;
    }
    std::vector<bool> semantic(goals.size());
    std::vector<std::string> names = somas.names(a);
    for (std::size_t i = 0; i < goals.size(); ++i) {
      semantic[i] = checker.holds(q, goals[i].bind(names));
      if (!semantic[i]) {
        result.rejections.push_back({a, RejectReason::kNotSemantic, i});
        continue;
      }
      bool dominated = std::any_of(confirmed.begin(), confirmed.end(), [&](const auto& c) {
        return c.first.proper_subset_of(a) && c.second[i];
      });
      if (dominated) {
        result.rejections.push_back({a, RejectReason::kNotMinimal, i});
      } else {
        result.entries.push_back({a, i});
      }
    }
    confirmed.emplace_back(a, std::move(semantic));
  }
  return result;
}

namespace {

std::string dot_id(const std::string& name) {
  bool plain = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
  for (char ch : name) plain = plain && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_');
  if (plain) return name;
  std::string out = "\"";
  for (char ch : name) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::vector<AgentId> sorted_nodes(const DependenceGraph& g, Coalition c) {
  std::vector<AgentId> out = c.members();
  std::sort(out.begin(), out.end(), [&](AgentId x, AgentId y) { return g.name(x) < g.name(y); });
  return out;
}

std::string render_dot(const DependenceGraph& g, const Decomposition* d) {
  std::ostringstream out;
  out << "digraph dependence {\n";
  if (d) {
    for (std::size_t l = 0; l < d->layers.size(); ++l) {
      out << "  subgraph cluster_L" << l << " {\n";
      out << "    label=\"L" << l << "\";\n";
      out << "    rank=same;\n";
      for (AgentId a : sorted_nodes(g, d->layers[l])) out << "    " << dot_id(g.name(a)) << ";\n";
      out << "  }\n";
    }
  } else {
    for (AgentId a : sorted_nodes(g, g.nodes())) out << "  " << dot_id(g.name(a)) << ";\n";
  }
  for (const auto& [a, b] : g.edges()) out << "  " << dot_id(g.name(a)) << " -> " << dot_id(g.name(b)) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace

std::string export_dot(const DependenceGraph& g) { return render_dot(g, nullptr); }

std::string export_dot(const DependenceGraph& g, const Decomposition& d) { return render_dot(g, &d); }

}  // namespace somas
