#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "somas/checker.hpp"
#include "somas/decomposition.hpp"
#include "somas/model.hpp"
#include "somas/scenarios.hpp"

namespace somas {

/// A loaded model file. `community` is set for community scenarios, whose
/// com atoms need the configuration.
struct LoadedModel {
  std::unique_ptr<Somas> somas;
  std::optional<CommunityConfig> community;

  /// Com hook bound to this model, or an empty hook.
  ComHook com_hook() const;
};

/// Parses either an explicit model object or a {"scenario": ...} object.
/// Malformed JSON raises ParseError (byte offset); unknown keys or names
/// raise InputError. Structural gaps are left for validate().
LoadedModel load_model_json(const std::string& text);
LoadedModel load_model_file(const std::string& path);

/// The explicit format; load_model_json(dump_model_json(m)) rebuilds m.
std::string dump_model_json(const Somas& somas, int indent = 2);

struct QueryFile {
  std::string state;
  std::vector<std::string> formulas;
  std::vector<std::string> goals;
  std::vector<std::vector<std::string>> coalitions;
};

QueryFile load_query_json(const std::string& text);
QueryFile load_query_file(const std::string& path);

std::string read_file(const std::string& path);

/// {"state", "entries": [{"coalition", "goal"}], "rejections": [{"coalition", "reason"[, "goal"]}]}
std::string contribution_report_json(const Somas& somas, StateId q, const ContributionSet& set);
std::string verdict_json(const Somas& somas, StateId q, const ContributionVerdict& v);
std::string check_json(const std::string& state, const std::string& formula, bool holds);

}  // namespace somas
