#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "somas/ids.hpp"

namespace somas {

/// What agent i can communicate in state q: an integer (urgency, counter, flag)
/// or a set of propositions true at q, read as their conjunction.
struct Message {
  using PropSet = std::vector<PropId>;  // sorted, unique

  std::string tag;
  std::variant<std::int64_t, PropSet> payload;

  static Message integer(std::int64_t v, std::string tag = {}) { return {std::move(tag), v}; }
  static Message props(PropSet ps, std::string tag = {});

  bool is_integer() const { return std::holds_alternative<std::int64_t>(payload); }
  std::int64_t as_integer() const { return std::get<std::int64_t>(payload); }
  const PropSet& as_props() const { return std::get<PropSet>(payload); }
  bool has(PropId p) const;

  friend bool operator==(const Message&, const Message&) = default;
};

/// M(q) as seen by one agent, keyed by sender.
using MessageMap = std::map<AgentId, Message>;

enum class CmpOp { kLt, kLe, kEq, kGe, kGt };

std::string_view to_string(CmpOp op);

/// Boolean condition over received messages, one row of a guarded action table.
class Guard {
 public:
  enum class Kind { kTrue, kCompareMessages, kCompareConstant, kHas, kNot, kAnd, kOr };

  static Guard always();
  static Guard compare(AgentId lhs, CmpOp op, AgentId rhs);
  static Guard compare(AgentId lhs, CmpOp op, std::int64_t value);
  static Guard has(AgentId sender, PropId prop);
  friend Guard operator!(const Guard& g);
  friend Guard operator&&(const Guard& a, const Guard& b);
  friend Guard operator||(const Guard& a, const Guard& b);

  Kind kind() const;

  /// Throws InputError if a referenced sender is missing from `messages` or a
  /// payload has the wrong kind for the atom reading it.
  bool evaluate(const MessageMap& messages) const;

  /// Every sender id mentioned anywhere in the guard.
  Coalition referenced_agents() const;

  /// First payload-kind mismatch found anywhere in the tree (both branches of
  /// && and || are inspected), or nullopt.
  std::optional<std::string> kind_error(const MessageMap& messages) const;

  using AgentNamer = std::function<std::string(AgentId)>;
  using PropNamer = std::function<std::string(PropId)>;
  std::string render(const AgentNamer& agent, const PropNamer& prop) const;

 private:
  struct Node;
  explicit Guard(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

using AgentResolver = std::function<std::optional<AgentId>(std::string_view)>;
using PropResolver = std::function<std::optional<PropId>(std::string_view)>;

/// Parses `true | msg(A) OP msg(B) | msg(A) OP INT | has(msg(A), P) | !E |
/// E && E | E || E | (E)` with OP in {<, <=, ==, >=, >}. && binds tighter
/// than ||. Unknown agent or proposition names raise ParseError.
Guard parse_guard(std::string_view text, const AgentResolver& agents, const PropResolver& props);

}  // namespace somas
