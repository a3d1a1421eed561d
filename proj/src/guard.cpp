#include "somas/guard.hpp"

#include <algorithm>

#include "lexer.hpp"
#include "somas/error.hpp"

namespace somas {

struct Guard::Node {
  Kind kind;
  AgentId lhs;
  AgentId rhs;
  CmpOp op = CmpOp::kEq;
  std::int64_t value = 0;
  PropId prop;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

Message Message::props(PropSet ps, std::string tag) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return {std::move(tag), std::move(ps)};
}

bool Message::has(PropId p) const {
  const auto& ps = as_props();
  return std::binary_search(ps.begin(), ps.end(), p);
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kEq: return "==";
    case CmpOp::kGe: return ">=";
    case CmpOp::kGt: return ">";
  }
  return "?";
}

namespace {

bool apply(CmpOp op, std::int64_t x, std::int64_t y) {
  switch (op) {
    case CmpOp::kLt: return x < y;
    case CmpOp::kLe: return x <= y;
    case CmpOp::kEq: return x == y;
    case CmpOp::kGe: return x >= y;
    case CmpOp::kGt: return x > y;
  }
  return false;
}

const Message& lookup(const MessageMap& messages, AgentId sender) {
  auto it = messages.find(sender);
  if (it == messages.end()) {
    throw InputError("guard reads a message from agent #" + std::to_string(sender.value) +
                     " that was not received");
  }
  return it->second;
}

std::int64_t read_int(const MessageMap& messages, AgentId sender) {
  const Message& m = lookup(messages, sender);
  if (!m.is_integer()) {
    throw InputError("guard compares the proposition-set message of agent #" +
                     std::to_string(sender.value) + " as an integer");
  }
  return m.as_integer();
}

}  // namespace

Guard Guard::always() { return Guard(std::make_shared<const Node>(Node{Kind::kTrue, {}, {}})); }

Guard Guard::compare(AgentId lhs, CmpOp op, AgentId rhs) {
  Node n{Kind::kCompareMessages, lhs, rhs};
  n.op = op;
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::compare(AgentId lhs, CmpOp op, std::int64_t value) {
  Node n{Kind::kCompareConstant, lhs, {}};
  n.op = op;
  n.value = value;
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::has(AgentId sender, PropId prop) {
  Node n{Kind::kHas, sender, {}};
  n.prop = prop;
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard operator!(const Guard& g) {
  Guard::Node n{Guard::Kind::kNot, {}, {}};
  n.a = g.node_;
  return Guard(std::make_shared<const Guard::Node>(std::move(n)));
}

Guard operator&&(const Guard& x, const Guard& y) {
  Guard::Node n{Guard::Kind::kAnd, {}, {}};
  n.a = x.node_;
  n.b = y.node_;
  return Guard(std::make_shared<const Guard::Node>(std::move(n)));
}

Guard operator||(const Guard& x, const Guard& y) {
  Guard::Node n{Guard::Kind::kOr, {}, {}};
  n.a = x.node_;
  n.b = y.node_;
  return Guard(std::make_shared<const Guard::Node>(std::move(n)));
}

Guard::Kind Guard::kind() const { return node_->kind; }

bool Guard::evaluate(const MessageMap& messages) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kTrue:
      return true;
    case Kind::kCompareMessages:
      return apply(n.op, read_int(messages, n.lhs), read_int(messages, n.rhs));
    case Kind::kCompareConstant:
      return apply(n.op, read_int(messages, n.lhs), n.value);
    case Kind::kHas: {
      const Message& m = lookup(messages, n.lhs);
      if (m.is_integer()) {
        throw InputError("guard tests membership in the integer message of agent #" +
                         std::to_string(n.lhs.value));
      }
      return m.has(n.prop);
    }
    case Kind::kNot:
      return !Guard(n.a).evaluate(messages);
    case Kind::kAnd:
      return Guard(n.a).evaluate(messages) && Guard(n.b).evaluate(messages);
    case Kind::kOr:
      return Guard(n.a).evaluate(messages) || Guard(n.b).evaluate(messages);
  }
  return false;
}

Coalition Guard::referenced_agents() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kTrue:
      return {};
    case Kind::kCompareMessages:
      return Coalition::of({n.lhs, n.rhs});
    case Kind::kCompareConstant:
    case Kind::kHas:
      return Coalition::single(n.lhs);
    case Kind::kNot:
      return Guard(n.a).referenced_agents();
    case Kind::kAnd:
    case Kind::kOr:
      return Guard(n.a).referenced_agents() | Guard(n.b).referenced_agents();
  }
  return {};
}

std::optional<std::string> Guard::kind_error(const MessageMap& messages) const {
  const Node& n = *node_;
  auto want = [&](AgentId sender, bool integer) -> std::optional<std::string> {
    auto it = messages.find(sender);
    if (it == messages.end()) return std::nullopt;  // reported separately as a tau violation
    if (it->second.is_integer() != integer) {
      return std::string(integer ? "integer comparison on a proposition-set message"
                                 : "membership test on an integer message") +
             " from agent #" + std::to_string(sender.value);
    }
    return std::nullopt;
  };
  switch (n.kind) {
    case Kind::kTrue:
      return std::nullopt;
    case Kind::kCompareMessages:
      if (auto e = want(n.lhs, true)) return e;
      return want(n.rhs, true);
    case Kind::kCompareConstant:
      return want(n.lhs, true);
    case Kind::kHas:
      return want(n.lhs, false);
    case Kind::kNot:
      return Guard(n.a).kind_error(messages);
    case Kind::kAnd:
    case Kind::kOr:
      if (auto e = Guard(n.a).kind_error(messages)) return e;
      return Guard(n.b).kind_error(messages);
  }
  return std::nullopt;
}

std::string Guard::render(const AgentNamer& agent, const PropNamer& prop) const {
  const Node& n = *node_;
  auto msg = [&](AgentId a) { return "msg(" + agent(a) + ")"; };
  // Operands of && and || are parenthesized unless atomic.
  auto operand = [&](const std::shared_ptr<const Node>& child) {
    std::string s = Guard(child).render(agent, prop);
    bool atomic = child->kind != Kind::kAnd && child->kind != Kind::kOr;
    return atomic ? s : "(" + s + ")";
  };
  switch (n.kind) {
    case Kind::kTrue:
      return "true";
    case Kind::kCompareMessages:
      return msg(n.lhs) + " " + std::string(to_string(n.op)) + " " + msg(n.rhs);
    case Kind::kCompareConstant:
      return msg(n.lhs) + " " + std::string(to_string(n.op)) + " " + std::to_string(n.value);
    case Kind::kHas:
      return "has(" + msg(n.lhs) + ", " + prop(n.prop) + ")";
    case Kind::kNot: {
      std::string inner = Guard(n.a).render(agent, prop);
      bool simple = n.a->kind == Kind::kTrue || n.a->kind == Kind::kHas || n.a->kind == Kind::kNot;
      return simple ? "!" + inner : "!(" + inner + ")";
    }
    case Kind::kAnd:
      return operand(n.a) + " && " + operand(n.b);
    case Kind::kOr:
      return operand(n.a) + " || " + operand(n.b);
  }
  return {};
}

namespace {

using detail::Tok;
using detail::TokenStream;

class GuardParser {
 public:
  GuardParser(std::string_view text, const AgentResolver& agents, const PropResolver& props)
      : ts_(detail::tokenize(text)), agents_(agents), props_(props) {}

  Guard parse() {
    if (ts_.at(Tok::kEnd)) ts_.fail("empty guard");
    Guard g = parse_or();
    if (!ts_.at(Tok::kEnd)) ts_.fail("unexpected trailing input");
    return g;
  }

 private:
  Guard parse_or() {
    Guard g = parse_and();
    while (ts_.accept(Tok::kOrOr)) g = g || parse_and();
    return g;
  }

  Guard parse_and() {
    Guard g = parse_unary();
    while (ts_.accept(Tok::kAndAnd)) g = g && parse_unary();
    return g;
  }

  Guard parse_unary() {
    if (ts_.accept(Tok::kBang)) return !parse_unary();
    if (ts_.accept(Tok::kLParen)) {
      Guard g = parse_or();
      ts_.expect(Tok::kRParen, "')'");
      return g;
    }
    if (ts_.at_ident("true")) {
      ts_.next();
      return Guard::always();
    }
    if (ts_.at_ident("false")) {
      ts_.next();
      return !Guard::always();
    }
    if (ts_.at_ident("has")) {
      ts_.next();
      ts_.expect(Tok::kLParen, "'(' after has");
      AgentId sender = parse_msg();
      ts_.expect(Tok::kComma, "','");
      std::size_t pos = ts_.peek().pos;
      std::string name = detail::read_atom_name(ts_, ts_.expect_ident("proposition name"));
      auto prop = props_(name);
      if (!prop) throw ParseError("unknown proposition '" + name + "'", pos);
      ts_.expect(Tok::kRParen, "')'");
      return Guard::has(sender, *prop);
    }
    if (ts_.at_ident("msg")) {
      AgentId lhs = parse_msg();
      CmpOp op = parse_op();
      if (ts_.at(Tok::kInt)) {
        detail::Token t = ts_.next();
        return Guard::compare(lhs, op, static_cast<std::int64_t>(std::stoll(t.text)));
      }
      return Guard::compare(lhs, op, parse_msg());
    }
    ts_.fail("expected guard atom");
  }

  AgentId parse_msg() {
    if (!ts_.at_ident("msg")) ts_.fail("expected msg(AGENT)");
    ts_.next();
    ts_.expect(Tok::kLParen, "'(' after msg");
    std::size_t pos = ts_.peek().pos;
    std::string name = ts_.expect_ident("agent name");
    ts_.expect(Tok::kRParen, "')'");
    auto id = agents_(name);
    if (!id) throw ParseError("unknown agent '" + name + "'", pos);
    return *id;
  }

  CmpOp parse_op() {
    switch (ts_.peek().kind) {
      case Tok::kLess: ts_.next(); return CmpOp::kLt;
      case Tok::kLessEq: ts_.next(); return CmpOp::kLe;
      case Tok::kEqEq: ts_.next(); return CmpOp::kEq;
      case Tok::kGreaterEq: ts_.next(); return CmpOp::kGe;
      case Tok::kGreater: ts_.next(); return CmpOp::kGt;
      default: ts_.fail("expected comparison operator");
    }
  }

  TokenStream ts_;
  const AgentResolver& agents_;
  const PropResolver& props_;
};

}  // namespace

Guard parse_guard(std::string_view text, const AgentResolver& agents, const PropResolver& props) {
  return GuardParser(text, agents, props).parse();
}

}  // namespace somas
