#include "somas/formula.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"
#include "somas/error.hpp"

namespace somas {

struct Formula::Node {
  Kind kind;
  std::string name;
  ComAtom atom;
  std::vector<std::string> coalition;
  std::vector<Formula> kids;
};

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

Formula Formula::truth() { return Formula(std::make_shared<const Node>(Node{Kind::kTrue})); }

Formula Formula::falsity() { return negate(truth()); }

Formula Formula::prop(std::string name) {
  Node n{Kind::kProp};
  n.name = std::move(name);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::com(ComAtom atom) {
  Node n{Kind::kCom};
  n.atom.users = sorted_unique(std::move(atom.users));
  n.atom.middles = sorted_unique(std::move(atom.middles));
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::negate(Formula f) {
  Node n{Kind::kNot};
  n.kids = {std::move(f)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conj(Formula a, Formula b) {
  Node n{Kind::kAnd};
  n.kids = {std::move(a), std::move(b)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::disj(Formula a, Formula b) { return negate(conj(negate(std::move(a)), negate(std::move(b)))); }

Formula Formula::implies(Formula a, Formula b) { return negate(conj(std::move(a), negate(std::move(b)))); }

Formula Formula::next(std::vector<std::string> coalition, Formula f) {
  Node n{Kind::kNext};
  n.coalition = sorted_unique(std::move(coalition));
  n.kids = {std::move(f)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::globally(std::vector<std::string> coalition, Formula f) {
  Node n{Kind::kGlobally};
  n.coalition = sorted_unique(std::move(coalition));
  n.kids = {std::move(f)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::until(std::vector<std::string> coalition, Formula a, Formula b) {
  Node n{Kind::kUntil};
  n.coalition = sorted_unique(std::move(coalition));
  n.kids = {std::move(a), std::move(b)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::eventually(std::vector<std::string> coalition, Formula f) {
  return until(std::move(coalition), truth(), std::move(f));
}

Formula::Kind Formula::kind() const { return node_->kind; }

bool Formula::is_temporal() const {
  return node_->kind == Kind::kNext || node_->kind == Kind::kGlobally || node_->kind == Kind::kUntil;
}

const std::string& Formula::name() const { return node_->name; }
const ComAtom& Formula::com_atom() const { return node_->atom; }
const std::vector<std::string>& Formula::coalition() const { return node_->coalition; }

const Formula& Formula::child() const { return node_->kids.at(0); }
const Formula& Formula::lhs() const { return node_->kids.at(0); }
const Formula& Formula::rhs() const { return node_->kids.at(1); }

bool operator==(const Formula& x, const Formula& y) {
  const Formula::Node& a = *x.node_;
  const Formula::Node& b = *y.node_;
  if (&a == &b) return true;
  return a.kind == b.kind && a.name == b.name && a.atom == b.atom && a.coalition == b.coalition &&
         a.kids == b.kids;
}

TemporalGoal TemporalGoal::next(Formula f) { return TemporalGoal(Op::kNext, Formula::truth(), std::move(f)); }

TemporalGoal TemporalGoal::globally(Formula f) {
  return TemporalGoal(Op::kGlobally, Formula::truth(), std::move(f));
}

TemporalGoal TemporalGoal::until(Formula a, Formula b) { return TemporalGoal(Op::kUntil, std::move(a), std::move(b)); }

TemporalGoal TemporalGoal::eventually(Formula f) { return until(Formula::truth(), std::move(f)); }

Formula TemporalGoal::bind(std::vector<std::string> coalition) const {
  switch (op_) {
    case Op::kNext: return Formula::next(std::move(coalition), rhs_);
    case Op::kGlobally: return Formula::globally(std::move(coalition), rhs_);
    case Op::kUntil: return Formula::until(std::move(coalition), lhs_, rhs_);
  }
  return Formula::truth();
}

namespace {

using detail::Tok;
using detail::TokenStream;

bool is_keyword(const std::string& word) {
  return word == "X" || word == "G" || word == "F" || word == "U" || word == "true" || word == "false";
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : ts_(detail::tokenize(text)) {}

  Formula parse_all() {
    if (ts_.at(Tok::kEnd)) ts_.fail("empty formula");
    Formula f = parse_implies();
    expect_end();
    return f;
  }

  TemporalGoal parse_goal_all() {
    if (ts_.at(Tok::kEnd)) ts_.fail("empty goal");
    TemporalGoal g = parse_path();
    expect_end();
    return g;
  }

 private:
  void expect_end() {
    if (!ts_.at(Tok::kEnd)) ts_.fail("unexpected trailing input");
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (ts_.accept(Tok::kArrow)) return Formula::implies(std::move(f), parse_implies());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (ts_.accept(Tok::kOrOr)) f = Formula::disj(std::move(f), parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (ts_.accept(Tok::kAndAnd)) f = Formula::conj(std::move(f), parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (ts_.accept(Tok::kBang)) return Formula::negate(parse_unary());
    if (ts_.accept(Tok::kLess)) {
      std::vector<std::string> coalition;
      if (!ts_.at(Tok::kGreater)) {
        coalition.push_back(ts_.expect_ident("agent name"));
        while (ts_.accept(Tok::kComma)) coalition.push_back(ts_.expect_ident("agent name"));
      }
      ts_.expect(Tok::kGreater, "'>'");
      return parse_path().bind(std::move(coalition));
    }
    if (ts_.accept(Tok::kLParen)) {
      Formula f = parse_implies();
      ts_.expect(Tok::kRParen, "')'");
      return f;
    }
    if (!ts_.at(Tok::kIdent)) ts_.fail("expected formula");
    if (ts_.at_ident("true")) {
      ts_.next();
      return Formula::truth();
    }
    if (ts_.at_ident("false")) {
      ts_.next();
      return Formula::falsity();
    }
    if (ts_.at_ident("com") && ts_.peek(1).kind == Tok::kLParen && ts_.peek(2).kind == Tok::kLBrace) {
      ts_.next();
      ts_.next();
      ComAtom atom;
      atom.users = parse_name_set();
      ts_.expect(Tok::kComma, "','");
      atom.middles = parse_name_set();
      ts_.expect(Tok::kRParen, "')'");
      return Formula::com(std::move(atom));
    }
    if (is_keyword(ts_.peek().text)) ts_.fail("temporal operator needs a coalition");
    std::string head = ts_.next().text;
    return Formula::prop(detail::read_atom_name(ts_, std::move(head)));
  }

  std::vector<std::string> parse_name_set() {
    ts_.expect(Tok::kLBrace, "'{'");
    std::vector<std::string> names;
    if (!ts_.at(Tok::kRBrace)) {
      names.push_back(ts_.expect_ident("agent name"));
      while (ts_.accept(Tok::kComma)) names.push_back(ts_.expect_ident("agent name"));
    }
    ts_.expect(Tok::kRBrace, "'}'");
    return names;
  }

  TemporalGoal parse_path() {
    if (ts_.at_ident("X")) {
      ts_.next();
      return TemporalGoal::next(parse_unary());
    }
    if (ts_.at_ident("G")) {
      ts_.next();
      return TemporalGoal::globally(parse_unary());
    }
    if (ts_.at_ident("F")) {
      ts_.next();
      return TemporalGoal::eventually(parse_unary());
    }
    if (ts_.accept(Tok::kLParen)) {
      Formula a = parse_implies();
      if (!ts_.at_ident("U")) ts_.fail("expected U");
      ts_.next();
      Formula b = parse_implies();
      ts_.expect(Tok::kRParen, "')'");
      return TemporalGoal::until(std::move(a), std::move(b));
    }
    ts_.fail("expected X, G, F or (f U g)");
  }

  TokenStream ts_;
};

// Binding strength of the top-level construct, used to decide parentheses.
enum Level { kImplies = 1, kOr = 2, kAnd = 3, kUnary = 4 };

bool match_or(const Formula& f, const Formula** x, const Formula** y) {
  if (f.kind() != Formula::Kind::kNot || f.child().kind() != Formula::Kind::kAnd) return false;
  const Formula& c = f.child();
  if (c.lhs().kind() != Formula::Kind::kNot || c.rhs().kind() != Formula::Kind::kNot) return false;
  *x = &c.lhs().child();
  *y = &c.rhs().child();
  return true;
}

bool match_implies(const Formula& f, const Formula** x, const Formula** y) {
  if (f.kind() != Formula::Kind::kNot || f.child().kind() != Formula::Kind::kAnd) return false;
  const Formula& c = f.child();
  if (c.rhs().kind() != Formula::Kind::kNot) return false;
  *x = &c.lhs();
  *y = &c.rhs().child();
  return true;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ',';
    out += names[i];
  }
  return out;
}

std::string render(const Formula& f, int min_level);

std::string render_path(const TemporalGoal& g) {
  switch (g.op()) {
    case TemporalGoal::Op::kNext:
      return "X " + render(g.rhs(), kUnary);
    case TemporalGoal::Op::kGlobally:
      return "G " + render(g.rhs(), kUnary);
    case TemporalGoal::Op::kUntil:
      if (g.lhs().kind() == Formula::Kind::kTrue) return "F " + render(g.rhs(), kUnary);
      return "(" + render(g.lhs(), kImplies) + " U " + render(g.rhs(), kImplies) + ")";
  }
  return {};
}

std::string render(const Formula& f, int min_level) {
  std::string text;
  int level = kUnary;
  const Formula* x = nullptr;
  const Formula* y = nullptr;
  switch (f.kind()) {
    case Formula::Kind::kTrue:
      text = "true";
      break;
    case Formula::Kind::kProp:
      text = f.name();
      break;
    case Formula::Kind::kCom:
      text = "com({" + join(f.com_atom().users) + "},{" + join(f.com_atom().middles) + "})";
      break;
    case Formula::Kind::kNot:
      if (f.child().kind() == Formula::Kind::kTrue) {
        text = "false";
      } else if (match_or(f, &x, &y)) {
        text = render(*x, kOr) + " || " + render(*y, kAnd);
        level = kOr;
      } else if (match_implies(f, &x, &y)) {
        text = render(*x, kOr) + " -> " + render(*y, kImplies);
        level = kImplies;
      } else {
        text = "!" + render(f.child(), kUnary);
      }
      break;
    case Formula::Kind::kAnd:
      text = render(f.lhs(), kAnd) + " && " + render(f.rhs(), kUnary);
      level = kAnd;
      break;
    case Formula::Kind::kNext:
      text = "<" + join(f.coalition()) + "> " + render_path(TemporalGoal::next(f.child()));
      break;
    case Formula::Kind::kGlobally:
      text = "<" + join(f.coalition()) + "> " + render_path(TemporalGoal::globally(f.child()));
      break;
    case Formula::Kind::kUntil:
      text = "<" + join(f.coalition()) + "> " + render_path(TemporalGoal::until(f.lhs(), f.rhs()));
      break;
  }
  return level < min_level ? "(" + text + ")" : text;
}

void collect(const Formula& f, std::set<std::string>& seen, std::vector<Formula>& out) {
  switch (f.kind()) {
    case Formula::Kind::kNot:
    case Formula::Kind::kNext:
    case Formula::Kind::kGlobally:
      collect(f.child(), seen, out);
      break;
    case Formula::Kind::kAnd:
    case Formula::Kind::kUntil:
      collect(f.lhs(), seen, out);
      collect(f.rhs(), seen, out);
      break;
    default:
      break;
  }
  if (seen.insert(render(f, kImplies)).second) out.push_back(f);
}

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse_all(); }

TemporalGoal parse_goal(std::string_view text) { return FormulaParser(text).parse_goal_all(); }

std::string render_formula(const Formula& f) { return render(f, kImplies); }

std::string render_goal(const TemporalGoal& g) { return render_path(g); }

std::vector<Formula> subformulas(const Formula& f) {
  std::set<std::string> seen;
  std::vector<Formula> out;
  collect(f, seen, out);
  return out;
}

}  // namespace somas
