#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace somas {

/// com(U', M'): every user in U' shares a middle agent in M' with each user
/// it is interested in. Names are sorted and unique.
struct ComAtom {
  std::vector<std::string> users;
  std::vector<std::string> middles;

  friend bool operator==(const ComAtom&, const ComAtom&) = default;
};

/// ATL-Gamma formula. Or, ->, false and <A> F desugar into the core
/// variants; coalitions are agent names, bound against a model at check time.
class Formula {
 public:
  enum class Kind { kTrue, kProp, kCom, kNot, kAnd, kNext, kGlobally, kUntil };

  static Formula truth();
  static Formula falsity();
  static Formula prop(std::string name);
  static Formula com(ComAtom atom);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula next(std::vector<std::string> coalition, Formula f);
  static Formula globally(std::vector<std::string> coalition, Formula f);
  static Formula until(std::vector<std::string> coalition, Formula a, Formula b);
  static Formula eventually(std::vector<std::string> coalition, Formula f);

  Kind kind() const;
  bool is_temporal() const;
  const std::string& name() const;                     // kProp
  const ComAtom& com_atom() const;                     // kCom
  const std::vector<std::string>& coalition() const;  // temporal kinds
  const Formula& child() const;                        // kNot, kNext, kGlobally
  const Formula& lhs() const;                          // kAnd, kUntil
  const Formula& rhs() const;                          // kAnd, kUntil

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// A path formula X f, G f or (f U g) without its coalition.
class TemporalGoal {
 public:
  enum class Op { kNext, kGlobally, kUntil };

  static TemporalGoal next(Formula f);
  static TemporalGoal globally(Formula f);
  static TemporalGoal until(Formula a, Formula b);
  static TemporalGoal eventually(Formula f);

  Op op() const { return op_; }
  const Formula& lhs() const { return lhs_; }  // kUntil only
  const Formula& rhs() const { return rhs_; }

  /// <coalition> goal.
  Formula bind(std::vector<std::string> coalition) const;

  friend bool operator==(const TemporalGoal&, const TemporalGoal&) = default;

 private:
  TemporalGoal(Op op, Formula lhs, Formula rhs) : op_(op), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
  Op op_;
  Formula lhs_;
  Formula rhs_;
};

/// Precedence ! > && > || > -> (right associative). Temporal forms are
/// `<A> X f`, `<A> G f`, `<A> F f`, `<A> (f U g)` and bind like `!`.
/// Throws ParseError on malformed or empty input.
Formula parse_formula(std::string_view text);

/// Accepts `X f`, `G f`, `F f` or `(f U g)`.
TemporalGoal parse_goal(std::string_view text);

std::string render_formula(const Formula& f);
std::string render_goal(const TemporalGoal& g);

/// Post-order, children before parents, structural duplicates removed.
std::vector<Formula> subformulas(const Formula& f);

}  // namespace somas
