#pragma once

// Arithmetic expressions over the variables x, y and named parameters.
//
// Text grammar (the format accepted in --f/--g flags and config files):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | power
//   power  := primary ('^' ['-'|'+'] number)?
//   primary:= number | ident | '(' expr ')'
//
// Unary minus binds looser than '^', so "-x^2" is -(x^2). Exponents are
// constant literals. There is no implicit multiplication: "2x" is an error.
// The identifiers x and y are variables; every other identifier is a
// parameter.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace compmap::expr {

using Params = std::map<std::string, double, std::less<>>;

enum class Var { x, y };
enum class Kind { constant, variable, parameter, negate, binary };
enum class BinaryOp { add, sub, mul, div, pow };

struct Node;

/// Immutable expression tree handle. Copies share structure.
class Expr {
 public:
  Expr();  // constant 0

  static Expr constant(double v);
  static Expr variable(Var v);
  static Expr parameter(std::string name);
  static Expr negate(Expr child);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  /// Power with a constant exponent.
  static Expr power(Expr base, double exponent);

  const Node& node() const { return *node_; }
  Kind kind() const;

  friend Expr operator+(Expr a, Expr b) { return binary(BinaryOp::add, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return binary(BinaryOp::sub, std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return binary(BinaryOp::mul, std::move(a), std::move(b)); }
  friend Expr operator/(Expr a, Expr b) { return binary(BinaryOp::div, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a) { return negate(std::move(a)); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::constant;
  double value = 0.0;      // constant; exponent for BinaryOp::pow lives in rhs
  Var var = Var::x;        // variable
  std::string name;        // parameter
  BinaryOp op = BinaryOp::add;
  std::vector<Expr> children;  // 1 for negate, 2 for binary
};

/// Parses the grammar above. Throws ParseError with byte offset and the set of
/// acceptable tokens.
Expr parse(std::string_view text);

/// Evaluates with standard double arithmetic. Throws SingularityError when a
/// divisor (or the base of a negative power) has magnitude below 1e-12 and
/// UnboundParameterError for a missing parameter.
double eval(const Expr& e, double x, double y, const Params& params = {});

/// Symbolic partial derivative, constant-folded.
Expr differentiate(const Expr& e, Var v);

/// Constant folding and neutral-element removal. Never removes a subtree that
/// could raise during evaluation, so results are unchanged wherever the
/// original evaluates.
Expr fold(const Expr& e);

/// Replaces bound parameters by constants and folds.
Expr bind(const Expr& e, const Params& params);

/// Minimal-parenthesis rendering that parses back to the same tree.
std::string to_string(const Expr& e);

/// Names of all parameters referenced by e.
std::set<std::string> parameters(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Flattened postfix program for fast repeated evaluation of a
/// parameter-free expression.
class Compiled {
 public:
  /// Throws UnboundParameterError if e still references parameters.
  explicit Compiled(const Expr& e);
  double operator()(double x, double y) const;

 private:
  enum class Op : unsigned char { push_const, push_x, push_y, neg, add, sub, mul, div, pow, square };
  struct Instr {
    Op op;
    double value;
  };
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
};

}  // namespace compmap::expr
