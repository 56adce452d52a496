#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ltvstab {

using Complex = std::complex<double>;

enum class ExprKind {
  Const,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // constant real exponent only; general f^g is rewritten by the parser
  Neg,
  Exp,
  Ln,
  Sin,
  Cos,
  Sqrt
};

/// Immutable expression tree in the single variable t with complex scalars.
/// Copies share structure; every operation builds a new tree.
class Expr {
 public:
  struct Node {
    ExprKind kind;
    Complex value{0.0, 0.0};  // Const
    double expnt = 0.0;       // Pow
    std::shared_ptr<const Node> lhs, rhs;
  };

  /// Constant zero.
  Expr();

  static Expr constant(Complex v);
  static Expr constant(double v);
  static Expr var();

  static Expr add(const Expr& l, const Expr& r);
  static Expr sub(const Expr& l, const Expr& r);
  static Expr mul(const Expr& l, const Expr& r);
  static Expr div(const Expr& l, const Expr& r);
  static Expr pow(const Expr& base, double exponent);
  static Expr neg(const Expr& x);
  static Expr exp(const Expr& x);
  static Expr ln(const Expr& x);
  static Expr sin(const Expr& x);
  static Expr cos(const Expr& x);
  static Expr sqrt(const Expr& x);

  ExprKind kind() const { return node_->kind; }
  Complex const_value() const { return node_->value; }
  double exponent() const { return node_->expnt; }
  /// Left child of a binary node, or the operand of a unary node.
  Expr left() const { return Expr(node_->lhs); }
  Expr right() const { return Expr(node_->rhs); }
  bool is_const(Complex v) const {
    return node_->kind == ExprKind::Const && node_->value == v;
  }

  const Node* raw() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& l, const Expr& r);
Expr operator-(const Expr& l, const Expr& r);
Expr operator*(const Expr& l, const Expr& r);
Expr operator/(const Expr& l, const Expr& r);
Expr operator-(const Expr& x);

/// A point on the time axis; analysis routines only evaluate at t >= t0.
struct EvalPoint {
  double t;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t off, std::string exp)
      : std::runtime_error(msg), offset(off), expected(std::move(exp)) {}
  std::size_t offset;
  std::string expected;  // human-readable expected-token set
};

struct UnknownIdentifierError : ParseError {
  UnknownIdentifierError(const std::string& msg, std::size_t off, std::string name)
      : ParseError(msg, off, "known identifier"), identifier(std::move(name)) {}
  std::string identifier;
};

struct EvalError : std::runtime_error {
  EvalError(const std::string& msg, std::string tree)
      : std::runtime_error(msg), subtree(std::move(tree)) {}
  std::string subtree;  // canonical print of the offending subexpression
};

/// Parse the documented infix grammar. Throws ParseError / UnknownIdentifierError.
Expr parse_expr(std::string_view source);

/// Structural d/dt. Total on the node set; no simplification applied.
Expr differentiate(const Expr& e);

/// Conservative algebraic cleanup: constant folding, 0/1 identities,
/// constant collection in sums and products. Never loses evaluation faults
/// at regular points of the input.
Expr simplify(const Expr& e);

/// Evaluate at time t. Throws EvalError on division by zero or any
/// non-finite intermediate value, naming the offending subtree.
Complex eval(const Expr& e, double t);
inline Complex eval(const Expr& e, EvalPoint p) { return eval(e, p.t); }

/// Canonical printing; parse(to_string(e)) evaluates identically to e and
/// printing is idempotent across a parse round trip.
std::string to_string(const Expr& e);

/// True when e contains no occurrence of t; the folded value is written to
/// *value when requested.
bool is_constant(const Expr& e, Complex* value = nullptr);

/// Exact structural equality (same shape, same constants).
bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace ltvstab
