#include "ltvstab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace ltvstab {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Expr::Node n) {
  return std::make_shared<const Expr::Node>(std::move(n));
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(Complex v) {
  return Expr(make_node({ExprKind::Const, v, 0.0, nullptr, nullptr}));
}
Expr Expr::constant(double v) { return constant(Complex(v, 0.0)); }
Expr Expr::var() {
  return Expr(make_node({ExprKind::Var, {}, 0.0, nullptr, nullptr}));
}

#define LTVSTAB_BINARY(name, kind)                                             \
  Expr Expr::name(const Expr& l, const Expr& r) {                             \
    return Expr(make_node({ExprKind::kind, {}, 0.0, l.node_, r.node_}));      \
  }
LTVSTAB_BINARY(add, Add)
LTVSTAB_BINARY(sub, Sub)
LTVSTAB_BINARY(mul, Mul)
LTVSTAB_BINARY(div, Div)
#undef LTVSTAB_BINARY

Expr Expr::pow(const Expr& base, double exponent) {
  return Expr(make_node({ExprKind::Pow, {}, exponent, base.node_, nullptr}));
}

#define LTVSTAB_UNARY(name, kind)                                              \
  Expr Expr::name(const Expr& x) {                                            \
    return Expr(make_node({ExprKind::kind, {}, 0.0, x.node_, nullptr}));      \
  }
LTVSTAB_UNARY(neg, Neg)
LTVSTAB_UNARY(exp, Exp)
LTVSTAB_UNARY(ln, Ln)
LTVSTAB_UNARY(sin, Sin)
LTVSTAB_UNARY(cos, Cos)
LTVSTAB_UNARY(sqrt, Sqrt)
#undef LTVSTAB_UNARY

Expr operator+(const Expr& l, const Expr& r) { return Expr::add(l, r); }
Expr operator-(const Expr& l, const Expr& r) { return Expr::sub(l, r); }
Expr operator*(const Expr& l, const Expr& r) { return Expr::mul(l, r); }
Expr operator/(const Expr& l, const Expr& r) { return Expr::div(l, r); }
Expr operator-(const Expr& x) { return Expr::neg(x); }

// ---------------------------------------------------------------------------
// printing

namespace {

// Shortest decimal string that parses back to exactly x. x must be finite
// and non-negative (signs are handled at the expression level).
std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

// Precedence levels used for parenthesization.
constexpr int kPrecAdd = 10;
constexpr int kPrecMul = 20;
constexpr int kPrecNeg = 30;
constexpr int kPrecPow = 40;
constexpr int kPrecAtom = 50;

struct Printed {
  std::string text;
  int prec;
};

std::string maybe_paren(const Printed& p, int min_prec) {
  if (p.prec < min_prec) return "(" + p.text + ")";
  return p.text;
}

Printed print_const(Complex v) {
  const double re = v.real(), im = v.imag();
  if (im == 0.0) {
    if (re < 0.0) return {"-" + format_double(-re), kPrecNeg};
    return {format_double(re), kPrecAtom};
  }
  if (re == 0.0) {
    if (im == 1.0) return {"i", kPrecAtom};
    if (im == -1.0) return {"-i", kPrecNeg};
    if (im < 0.0) return {"-" + format_double(-im) + "*i", kPrecNeg};
    return {format_double(im) + "*i", kPrecMul};
  }
  std::string re_part =
      re < 0.0 ? "-" + format_double(-re) : format_double(re);
  std::string im_part =
      im < 0.0 ? " - " : " + ";
  double ai = std::abs(im);
  im_part += ai == 1.0 ? "i" : format_double(ai) + "*i";
  return {re_part + im_part, kPrecAdd};
}

Printed print_node(const Expr::Node* n);

Printed print_binary(const Expr::Node* n, const char* op, int prec) {
  Printed l = print_node(n->lhs.get());
  Printed r = print_node(n->rhs.get());
  // Left-associative: the right operand needs strictly higher precedence.
  return {maybe_paren(l, prec) + op + maybe_paren(r, prec + 1), prec};
}

Printed print_node(const Expr::Node* n) {
  switch (n->kind) {
    case ExprKind::Const:
      return print_const(n->value);
    case ExprKind::Var:
      return {"t", kPrecAtom};
    case ExprKind::Add:
      return print_binary(n, " + ", kPrecAdd);
    case ExprKind::Sub:
      return print_binary(n, " - ", kPrecAdd);
    case ExprKind::Mul:
      return print_binary(n, "*", kPrecMul);
    case ExprKind::Div:
      return print_binary(n, "/", kPrecMul);
    case ExprKind::Pow: {
      Printed base = print_node(n->lhs.get());
      double e = n->expnt;
      std::string es = e < 0.0 ? "-" + format_double(-e) : format_double(e);
      return {maybe_paren(base, kPrecAtom) + "^" + es, kPrecPow};
    }
    case ExprKind::Neg: {
      Printed x = print_node(n->lhs.get());
      return {"-" + maybe_paren(x, kPrecNeg), kPrecNeg};
    }
    case ExprKind::Exp:
      return {"exp(" + print_node(n->lhs.get()).text + ")", kPrecAtom};
    case ExprKind::Ln:
      return {"ln(" + print_node(n->lhs.get()).text + ")", kPrecAtom};
    case ExprKind::Sin:
      return {"sin(" + print_node(n->lhs.get()).text + ")", kPrecAtom};
    case ExprKind::Cos:
      return {"cos(" + print_node(n->lhs.get()).text + ")", kPrecAtom};
    case ExprKind::Sqrt:
      return {"sqrt(" + print_node(n->lhs.get()).text + ")", kPrecAtom};
  }
  return {"?", kPrecAtom};
}

}  // namespace

std::string to_string(const Expr& e) { return print_node(e.raw()).text; }

// ---------------------------------------------------------------------------
// evaluation

namespace {

bool finite(Complex v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

[[noreturn]] void eval_fault(const char* what, const Expr::Node* n) {
  Printed p = print_node(n);
  throw EvalError(std::string(what) + " while evaluating `" + p.text + "`",
                  p.text);
}

// Collapse a signed-zero imaginary part so branch-cut functions (ln, sqrt,
// fractional pow) always see the principal side of the negative real axis.
Complex principal_side(Complex x) {
  if (x.imag() == 0.0) return Complex(x.real(), 0.0);
  return x;
}

Complex powi(Complex base, long n) {
  if (n < 0) return Complex(1.0, 0.0) / powi(base, -n);
  Complex r(1.0, 0.0), b = base;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

Complex eval_node(const Expr::Node* n, double t) {
  switch (n->kind) {
    case ExprKind::Const:
      return n->value;
    case ExprKind::Var:
      return Complex(t, 0.0);
    case ExprKind::Add: {
      Complex v = eval_node(n->lhs.get(), t) + eval_node(n->rhs.get(), t);
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Sub: {
      Complex v = eval_node(n->lhs.get(), t) - eval_node(n->rhs.get(), t);
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Mul: {
      Complex v = eval_node(n->lhs.get(), t) * eval_node(n->rhs.get(), t);
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Div: {
      Complex den = eval_node(n->rhs.get(), t);
      if (den == Complex(0.0, 0.0)) eval_fault("division by zero", n);
      Complex v = eval_node(n->lhs.get(), t) / den;
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Pow: {
      double e = n->expnt;
      if (e == 0.0) return Complex(1.0, 0.0);
      Complex b = eval_node(n->lhs.get(), t);
      if (b == Complex(0.0, 0.0)) {
        if (e > 0.0) return Complex(0.0, 0.0);
        eval_fault("zero raised to a negative power", n);
      }
      Complex v;
      double ip;
      if (std::modf(e, &ip) == 0.0 && std::abs(e) <= 64.0) {
        v = powi(b, static_cast<long>(e));
      } else if (b.imag() == 0.0 && b.real() > 0.0) {
        v = Complex(std::pow(b.real(), e), 0.0);
      } else {
        v = std::pow(principal_side(b), Complex(e, 0.0));
      }
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Neg:
      return -eval_node(n->lhs.get(), t);
    case ExprKind::Exp: {
      Complex x = eval_node(n->lhs.get(), t);
      Complex v = x.imag() == 0.0 ? Complex(std::exp(x.real()), 0.0)
                                  : std::exp(x);
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Ln: {
      Complex x = eval_node(n->lhs.get(), t);
      if (x == Complex(0.0, 0.0)) eval_fault("ln of zero", n);
      Complex v = x.imag() == 0.0 && x.real() > 0.0
                      ? Complex(std::log(x.real()), 0.0)
                      : std::log(principal_side(x));
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Sin: {
      Complex x = eval_node(n->lhs.get(), t);
      Complex v = x.imag() == 0.0 ? Complex(std::sin(x.real()), 0.0)
                                  : std::sin(x);
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Cos: {
      Complex x = eval_node(n->lhs.get(), t);
      Complex v = x.imag() == 0.0 ? Complex(std::cos(x.real()), 0.0)
                                  : std::cos(x);
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
    case ExprKind::Sqrt: {
      Complex x = eval_node(n->lhs.get(), t);
      Complex v = x.imag() == 0.0 && x.real() >= 0.0
                      ? Complex(std::sqrt(x.real()), 0.0)
                      : std::sqrt(principal_side(x));
      if (!finite(v)) eval_fault("non-finite value", n);
      return v;
    }
  }
  eval_fault("corrupt node", n);
}

}  // namespace

Complex eval(const Expr& e, double t) { return eval_node(e.raw(), t); }

// ---------------------------------------------------------------------------
// differentiation

Expr differentiate(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Const:
      return Expr::constant(0.0);
    case ExprKind::Var:
      return Expr::constant(1.0);
    case ExprKind::Add:
      return differentiate(e.left()) + differentiate(e.right());
    case ExprKind::Sub:
      return differentiate(e.left()) - differentiate(e.right());
    case ExprKind::Mul:
      return differentiate(e.left()) * e.right() +
             e.left() * differentiate(e.right());
    case ExprKind::Div: {
      Expr num = differentiate(e.left()) * e.right() -
                 e.left() * differentiate(e.right());
      return num / Expr::pow(e.right(), 2.0);
    }
    case ExprKind::Pow: {
      double k = e.exponent();
      if (k == 0.0) return Expr::constant(0.0);
      return Expr::constant(k) * Expr::pow(e.left(), k - 1.0) *
             differentiate(e.left());
    }
    case ExprKind::Neg:
      return -differentiate(e.left());
    case ExprKind::Exp:
      return Expr::exp(e.left()) * differentiate(e.left());
    case ExprKind::Ln:
      return differentiate(e.left()) / e.left();
    case ExprKind::Sin:
      return Expr::cos(e.left()) * differentiate(e.left());
    case ExprKind::Cos:
      return -(Expr::sin(e.left()) * differentiate(e.left()));
    case ExprKind::Sqrt:
      return differentiate(e.left()) /
             (Expr::constant(2.0) * Expr::sqrt(e.left()));
  }
  return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------
// structural helpers

bool structurally_equal(const Expr& a, const Expr& b) {
  const Expr::Node* x = a.raw();
  const Expr::Node* y = b.raw();
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case ExprKind::Const:
      return x->value == y->value;
    case ExprKind::Var:
      return true;
    case ExprKind::Pow:
      return x->expnt == y->expnt && structurally_equal(a.left(), b.left());
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
      return structurally_equal(a.left(), b.left()) &&
             structurally_equal(a.right(), b.right());
    default:
      return structurally_equal(a.left(), b.left());
  }
}

namespace {

bool contains_var(const Expr::Node* n) {
  if (n->kind == ExprKind::Var) return true;
  if (n->lhs && contains_var(n->lhs.get())) return true;
  if (n->rhs && contains_var(n->rhs.get())) return true;
  return false;
}

}  // namespace

bool is_constant(const Expr& e, Complex* value) {
  if (contains_var(e.raw())) return false;
  try {
    Complex v = eval(e, 0.0);
    if (value) *value = v;
    return true;
  } catch (const EvalError&) {
    return false;  // constant tree that cannot be folded (e.g. 1/0)
  }
}

// ---------------------------------------------------------------------------
// simplification

namespace {

bool is_const_node(const Expr& e, Complex* v = nullptr) {
  if (e.kind() != ExprKind::Const) return false;
  if (v) *v = e.const_value();
  return true;
}

// Fold only when the folded value is finite so evaluation faults are kept.
Expr fold_or(const Expr& original, Complex v) {
  if (finite(v)) return Expr::constant(v);
  return original;
}

Expr simplify_node(const Expr& e);

Expr simplify_add(const Expr& l, const Expr& r) {
  Complex cl, cr;
  bool lc = is_const_node(l, &cl), rc = is_const_node(r, &cr);
  if (lc && cl == Complex(0.0, 0.0)) return r;
  if (rc && cr == Complex(0.0, 0.0)) return l;
  if (lc && rc) return fold_or(l + r, cl + cr);
  if (rc && !lc) return Expr::add(r, l);  // constants to the left
  if (lc && r.kind() == ExprKind::Add) {
    Complex crl;
    if (is_const_node(r.left(), &crl))
      return Expr::add(Expr::constant(cl + crl), r.right());
  }
  return Expr::add(l, r);
}

Expr simplify_sub(const Expr& l, const Expr& r) {
  Complex cl, cr;
  bool lc = is_const_node(l, &cl), rc = is_const_node(r, &cr);
  if (rc && cr == Complex(0.0, 0.0)) return l;
  if (lc && cl == Complex(0.0, 0.0)) return simplify_node(Expr::neg(r));
  if (lc && rc) return fold_or(l - r, cl - cr);
  if (structurally_equal(l, r)) return Expr::constant(0.0);
  return Expr::sub(l, r);
}

Expr simplify_mul(const Expr& l, const Expr& r) {
  Complex cl, cr;
  bool lc = is_const_node(l, &cl), rc = is_const_node(r, &cr);
  if (lc && cl == Complex(0.0, 0.0)) return Expr::constant(0.0);
  if (rc && cr == Complex(0.0, 0.0)) return Expr::constant(0.0);
  if (lc && cl == Complex(1.0, 0.0)) return r;
  if (rc && cr == Complex(1.0, 0.0)) return l;
  if (lc && rc) return fold_or(l * r, cl * cr);
  if (rc && !lc) return simplify_mul(r, l);  // constants to the left
  if (lc && cl == Complex(-1.0, 0.0)) return simplify_node(Expr::neg(r));
  if (lc && r.kind() == ExprKind::Mul) {
    Complex crl;
    if (is_const_node(r.left(), &crl))
      return Expr::mul(Expr::constant(cl * crl), r.right());
  }
  return Expr::mul(l, r);
}

Expr simplify_div(const Expr& l, const Expr& r) {
  Complex cl, cr;
  bool lc = is_const_node(l, &cl), rc = is_const_node(r, &cr);
  bool r_zero = rc && cr == Complex(0.0, 0.0);
  if (lc && cl == Complex(0.0, 0.0) && !r_zero) return Expr::constant(0.0);
  if (rc && cr == Complex(1.0, 0.0)) return l;
  if (lc && rc && !r_zero) return fold_or(l / r, cl / cr);
  return Expr::div(l, r);
}

Expr simplify_node(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::Var:
      return e;
    case ExprKind::Add:
      return simplify_add(simplify_node(e.left()), simplify_node(e.right()));
    case ExprKind::Sub:
      return simplify_sub(simplify_node(e.left()), simplify_node(e.right()));
    case ExprKind::Mul:
      return simplify_mul(simplify_node(e.left()), simplify_node(e.right()));
    case ExprKind::Div:
      return simplify_div(simplify_node(e.left()), simplify_node(e.right()));
    case ExprKind::Pow: {
      Expr b = simplify_node(e.left());
      double k = e.exponent();
      if (k == 0.0) return Expr::constant(1.0);
      if (k == 1.0) return b;
      Complex cb;
      if (is_const_node(b, &cb)) {
        Expr folded = Expr::pow(b, k);
        try {
          return fold_or(folded, eval(folded, 0.0));
        } catch (const EvalError&) {
          return folded;
        }
      }
      return Expr::pow(b, k);
    }
    case ExprKind::Neg: {
      Expr x = simplify_node(e.left());
      Complex cx;
      if (is_const_node(x, &cx)) return Expr::constant(-cx);
      if (x.kind() == ExprKind::Neg) return x.left();
      return Expr::neg(x);
    }
    case ExprKind::Exp:
    case ExprKind::Ln:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Sqrt: {
      Expr x = simplify_node(e.left());
      Expr rebuilt = e.kind() == ExprKind::Exp   ? Expr::exp(x)
                     : e.kind() == ExprKind::Ln  ? Expr::ln(x)
                     : e.kind() == ExprKind::Sin ? Expr::sin(x)
                     : e.kind() == ExprKind::Cos ? Expr::cos(x)
                                                 : Expr::sqrt(x);
      if (is_const_node(x)) {
        try {
          return fold_or(rebuilt, eval(rebuilt, 0.0));
        } catch (const EvalError&) {
          return rebuilt;
        }
      }
      return rebuilt;
    }
  }
  return e;
}

}  // namespace

Expr simplify(const Expr& e) { return simplify_node(e); }

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Lexer {
  enum class Tok { End, Num, Ident, Plus, Minus, Star, Slash, Caret, LPar, RPar };

  explicit Lexer(std::string_view s) : src(s) { advance(); }

  std::string_view src;
  std::size_t pos = 0;       // current scan position
  std::size_t tok_pos = 0;   // start offset of the current token
  Tok tok = Tok::End;
  double num = 0.0;
  std::string_view ident;

  void advance() {
    while (pos < src.size() &&
           std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
    tok_pos = pos;
    if (pos >= src.size()) {
      tok = Tok::End;
      return;
    }
    char c = src[pos];
    switch (c) {
      case '+': tok = Tok::Plus; ++pos; return;
      case '-': tok = Tok::Minus; ++pos; return;
      case '*': tok = Tok::Star; ++pos; return;
      case '/': tok = Tok::Slash; ++pos; return;
      case '^': tok = Tok::Caret; ++pos; return;
      case '(': tok = Tok::LPar; ++pos; return;
      case ')': tok = Tok::RPar; ++pos; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t b = pos;
      while (pos < src.size() &&
             std::isalpha(static_cast<unsigned char>(src[pos])))
        ++pos;
      ident = src.substr(b, pos - b);
      tok = Tok::Ident;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "' at offset " +
                         std::to_string(pos),
                     pos, "number, 'i', 't', function, '(', ')' or operator");
  }

  void lex_number() {
    std::size_t b = pos;
    while (pos < src.size() &&
           std::isdigit(static_cast<unsigned char>(src[pos])))
      ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[pos])))
        ++pos;
    }
    // exponent part only when digits follow, so `2exp(t)` lexes as 2, exp(
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t e = pos + 1;
      if (e < src.size() && (src[e] == '+' || src[e] == '-')) ++e;
      if (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
        pos = e;
        while (pos < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[pos])))
          ++pos;
      }
    }
    std::string text(src.substr(b, pos - b));
    char* end = nullptr;
    num = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
      throw ParseError("malformed number at offset " + std::to_string(b), b,
                       "number");
    tok = Tok::Num;
  }
};

struct Parser {
  Lexer lex;

  explicit Parser(std::string_view s) : lex(s) {}

  [[noreturn]] void fail(const std::string& what, const std::string& expected) {
    throw ParseError(what + " at offset " + std::to_string(lex.tok_pos),
                     lex.tok_pos, expected);
  }

  Expr parse() {
    Expr e = parse_sum();
    if (lex.tok != Lexer::Tok::End)
      fail("unexpected trailing input", "operator or end of input");
    return e;
  }

  Expr parse_sum() {
    Expr e = parse_term();
    while (lex.tok == Lexer::Tok::Plus || lex.tok == Lexer::Tok::Minus) {
      bool plus = lex.tok == Lexer::Tok::Plus;
      lex.advance();
      Expr r = parse_term();
      e = plus ? Expr::add(e, r) : Expr::sub(e, r);
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (lex.tok == Lexer::Tok::Star || lex.tok == Lexer::Tok::Slash) {
      bool mul = lex.tok == Lexer::Tok::Star;
      lex.advance();
      Expr r = parse_unary();
      e = mul ? Expr::mul(e, r) : Expr::div(e, r);
    }
    return e;
  }

  // '^' binds tighter than unary minus: -t^2 is -(t^2).
  Expr parse_unary() {
    if (lex.tok == Lexer::Tok::Minus) {
      lex.advance();
      return Expr::neg(parse_unary());
    }
    return parse_factor();
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (lex.tok != Lexer::Tok::Caret) return base;
    lex.advance();
    Expr e = parse_unary();
    Complex v;
    if (is_constant(e, &v) && v.imag() == 0.0)
      return Expr::pow(base, v.real());
    // Non-constant or complex exponent: f^g as exp(g*ln(f)).
    return Expr::exp(Expr::mul(e, Expr::ln(base)));
  }

  Expr parse_base() {
    switch (lex.tok) {
      case Lexer::Tok::Num: {
        double v = lex.num;
        lex.advance();
        return Expr::constant(v);
      }
      case Lexer::Tok::LPar: {
        lex.advance();
        Expr e = parse_sum();
        if (lex.tok != Lexer::Tok::RPar) fail("missing ')'", "')'");
        lex.advance();
        return e;
      }
      case Lexer::Tok::Ident: {
        std::string_view name = lex.ident;
        std::size_t at = lex.tok_pos;
        lex.advance();
        if (name == "t") return Expr::var();
        if (name == "i") return Expr::constant(Complex(0.0, 1.0));
        Expr (*fn)(const Expr&) = nullptr;
        if (name == "exp") fn = &Expr::exp;
        else if (name == "ln") fn = &Expr::ln;
        else if (name == "sin") fn = &Expr::sin;
        else if (name == "cos") fn = &Expr::cos;
        else if (name == "sqrt") fn = &Expr::sqrt;
        if (!fn)
          throw UnknownIdentifierError("unknown identifier '" +
                                           std::string(name) + "' at offset " +
                                           std::to_string(at),
                                       at, std::string(name));
        if (lex.tok != Lexer::Tok::LPar) fail("expected '('", "'('");
        lex.advance();
        Expr arg = parse_sum();
        if (lex.tok != Lexer::Tok::RPar) fail("missing ')'", "')'");
        lex.advance();
        return fn(arg);
      }
      default:
        fail("expected expression",
             "number, 'i', 't', function, '(' or '-'");
    }
  }
};

}  // namespace

Expr parse_expr(std::string_view source) { return Parser(source).parse(); }

}  // namespace ltvstab
