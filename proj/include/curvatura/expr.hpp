#pragma once

#include <memory>
#include <string>
#include <variant>

#include "curvatura/common.hpp"

namespace curvatura {

enum class UnaryFn { Sin, Cos, Exp, Sqrt, Ln };
enum class BinOp { Add, Sub, Mul, Div };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable AST over variables {s,t}, real literals, +,-,*,/, integer powers,
/// unary minus and the function set {sin, cos, exp, sqrt, ln}.
struct ExprNode {
  struct Num {
    double value;
  };
  struct Var {
    char name;  // 's' or 't'
  };
  struct Neg {
    ExprPtr arg;
  };
  struct Bin {
    BinOp op;
    ExprPtr lhs, rhs;
  };
  struct Pow {
    ExprPtr base;
    int exponent;
  };
  struct Fun {
    UnaryFn fn;
    ExprPtr arg;
  };

  std::variant<Num, Var, Neg, Bin, Pow, Fun> node;
};

ExprPtr make_num(double v);
ExprPtr make_var(char name);
ExprPtr make_neg(ExprPtr e);
ExprPtr make_bin(BinOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_pow(ExprPtr base, int exponent);
ExprPtr make_fun(UnaryFn fn, ExprPtr arg);

/// Recursive-descent parser. Precedence ^ > unary minus > *,/ > +,- with left
/// associativity for the binary operators; exponents are integer literals;
/// functions require parentheses. Throws ParseError with a byte offset.
ExprPtr parse_expr(const std::string& src);

/// Canonical fully-parenthesized rendering; parse(print_expr(e)) is
/// structurally equal to e.
std::string print_expr(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

/// Plain evaluation. Throws DomainError on sqrt/ln of non-positive input or
/// division by zero, carrying the offending subexpression.
double eval_expr(const ExprPtr& e, double s, double t);

/// Substitute new expressions for the variables s and t (used to reparametrize
/// surfaces, e.g. by tangent-plane rotations).
ExprPtr substitute(const ExprPtr& e, const ExprPtr& for_s, const ExprPtr& for_t);

/// Symbolic partial derivative with respect to 's' or 't'. Used as an
/// independent oracle for the Taylor-jet frontend.
ExprPtr derive(const ExprPtr& e, char var);

}  // namespace curvatura
