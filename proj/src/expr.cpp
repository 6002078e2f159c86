#include "curvatura/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace curvatura {

ExprPtr make_num(double v) {
  return std::make_shared<const ExprNode>(ExprNode{ExprNode::Num{v}});
}
ExprPtr make_var(char name) {
  return std::make_shared<const ExprNode>(ExprNode{ExprNode::Var{name}});
}
ExprPtr make_neg(ExprPtr e) {
  // fold the sign into numeric literals so printing round-trips structurally
  if (const auto* num = std::get_if<ExprNode::Num>(&e->node))
    return make_num(-num->value);
  return std::make_shared<const ExprNode>(ExprNode{ExprNode::Neg{std::move(e)}});
}
ExprPtr make_bin(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const ExprNode>(
      ExprNode{ExprNode::Bin{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_pow(ExprPtr base, int exponent) {
  return std::make_shared<const ExprNode>(
      ExprNode{ExprNode::Pow{std::move(base), exponent}});
}
ExprPtr make_fun(UnaryFn fn, ExprPtr arg) {
  return std::make_shared<const ExprNode>(ExprNode{ExprNode::Fun{fn, std::move(arg)}});
}

namespace {

class Parser {
public:
  explicit Parser(const std::string& src) : src_(src) {}

  ExprPtr parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ < src_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

private:
  const std::string& src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (consume('+'))
        lhs = make_bin(BinOp::Add, lhs, parse_term());
      else if (consume('-'))
        lhs = make_bin(BinOp::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      if (consume('*'))
        lhs = make_bin(BinOp::Mul, lhs, parse_unary());
      else if (consume('/'))
        lhs = make_bin(BinOp::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  ExprPtr parse_unary() {
    if (consume('-')) return make_neg(parse_unary());  // folds literals
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (consume('^')) {
      skip_ws();
      const std::size_t at = pos_;
      bool negative = false;
      if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
        negative = src_[pos_] == '-';
        ++pos_;
      }
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        throw ParseError("exponent must be an integer literal", at);
      long v = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        v = v * 10 + (src_[pos_] - '0');
        if (v > 1000) throw ParseError("exponent too large", at);
        ++pos_;
      }
      return make_pow(base, static_cast<int>(negative ? -v : v));
    }
    return base;
  }

  ExprPtr parse_primary() {
    const char c = peek();
    const std::size_t at = pos_;
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ident += src_[pos_++];
      if (ident == "s") return make_var('s');
      if (ident == "t") return make_var('t');
      UnaryFn fn;
      if (ident == "sin")
        fn = UnaryFn::Sin;
      else if (ident == "cos")
        fn = UnaryFn::Cos;
      else if (ident == "exp")
        fn = UnaryFn::Exp;
      else if (ident == "sqrt")
        fn = UnaryFn::Sqrt;
      else if (ident == "ln")
        fn = UnaryFn::Ln;
      else
        throw ParseError("unknown identifier '" + ident + "'", at);
      if (!consume('(')) throw ParseError("function requires parentheses", pos_);
      ExprPtr arg = parse_sum();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return make_fun(fn, arg);
    }
    throw ParseError("unexpected character", at);
  }

  ExprPtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // not an exponent suffix
      }
    }
    if (pos_ == start) throw ParseError("expected number", start);
    const std::string text = src_.substr(start, pos_ - start);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
      throw ParseError("malformed number '" + text + "'", start);
    return make_num(v);
  }
};

const char* fn_name(UnaryFn f) {
  switch (f) {
    case UnaryFn::Sin:
      return "sin";
    case UnaryFn::Cos:
      return "cos";
    case UnaryFn::Exp:
      return "exp";
    case UnaryFn::Sqrt:
      return "sqrt";
    case UnaryFn::Ln:
      return "ln";
  }
  return "?";
}

char op_char(BinOp op) {
  switch (op) {
    case BinOp::Add:
      return '+';
    case BinOp::Sub:
      return '-';
    case BinOp::Mul:
      return '*';
    case BinOp::Div:
      return '/';
  }
  return '?';
}

void print_to(const ExprPtr& e, std::ostream& os) {
  std::visit(
      [&os](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExprNode::Num>) {
          std::ostringstream tmp;
          tmp.precision(17);
          tmp << n.value;
          std::string text = tmp.str();
          if (n.value < 0.0)
            os << '(' << text << ')';
          else
            os << text;
        } else if constexpr (std::is_same_v<T, ExprNode::Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, ExprNode::Neg>) {
          os << "(-";
          print_to(n.arg, os);
          os << ')';
        } else if constexpr (std::is_same_v<T, ExprNode::Bin>) {
          os << '(';
          print_to(n.lhs, os);
          os << op_char(n.op);
          print_to(n.rhs, os);
          os << ')';
        } else if constexpr (std::is_same_v<T, ExprNode::Pow>) {
          os << '(';
          print_to(n.base, os);
          os << '^' << n.exponent << ')';
        } else {
          os << fn_name(n.fn) << '(';
          print_to(n.arg, os);
          os << ')';
        }
      },
      e->node);
}

}  // namespace

ExprPtr parse_expr(const std::string& src) {
  if (src.empty()) throw ParseError("empty expression", 0);
  return Parser(src).parse();
}

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_to(e, os);
  return os.str();
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  if (const auto* na = std::get_if<ExprNode::Num>(&a->node))
    return na->value == std::get<ExprNode::Num>(b->node).value;
  if (const auto* va = std::get_if<ExprNode::Var>(&a->node))
    return va->name == std::get<ExprNode::Var>(b->node).name;
  if (const auto* ga = std::get_if<ExprNode::Neg>(&a->node))
    return structurally_equal(ga->arg, std::get<ExprNode::Neg>(b->node).arg);
  if (const auto* ba = std::get_if<ExprNode::Bin>(&a->node)) {
    const auto& bb = std::get<ExprNode::Bin>(b->node);
    return ba->op == bb.op && structurally_equal(ba->lhs, bb.lhs) &&
           structurally_equal(ba->rhs, bb.rhs);
  }
  if (const auto* pa = std::get_if<ExprNode::Pow>(&a->node)) {
    const auto& pb = std::get<ExprNode::Pow>(b->node);
    return pa->exponent == pb.exponent && structurally_equal(pa->base, pb.base);
  }
  const auto& fa = std::get<ExprNode::Fun>(a->node);
  const auto& fb = std::get<ExprNode::Fun>(b->node);
  return fa.fn == fb.fn && structurally_equal(fa.arg, fb.arg);
}

double eval_expr(const ExprPtr& e, double s, double t) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExprNode::Num>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, ExprNode::Var>) {
          return n.name == 's' ? s : t;
        } else if constexpr (std::is_same_v<T, ExprNode::Neg>) {
          return -eval_expr(n.arg, s, t);
        } else if constexpr (std::is_same_v<T, ExprNode::Bin>) {
          const double a = eval_expr(n.lhs, s, t);
          const double b = eval_expr(n.rhs, s, t);
          switch (n.op) {
            case BinOp::Add:
              return a + b;
            case BinOp::Sub:
              return a - b;
            case BinOp::Mul:
              return a * b;
            case BinOp::Div:
              if (b == 0.0) throw DomainError("division by zero", print_expr(n.rhs));
              return a / b;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, ExprNode::Pow>) {
          const double base = eval_expr(n.base, s, t);
          if (n.exponent < 0 && base == 0.0)
            throw DomainError("division by zero", print_expr(n.base));
          return std::pow(base, n.exponent);
        } else {
          const double x = eval_expr(n.arg, s, t);
          switch (n.fn) {
            case UnaryFn::Sin:
              return std::sin(x);
            case UnaryFn::Cos:
              return std::cos(x);
            case UnaryFn::Exp:
              return std::exp(x);
            case UnaryFn::Sqrt:
              if (x <= 0.0)
                throw DomainError("sqrt of non-positive value", print_expr(n.arg));
              return std::sqrt(x);
            case UnaryFn::Ln:
              if (x <= 0.0)
                throw DomainError("ln of non-positive value", print_expr(n.arg));
              return std::log(x);
          }
          return 0.0;
        }
      },
      e->node);
}

ExprPtr substitute(const ExprPtr& e, const ExprPtr& for_s, const ExprPtr& for_t) {
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExprNode::Num>) {
          return e;
        } else if constexpr (std::is_same_v<T, ExprNode::Var>) {
          return n.name == 's' ? for_s : for_t;
        } else if constexpr (std::is_same_v<T, ExprNode::Neg>) {
          return make_neg(substitute(n.arg, for_s, for_t));
        } else if constexpr (std::is_same_v<T, ExprNode::Bin>) {
          return make_bin(n.op, substitute(n.lhs, for_s, for_t),
                          substitute(n.rhs, for_s, for_t));
        } else if constexpr (std::is_same_v<T, ExprNode::Pow>) {
          return make_pow(substitute(n.base, for_s, for_t), n.exponent);
        } else {
          return make_fun(n.fn, substitute(n.arg, for_s, for_t));
        }
      },
      e->node);
}

ExprPtr derive(const ExprPtr& e, char var) {
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExprNode::Num>) {
          return make_num(0.0);
        } else if constexpr (std::is_same_v<T, ExprNode::Var>) {
          return make_num(n.name == var ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<T, ExprNode::Neg>) {
          return make_neg(derive(n.arg, var));
        } else if constexpr (std::is_same_v<T, ExprNode::Bin>) {
          ExprPtr dl = derive(n.lhs, var);
          ExprPtr dr = derive(n.rhs, var);
          switch (n.op) {
            case BinOp::Add:
              return make_bin(BinOp::Add, dl, dr);
            case BinOp::Sub:
              return make_bin(BinOp::Sub, dl, dr);
            case BinOp::Mul:
              return make_bin(BinOp::Add, make_bin(BinOp::Mul, dl, n.rhs),
                              make_bin(BinOp::Mul, n.lhs, dr));
            case BinOp::Div:
              // (f/g)' = (f'g - fg') / g^2
              return make_bin(
                  BinOp::Div,
                  make_bin(BinOp::Sub, make_bin(BinOp::Mul, dl, n.rhs),
                           make_bin(BinOp::Mul, n.lhs, dr)),
                  make_pow(n.rhs, 2));
          }
          return make_num(0.0);
        } else if constexpr (std::is_same_v<T, ExprNode::Pow>) {
          if (n.exponent == 0) return make_num(0.0);
          return make_bin(
              BinOp::Mul,
              make_bin(BinOp::Mul, make_num(static_cast<double>(n.exponent)),
                       make_pow(n.base, n.exponent - 1)),
              derive(n.base, var));
        } else {
          ExprPtr da = derive(n.arg, var);
          switch (n.fn) {
            case UnaryFn::Sin:
              return make_bin(BinOp::Mul, make_fun(UnaryFn::Cos, n.arg), da);
            case UnaryFn::Cos:
              return make_neg(
                  make_bin(BinOp::Mul, make_fun(UnaryFn::Sin, n.arg), da));
            case UnaryFn::Exp:
              return make_bin(BinOp::Mul, make_fun(UnaryFn::Exp, n.arg), da);
            case UnaryFn::Sqrt:
              return make_bin(
                  BinOp::Div, da,
                  make_bin(BinOp::Mul, make_num(2.0),
                           make_fun(UnaryFn::Sqrt, n.arg)));
            case UnaryFn::Ln:
              return make_bin(BinOp::Div, da, n.arg);
          }
          return make_num(0.0);
        }
      },
      e->node);
}

}  // namespace curvatura
