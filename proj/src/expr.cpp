#include "hjsd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

namespace hjsd {

namespace {

enum class Op {
  kNumber,
  kVarX,
  kVarY,
  kVarZ,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kAbs,
  kSin,
  kCos,
  kExp,
  kSqrt,
  kMin,
  kMax,
};

}  // namespace

struct ExpressionTree::Node {
  Op op;
  double value = 0.0;  // kNumber only
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ExpressionTree::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExpressionTree::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_number(double v) {
  auto n = std::make_shared<ExpressionTree::Node>();
  n->op = Op::kNumber;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr run() {
    if (text_.empty()) throw ExprParseError("empty expression", 0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (std::isspace(static_cast<unsigned char>(text_[i])))
        throw ExprParseError("whitespace not allowed in expression", i);
    }
    NodePtr e = expr();
    if (pos_ != text_.size())
      throw ExprParseError("unexpected character", pos_);
    return e;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  // expr := term (('+'|'-') term)*
  NodePtr expr() {
    NodePtr lhs = term();
    while (peek() == '+' || peek() == '-') {
      Op op = text_[pos_++] == '+' ? Op::kAdd : Op::kSub;
      lhs = make(op, lhs, term());
    }
    return lhs;
  }

  // term := unary (('*'|'/') unary)*
  NodePtr term() {
    NodePtr lhs = unary();
    while (peek() == '*' || peek() == '/') {
      Op op = text_[pos_++] == '*' ? Op::kMul : Op::kDiv;
      lhs = make(op, lhs, unary());
    }
    return lhs;
  }

  // unary := '-' unary | power
  // Unary minus binds looser than '^': -2^2 parses as -(2^2).
  NodePtr unary() {
    if (peek() == '-') {
      ++pos_;
      return make(Op::kNeg, unary());
    }
    return power();
  }

  // power := atom ('^' atom)*, left-associative
  NodePtr power() {
    NodePtr lhs = atom();
    while (peek() == '^') {
      ++pos_;
      lhs = make(Op::kPow, lhs, atom());
    }
    return lhs;
  }

  NodePtr atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ExprParseError(pos_ == text_.size() ? "unexpected end of input"
                                              : "unexpected character",
                         pos_);
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ExprParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return make_number(v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return make(Op::kVarX);
    if (name == "y") return make(Op::kVarY);
    if (name == "z") return make(Op::kVarZ);
    if (name == "pi") return make_number(M_PI);
    Op op;
    int arity = 1;
    if (name == "abs") op = Op::kAbs;
    else if (name == "sin") op = Op::kSin;
    else if (name == "cos") op = Op::kCos;
    else if (name == "exp") op = Op::kExp;
    else if (name == "sqrt") op = Op::kSqrt;
    else if (name == "min") { op = Op::kMin; arity = 2; }
    else if (name == "max") { op = Op::kMax; arity = 2; }
    else throw ExprParseError("unknown identifier '" + name + "'", start);
    expect('(');
    NodePtr a = expr();
    NodePtr b;
    if (arity == 2) {
      expect(',');
      b = expr();
    } else if (peek() == ',') {
      throw ExprParseError("function '" + name + "' takes one argument",
                           pos_);
    }
    expect(')');
    return make(op, a, b);
  }

  void expect(char c) {
    if (peek() != c)
      throw ExprParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

double eval_node(const ExpressionTree::Node& n, const Eigen::Vector3d& p) {
  double v;
  switch (n.op) {
    case Op::kNumber: return n.value;
    case Op::kVarX: return p.x();
    case Op::kVarY: return p.y();
    case Op::kVarZ: return p.z();
    case Op::kNeg: return -eval_node(*n.a, p);
    case Op::kAdd: v = eval_node(*n.a, p) + eval_node(*n.b, p); break;
    case Op::kSub: v = eval_node(*n.a, p) - eval_node(*n.b, p); break;
    case Op::kMul: v = eval_node(*n.a, p) * eval_node(*n.b, p); break;
    case Op::kDiv: v = eval_node(*n.a, p) / eval_node(*n.b, p); break;
    case Op::kPow: v = std::pow(eval_node(*n.a, p), eval_node(*n.b, p)); break;
    case Op::kAbs: return std::abs(eval_node(*n.a, p));
    case Op::kSin: return std::sin(eval_node(*n.a, p));
    case Op::kCos: return std::cos(eval_node(*n.a, p));
    case Op::kExp: v = std::exp(eval_node(*n.a, p)); break;
    case Op::kSqrt: v = std::sqrt(eval_node(*n.a, p)); break;
    case Op::kMin: {
      double a = eval_node(*n.a, p), b = eval_node(*n.b, p);
      return a < b ? a : b;
    }
    case Op::kMax: {
      double a = eval_node(*n.a, p), b = eval_node(*n.b, p);
      return a > b ? a : b;
    }
    default: v = std::nan("");
  }
  if (!std::isfinite(v)) throw ExprEvalError("non-finite value", p);
  return v;
}

bool uses_z_node(const ExpressionTree::Node& n) {
  if (n.op == Op::kVarZ) return true;
  if (n.a && uses_z_node(*n.a)) return true;
  if (n.b && uses_z_node(*n.b)) return true;
  return false;
}

void print_node(const ExpressionTree::Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.a, out);
    out += op;
    print_node(*n.b, out);
    out += ')';
  };
  auto call = [&](const char* f) {
    out += f;
    out += '(';
    print_node(*n.a, out);
    if (n.b) {
      out += ',';
      print_node(*n.b, out);
    }
    out += ')';
  };
  switch (n.op) {
    case Op::kNumber: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", n.value);
      // strtod round-trips %.17g, so eval semantics are preserved.
      if (n.value < 0) {
        out += '(';
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      break;
    }
    case Op::kVarX: out += 'x'; break;
    case Op::kVarY: out += 'y'; break;
    case Op::kVarZ: out += 'z'; break;
    case Op::kNeg:
      out += "(0-";
      print_node(*n.a, out);
      out += ')';
      break;
    case Op::kAdd: binary("+"); break;
    case Op::kSub: binary("-"); break;
    case Op::kMul: binary("*"); break;
    case Op::kDiv: binary("/"); break;
    case Op::kPow: binary("^"); break;
    case Op::kAbs: call("abs"); break;
    case Op::kSin: call("sin"); break;
    case Op::kCos: call("cos"); break;
    case Op::kExp: call("exp"); break;
    case Op::kSqrt: call("sqrt"); break;
    case Op::kMin: call("min"); break;
    case Op::kMax: call("max"); break;
  }
}

}  // namespace

ExpressionTree::ExpressionTree(std::shared_ptr<const Node> root)
    : root_(std::move(root)) {}

ExpressionTree ExpressionTree::parse(const std::string& text) {
  return ExpressionTree(Parser(text).run());
}

ExpressionTree ExpressionTree::constant(double v) {
  return ExpressionTree(make_number(v));
}

double ExpressionTree::eval(const Eigen::Vector3d& p) const {
  return eval_node(*root_, p);
}

bool ExpressionTree::uses_z() const { return uses_z_node(*root_); }

std::string ExpressionTree::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

}  // namespace hjsd
