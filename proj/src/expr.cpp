#include "varlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

#include "varlab/numfmt.hpp"

namespace varlab {

namespace {

enum class Op {
  number, variable, constant_pi,
  neg, add, sub, mul, div, pow,
  sin, cos, exp, log, sqrt, abs, min, max, atan2,
};

struct FnInfo {
  Op op;
  int arity;
};

const std::map<std::string, FnInfo>& functions() {
  static const std::map<std::string, FnInfo> table = {
      {"sin", {Op::sin, 1}},   {"cos", {Op::cos, 1}},
      {"exp", {Op::exp, 1}},   {"log", {Op::log, 1}},
      {"sqrt", {Op::sqrt, 1}}, {"abs", {Op::abs, 1}},
      {"min", {Op::min, 2}},   {"max", {Op::max, 2}},
      {"atan2", {Op::atan2, 2}},
  };
  return table;
}

}  // namespace

struct Expression::Node {
  Op op;
  double value = 0.0;  // number payload
  int var = 0;         // variable payload
  NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError(pos_, {"operator", "end of input"}, "trailing input");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace((unsigned char)src_[pos_])) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos_, {std::string(1, c)}, what);
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (accept('+'))
        e = make(Op::add, e, term());
      else if (accept('-'))
        e = make(Op::sub, e, term());
      else
        return e;
    }
  }

  NodePtr term() {
    NodePtr e = factor();
    while (true) {
      if (accept('*'))
        e = make(Op::mul, e, factor());
      else if (accept('/'))
        e = make(Op::div, e, factor());
      else
        return e;
    }
  }

  NodePtr factor() {
    if (accept('-')) return make(Op::neg, factor());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, factor());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError(pos_, {"number", "variable", "function", "("},
                       "unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')', "unbalanced parenthesis");
      return e;
    }
    if (std::isdigit((unsigned char)c) || c == '.') return number();
    if (std::isalpha((unsigned char)c) || c == '_') return identifier();
    throw ParseError(pos_, {"number", "variable", "function", "("},
                     "unexpected token");
  }

  NodePtr number() {
    const char* start = src_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) throw ParseError(pos_, {"number"}, "malformed number");
    pos_ += static_cast<std::size_t>(end - start);
    auto n = make(Op::number);
    const_cast<Node*>(n.get())->value = v;
    return n;
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
      ++pos_;
    std::string name = src_.substr(start, pos_ - start);

    if (name == "pi") return make(Op::constant_pi);
    static const std::string vars = "xyzw";
    if (name.size() == 1 && vars.find(name[0]) != std::string::npos) {
      auto n = make(Op::variable);
      const_cast<Node*>(n.get())->var = static_cast<int>(vars.find(name[0]));
      return n;
    }

    auto it = functions().find(name);
    if (it == functions().end())
      throw ParseError(start, {"variable", "function"},
                       "unknown identifier '" + name + "'");
    expect('(', "expected argument list");
    std::vector<NodePtr> args;
    if (peek() != ')') {
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
    }
    expect(')', "unterminated argument list");
    if ((int)args.size() != it->second.arity)
      throw ParseError(start, {},
                       name + " takes " + std::to_string(it->second.arity) +
                           " argument(s), got " + std::to_string(args.size()));
    return make(it->second.op, args[0],
                it->second.arity == 2 ? args[1] : nullptr);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
};

[[noreturn]] void eval_fault(const std::string& what) {
  throw Error(ErrorKind::evaluation_error, what);
}

double eval_node(const Node& n, const Vec& p) {
  switch (n.op) {
    case Op::number: return n.value;
    case Op::constant_pi: return M_PI;
    case Op::variable:
      if (n.var >= p.size())
        eval_fault("variable '" + std::string(1, "xyzw"[n.var]) +
                   "' not supplied");
      return p[n.var];
    case Op::neg: return -eval_node(*n.a, p);
    case Op::add: return eval_node(*n.a, p) + eval_node(*n.b, p);
    case Op::sub: return eval_node(*n.a, p) - eval_node(*n.b, p);
    case Op::mul: return eval_node(*n.a, p) * eval_node(*n.b, p);
    case Op::div: {
      double d = eval_node(*n.b, p);
      if (d == 0.0) eval_fault("division by zero");
      return eval_node(*n.a, p) / d;
    }
    case Op::pow: {
      double base = eval_node(*n.a, p);
      double ex = eval_node(*n.b, p);
      if (base < 0.0 && ex != std::floor(ex))
        eval_fault("fractional power of negative base");
      if (base == 0.0 && ex < 0.0) eval_fault("zero to a negative power");
      double r = std::pow(base, ex);
      if (!std::isfinite(r)) eval_fault("overflow in power");
      return r;
    }
    case Op::sin: return std::sin(eval_node(*n.a, p));
    case Op::cos: return std::cos(eval_node(*n.a, p));
    case Op::exp: {
      double r = std::exp(eval_node(*n.a, p));
      if (!std::isfinite(r)) eval_fault("overflow in exp");
      return r;
    }
    case Op::log: {
      double v = eval_node(*n.a, p);
      if (v <= 0.0) eval_fault("log of non-positive value");
      return std::log(v);
    }
    case Op::sqrt: {
      double v = eval_node(*n.a, p);
      if (v < 0.0) eval_fault("sqrt of negative value");
      return std::sqrt(v);
    }
    case Op::abs: return std::abs(eval_node(*n.a, p));
    case Op::min:
      return std::min(eval_node(*n.a, p), eval_node(*n.b, p));
    case Op::max:
      return std::max(eval_node(*n.a, p), eval_node(*n.b, p));
    case Op::atan2:
      return std::atan2(eval_node(*n.a, p), eval_node(*n.b, p));
  }
  eval_fault("corrupt expression tree");
}

int max_var(const Node& n) {
  int m = n.op == Op::variable ? n.var + 1 : 0;
  if (n.a) m = std::max(m, max_var(*n.a));
  if (n.b) m = std::max(m, max_var(*n.b));
  return m;
}

std::string print_node(const Node& n) {
  switch (n.op) {
    case Op::number: return fmt_full(n.value);
    case Op::constant_pi: return "pi";
    case Op::variable: return std::string(1, "xyzw"[n.var]);
    case Op::neg: return "(-" + print_node(*n.a) + ")";
    case Op::add: return "(" + print_node(*n.a) + "+" + print_node(*n.b) + ")";
    case Op::sub: return "(" + print_node(*n.a) + "-" + print_node(*n.b) + ")";
    case Op::mul: return "(" + print_node(*n.a) + "*" + print_node(*n.b) + ")";
    case Op::div: return "(" + print_node(*n.a) + "/" + print_node(*n.b) + ")";
    case Op::pow: return "(" + print_node(*n.a) + "^" + print_node(*n.b) + ")";
    case Op::sin: return "sin(" + print_node(*n.a) + ")";
    case Op::cos: return "cos(" + print_node(*n.a) + ")";
    case Op::exp: return "exp(" + print_node(*n.a) + ")";
    case Op::log: return "log(" + print_node(*n.a) + ")";
    case Op::sqrt: return "sqrt(" + print_node(*n.a) + ")";
    case Op::abs: return "abs(" + print_node(*n.a) + ")";
    case Op::min:
      return "min(" + print_node(*n.a) + "," + print_node(*n.b) + ")";
    case Op::max:
      return "max(" + print_node(*n.a) + "," + print_node(*n.b) + ")";
    case Op::atan2:
      return "atan2(" + print_node(*n.a) + "," + print_node(*n.b) + ")";
  }
  return "?";
}

bool nodes_identical(const Node& a, const Node& b) {
  if (a.op != b.op || a.value != b.value || a.var != b.var) return false;
  if (!!a.a != !!b.a || !!a.b != !!b.b) return false;
  if (a.a && !nodes_identical(*a.a, *b.a)) return false;
  if (a.b && !nodes_identical(*a.b, *b.b)) return false;
  return true;
}

}  // namespace

double Expression::eval(const Vec& point) const {
  return eval_node(*root_, point);
}

int Expression::arity() const { return max_var(*root_); }

std::string Expression::to_string() const { return print_node(*root_); }

bool Expression::identical(const Expression& other) const {
  return nodes_identical(*root_, *other.root_);
}

Expression parse(const std::string& src) {
  return Expression(Parser(src).run());
}

}  // namespace varlab
