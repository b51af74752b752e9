#include "gaussmap/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "gaussmap/errors.hpp"

namespace gaussmap::expr {

Bindings& Bindings::u(int index, double value) {
  if (index < 1 || index > kMaxU) throw DimensionError("variable u" + std::to_string(index) + " out of range");
  values_[static_cast<std::size_t>(index - 1)] = value;
  bound_[static_cast<std::size_t>(index - 1)] = true;
  return *this;
}

Bindings& Bindings::t(double value) {
  values_[kTimeVar] = value;
  bound_[kTimeVar] = true;
  return *this;
}

namespace {

using NodePtr = std::shared_ptr<const Node>;

struct FuncName {
  const char* name;
  Func func;
};

constexpr FuncName kFuncs[] = {{"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
                               {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
                               {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"atan", Func::Atan}};

const char* func_name(Func f) {
  for (const auto& fn : kFuncs)
    if (fn.func == f) return fn.name;
  return "?";
}

class Parser {
 public:
  Parser(std::string_view text, const VariableSet& vars) : text_(text), vars_(vars) {}

  NodePtr parse_all() {
    NodePtr e = expression();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'", "end of input");
    return e;
  }

 private:
  std::string_view text_;
  VariableSet vars_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, const std::string& expected) const {
    throw ParseError("syntax error: " + msg + (expected.empty() ? "" : ", expected " + expected),
                     pos_ + 1, expected);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make_binary(char op, NodePtr l, NodePtr r, std::size_t offset) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->args = {std::move(l), std::move(r)};
    n->offset = offset;
    return n;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_ + 1;
      if (accept('+')) {
        lhs = make_binary('+', lhs, term(), at);
      } else if (accept('-')) {
        lhs = make_binary('-', lhs, term(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_ + 1;
      if (accept('*')) {
        lhs = make_binary('*', lhs, unary(), at);
      } else if (accept('/')) {
        lhs = make_binary('/', lhs, unary(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    skip_ws();
    const std::size_t at = pos_ + 1;
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->op = '-';
      n->args = {unary()};
      n->offset = at;
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip_ws();
    const std::size_t at = pos_ + 1;
    if (accept('^')) return make_binary('^', base, unary(), at);
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input", "operand");
    const char c = text_[pos_];
    const std::size_t at = pos_ + 1;
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      if (!accept(')')) fail("unbalanced parenthesis", "\")\"");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      const std::string ident(text_.substr(pos_, end - pos_));
      pos_ = end;
      return identifier(ident, at);
    }
    fail("unexpected character '" + std::string(1, c) + "'", "operand");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail("malformed number", "digit");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent", "digit");
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->number = std::strtod(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr);
    n->offset = start + 1;
    return n;
  }

  NodePtr identifier(const std::string& ident, std::size_t at) {
    auto n = std::make_shared<Node>();
    n->offset = at;
    if (ident == "pi") {
      n->kind = Node::Kind::Constant;
      n->number = std::numbers::pi;
      return n;
    }
    if (ident == "t") {
      if (!vars_.time) throw ParseError("unknown identifier 't' (chart has no time variable)", at);
      n->kind = Node::Kind::Variable;
      n->var = kTimeVar;
      return n;
    }
    if (ident.size() == 2 && ident[0] == 'u' && ident[1] >= '1' && ident[1] <= '9') {
      const int idx = ident[1] - '0';
      if (idx > vars_.arity) {
        throw ParseError("unknown identifier '" + ident + "' (chart declares u1..u" +
                             std::to_string(vars_.arity) + ")",
                         at);
      }
      n->kind = Node::Kind::Variable;
      n->var = idx - 1;
      return n;
    }
    for (const auto& fn : kFuncs) {
      if (ident == fn.name) {
        n->kind = Node::Kind::Call;
        n->func = fn.func;
        if (!accept('(')) fail("function '" + ident + "' requires an argument list", "\"(\"");
        n->args.push_back(expression());
        while (accept(',')) n->args.push_back(expression());
        if (!accept(')')) fail("unterminated argument list", "\")\"");
        if (n->args.size() != 1) {
          throw ParseError("arity error: '" + ident + "' takes 1 argument, got " +
                               std::to_string(n->args.size()),
                           at);
        }
        return n;
      }
    }
    throw ParseError("unknown identifier '" + ident + "'", at);
  }
};

// ---------------------------------------------------------------------------

double val(double x) { return x; }
double val(const Dual& x) { return x.v; }

template <class T>
void check_finite(const T& x, const Node& node) {
  if (!std::isfinite(val(x))) throw EvalError("non-finite result", node.offset);
  if constexpr (std::is_same_v<T, Dual>) {
    if (!std::isfinite(x.d)) throw EvalError("non-finite derivative", node.offset);
  }
}

template <class T>
T eval_node(const Node& node, const Bindings& b, const Seeds* seeds) {
  using std::atan, std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt, std::tan;
  switch (node.kind) {
    case Node::Kind::Number:
    case Node::Kind::Constant:
      return T(node.number);
    case Node::Kind::Variable: {
      if (!b.bound(node.var)) throw EvalError("unbound variable", node.offset);
      if constexpr (std::is_same_v<T, Dual>) {
        return Dual(b.get(node.var), (*seeds)[static_cast<std::size_t>(node.var)]);
      } else {
        return b.get(node.var);
      }
    }
    case Node::Kind::Unary:
      return -eval_node<T>(*node.args[0], b, seeds);
    case Node::Kind::Binary: {
      const T l = eval_node<T>(*node.args[0], b, seeds);
      const T r = eval_node<T>(*node.args[1], b, seeds);
      T out{};
      switch (node.op) {
        case '+': out = l + r; break;
        case '-': out = l - r; break;
        case '*': out = l * r; break;
        case '/':
          if (val(r) == 0.0) throw EvalError("division by zero", node.offset);
          out = l / r;
          break;
        default: {  // '^'
          const double rv = val(r);
          bool integral = std::nearbyint(rv) == rv && std::abs(rv) < 1e9;
          if constexpr (std::is_same_v<T, Dual>) integral = integral && r.d == 0.0;
          if (integral) {
            const int k = static_cast<int>(rv);
            if (val(l) == 0.0 && k < 0) throw EvalError("zero raised to a negative power", node.offset);
            if constexpr (std::is_same_v<T, Dual>) {
              out = pow(l, k);
            } else {
              out = std::pow(l, k);
            }
          } else {
            if (!(val(l) > 0.0)) throw EvalError("non-integer power of a non-positive base", node.offset);
            out = exp(r * log(l));
          }
        }
      }
      check_finite(out, node);
      return out;
    }
    case Node::Kind::Call: {
      const T a = eval_node<T>(*node.args[0], b, seeds);
      T out{};
      switch (node.func) {
        case Func::Sin: out = sin(a); break;
        case Func::Cos: out = cos(a); break;
        case Func::Tan: out = tan(a); break;
        case Func::Exp: out = exp(a); break;
        case Func::Log:
          if (!(val(a) > 0.0)) throw EvalError("log of non-positive value", node.offset);
          out = log(a);
          break;
        case Func::Sqrt:
          if (val(a) < 0.0) throw EvalError("sqrt of negative value", node.offset);
          if constexpr (std::is_same_v<T, Dual>) {
            if (val(a) == 0.0) throw EvalError("sqrt is not differentiable at 0", node.offset);
          }
          out = sqrt(a);
          break;
        case Func::Sinh: out = sinh(a); break;
        case Func::Cosh: out = cosh(a); break;
        case Func::Atan: out = atan(a); break;
      }
      check_finite(out, node);
      return out;
    }
  }
  throw EvalError("corrupt expression node", node.offset);
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case Node::Kind::Constant:
      out += "pi";
      return;
    case Node::Kind::Variable:
      out += n.var == kTimeVar ? std::string("t") : "u" + std::to_string(n.var + 1);
      return;
    case Node::Kind::Unary:
      out += "(-";
      print_node(*n.args[0], out);
      out += ")";
      return;
    case Node::Kind::Binary:
      out += "(";
      print_node(*n.args[0], out);
      out += ' ';
      out += n.op;
      out += ' ';
      print_node(*n.args[1], out);
      out += ")";
      return;
    case Node::Kind::Call:
      out += func_name(n.func);
      out += "(";
      print_node(*n.args[0], out);
      out += ")";
      return;
  }
}

bool uses_time_node(const Node& n) {
  if (n.kind == Node::Kind::Variable) return n.var == kTimeVar;
  for (const auto& a : n.args)
    if (uses_time_node(*a)) return true;
  return false;
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Node::Kind::Number:
    case Node::Kind::Constant:
      if (a.number != b.number) return false;
      break;
    case Node::Kind::Variable:
      if (a.var != b.var) return false;
      break;
    case Node::Kind::Unary:
    case Node::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Node::Kind::Call:
      if (a.func != b.func) return false;
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal_nodes(*a.args[i], *b.args[i])) return false;
  return true;
}

}  // namespace

double Expr::evaluate(const Bindings& b) const { return eval_node<double>(*root_, b, nullptr); }

Dual Expr::evaluate_dual(const Bindings& b, const Seeds& seeds) const {
  return eval_node<Dual>(*root_, b, &seeds);
}

std::string Expr::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::uses_time() const { return uses_time_node(*root_); }

Expr parse(std::string_view text, const VariableSet& vars) {
  Parser p(text, vars);
  return Expr(p.parse_all());
}

bool structurally_equal(const Expr& a, const Expr& b) { return equal_nodes(a.root(), b.root()); }

}  // namespace gaussmap::expr
