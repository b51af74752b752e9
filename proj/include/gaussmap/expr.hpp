#pragma once

// Expression language for component-wise immersion definitions.
//
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := primary [ "^" unary ]              (right-associative)
//   primary := number | "pi" | variable | func "(" expr ")" | "(" expr ")"
//   variable:= "u1" .. "u9" | "t"
//   func    := sin | cos | tan | exp | log | sqrt | sinh | cosh | atan
//   number  := digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gaussmap/dual.hpp"

namespace gaussmap::expr {

inline constexpr int kMaxU = 9;
inline constexpr int kTimeVar = 9;  // slot index of "t"
inline constexpr int kVarSlots = 10;

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Atan };

struct Node {
  enum class Kind { Number, Variable, Constant, Unary, Binary, Call };
  Kind kind = Kind::Number;
  double number = 0.0;  // Number / Constant
  int var = 0;          // Variable slot
  char op = 0;          // Unary '-', Binary + - * / ^
  Func func = Func::Sin;
  std::vector<std::shared_ptr<const Node>> args;
  std::size_t offset = 0;  // 1-based source column
};

/// Variables a chart declares: u1..u{arity} and optionally t.
struct VariableSet {
  int arity = kMaxU;
  bool time = true;
};

class Bindings {
 public:
  Bindings& u(int index, double value);  // 1-based
  Bindings& t(double value);
  double get(int slot) const { return values_[static_cast<std::size_t>(slot)]; }
  bool bound(int slot) const { return bound_[static_cast<std::size_t>(slot)]; }

 private:
  std::array<double, kVarSlots> values_{};
  std::array<bool, kVarSlots> bound_{};
};

/// Derivative seed per variable slot (the direction of differentiation).
using Seeds = std::array<double, kVarSlots>;

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  double evaluate(const Bindings& b) const;
  Dual evaluate_dual(const Bindings& b, const Seeds& seeds) const;
  /// Canonical fully parenthesized form; reparses to a structurally equal tree.
  std::string print() const;
  bool uses_time() const;
  const Node& root() const { return *root_; }

 private:
  std::shared_ptr<const Node> root_;
};

Expr parse(std::string_view text, const VariableSet& vars = {});

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace gaussmap::expr
