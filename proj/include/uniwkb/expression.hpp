#pragma once

// Arithmetic expressions in the coordinate q, parsed by recursive descent.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('+'|'-') factor | base ('^' factor)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')'
//   func   := exp | ln | sqrt | sin | cos | tan | sinh | cosh | tanh
//
// 'q' is the coordinate; every other identifier must be bound by the
// parameter map at parse time. Parameters are folded into constants.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "uniwkb/taylor.hpp"

namespace uniwkb {

using ParamMap = std::map<std::string, double>;

class Expression {
public:
  /// Throws ParseError (with 1-based column) on malformed input or unbound names.
  static Expression parse(std::string_view text, const ParamMap& params = {});

  double evaluate(double q) const;
  Taylor<3> evaluate(const Taylor<3>& q) const;

  const std::string& text() const { return text_; }

  enum class Op : unsigned char {
    constant, variable, negate, add, sub, mul, div, pow,
    exp, ln, sqrt, sin, cos, tan, sinh, cosh, tanh
  };

  struct Instruction {
    Op op;
    double value = 0.0;
  };

private:
  template <class T>
  T run(const T& q) const;

  std::string text_;
  std::vector<Instruction> program_;  // postfix order
};

}  // namespace uniwkb
