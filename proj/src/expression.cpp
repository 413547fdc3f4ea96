#include "uniwkb/expression.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <utility>

#include "uniwkb/error.hpp"

namespace uniwkb {

namespace {

using Op = Expression::Op;
using Instruction = Expression::Instruction;

constexpr std::array<std::pair<std::string_view, Op>, 9> kFunctions{{
    {"exp", Op::exp},
    {"ln", Op::ln},
    {"sqrt", Op::sqrt},
    {"sin", Op::sin},
    {"cos", Op::cos},
    {"tan", Op::tan},
    {"sinh", Op::sinh},
    {"cosh", Op::cosh},
    {"tanh", Op::tanh},
}};

class Parser {
public:
  Parser(std::string_view text, const ParamMap& params) : text_(text), params_(params) {}

  std::vector<Instruction> run() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    expr();
    skip_space();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return std::move(out_);
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_ + 1, msg); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  void expr() {
    term();
    for (;;) {
      if (accept('+')) {
        term();
        out_.push_back({Op::add});
      } else if (accept('-')) {
        term();
        out_.push_back({Op::sub});
      } else {
        return;
      }
    }
  }

  void term() {
    factor();
    for (;;) {
      if (accept('*')) {
        factor();
        out_.push_back({Op::mul});
      } else if (accept('/')) {
        factor();
        out_.push_back({Op::div});
      } else {
        return;
      }
    }
  }

  void factor() {
    if (accept('-')) {
      factor();
      out_.push_back({Op::negate});
      return;
    }
    if (accept('+')) {
      factor();
      return;
    }
    base();
    if (accept('^')) {
      factor();
      out_.push_back({Op::pow});
    }
  }

  void base() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      identifier();
      return;
    }
    if (accept('(')) {
      expr();
      expect(')');
      return;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  void number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail("malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    const std::string lexeme(text_.substr(start, pos_ - start));
    out_.push_back({Op::constant, std::strtod(lexeme.c_str(), nullptr)});
  }

  void identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    for (const auto& [fname, op] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after function '" + name + "'");
        expr();
        expect(')');
        out_.push_back({op});
        return;
      }
    }
    if (name == "q") {
      out_.push_back({Op::variable});
      return;
    }
    const auto it = params_.find(name);
    if (it == params_.end()) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    out_.push_back({Op::constant, it->second});
  }

  std::string_view text_;
  const ParamMap& params_;
  std::size_t pos_ = 0;
  std::vector<Instruction> out_;
};

// Scalar kernels with explicit domain checks; the jet versions check inside Taylor.
double checked_log(double x) {
  if (!(x > 0.0)) throw DomainError("ln of non-positive value");
  return std::log(x);
}
double checked_sqrt(double x) {
  if (x < 0.0) throw DomainError("sqrt of negative value");
  return std::sqrt(x);
}
double checked_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}
double checked_pow(double a, double b) {
  if (a < 0.0 && b != std::round(b)) throw DomainError("non-integer power of negative value");
  return std::pow(a, b);
}

template <int N>
Taylor<N> checked_log(const Taylor<N>& x) { return log(x); }
template <int N>
Taylor<N> checked_sqrt(const Taylor<N>& x) { return sqrt(x); }
template <int N>
Taylor<N> checked_div(const Taylor<N>& a, const Taylor<N>& b) { return a / b; }
template <int N>
Taylor<N> checked_pow(const Taylor<N>& a, const Taylor<N>& b) { return pow(a, b); }

}  // namespace

Expression Expression::parse(std::string_view text, const ParamMap& params) {
  Expression e;
  e.text_ = std::string(text);
  e.program_ = Parser(text, params).run();
  return e;
}

template <class T>
T Expression::run(const T& q) const {
  std::vector<T> stack;
  stack.reserve(program_.size());
  auto pop = [&stack] {
    T v = stack.back();
    stack.pop_back();
    return v;
  };
  for (const Instruction& ins : program_) {
    switch (ins.op) {
      case Op::constant: stack.push_back(T(ins.value)); break;
      case Op::variable: stack.push_back(q); break;
      case Op::negate: stack.back() = -stack.back(); break;
      case Op::add: { T b = pop(); stack.back() = stack.back() + b; break; }
      case Op::sub: { T b = pop(); stack.back() = stack.back() - b; break; }
      case Op::mul: { T b = pop(); stack.back() = stack.back() * b; break; }
      case Op::div: { T b = pop(); stack.back() = checked_div(stack.back(), b); break; }
      case Op::pow: { T b = pop(); stack.back() = checked_pow(stack.back(), b); break; }
      case Op::exp: { using std::exp; stack.back() = exp(stack.back()); break; }
      case Op::ln: stack.back() = checked_log(stack.back()); break;
      case Op::sqrt: stack.back() = checked_sqrt(stack.back()); break;
      case Op::sin: { using std::sin; stack.back() = sin(stack.back()); break; }
      case Op::cos: { using std::cos; stack.back() = cos(stack.back()); break; }
      case Op::tan: { using std::tan; stack.back() = tan(stack.back()); break; }
      case Op::sinh: { using std::sinh; stack.back() = sinh(stack.back()); break; }
      case Op::cosh: { using std::cosh; stack.back() = cosh(stack.back()); break; }
      case Op::tanh: { using std::tanh; stack.back() = tanh(stack.back()); break; }
    }
  }
  return stack.back();
}

double Expression::evaluate(double q) const { return run(q); }

Taylor<3> Expression::evaluate(const Taylor<3>& q) const { return run(q); }

}  // namespace uniwkb
