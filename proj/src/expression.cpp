#include "solvq/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <vector>

#include "solvq/errors.hpp"

namespace solvq {
namespace {

// Tiny stack machine. Compiling once keeps evaluation cheap enough for
// quadrature inner loops on user-defined coefficients.
enum class Op : int {
  PushConst,
  PushX,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Exp,
  Sin,
  Cos,
  Abs,
  Pow
};

struct Instr {
  Op op;
  double value = 0.0;
};

struct Parser {
  const std::string& s;
  std::size_t pos = 0;
  std::vector<Instr> code;

  explicit Parser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression error at position " + std::to_string(pos) +
                      ": " + what + " in \"" + s + "\"");
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  void expr() {
    term();
    for (;;) {
      if (eat('+')) {
        term();
        code.push_back({Op::Add});
      } else if (eat('-')) {
        term();
        code.push_back({Op::Sub});
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (eat('*')) {
        unary();
        code.push_back({Op::Mul});
      } else if (eat('/')) {
        unary();
        code.push_back({Op::Div});
      } else {
        return;
      }
    }
  }

  void unary() {
    if (eat('-')) {
      unary();
      code.push_back({Op::Neg});
      return;
    }
    (void)eat('+');
    power();
  }

  void power() {
    primary();
    if (eat('^')) {
      unary();  // right associative
      code.push_back({Op::Pow});
    }
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }

  void primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s.c_str() + pos;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos += static_cast<std::size_t>(end - begin);
      code.push_back({Op::PushConst, v});
      return;
    }
    if (c == '(') {
      ++pos;
      expr();
      if (!eat(')')) fail("expected ')'");
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = ident();
      if (name == "x") {
        code.push_back({Op::PushX});
        return;
      }
      if (name == "pi") {
        code.push_back({Op::PushConst, M_PI});
        return;
      }
      if (name == "e") {
        code.push_back({Op::PushConst, M_E});
        return;
      }
      if (!eat('(')) fail("expected '(' after function name '" + name + "'");
      expr();
      if (name == "pow") {
        if (!eat(',')) fail("pow needs two arguments");
        expr();
        if (!eat(')')) fail("expected ')'");
        code.push_back({Op::Pow});
        return;
      }
      if (!eat(')')) fail("expected ')'");
      if (name == "exp")
        code.push_back({Op::Exp});
      else if (name == "sin")
        code.push_back({Op::Sin});
      else if (name == "cos")
        code.push_back({Op::Cos});
      else if (name == "abs")
        code.push_back({Op::Abs});
      else
        fail("unknown function '" + name + "'");
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

std::function<double(double)> parse_expression(const std::string& text) {
  Parser p(text);
  p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  auto code = std::make_shared<std::vector<Instr>>(std::move(p.code));
  return [code](double x) -> double {
    double stack[64];
    int top = -1;
    for (const Instr& in : *code) {
      switch (in.op) {
        case Op::PushConst: stack[++top] = in.value; break;
        case Op::PushX: stack[++top] = x; break;
        case Op::Add: --top; stack[top] += stack[top + 1]; break;
        case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
        case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
        case Op::Div: --top; stack[top] /= stack[top + 1]; break;
        case Op::Neg: stack[top] = -stack[top]; break;
        case Op::Exp: stack[top] = std::exp(stack[top]); break;
        case Op::Sin: stack[top] = std::sin(stack[top]); break;
        case Op::Cos: stack[top] = std::cos(stack[top]); break;
        case Op::Abs: stack[top] = std::fabs(stack[top]); break;
        case Op::Pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
      }
    }
    return stack[0];
  };
}

}  // namespace solvq
