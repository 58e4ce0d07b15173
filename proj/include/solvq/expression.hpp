#pragma once

#include <functional>
#include <string>

namespace solvq {

/// Compiles an expression string over the single variable `x` into an
/// evaluator. Supported: numeric literals, x, + - * / ^, parentheses,
/// exp, sin, cos, abs, pow(a,b), and the constants pi and e.
/// Throws ConfigError on parse failure.
std::function<double(double)> parse_expression(const std::string& text);

}  // namespace solvq
